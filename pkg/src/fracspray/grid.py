"""Uniform 2-D grid, field storage, boundary conditions and field functionals.

The domain is an axis-aligned rectangle (unit square by default) sampled on
an nx-by-ny node grid. Field arrays are indexed ``values[i, j]`` with ``i``
along x and ``j`` along y.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError

__all__ = [
    "Grid2D",
    "Field",
    "BoundaryCondition",
    "make_grid",
    "apply_boundary",
    "total_mass",
    "save_field",
    "load_field",
]


@dataclass(frozen=True)
class Grid2D:
    nx: int
    ny: int
    x0: float = 0.0
    y0: float = 0.0
    x1: float = 1.0
    y1: float = 1.0

    @property
    def hx(self) -> float:
        return (self.x1 - self.x0) / (self.nx - 1)

    @property
    def hy(self) -> float:
        return (self.y1 - self.y0) / (self.ny - 1)

    def xs(self) -> np.ndarray:
        return np.linspace(self.x0, self.x1, self.nx)

    def ys(self) -> np.ndarray:
        return np.linspace(self.y0, self.y1, self.ny)

    def meshgrid(self) -> tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.xs(), self.ys(), indexing="ij")

    def contains(self, x: float, y: float) -> bool:
        return self.x0 <= x <= self.x1 and self.y0 <= y <= self.y1

    def nearest_node(self, x: float, y: float) -> tuple[int, int]:
        """Index of the node nearest (x, y); half-way points round up."""
        i = int(np.floor((x - self.x0) / self.hx + 0.5))
        j = int(np.floor((y - self.y0) / self.hy + 0.5))
        return min(max(i, 0), self.nx - 1), min(max(j, 0), self.ny - 1)


def make_grid(nx: int, ny: int, domain: tuple[float, float, float, float] = (0.0, 0.0, 1.0, 1.0)) -> Grid2D:
    """Build an immutable uniform grid with at least one interior node per axis."""
    x0, y0, x1, y1 = (float(v) for v in domain)
    if nx < 3 or ny < 3:
        raise ConfigError(f"grid needs nx, ny >= 3, got {nx}x{ny}")
    if not (x1 > x0 and y1 > y0):
        raise ConfigError(f"degenerate domain ({x0},{y0})-({x1},{y1})")
    return Grid2D(int(nx), int(ny), x0, y0, x1, y1)


@dataclass
class Field:
    """Scalar density sampled on a Grid2D; shape (nx, ny)."""

    values: np.ndarray
    grid: Grid2D

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.shape != (self.grid.nx, self.grid.ny):
            raise ValueError(
                f"field shape {self.values.shape} does not match grid "
                f"{(self.grid.nx, self.grid.ny)}"
            )

    def copy(self) -> "Field":
        return Field(self.values.copy(), self.grid)

    @classmethod
    def zeros(cls, grid: Grid2D) -> "Field":
        return cls(np.zeros((grid.nx, grid.ny)), grid)

    @classmethod
    def from_function(cls, grid: Grid2D, fn) -> "Field":
        X, Y = grid.meshgrid()
        return cls(np.asarray(fn(X, Y), dtype=np.float64), grid)


@dataclass(frozen=True)
class BoundaryCondition:
    """Dirichlet (rho = c) or Neumann (d rho / d n = c1 + c2 * rho)."""

    kind: str
    c: float = 0.0
    c1: float = 0.0
    c2: float = 0.0

    def __post_init__(self):
        if self.kind not in ("dirichlet", "neumann"):
            raise ConfigError(f"unknown boundary kind {self.kind!r}")

    @classmethod
    def dirichlet(cls, c: float = 0.0) -> "BoundaryCondition":
        return cls("dirichlet", c=float(c))

    @classmethod
    def neumann(cls, c1: float = 0.0, c2: float = 0.0) -> "BoundaryCondition":
        return cls("neumann", c1=float(c1), c2=float(c2))


def apply_boundary(field: Field, bc: BoundaryCondition) -> Field:
    """Write boundary node values in place and return the field.

    Dirichlet sets edges to the constant. Neumann solves the second-order
    one-sided normal-derivative relation for the boundary value, e.g. at
    x = 0 (outward normal -x):

        (3 rho_0 - 4 rho_1 + rho_2) / (2 h) = c1 + c2 rho_0

    x edges are written first, then y edges (y pass owns the corners).
    """
    u = field.values
    if bc.kind == "dirichlet":
        u[0, :] = bc.c
        u[-1, :] = bc.c
        u[:, 0] = bc.c
        u[:, -1] = bc.c
        return field

    hx, hy = field.grid.hx, field.grid.hy
    for h, lo_write, lo_a, lo_b, hi_write, hi_a, hi_b in (
        (hx, (0, slice(None)), (1, slice(None)), (2, slice(None)),
         (-1, slice(None)), (-2, slice(None)), (-3, slice(None))),
        (hy, (slice(None), 0), (slice(None), 1), (slice(None), 2),
         (slice(None), -1), (slice(None), -2), (slice(None), -3)),
    ):
        denom = 3.0 - 2.0 * h * bc.c2
        if abs(denom) < 1e-14:
            raise ConfigError(f"neumann c2={bc.c2} makes the boundary relation singular")
        u[lo_write] = (2.0 * h * bc.c1 + 4.0 * u[lo_a] - u[lo_b]) / denom
        u[hi_write] = (2.0 * h * bc.c1 + 4.0 * u[hi_a] - u[hi_b]) / denom
    return field


def total_mass(field: Field, mode: str = "interior") -> float:
    """Aggregate of the field.

    ``interior``: plain sum of interior-node values (the sensor-sum metric
    used for all time series). ``trapezoid``: trapezoidal-rule integral
    over the full domain, used by conservation tests.
    """
    u = field.values
    if mode == "interior":
        return float(u[1:-1, 1:-1].sum())
    if mode == "trapezoid":
        wx = np.ones(field.grid.nx)
        wx[0] = wx[-1] = 0.5
        wy = np.ones(field.grid.ny)
        wy[0] = wy[-1] = 0.5
        return float(field.grid.hx * field.grid.hy * np.einsum("i,j,ij->", wx, wy, u))
    raise ValueError(f"unknown mass mode {mode!r}")


# Snapshot file format: one comment header line, then ny rows of nx values
# (row j holds y_j, column i holds x_i), full double precision.

def save_field(field: Field, t: float, path_or_buf) -> None:
    g = field.grid
    rows = field.values.T  # row j = y_j
    buf = io.StringIO()
    buf.write(f"# t={t:.17g} nx={g.nx} ny={g.ny}\n")
    for j in range(g.ny):
        buf.write(",".join(f"{v:.17g}" for v in rows[j]))
        buf.write("\n")
    data = buf.getvalue()
    if hasattr(path_or_buf, "write"):
        path_or_buf.write(data)
    else:
        with open(path_or_buf, "w", newline="\n") as fh:
            fh.write(data)


def load_field(path, grid: Grid2D | None = None) -> tuple[Field, float]:
    """Read a snapshot file; returns (field, t)."""
    with open(path) as fh:
        header = fh.readline()
        if not header.startswith("#"):
            raise ValueError(f"{path}: missing snapshot header")
        meta = dict(kv.split("=") for kv in header[1:].split())
        t = float(meta["t"])
        nx, ny = int(meta["nx"]), int(meta["ny"])
        rows = np.loadtxt(fh, delimiter=",", ndmin=2)
    if rows.shape != (ny, nx):
        raise ValueError(f"{path}: expected {ny}x{nx} rows, got {rows.shape}")
    if grid is None:
        grid = make_grid(nx, ny)
    return Field(rows.T.copy(), grid), t
