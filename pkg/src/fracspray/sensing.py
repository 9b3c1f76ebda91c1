"""Static sensor mesh and measurement sampling."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .grid import Field, Grid2D

__all__ = ["SensorMesh", "Measurement", "make_sensor_mesh", "sample_measurements", "aggregate_total"]


@dataclass(frozen=True)
class SensorMesh:
    positions: np.ndarray   # (n, 2) sensor coordinates, strictly inside the domain
    index_i: np.ndarray     # grid i-index per sensor
    index_j: np.ndarray     # grid j-index per sensor
    n_per_side: int
    grid: Grid2D

    def __len__(self) -> int:
        return self.positions.shape[0]


@dataclass(frozen=True)
class Measurement:
    values: np.ndarray
    t: float


def _strided_interior(n_per_side: int, n_nodes: int) -> np.ndarray:
    """Evenly strided interior node indices (centered when sparse)."""
    m = n_nodes - 2
    if n_per_side > m:
        raise ConfigError(
            f"{n_per_side} sensors per side exceed the {m} interior nodes available"
        )
    k = np.arange(n_per_side)
    return 1 + ((k + 0.5) * m / n_per_side).astype(int)


def make_sensor_mesh(n_per_side: int, grid: Grid2D) -> SensorMesh:
    """Node-aligned sensor lattice over the interior of the grid.

    With n_per_side = nx - 2 every interior node carries a sensor.
    """
    if n_per_side < 1:
        raise ConfigError(f"need at least one sensor per side, got {n_per_side}")
    si = _strided_interior(n_per_side, grid.nx)
    sj = _strided_interior(n_per_side, grid.ny)
    ii, jj = np.meshgrid(si, sj, indexing="ij")
    ii = ii.ravel()
    jj = jj.ravel()
    xs, ys = grid.xs(), grid.ys()
    pos = np.column_stack([xs[ii], ys[jj]])
    return SensorMesh(pos, ii, jj, n_per_side, grid)


def sample_measurements(
    field: Field,
    mesh: SensorMesh,
    t: float,
    noise_sigma: float = 0.0,
    rng: np.random.Generator | None = None,
) -> Measurement:
    """Exact node-value sampling; optional Gaussian noise (off by default)."""
    if (field.grid.nx, field.grid.ny) != (mesh.grid.nx, mesh.grid.ny):
        raise ValueError("measurement mesh is not aligned to the field grid")
    vals = field.values[mesh.index_i, mesh.index_j].copy()
    if noise_sigma > 0.0:
        gen = rng if rng is not None else np.random.default_rng()
        vals += gen.normal(0.0, noise_sigma, size=vals.shape)
    return Measurement(vals, t)


def aggregate_total(m: Measurement) -> float:
    """Plain sum of the sensor readings (the time-series metric)."""
    return float(m.values.sum())
