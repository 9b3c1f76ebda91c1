"""Discrete fractional and integer differential operators.

Three building blocks:

* L1 weights and the history (memory) term of the Caputo derivative,
  discretized with the standard L1 scheme
      b_j = (j+1)^(1-a) - j^(1-a)
* fractional centered-difference weights for the symmetric space-fractional
  derivative of order beta in (1, 2],
      g_k = (-1)^k Gamma(b+1) / (Gamma(b/2-k+1) Gamma(b/2+k+1))
  applied as a dense row stencil with zero extension outside the domain
* the 5-point Laplacian.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import gamma as _gamma

from .errors import ConfigError
from .grid import BoundaryCondition, Field, Grid2D

__all__ = [
    "L1Weights",
    "RieszWeights",
    "HistoryBuffer",
    "l1_weights",
    "caputo_memory",
    "laplacian",
    "riesz_weights",
    "riesz_apply",
    "riesz_coefficient",
]


@dataclass(frozen=True)
class L1Weights:
    alpha: float
    b: np.ndarray  # b[j], j = 0..n-1; b[0] = 1 exactly


@dataclass(frozen=True)
class RieszWeights:
    beta: float
    g: np.ndarray  # g[k], k = 0..K (symmetric half; g_{-k} = g_k)


def l1_weights(alpha: float, n: int) -> L1Weights:
    """L1 weights b_j = (j+1)^(1-a) - j^(1-a) for j = 0..n-1."""
    if not 0.0 < alpha <= 1.0:
        raise ConfigError(f"time order alpha={alpha} outside (0, 1]")
    if n < 1:
        raise ConfigError(f"need n >= 1 weights, got {n}")
    j = np.arange(n, dtype=np.float64)
    lo = j ** (1.0 - alpha)
    lo[0] = 0.0  # 0^0 -> 0 so that b_0 = 1 exactly at alpha = 1
    b = (j + 1.0) ** (1.0 - alpha) - lo
    return L1Weights(alpha, b)


class HistoryBuffer:
    """Full snapshot history of a field (the Caputo memory).

    Stores one row per accepted time level, initial condition included.
    Rows are flattened fields; capacity grows geometrically.
    """

    def __init__(self, grid: Grid2D, tau: float, capacity: int = 64):
        self.grid = grid
        self.tau = float(tau)
        self._data = np.empty((max(capacity, 1), grid.nx * grid.ny))
        self._count = 0

    def __len__(self) -> int:
        return self._count

    def append(self, field: Field) -> None:
        if field.grid is not self.grid and (field.grid.nx, field.grid.ny) != (
            self.grid.nx,
            self.grid.ny,
        ):
            raise ValueError("snapshot grid does not match history grid")
        if self._count == self._data.shape[0]:
            grown = np.empty((2 * self._data.shape[0], self._data.shape[1]))
            grown[: self._count] = self._data[: self._count]
            self._data = grown
        self._data[self._count] = field.values.ravel()
        self._count += 1

    def rows(self) -> np.ndarray:
        """(n, nx*ny) view of all stored snapshots, oldest first."""
        return self._data[: self._count]

    def snapshot(self, index: int) -> np.ndarray:
        return self._data[index].reshape(self.grid.nx, self.grid.ny)


def caputo_memory(history: HistoryBuffer, alpha: float, window: int | None = None) -> Field:
    """Known-history part M^n of the L1 formula.

        M^n = sum_{j=1}^{n-1} (b_{j-1} - b_j) rho^{n-j} + b_{n-1} rho^0

    The full L1 derivative at level n is tau^-a / Gamma(2-a) * (rho^n - M^n);
    the new-level part is assembled by the stepper. With a truncation
    ``window`` W, levels older than n-W are lumped onto rho^{n-W} with
    weight b_W, which keeps constant histories exact but degrades accuracy
    for varying ones.
    """
    n = len(history)
    if n == 0:
        raise ValueError("empty history: nothing to convolve")
    if window is not None and window >= 1 and n - 1 > window:
        w = int(window)
        b = l1_weights(alpha, w + 1).b
        # coefficients for levels n-w .. n-1 (oldest kept level gets b_w)
        coeff = np.empty(w + 1)
        coeff[0] = b[w]
        coeff[1:] = (b[:w] - b[1 : w + 1])[::-1]
        rows = history.rows()[n - 1 - w : n]
    else:
        b = l1_weights(alpha, n).b
        coeff = np.empty(n)
        coeff[0] = b[n - 1]
        coeff[1:] = (b[: n - 1] - b[1:n])[::-1]
        rows = history.rows()
    flat = coeff @ rows
    return Field(flat.reshape(history.grid.nx, history.grid.ny), history.grid)


def laplacian(field: Field, bc: BoundaryCondition | None = None) -> Field:
    """5-point Laplacian at interior nodes, zero at boundary nodes.

    Boundary values enter the near-edge stencils as stored, i.e. as
    maintained by apply_boundary for the active condition.
    """
    g = field.grid
    u = field.values
    out = np.zeros_like(u)
    out[1:-1, 1:-1] = (
        (u[2:, 1:-1] - 2.0 * u[1:-1, 1:-1] + u[:-2, 1:-1]) / g.hx**2
        + (u[1:-1, 2:] - 2.0 * u[1:-1, 1:-1] + u[1:-1, :-2]) / g.hy**2
    )
    return Field(out, g)


@lru_cache(maxsize=64)
def _riesz_half(beta: float, K: int) -> np.ndarray:
    # g_0 = Gamma(b+1)/Gamma(b/2+1)^2; the ratio recurrence
    #   g_{k+1} = g_k (k - b/2) / (k + b/2 + 1)
    # yields exact zeros where the closed form hits a gamma pole (beta = 2).
    g = np.empty(K + 1)
    g[0] = _gamma(beta + 1.0) / _gamma(beta / 2.0 + 1.0) ** 2
    for k in range(K):
        g[k + 1] = g[k] * (k - beta / 2.0) / (k + beta / 2.0 + 1.0)
    g.setflags(write=False)
    return g


def riesz_weights(beta: float, K: int) -> RieszWeights:
    """Centered-difference weights g_k for k = 0..K (g is even in k)."""
    if not 1.0 < beta <= 2.0:
        raise ConfigError(f"space order beta={beta} outside (1, 2]")
    if K < 1:
        raise ConfigError(f"need K >= 1, got {K}")
    return RieszWeights(beta, _riesz_half(float(beta), int(K)))


def riesz_apply(field: Field, beta: float, axis: str) -> Field:
    """Symmetric space-fractional derivative along one axis.

    At node i: -h^-beta * sum_k g_k rho_{i-k}, truncated to in-grid indices
    (zero extension realizes a homogeneous Dirichlet exterior). Summation is
    folded into symmetric pairs g_k (rho_{i-k} + rho_{i+k}) so a mirror-
    symmetric input produces a bit-identical mirrored output.
    """
    g = field.grid
    u = field.values
    if axis == "x":
        n, h = g.nx, g.hx
        work = u
    elif axis == "y":
        n, h = g.ny, g.hy
        work = u.T
    else:
        raise ValueError(f"axis must be 'x' or 'y', got {axis!r}")
    w = riesz_weights(beta, n - 1).g
    acc = w[0] * work
    for k in range(1, n):
        pair = np.zeros_like(work)
        pair[k:] = work[:-k]
        pair[:-k] += work[k:]
        acc = acc + w[k] * pair
    acc *= -(h ** (-beta))
    return Field(acc if axis == "x" else acc.T, g)


def riesz_coefficient(beta: float) -> float:
    """c_b = 1 / (2 cos(b pi / 2)); diverges as beta -> 1."""
    if not 1.0 < beta <= 2.0:
        raise ConfigError(f"space order beta={beta} outside (1, 2]")
    return 1.0 / (2.0 * np.cos(beta * np.pi / 2.0))
