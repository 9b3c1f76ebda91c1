"""Mobile actuator dynamics and the pesticide release sink.

Each actuator is a damped second-order particle driven toward its current
target (a cell centroid):

    accel = -k_p (p - target) - k_v v

integrated with semi-implicit Euler at the PDE step size. The release field
is a superposition of Gaussian sinks, one per actuator, with amplitude
proportional to the locally measured density and saturated at a maximum
rate so the area is not overdosed.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import ConfigError
from .grid import Field, Grid2D
from .sensing import Measurement, SensorMesh

__all__ = [
    "ActuatorState",
    "ControlGains",
    "SprayParams",
    "control_accel",
    "integrate_actuator",
    "release_amplitude",
    "release_field",
]


@dataclass(frozen=True)
class ControlGains:
    k_p: float = 6.0
    k_v: float = 1.0

    def __post_init__(self):
        if self.k_p <= 0.0:
            raise ConfigError(f"k_p must be > 0, got {self.k_p}")
        if self.k_v < 0.0:
            raise ConfigError(f"k_v must be >= 0, got {self.k_v}")


@dataclass(frozen=True)
class SprayParams:
    gain: float = 1.5        # release rate per unit measured density (1/s)
    max_rate: float = 50.0   # saturation (density/s)
    sigma: float = 0.08      # Gaussian kernel radius

    def __post_init__(self):
        if min(self.gain, self.max_rate, self.sigma) <= 0.0:
            raise ConfigError("spray gain, max_rate and sigma must all be > 0")


@dataclass(frozen=True)
class ActuatorState:
    p: np.ndarray       # position (2,)
    v: np.ndarray       # velocity (2,)
    target: np.ndarray  # desired position (2,)
    id: int = 0

    @classmethod
    def at(cls, x: float, y: float, id: int = 0) -> "ActuatorState":
        p = np.array([x, y], dtype=np.float64)
        return cls(p=p, v=np.zeros(2), target=p.copy(), id=id)


def control_accel(state: ActuatorState, gains: ControlGains) -> np.ndarray:
    return -gains.k_p * (state.p - state.target) - gains.k_v * state.v


def integrate_actuator(
    state: ActuatorState,
    accel: np.ndarray,
    dt: float,
    domain: Grid2D,
    v_max: float = 2.0,
) -> ActuatorState:
    """Semi-implicit Euler step: v first (speed-capped), then p (clamped).

    A position clamped against a domain wall zeroes the velocity component
    normal to that wall.
    """
    if dt <= 0.0:
        raise ConfigError(f"dt must be > 0, got {dt}")
    v = state.v + np.asarray(accel, dtype=np.float64) * dt
    speed = float(np.hypot(v[0], v[1]))
    if speed > v_max:
        v = v * (v_max / speed)
    p = state.p + v * dt
    lo = np.array([domain.x0, domain.y0])
    hi = np.array([domain.x1, domain.y1])
    clamped = (p < lo) | (p > hi)
    p = np.clip(p, lo, hi)
    v = np.where(clamped, 0.0, v)
    return replace(state, p=p, v=v)


def release_amplitude(
    state: ActuatorState,
    measurement: Measurement,
    mesh: SensorMesh,
    spray: SprayParams,
) -> float:
    """min(gain * density at the nearest sensor, max_rate), never negative."""
    d2 = ((mesh.positions - state.p) ** 2).sum(axis=1)
    local = float(measurement.values[int(np.argmin(d2))])
    return float(min(spray.gain * max(local, 0.0), spray.max_rate))


def release_field(
    actuators: list[ActuatorState],
    measurement: Measurement,
    mesh: SensorMesh,
    spray: SprayParams,
    grid: Grid2D,
) -> Field:
    """Superposed Gaussian sinks, one per actuator; everywhere <= 0.

    The solver clamps the density at zero afterwards: spraying removes
    pests, it cannot create negative ones.
    """
    X, Y = grid.meshgrid()
    out = np.zeros((grid.nx, grid.ny))
    two_s2 = 2.0 * spray.sigma**2
    for a in actuators:
        amp = release_amplitude(a, measurement, mesh, spray)
        if amp > 0.0:
            out -= amp * np.exp(-((X - a.p[0]) ** 2 + (Y - a.p[1]) ** 2) / two_s2)
    return Field(out, grid)
