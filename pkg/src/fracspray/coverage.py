"""Density-weighted Voronoi partition over the sensor mesh and Lloyd updates.

The partition is discrete: each sensor is assigned to its nearest actuator
(Euclidean distance, ties to the lowest actuator index). Cell centroids are
measurement-weighted means of the sensor positions, which is the quantity
each actuator chases. ``local_cell`` is the communication-radius-limited
construction with radius doubling; ``update_radius`` implements the shrink
rule applied after several unchanged rounds.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import ConfigError
from .sensing import Measurement, SensorMesh

__all__ = [
    "Partition",
    "RadiusState",
    "assign_voronoi",
    "mass_centroid",
    "cvt_cost",
    "lloyd_step",
    "local_cell",
    "update_radius",
    "save_partition",
]

NEAR_ZERO_MASS = 1e-12


@dataclass(frozen=True)
class Partition:
    owner: np.ndarray            # per-sensor actuator index
    cells: list[np.ndarray]      # per-actuator sensor indices
    centroids: np.ndarray        # per-actuator (x, y) mass centroid


@dataclass(frozen=True)
class RadiusState:
    r: float
    unchanged_count: int = 0
    delta_r: float = 0.05
    r_min: float = 0.05

    def __post_init__(self):
        if self.r <= 0.0:
            raise ConfigError(f"detection radius must be > 0, got {self.r}")
        if self.delta_r <= 0.0:
            raise ConfigError(f"radius decrement must be > 0, got {self.delta_r}")


def _sq_dists(points: np.ndarray, sites: np.ndarray) -> np.ndarray:
    return ((points[:, None, :] - sites[None, :, :]) ** 2).sum(axis=2)


def assign_voronoi(mesh: SensorMesh, actuators: np.ndarray) -> Partition:
    """Nearest-actuator assignment of every sensor; deterministic ties."""
    sites = np.atleast_2d(np.asarray(actuators, dtype=np.float64))
    if sites.shape[0] == 0:
        raise ConfigError("voronoi assignment needs at least one actuator")
    d2 = _sq_dists(mesh.positions, sites)
    owner = np.argmin(d2, axis=1)  # argmin returns the lowest index on ties
    cells = [np.flatnonzero(owner == i) for i in range(sites.shape[0])]
    centroids = np.array([
        mesh.positions[c].mean(axis=0) if c.size else sites[i]
        for i, c in enumerate(cells)
    ])
    return Partition(owner, cells, centroids)


def mass_centroid(
    cell: np.ndarray,
    density: Measurement,
    mesh: SensorMesh,
    fallback: tuple[float, float],
) -> np.ndarray:
    """Density-weighted centroid of one cell.

    Near-zero total density falls back to the unweighted cell mean; an empty
    cell returns ``fallback`` (normally the actuator's current position).
    """
    cell = np.asarray(cell, dtype=int)
    if cell.size == 0:
        return np.asarray(fallback, dtype=np.float64).copy()
    pos = mesh.positions[cell]
    w = density.values[cell]
    total = w.sum()
    if total <= NEAR_ZERO_MASS:
        return pos.mean(axis=0)
    return (pos * w[:, None]).sum(axis=0) / total


def cvt_cost(
    partition: Partition,
    density: Measurement,
    mesh: SensorMesh,
    actuators: np.ndarray,
) -> float:
    """Coverage cost: sum_i sum_{q in V_i} rho_q |q - p_i|^2 hx hy."""
    sites = np.atleast_2d(np.asarray(actuators, dtype=np.float64))
    d2_own = ((mesh.positions - sites[partition.owner]) ** 2).sum(axis=1)
    cell_area = mesh.grid.hx * mesh.grid.hy
    return float((density.values * d2_own).sum() * cell_area)


def lloyd_step(
    actuators: np.ndarray,
    mesh: SensorMesh,
    density: Measurement,
) -> tuple[np.ndarray, Partition]:
    """One Lloyd update: partition, then move each generator to its centroid.

    Returns the new generator targets and the partition they came from.
    Convergence is reached when the maximum generator displacement drops
    below the caller's tolerance.
    """
    sites = np.atleast_2d(np.asarray(actuators, dtype=np.float64))
    part = assign_voronoi(mesh, sites)
    targets = np.array([
        mass_centroid(part.cells[i], density, mesh, sites[i])
        for i in range(sites.shape[0])
    ])
    part = replace(part, centroids=targets)
    return targets, part


def local_cell(
    actuator_index: int,
    actuators: np.ndarray,
    mesh: SensorMesh,
    radius_state: RadiusState,
) -> tuple[np.ndarray, RadiusState]:
    """Radius-limited Voronoi cell of one actuator.

    Repeatedly: detect sensors and peer actuators within r, build the cell
    against the detected peers, measure the farthest owned sensor d, and
    stop once r > 2 d (doubling r otherwise). r is capped at the domain
    diameter, where the detected set is complete and the loop is forced to
    stop. On termination with r >= 2 d the cell equals the global one.
    An empty owned set cannot certify the stop rule (its d is vacuous), so
    r keeps doubling until sensors are owned or the cap is reached.
    """
    sites = np.atleast_2d(np.asarray(actuators, dtype=np.float64))
    me = sites[actuator_index]
    g = mesh.grid
    diam = float(np.hypot(g.x1 - g.x0, g.y1 - g.y0))
    d_sensors = np.sqrt(((mesh.positions - me) ** 2).sum(axis=1))
    d_sites = np.sqrt(((sites - me) ** 2).sum(axis=1))

    r = radius_state.r
    while True:
        seen_sensors = np.flatnonzero(d_sensors <= r)
        peers = np.flatnonzero(d_sites <= r)  # includes self
        d2 = _sq_dists(mesh.positions[seen_sensors], sites[peers])
        owner_local = peers[np.argmin(d2, axis=1)]
        cell = seen_sensors[owner_local == actuator_index]
        d_far = d_sensors[cell].max() if cell.size else 0.0
        if (cell.size > 0 and r > 2.0 * d_far) or r >= diam:
            break
        r = min(2.0 * r, diam)
    return cell, replace(radius_state, r=r)


def update_radius(radius_state: RadiusState) -> RadiusState:
    """Shrink r by delta_r (not below r_min) after 3 unchanged rounds."""
    if radius_state.unchanged_count >= 3:
        return replace(
            radius_state,
            r=max(radius_state.r - radius_state.delta_r, radius_state.r_min),
            unchanged_count=0,
        )
    return radius_state


def save_partition(partition: Partition, mesh: SensorMesh, path) -> None:
    """CSV export: sensor_index, owner, x, y."""
    with open(path, "w", newline="\n") as fh:
        fh.write("sensor_index,owner,x,y\n")
        for q in range(len(mesh)):
            x, y = mesh.positions[q]
            fh.write(f"{q},{partition.owner[q]},{x:.17g},{y:.17g}\n")
