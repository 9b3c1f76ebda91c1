"""The four figure kinds: time series, heatmap grid, layout, error surface.

Figures are written by file extension (.png or .svg). SVG metadata is
pinned so repeated generation from the same inputs is byte-identical.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "figgen"  # deterministic SVG element ids

import matplotlib.pyplot as plt
import numpy as np

from .io import (
    FiggenError,
    read_partition,
    read_snapshot,
    read_summary,
    read_timeseries,
    read_trajectories,
)

ACTUATOR_STYLE = dict(marker="o", s=60, facecolors="none", edgecolors="tab:blue",
                      linewidths=1.6, label="actuators")
TARGET_STYLE = dict(marker="o", s=26, color="tab:red", label="desired positions")


def _save(fig, out_path):
    out = Path(out_path)
    out.parent.mkdir(parents=True, exist_ok=True)
    metadata = {"Date": None} if out.suffix.lower() == ".svg" else None
    fig.savefig(out, dpi=150, metadata=metadata)
    plt.close(fig)


def plot_timeseries(csv_paths, out_path, labels=None) -> None:
    """Overlaid total-vs-time lines, one per input file."""
    if not csv_paths:
        raise FiggenError("no time-series files given")
    if labels and len(labels) != len(csv_paths):
        raise FiggenError(f"{len(labels)} labels for {len(csv_paths)} files")
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for i, path in enumerate(csv_paths):
        data = read_timeseries(path)
        label = labels[i] if labels else Path(path).parent.name or Path(path).stem
        ax.plot(data[:, 0], data[:, 1], label=label)
    ax.set_xlabel("time [s]")
    ax.set_ylabel("sum of sensor measurements")
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    _save(fig, out_path)


def _actuator_rows_at(traj: np.ndarray, t: float) -> np.ndarray:
    """Trajectory rows of the latest control period at or before t."""
    times = np.unique(traj[:, 0])
    if t < times[0] - 1e-9 or t > times[-1] + 1e-9:
        raise FiggenError(
            f"time {t:g} outside the trajectory timeline [{times[0]:g}, {times[-1]:g}]"
        )
    t_sel = times[times <= t + 1e-9][-1]
    return traj[np.abs(traj[:, 0] - t_sel) < 1e-12]


def plot_heatmap_grid(snapshot_paths, trajectory_path, times, out_path) -> None:
    """Field heatmaps at the requested times with actuator/target overlays."""
    if not snapshot_paths:
        raise FiggenError("no snapshot files given")
    snaps = {}
    for path in snapshot_paths:
        values, t = read_snapshot(path)
        snaps[t] = values
    times = list(times) if times else sorted(snaps)
    missing = [t for t in times if t not in snaps]
    if missing:
        available = ", ".join(f"{t:g}" for t in sorted(snaps))
        raise FiggenError(
            f"no snapshot for t={missing[0]:g}; available times: {available}"
        )
    traj = read_trajectories(trajectory_path) if trajectory_path else None

    n = len(times)
    ncols = min(3, n)
    nrows = (n + ncols - 1) // ncols
    vmax = max(float(snaps[t].max()) for t in times) or 1.0
    fig, axes = plt.subplots(
        nrows, ncols, figsize=(4.2 * ncols, 3.6 * nrows), squeeze=False
    )
    for k, t in enumerate(times):
        ax = axes[k // ncols][k % ncols]
        im = ax.imshow(
            snaps[t], origin="lower", extent=(0, 1, 0, 1), cmap="viridis",
            vmin=0.0, vmax=vmax, interpolation="nearest",
        )
        if traj is not None:
            rows = _actuator_rows_at(traj, t)
            ax.scatter(rows[:, 2], rows[:, 3], **ACTUATOR_STYLE)
            ax.scatter(rows[:, 6], rows[:, 7], **TARGET_STYLE)
        ax.set_title(f"t = {t:g} s")
        ax.set_xlim(0, 1)
        ax.set_ylim(0, 1)
    for k in range(n, nrows * ncols):
        axes[k // ncols][k % ncols].axis("off")
    fig.colorbar(im, ax=[a for row in axes for a in row], shrink=0.85,
                 label="density")
    _save(fig, out_path)


def plot_layout(partition_path, summary_path, out_path, trajectory_path=None) -> None:
    """Initial layout: sensor mesh, Voronoi ownership, actuators, sources."""
    part = read_partition(partition_path)
    summary = read_summary(summary_path)
    fig, ax = plt.subplots(figsize=(6, 6))
    owners = part[:, 1].astype(int)
    ax.scatter(part[:, 2], part[:, 3], c=owners, cmap="tab10", s=8, alpha=0.6,
               label="sensors")
    if trajectory_path:
        rows = _actuator_rows_at(read_trajectories(trajectory_path), 0.0)
        ax.scatter(rows[:, 2], rows[:, 3], **ACTUATOR_STYLE)
    else:
        pos = np.array(summary.get("actuator_initial_positions", []))
        if pos.size:
            ax.scatter(pos[:, 0], pos[:, 1], **ACTUATOR_STYLE)
    for src in summary.get("sources", []):
        ax.scatter([src["x"]], [src["y"]], marker="*", s=220, color="black",
                   label="source")
    handles, labels = ax.get_legend_handles_labels()
    seen = dict(zip(labels, handles))
    ax.legend(seen.values(), seen.keys(), loc="upper left")
    ax.set_xlim(0, 1)
    ax.set_ylim(0, 1)
    ax.set_aspect("equal")
    ax.set_title(summary.get("scenario", "layout"))
    fig.tight_layout()
    _save(fig, out_path)


def plot_error_surface(numerical_path, exact_path, out_path) -> np.ndarray:
    """Numerical and exact surfaces side by side plus their difference.

    Returns the difference array (identically zero for identical inputs).
    """
    num, t_num = read_snapshot(numerical_path)
    exact, t_ex = read_snapshot(exact_path)
    if num.shape != exact.shape:
        raise FiggenError(
            f"grid mismatch: {numerical_path} is {num.shape}, "
            f"{exact_path} is {exact.shape}"
        )
    diff = num - exact
    fig, axes = plt.subplots(1, 3, figsize=(13, 4))
    vmax = float(max(num.max(), exact.max())) or 1.0
    for ax, data, title in (
        (axes[0], num, f"numerical (t = {t_num:g})"),
        (axes[1], exact, f"exact (t = {t_ex:g})"),
    ):
        im = ax.imshow(data, origin="lower", extent=(0, 1, 0, 1),
                       vmin=0.0, vmax=vmax, cmap="viridis")
        ax.set_title(title)
        fig.colorbar(im, ax=ax, shrink=0.8)
    scale = float(np.max(np.abs(diff)))
    im = axes[2].imshow(diff, origin="lower", extent=(0, 1, 0, 1),
                        cmap="RdBu_r", vmin=-(scale or 1.0), vmax=scale or 1.0)
    axes[2].set_title(f"difference (max |.| = {scale:.3e})")
    fig.colorbar(im, ax=axes[2], shrink=0.8)
    fig.tight_layout()
    _save(fig, out_path)
    return diff
