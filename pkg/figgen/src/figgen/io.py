"""Readers for the simulator's documented output files.

All parsing errors carry the file path and, for tabular data, the
1-based row number.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np


class FiggenError(ValueError):
    pass


def _read_table(path, expected_header: str, n_cols: int) -> np.ndarray:
    path = Path(path)
    if not path.is_file():
        raise FiggenError(f"{path}: no such file")
    rows = []
    with open(path) as fh:
        header = fh.readline().strip()
        if header != expected_header:
            raise FiggenError(
                f"{path}:1: expected header {expected_header!r}, got {header!r}"
            )
        for lineno, line in enumerate(fh, start=2):
            if not line.strip():
                continue
            parts = line.strip().split(",")
            if len(parts) != n_cols:
                raise FiggenError(
                    f"{path}:{lineno}: expected {n_cols} columns, got {len(parts)}"
                )
            try:
                rows.append([float(v) for v in parts])
            except ValueError as exc:
                raise FiggenError(f"{path}:{lineno}: {exc}") from exc
    if not rows:
        raise FiggenError(f"{path}: no data rows")
    return np.array(rows)


def read_timeseries(path) -> np.ndarray:
    """(n, 2) array of (t, total)."""
    return _read_table(path, "t,total", 2)


def read_cost(path) -> np.ndarray:
    return _read_table(path, "t,cvt_cost", 2)


def read_trajectories(path) -> np.ndarray:
    """(n, 9) array: t, id, x, y, vx, vy, target_x, target_y, release_amp."""
    return _read_table(
        path, "t,id,x,y,vx,vy,target_x,target_y,release_amp", 9
    )


def read_partition(path) -> np.ndarray:
    """(n, 4) array: sensor_index, owner, x, y."""
    return _read_table(path, "sensor_index,owner,x,y", 4)


def read_snapshot(path) -> tuple[np.ndarray, float]:
    """Field snapshot: returns (values[j, i] at (x_i, y_j), t)."""
    path = Path(path)
    if not path.is_file():
        raise FiggenError(f"{path}: no such file")
    with open(path) as fh:
        header = fh.readline().strip()
        if not header.startswith("#"):
            raise FiggenError(f"{path}:1: missing '# t=... nx=... ny=...' header")
        try:
            meta = dict(kv.split("=") for kv in header[1:].split())
            t = float(meta["t"])
            nx, ny = int(meta["nx"]), int(meta["ny"])
        except (ValueError, KeyError) as exc:
            raise FiggenError(f"{path}:1: bad header: {exc}") from exc
        try:
            values = np.loadtxt(fh, delimiter=",", ndmin=2)
        except ValueError as exc:
            raise FiggenError(f"{path}: {exc}") from exc
    if values.shape != (ny, nx):
        raise FiggenError(
            f"{path}: header promises {ny}x{nx} rows, file holds {values.shape}"
        )
    return values, t


def read_summary(path) -> dict:
    path = Path(path)
    if not path.is_file():
        raise FiggenError(f"{path}: no such file")
    try:
        return json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise FiggenError(f"{path}: {exc}") from exc
