import json

import numpy as np
import pytest


def write_snapshot(path, values, t):
    """values[j, i] laid out per the documented snapshot format."""
    ny, nx = values.shape
    with open(path, "w", newline="\n") as fh:
        fh.write(f"# t={t:.17g} nx={nx} ny={ny}\n")
        for j in range(ny):
            fh.write(",".join(f"{v:.17g}" for v in values[j]) + "\n")
    return path


def write_timeseries(path, rows):
    with open(path, "w", newline="\n") as fh:
        fh.write("t,total\n")
        for t, total in rows:
            fh.write(f"{t:.17g},{total:.17g}\n")
    return path


def write_trajectories(path, rows):
    with open(path, "w", newline="\n") as fh:
        fh.write("t,id,x,y,vx,vy,target_x,target_y,release_amp\n")
        for row in rows:
            fh.write(",".join(f"{v:.17g}" for v in row) + "\n")
    return path


def write_partition(path, sensors, owners):
    with open(path, "w", newline="\n") as fh:
        fh.write("sensor_index,owner,x,y\n")
        for q, ((x, y), o) in enumerate(zip(sensors, owners)):
            fh.write(f"{q},{o},{x:.17g},{y:.17g}\n")
    return path


@pytest.fixture
def synthetic_run(tmp_path):
    """A self-consistent miniature run directory in the documented formats."""
    rng = np.random.default_rng(3)
    run = tmp_path / "run"
    (run / "snapshots").mkdir(parents=True)
    xs = np.linspace(0, 1, 11)
    X, Y = np.meshgrid(xs, xs)  # [j, i] orientation
    for t in (0.5, 1.0):
        field = t * np.exp(-((X - 0.7) ** 2 + (Y - 0.3) ** 2) / 0.05)
        write_snapshot(run / "snapshots" / f"t_{t:g}.csv", field, t)
    write_timeseries(run / "timeseries.csv",
                     [(0.1 * k, 100 * np.sin(0.3 * k) ** 2) for k in range(11)])
    rows = []
    for t in (0.0, 0.5, 1.0):
        for aid, (x, y) in enumerate([(0.33, 0.33), (0.66, 0.66)]):
            rows.append((t, aid, x + 0.1 * t, y, 0.1, 0.0, 0.5, 0.5, 2.0 * t))
    write_trajectories(run / "trajectories.csv", rows)
    sensors = np.column_stack([rng.random(25), rng.random(25)])
    write_partition(run / "partition_initial.csv", sensors, rng.integers(0, 2, 25))
    (run / "summary.json").write_text(json.dumps({
        "scenario": "synthetic",
        "sources": [{"x": 0.8, "y": 0.2}],
        "actuator_initial_positions": [[0.33, 0.33], [0.66, 0.66]],
    }))
    return run
