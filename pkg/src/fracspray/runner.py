"""Simulation main loop, verification harness, convergence studies, sweeps.

The main loop advances the PDE at the solver step size while sensing and
coverage control run at the (coarser) control period:

  per control period   sample sensors, update CVT targets and radii,
                       record time-series / cost / trajectory rows
  per PDE step         rasterize the disturbance, build the release sink
                       from the latest measurement, step the field, move
                       the actuators

Actuators hold position and spray nothing before the actuation start time.
The field is clamped at zero exactly while the spraying sink is active.
"""

from __future__ import annotations

import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np
from scipy.special import gamma as _gamma

from .actuation import (
    ActuatorState,
    control_accel,
    integrate_actuator,
    release_amplitude,
    release_field,
)
from .coverage import (
    RadiusState,
    assign_voronoi,
    cvt_cost,
    local_cell,
    lloyd_step,
    mass_centroid,
    save_partition,
    update_radius,
)
from .errors import ConfigError, StabilityError
from .grid import BoundaryCondition, Field, apply_boundary, make_grid, save_field
from .scenario import Scenario
from .sensing import aggregate_total, make_sensor_mesh, sample_measurements
from .solver import (
    SPACE_FRACTIONAL,
    TIME_FRACTIONAL,
    FractionalParams,
    exact_solution,
    manufactured_forcing_sfde,
    manufactured_forcing_tfde,
    new_state,
    rasterize_point_source,
    stability_guard,
    step_sfde,
    step_tfde,
)

__all__ = [
    "RunOutputs",
    "ErrorReport",
    "run_simulation",
    "run_verification",
    "convergence_study",
    "run_sweep",
    "VERIFICATION_CASES",
    "CONVERGENCE_CASES",
]


@dataclass
class RunOutputs:
    scenario: Scenario
    timeseries: np.ndarray                  # rows (t, total)
    cost: np.ndarray                        # rows (t, cvt_cost)
    trajectories: list[tuple]               # rows (t, id, x, y, vx, vy, tx, ty, amp)
    snapshots: dict[float, Field]
    summary: dict

    def write(self, out_dir) -> None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        _write_csv(out / "timeseries.csv", "t,total", self.timeseries)
        _write_csv(out / "cost.csv", "t,cvt_cost", self.cost)
        with open(out / "trajectories.csv", "w", newline="\n") as fh:
            fh.write("t,id,x,y,vx,vy,target_x,target_y,release_amp\n")
            for row in self.trajectories:
                t, aid, rest = row[0], row[1], row[2:]
                fh.write(f"{t:.17g},{aid}," + ",".join(f"{v:.17g}" for v in rest) + "\n")
        snap_dir = out / "snapshots"
        snap_dir.mkdir(exist_ok=True)
        for ts, fld in sorted(self.snapshots.items()):
            save_field(fld, ts, snap_dir / f"t_{ts:g}.csv")
        with open(out / "summary.json", "w", newline="\n") as fh:
            json.dump(self.summary, fh, indent=2, sort_keys=True)
            fh.write("\n")


def _write_csv(path, header: str, rows) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(f"{v:.17g}" for v in row) + "\n")


def run_simulation(scenario: Scenario, out_dir=None) -> RunOutputs:
    sc = scenario
    params = sc.params
    guard_value = stability_guard(params, sc.grid, enforce=True)
    t_start = time.perf_counter()

    grid = sc.grid
    mesh = make_sensor_mesh(sc.sensors_per_side, grid)
    initial = apply_boundary(Field.zeros(grid), sc.bc)
    state = new_state(grid, params, initial)
    step = step_tfde if params.model == TIME_FRACTIONAL else step_sfde

    actuators = [
        ActuatorState.at(x, y, id=i) for i, (x, y) in enumerate(sc.actuator_positions)
    ] if sc.actuators_enabled else []
    radii = [
        RadiusState(sc.initial_radius, 0, sc.radius_decrement, sc.min_radius)
        for _ in actuators
    ]
    rng = np.random.default_rng(sc.seed) if sc.noise_sigma > 0 else None

    nsteps = sc.steps
    spp = sc.steps_per_period
    pending_snaps = {round(ts / params.tau): ts for ts in sc.snapshot_times}
    timeseries: list[tuple] = []
    cost_rows: list[tuple] = []
    traj_rows: list[tuple] = []
    snapshots: dict[float, Field] = {}
    measurement = sample_measurements(state.field, mesh, 0.0, sc.noise_sigma, rng)
    partition_initial = None
    max_speed = 0.0

    def record_control_rows(t_now: float, actuating: bool):
        nonlocal partition_initial
        timeseries.append((t_now, aggregate_total(measurement)))
        if not actuators:
            return
        positions = np.array([a.p for a in actuators])
        part = assign_voronoi(mesh, positions)
        if partition_initial is None:
            partition_initial = part
        cost_rows.append((t_now, cvt_cost(part, measurement, mesh, positions)))
        for a in actuators:
            amp = (
                release_amplitude(a, measurement, mesh, sc.spray) if actuating else 0.0
            )
            traj_rows.append(
                (t_now, a.id, a.p[0], a.p[1], a.v[0], a.v[1], a.target[0], a.target[1], amp)
            )

    def update_targets():
        nonlocal actuators, radii
        positions = np.array([a.p for a in actuators])
        if sc.cvt_mode == "centralized":
            targets, _ = lloyd_step(positions, mesh, measurement)
        else:
            targets = np.empty_like(positions)
            for i, a in enumerate(actuators):
                cell, terminal = local_cell(i, positions, mesh, radii[i])
                targets[i] = mass_centroid(cell, measurement, mesh, positions[i])
                unchanged = (
                    radii[i].unchanged_count + 1 if terminal.r == radii[i].r else 0
                )
                radii[i] = update_radius(replace(terminal, unchanged_count=unchanged))
        actuators = [replace(a, target=targets[i]) for i, a in enumerate(actuators)]

    for m in range(1, nsteps + 1):
        t_old = (m - 1) * params.tau
        t_new = m * params.tau
        actuating = bool(actuators) and t_old >= sc.actuation_start - 1e-12
        if (m - 1) % spp == 0:
            measurement = sample_measurements(state.field, mesh, t_old, sc.noise_sigma, rng)
            if actuating:
                update_targets()
            record_control_rows(t_old, actuating)

        f_d = None
        if sc.sources:
            f_d = Field.zeros(grid)
            for src in sc.sources:
                f_d.values += rasterize_point_source(src, grid, t_new).values
        f_c = (
            release_field(actuators, measurement, mesh, sc.spray, grid)
            if actuating
            else None
        )
        state = step(state, params, f_d, f_c, sc.bc, clamp=f_c is not None)

        if actuating:
            moved = []
            for a in actuators:
                nxt = integrate_actuator(a, control_accel(a, sc.gains), params.tau, grid, sc.v_max)
                max_speed = max(max_speed, float(np.hypot(nxt.v[0], nxt.v[1])))
                moved.append(nxt)
            actuators = moved

        if m in pending_snaps:
            snapshots[pending_snaps[m]] = state.field.copy()

    measurement = sample_measurements(state.field, mesh, state.t, sc.noise_sigma, rng)
    actuating = bool(actuators) and state.t >= sc.actuation_start
    record_control_rows(state.t, actuating)

    ts = np.array(timeseries)
    totals = ts[:, 1]
    peak_idx = int(np.argmax(totals))
    peak = float(totals[peak_idx])
    final = float(totals[-1])
    diffs_after_peak = np.diff(totals[peak_idx:])
    summary = {
        "scenario": sc.name,
        "model": params.model,
        "order": params.alpha if params.model == TIME_FRACTIONAL else params.beta,
        "k_p": sc.gains.k_p,
        "k_v": sc.gains.k_v,
        "spray_gain": sc.spray.gain,
        "t_end": sc.t_end,
        "peak_total": peak,
        "peak_time": float(ts[peak_idx, 0]),
        "final_total": final,
        "final_peak_ratio": (final / peak) if peak > 0 else 0.0,
        "monotone_after_peak": bool(np.all(diffs_after_peak <= 1e-9 * max(peak, 1.0))),
        "guard_value": guard_value,
        "guard_margin": 1.0 - guard_value,
        "max_actuator_speed": max_speed,
        "sources": [{"x": s.x, "y": s.y} for s in sc.sources],
        "actuator_initial_positions": [list(p) for p in sc.actuator_positions],
        "wall_time_s": time.perf_counter() - t_start,
    }
    outputs = RunOutputs(sc, ts, np.array(cost_rows), traj_rows, snapshots, summary)
    if out_dir is not None:
        outputs.write(out_dir)
        if partition_initial is not None:
            save_partition(partition_initial, mesh, Path(out_dir) / "partition_initial.csv")
    return outputs


# ---------------------------------------------------------------------------
# Verification: manufactured-solution runs and convergence studies

VERIFICATION_CASES = ("appendix1", "appendix2")
CONVERGENCE_CASES = ("appendix1-temporal", "appendix1-spatial", "appendix2-spatial")


@dataclass
class ErrorReport:
    case: str
    order: float
    h: float
    tau: float
    t_end: float
    max_error: float
    l2_error: float
    guard_value: float
    observed_orders: dict | None = None

    def to_json(self) -> str:
        d = dict(self.__dict__)
        return json.dumps(d, indent=2, sort_keys=True)


def _mms_run(case: str, order: float, nx: int, tau: float, t_end: float, mms: str = "poly"):
    """Solve one manufactured problem; returns (numerical, exact, grid, guard)."""
    grid = make_grid(nx, nx)
    bc = BoundaryCondition.dirichlet(0.0)
    X, Y = grid.meshgrid()
    interior = (slice(1, -1), slice(1, -1))
    if case == "appendix1":
        params = FractionalParams(TIME_FRACTIONAL, alpha=order, tau=tau)
        step = step_tfde
        if mms == "poly":
            def forcing(t):
                return manufactured_forcing_tfde(order, X, Y, t)
            def exact(t):
                return exact_solution(X, Y, t)
        else:
            # trigonometric variant: u = t^2 sin(2 pi x) sin(2 pi y). The
            # polynomial solution is spatially exact for the 5-point stencil,
            # so spatial-order measurements need nonvanishing 4th derivatives.
            S = np.sin(2 * np.pi * X) * np.sin(2 * np.pi * Y)

            def forcing(t):
                return (2.0 * t ** (2.0 - order) / _gamma(3.0 - order)
                        + 0.08 * np.pi**2 * t**2) * S
            def exact(t):
                return t**2 * S
    elif case == "appendix2":
        params = FractionalParams(SPACE_FRACTIONAL, beta=order, tau=tau)
        step = step_sfde

        def forcing(t):
            out = np.zeros_like(X)
            out[interior] = manufactured_forcing_sfde(order, X[interior], Y[interior], t)
            return out
        def exact(t):
            return exact_solution(X, Y, t)
    else:
        raise ConfigError(f"unknown verification case {case!r}")

    guard_value = stability_guard(params, grid, enforce=False)
    state = new_state(grid, params)
    nsteps = int(round(t_end / tau))
    for m in range(1, nsteps + 1):
        f = Field(forcing(m * tau), grid)
        state = step(state, params, f, None, bc)
    return state.field, Field(exact(state.t), grid), grid, guard_value


def run_verification(
    case: str,
    order: float,
    nx: int = 21,
    tau: float = 1.0 / 250.0,
    t_end: float | None = None,
    out_dir=None,
) -> ErrorReport:
    """Manufactured-solution error at the verification resolution.

    Defaults mirror the reference setup: spatial step 1/20, time step 1/250,
    final time 0.5 for the time-fractional case and 1.0 for the
    space-fractional one. The stability bound is recorded, not enforced,
    because the step sizes are pinned by the case definition.
    """
    if case not in VERIFICATION_CASES:
        raise ConfigError(f"verification case must be one of {VERIFICATION_CASES}")
    if t_end is None:
        t_end = 0.5 if case == "appendix1" else 1.0
    num, exact, grid, guard_value = _mms_run(case, order, nx, tau, t_end)
    err = num.values - exact.values
    report = ErrorReport(
        case=case,
        order=order,
        h=grid.hx,
        tau=tau,
        t_end=t_end,
        max_error=float(np.max(np.abs(err))),
        l2_error=float(np.sqrt(grid.hx * grid.hy * np.sum(err**2))),
        guard_value=guard_value,
    )
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        save_field(num, t_end, out / "numerical.csv")
        save_field(exact, t_end, out / "exact.csv")
        with open(out / "error_report.json", "w", newline="\n") as fh:
            fh.write(report.to_json() + "\n")
    return report


_DEFAULT_LADDERS = {
    # (nx, tau) pairs, coarse to fine
    "appendix1-temporal": [(21, 1 / 160), (21, 1 / 320), (21, 1 / 640), (21, 1 / 1280)],
    "appendix1-spatial": [(6, 0.05), (11, 0.0125), (21, 0.003125), (41, 0.00078125)],
    "appendix2-spatial": [(9, 0.4 / 64), (17, 0.4 / 256), (33, 0.4 / 1024), (65, 0.4 / 4096)],
}
_DEFAULT_ORDERS = {
    "appendix1-temporal": (0.6, 0.7, 0.8, 0.9),
    "appendix1-spatial": (0.7,),
    "appendix2-spatial": (1.3, 1.5, 1.7, 1.9),
}


def convergence_study(
    case: str,
    orders=None,
    refinements=None,
    t_end: float = 0.5,
) -> ErrorReport:
    """Observed convergence orders from a refinement ladder.

    ``refinements`` is a list of (nx, tau) pairs, coarse to fine; at least
    three levels are required. Temporal studies keep nx fixed and shrink
    tau; spatial studies shrink both (tau fast enough that the time error
    stays subdominant). The slope is the least-squares fit of log(error)
    against log(tau) or log(h). Returns the finest-level errors with
    ``observed_orders`` mapping each order to its fitted slope.
    """
    if case not in CONVERGENCE_CASES:
        raise ConfigError(f"convergence case must be one of {CONVERGENCE_CASES}")
    orders = tuple(orders) if orders is not None else _DEFAULT_ORDERS[case]
    ladder = list(refinements) if refinements is not None else _DEFAULT_LADDERS[case]
    if len(ladder) < 3:
        raise ConfigError("need at least three refinement levels")
    base_case = case.split("-")[0]
    direction = case.split("-")[1]
    mms = "trig" if case == "appendix1-spatial" else "poly"

    observed: dict = {}
    finest = None
    for order in orders:
        errs = []
        for nx, tau in ladder:
            num, exact, grid, _ = _mms_run(base_case, order, nx, tau, t_end, mms)
            errs.append(float(np.max(np.abs(num.values - exact.values))))
            finest = (num, exact, grid, tau)
        xs = (
            np.log([tau for _, tau in ladder])
            if direction == "temporal"
            else np.log([1.0 / (nx - 1) for nx, _ in ladder])
        )
        slope = float(np.polyfit(xs, np.log(errs), 1)[0])
        observed[order] = {"slope": slope, "errors": errs}

    num, exact, grid, tau = finest
    err = num.values - exact.values
    return ErrorReport(
        case=case,
        order=orders[-1],
        h=grid.hx,
        tau=tau,
        t_end=t_end,
        max_error=float(np.max(np.abs(err))),
        l2_error=float(np.sqrt(grid.hx * grid.hy * np.sum(err**2))),
        guard_value=math.nan,
        observed_orders=observed,
    )


# ---------------------------------------------------------------------------
# Parameter sweeps

SWEEP_PARAMETERS = ("alpha", "beta", "k_p", "k_v", "gamma")


def _with_parameter(sc: Scenario, parameter: str, value: float) -> Scenario:
    if parameter == "alpha":
        return replace(sc, params=replace(sc.params, alpha=value))
    if parameter == "beta":
        return replace(sc, params=replace(sc.params, beta=value))
    if parameter == "k_p":
        return replace(sc, gains=replace(sc.gains, k_p=value))
    if parameter == "k_v":
        return replace(sc, gains=replace(sc.gains, k_v=value))
    if parameter == "gamma":
        return replace(sc, spray=replace(sc.spray, gain=value))
    raise ConfigError(f"sweep parameter must be one of {SWEEP_PARAMETERS}")


def _sweep_member(args):
    sc, parameter, value, out_dir = args
    member = replace(
        _with_parameter(sc, parameter, value), name=f"{sc.name}_{parameter}_{value:g}"
    )
    member_dir = None if out_dir is None else str(Path(out_dir) / f"{parameter}_{value:g}")
    try:
        outputs = run_simulation(member, member_dir)
        return value, outputs.summary, None
    except StabilityError as exc:
        return value, None, {"error": str(exc), "guard_value": exc.value}


def run_sweep(
    base: Scenario,
    parameter: str,
    values,
    out_dir=None,
    max_workers: int = 1,
) -> list[dict]:
    """Independent runs per parameter value; failures are reported per member.

    Returns one record per value with either the run summary or the
    stability error that prevented it. Members share no mutable state and
    may execute in parallel.
    """
    if parameter not in SWEEP_PARAMETERS:
        raise ConfigError(f"sweep parameter must be one of {SWEEP_PARAMETERS}")
    jobs = [(base, parameter, float(v), out_dir) for v in values]
    if max_workers > 1:
        with ProcessPoolExecutor(max_workers=max_workers) as pool:
            results = list(pool.map(_sweep_member, jobs))
    else:
        results = [_sweep_member(j) for j in jobs]

    records = []
    for value, summary, error in results:
        rec = {"parameter": parameter, "value": value}
        if summary is not None:
            rec.update(
                peak_total=summary["peak_total"],
                final_total=summary["final_total"],
                final_peak_ratio=summary["final_peak_ratio"],
                summary=summary,
            )
        else:
            rec.update(error)
        records.append(rec)
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        with open(out / "sweep_summary.json", "w", newline="\n") as fh:
            json.dump(records, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return records
