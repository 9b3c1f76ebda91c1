"""Command-line interface.

Subcommands: run, sweep, verify, convergence, demo-cvt. Exit codes:
0 success, 1 usage or validation error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from .coverage import assign_voronoi, cvt_cost, lloyd_step
from .errors import BlowUpError, ConfigError, StabilityError
from .grid import make_grid
from .runner import (
    CONVERGENCE_CASES,
    VERIFICATION_CASES,
    convergence_study,
    run_simulation,
    run_sweep,
    run_verification,
)
from .scenario import bundled_config, load_scenario, load_scenario_file
from .sensing import Measurement, make_sensor_mesh

OUT_ENV = "FRACSPRAY_OUT"


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage problems exit 1, not argparse's 2
        self.print_usage(sys.stderr)
        raise SystemExit(f"error: {message}")


def _build_parser() -> _Parser:
    p = _Parser(prog="fracspray", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--out", "-o", default=None, help="output directory")
        sp.add_argument(
            "--set",
            dest="overrides",
            action="append",
            default=[],
            metavar="SECTION.KEY=VALUE",
            help="override a scenario key (repeatable)",
        )

    sp = sub.add_parser("run", help="run one scenario")
    sp.add_argument("scenario", help="scenario file path or bundled name")
    common(sp)

    sp = sub.add_parser("sweep", help="run a parameter sweep over one scenario")
    sp.add_argument("scenario")
    sp.add_argument("--param", required=True, choices=("alpha", "beta", "k_p", "k_v", "gamma"))
    sp.add_argument("--values", required=True, help="comma-separated values")
    sp.add_argument("--threads", type=int, default=1, help="max parallel workers")
    common(sp)

    sp = sub.add_parser("verify", help="manufactured-solution verification")
    sp.add_argument("config", nargs="?", help="verification config file or bundled name")
    sp.add_argument("--case", choices=VERIFICATION_CASES)
    sp.add_argument("--alpha", type=float)
    sp.add_argument("--beta", type=float)
    sp.add_argument("--nx", type=int, default=21)
    sp.add_argument("--tau", type=float, default=1.0 / 250.0)
    sp.add_argument("--t-end", type=float, default=None)
    sp.add_argument("--out", "-o", default=None)

    sp = sub.add_parser("convergence", help="refinement-study convergence orders")
    sp.add_argument(
        "--case",
        required=True,
        help=f"one of {', '.join(CONVERGENCE_CASES)} (or appendix1/appendix2 for all directions)",
    )
    sp.add_argument("--orders", default=None, help="comma-separated orders")

    sp = sub.add_parser("demo-cvt", help="Lloyd iteration on a synthetic density")
    sp.add_argument("--generators", type=int, default=4)
    sp.add_argument("--iterations", type=int, default=20)
    sp.add_argument("--seed", type=int, default=1)
    return p


def _resolve_scenario_text(ref: str) -> str:
    path = Path(ref)
    if path.is_file():
        return path.read_text()
    if path.suffix == "" and "/" not in ref:
        return bundled_config(ref)
    if path.suffix == ".cfg" and not path.exists() and "/" not in ref:
        try:
            return bundled_config(path.stem)
        except ConfigError:
            pass
    raise ConfigError(f"scenario file not found: {ref}")


def _default_out(name: str, given) -> str:
    if given:
        return given
    base = os.environ.get(OUT_ENV, "out")
    return str(Path(base) / name)


def _cmd_run(args) -> int:
    text = _resolve_scenario_text(args.scenario)
    scenario = load_scenario(text, args.overrides, name=Path(args.scenario).stem)
    out_dir = _default_out(scenario.name, args.out)
    outputs = run_simulation(scenario, out_dir)
    s = outputs.summary
    print(
        f"{scenario.name}: peak={s['peak_total']:.6g} @ t={s['peak_time']:g}, "
        f"final={s['final_total']:.6g} (ratio {s['final_peak_ratio']:.3f}), "
        f"guard={s['guard_value']:.3f} -> {out_dir}"
    )
    return 0


def _cmd_sweep(args) -> int:
    text = _resolve_scenario_text(args.scenario)
    scenario = load_scenario(text, args.overrides, name=Path(args.scenario).stem)
    try:
        values = [float(v) for v in args.values.split(",") if v.strip()]
    except ValueError as exc:
        raise ConfigError(f"--values: {exc}") from exc
    if not values:
        raise ConfigError("--values: empty list")
    out_dir = _default_out(f"{scenario.name}_{args.param}_sweep", args.out)
    records = run_sweep(scenario, args.param, values, out_dir, max_workers=args.threads)
    print(f"{'value':>8}  {'peak':>12}  {'final':>12}  {'final/peak':>10}")
    best = None
    for rec in records:
        if "error" in rec:
            note = f"(unstable: bound {rec['guard_value']:.3g})"
            print(f"{rec['value']:>8g}  {note:>38}")
            continue
        print(
            f"{rec['value']:>8g}  {rec['peak_total']:>12.5g}  "
            f"{rec['final_total']:>12.5g}  {rec['final_peak_ratio']:>10.4f}"
        )
        if best is None or rec["final_total"] < best[1]:
            best = (rec["value"], rec["final_total"])
    if best is not None:
        print(f"lowest final total: {args.param}={best[0]:g}")
    print(f"-> {out_dir}")
    return 0


def _parse_verification_config(text: str) -> dict:
    import configparser

    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#",))
    cp.read_string(text)
    if not cp.has_section("verification"):
        raise ConfigError("verification config needs a [verification] section")
    known = {"case", "order", "nx", "tau", "t_end"}
    out = {}
    for key, value in cp.items("verification"):
        if key not in known:
            raise ConfigError(f"verification.{key}: unknown key")
        out[key] = value
    if "case" not in out or "order" not in out:
        raise ConfigError("verification config needs case and order keys")
    return {
        "case": out["case"],
        "order": float(out["order"]),
        "nx": int(out.get("nx", 21)),
        "tau": float(out.get("tau", 1.0 / 250.0)),
        "t_end": float(out["t_end"]) if "t_end" in out else None,
    }


def _cmd_verify(args) -> int:
    if args.config:
        kw = _parse_verification_config(_resolve_scenario_text(args.config))
    else:
        if args.case is None:
            raise ConfigError("verify needs --case (or a verification config file)")
        order = args.alpha if args.case == "appendix1" else args.beta
        if order is None:
            raise ConfigError(
                "verify needs --alpha for appendix1 or --beta for appendix2"
            )
        kw = {
            "case": args.case,
            "order": order,
            "nx": args.nx,
            "tau": args.tau,
            "t_end": args.t_end,
        }
    report = run_verification(out_dir=args.out, **kw)
    print(
        f"{report.case} order={report.order:g} h={report.h:g} tau={report.tau:g} "
        f"t={report.t_end:g}: max_error={report.max_error:.6e} "
        f"l2_error={report.l2_error:.6e} guard={report.guard_value:.3f}"
    )
    return 0


def _cmd_convergence(args) -> int:
    if args.case in ("appendix1", "appendix2"):
        cases = [c for c in CONVERGENCE_CASES if c.startswith(args.case)]
    elif args.case in CONVERGENCE_CASES:
        cases = [args.case]
    else:
        raise ConfigError(f"--case: unknown case {args.case!r}")
    orders = None
    if args.orders:
        orders = [float(v) for v in args.orders.split(",")]
    for case in cases:
        report = convergence_study(case, orders=orders)
        print(f"{case}:")
        for order, rec in report.observed_orders.items():
            errs = "  ".join(f"{e:.3e}" for e in rec["errors"])
            print(f"  order {order:g}: slope {rec['slope']:.3f}   errors {errs}")
    return 0


def _cmd_demo_cvt(args) -> int:
    grid = make_grid(31, 31)
    mesh = make_sensor_mesh(29, grid)
    rng = np.random.default_rng(args.seed)
    # synthetic density: two off-center bumps
    px, py = mesh.positions[:, 0], mesh.positions[:, 1]
    density = Measurement(
        np.exp(-((px - 0.7) ** 2 + (py - 0.3) ** 2) / 0.02)
        + 0.6 * np.exp(-((px - 0.25) ** 2 + (py - 0.75) ** 2) / 0.05),
        0.0,
    )
    gens = rng.random((args.generators, 2))
    part = assign_voronoi(mesh, gens)
    print(f"{'iter':>4}  {'cost':>12}  {'max displacement':>16}")
    for it in range(args.iterations):
        cost = cvt_cost(part, density, mesh, gens)
        targets, part = lloyd_step(gens, mesh, density)
        disp = float(np.max(np.hypot(*(targets - gens).T)))
        print(f"{it:>4}  {cost:>12.6g}  {disp:>16.3e}")
        gens = targets
        if disp < 1e-6:
            break
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        if isinstance(exc.code, str):
            print(exc.code, file=sys.stderr)
            return 1
        return 0 if exc.code in (0, None) else 1
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "sweep":
            return _cmd_sweep(args)
        if args.command == "verify":
            return _cmd_verify(args)
        if args.command == "convergence":
            return _cmd_convergence(args)
        if args.command == "demo-cvt":
            return _cmd_demo_cvt(args)
        raise ConfigError(f"unknown command {args.command!r}")
    except (ConfigError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (StabilityError, BlowUpError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
