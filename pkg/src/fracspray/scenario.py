"""Scenario configuration: INI-style files, validation, CLI overrides.

Every key is validated (type, range, cross-field constraints) before any
computation starts; unknown sections or keys are rejected so typos cannot
silently fall back to defaults. The full schema with defaults and units is
documented in the project README.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass

from .actuation import ControlGains, SprayParams
from .errors import ConfigError
from .grid import BoundaryCondition, Grid2D, make_grid
from .solver import (
    SPACE_FRACTIONAL,
    TIME_FRACTIONAL,
    ExpDecay,
    FractionalParams,
    PointSource,
)

__all__ = ["Scenario", "load_scenario", "load_scenario_file", "apply_overrides", "bundled_config"]


@dataclass(frozen=True)
class Scenario:
    name: str
    params: FractionalParams
    grid: Grid2D
    bc: BoundaryCondition
    sources: tuple[PointSource, ...]
    actuators_enabled: bool
    actuator_positions: tuple[tuple[float, float], ...]
    gains: ControlGains
    spray: SprayParams
    v_max: float
    actuation_start: float
    sensors_per_side: int
    noise_sigma: float
    cvt_mode: str                 # centralized | distributed
    initial_radius: float
    radius_decrement: float
    min_radius: float
    t_end: float
    control_period: float
    snapshot_times: tuple[float, ...]
    seed: int

    @property
    def steps(self) -> int:
        return int(round(self.t_end / self.params.tau))

    @property
    def steps_per_period(self) -> int:
        return int(round(self.control_period / self.params.tau))


# section -> key -> (parser, default); REQUIRED marks keys with no default
class _Required:
    def __repr__(self):
        return "<required>"


REQUIRED = _Required()


def _enum(*options):
    def parse(s: str) -> str:
        v = s.strip().lower()
        if v not in options:
            raise ValueError(f"expected one of {options}, got {s!r}")
        return v

    return parse


def _bool(s: str) -> bool:
    v = s.strip().lower()
    if v in ("true", "yes", "on", "1"):
        return True
    if v in ("false", "no", "off", "0"):
        return False
    raise ValueError(f"expected a boolean, got {s!r}")


def _float_list(s: str) -> tuple[float, ...]:
    s = s.strip()
    if not s:
        return ()
    return tuple(float(v) for v in s.split(","))


def _positions(s: str) -> tuple[tuple[float, float], ...]:
    out = []
    for chunk in s.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        xy = [float(v) for v in chunk.split(",")]
        if len(xy) != 2:
            raise ValueError(f"expected 'x, y' pairs separated by ';', got {chunk!r}")
        out.append((xy[0], xy[1]))
    return tuple(out)


SCHEMA: dict[str, dict[str, tuple]] = {
    "model": {
        "kind": (_enum(TIME_FRACTIONAL, SPACE_FRACTIONAL), REQUIRED),
        "alpha": (float, 1.0),
        "beta": (float, 2.0),
        "diffusivity": (float, 0.01),
    },
    "grid": {
        "nx": (int, 31),
        "ny": (int, 31),
    },
    "boundary": {
        "kind": (_enum("dirichlet", "neumann"), REQUIRED),
        "value": (float, 0.0),
        "c1": (float, 0.0),
        "c2": (float, 0.0),
    },
    "sources": None,  # free-form: every key is one source "x, y, amplitude, decay"
    "actuators": {
        "enabled": (_bool, True),
        "positions": (_positions, ()),
        "k_p": (float, 6.0),
        "k_v": (float, 1.0),
        "v_max": (float, 2.0),
        "start_time": (float, 0.4),
    },
    "spray": {
        "gain": (float, 1.5),
        "max_rate": (float, 50.0),
        "sigma": (float, 0.08),
    },
    "sensors": {
        "per_side": (int, 29),
        "noise_sigma": (float, 0.0),
    },
    "cvt": {
        "mode": (_enum("centralized", "distributed"), "centralized"),
        "initial_radius": (float, 0.1),
        "radius_decrement": (float, 0.05),
        "min_radius": (float, 0.05),
    },
    "timing": {
        "t_end": (float, REQUIRED),
        "tau": (float, 0.002),
        "control_period": (float, 0.1),
    },
    "output": {
        "snapshot_times": (_float_list, ()),
    },
    "solver": {
        "memory_window": (int, 0),
        "seed": (int, 0),
    },
}


def _parse_sections(config_text: str) -> dict[str, dict[str, str]]:
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#",))
    try:
        cp.read_string(config_text)
    except configparser.Error as exc:
        raise ConfigError(f"config parse error: {exc}") from exc
    return {s: dict(cp.items(s)) for s in cp.sections()}


def apply_overrides(raw: dict[str, dict[str, str]], overrides: list[str]) -> dict[str, dict[str, str]]:
    """Apply 'section.key=value' override strings onto the raw key table."""
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override {item!r} is not of the form section.key=value")
        path, value = item.split("=", 1)
        if "." not in path:
            raise ConfigError(f"override key {path!r} needs a section.key path")
        section, key = path.split(".", 1)
        raw.setdefault(section.strip(), {})[key.strip()] = value.strip()
    return raw


def _build(raw: dict[str, dict[str, str]], name: str) -> Scenario:
    explicit = {(s, k) for s, entries in raw.items() for k in entries}
    parsed: dict[str, dict] = {}
    for section, entries in raw.items():
        if section not in SCHEMA:
            raise ConfigError(f"unknown section [{section}]")
        spec = SCHEMA[section]
        if spec is None:
            parsed[section] = dict(entries)
            continue
        out = {}
        for key, text in entries.items():
            if key not in spec:
                raise ConfigError(f"{section}.{key}: unknown key")
            parser = spec[key][0]
            try:
                out[key] = parser(text)
            except (ValueError, TypeError) as exc:
                raise ConfigError(f"{section}.{key}: {exc}") from exc
        parsed[section] = out
    for section, spec in SCHEMA.items():
        if spec is None:
            parsed.setdefault(section, {})
            continue
        out = parsed.setdefault(section, {})
        for key, (_, default) in spec.items():
            if key not in out:
                if default is REQUIRED:
                    raise ConfigError(f"{section}.{key}: required key missing")
                out[key] = default

    model = parsed["model"]
    timing = parsed["timing"]
    solverk = parsed["solver"]
    window = solverk["memory_window"]
    params = FractionalParams(
        model=model["kind"],
        alpha=model["alpha"],
        beta=model["beta"],
        diffusivity=model["diffusivity"],
        tau=timing["tau"],
        memory_window=window if window > 0 else None,
    )
    grid = make_grid(parsed["grid"]["nx"], parsed["grid"]["ny"])

    b = parsed["boundary"]
    if b["kind"] == "dirichlet":
        bc = BoundaryCondition.dirichlet(b["value"])
    else:
        bc = BoundaryCondition.neumann(b["c1"], b["c2"])
    if params.model == SPACE_FRACTIONAL and bc.kind != "dirichlet":
        raise ConfigError("boundary.kind: space-fractional model requires dirichlet")

    sources = []
    for key in sorted(parsed["sources"]):
        try:
            vals = [float(v) for v in parsed["sources"][key].split(",")]
            if len(vals) != 4:
                raise ValueError("expected 'x, y, amplitude, decay'")
        except ValueError as exc:
            raise ConfigError(f"sources.{key}: {exc}") from exc
        x, y, amp, decay = vals
        if not grid.contains(x, y):
            raise ConfigError(f"sources.{key}: position ({x}, {y}) outside the domain")
        sources.append(PointSource(x, y, ExpDecay(amp, decay)))

    act = parsed["actuators"]
    for ax, ay in act["positions"]:
        if not grid.contains(ax, ay):
            raise ConfigError(f"actuators.positions: ({ax}, {ay}) outside the domain")
    if act["enabled"] and not act["positions"] and ("actuators", "enabled") in explicit:
        raise ConfigError("actuators.positions: required when actuators.enabled is true")
    gains = ControlGains(act["k_p"], act["k_v"])
    if act["v_max"] <= 0:
        raise ConfigError(f"actuators.v_max: must be > 0, got {act['v_max']}")
    if act["start_time"] < 0:
        raise ConfigError(f"actuators.start_time: must be >= 0, got {act['start_time']}")

    sp = parsed["spray"]
    spray = SprayParams(sp["gain"], sp["max_rate"], sp["sigma"])

    sens = parsed["sensors"]
    if sens["per_side"] < 1 or sens["per_side"] > min(grid.nx, grid.ny) - 2:
        raise ConfigError(
            f"sensors.per_side: {sens['per_side']} does not fit the "
            f"{grid.nx - 2}x{grid.ny - 2} interior"
        )
    if sens["noise_sigma"] < 0:
        raise ConfigError("sensors.noise_sigma: must be >= 0")

    cvt = parsed["cvt"]
    if not (0 < cvt["min_radius"] <= cvt["initial_radius"]):
        raise ConfigError("cvt: need 0 < min_radius <= initial_radius")
    if cvt["radius_decrement"] <= 0:
        raise ConfigError("cvt.radius_decrement: must be > 0")

    if timing["t_end"] <= 0 or timing["tau"] <= 0:
        raise ConfigError("timing: t_end and tau must be > 0")
    ratio = timing["control_period"] / timing["tau"]
    if abs(ratio - round(ratio)) > 1e-9 * max(1.0, ratio) or round(ratio) < 1:
        raise ConfigError(
            f"timing.control_period: {timing['control_period']} is not an "
            f"integer multiple of tau={timing['tau']}"
        )
    snaps = parsed["output"]["snapshot_times"]
    for ts in snaps:
        if not 0.0 <= ts <= timing["t_end"]:
            raise ConfigError(f"output.snapshot_times: {ts} outside [0, t_end]")

    return Scenario(
        name=name,
        params=params,
        grid=grid,
        bc=bc,
        sources=tuple(sources),
        actuators_enabled=act["enabled"] and bool(act["positions"]),
        actuator_positions=act["positions"],
        gains=gains,
        spray=spray,
        v_max=act["v_max"],
        actuation_start=act["start_time"],
        sensors_per_side=sens["per_side"],
        noise_sigma=sens["noise_sigma"],
        cvt_mode=cvt["mode"],
        initial_radius=cvt["initial_radius"],
        radius_decrement=cvt["radius_decrement"],
        min_radius=cvt["min_radius"],
        t_end=timing["t_end"],
        control_period=timing["control_period"],
        snapshot_times=snaps,
        seed=solverk["seed"],
    )


def load_scenario(config_text: str, overrides: list[str] | None = None, name: str = "scenario") -> Scenario:
    raw = _parse_sections(config_text)
    if overrides:
        raw = apply_overrides(raw, overrides)
    return _build(raw, name)


def load_scenario_file(path, overrides: list[str] | None = None) -> Scenario:
    from pathlib import Path

    p = Path(path)
    text = p.read_text()
    return load_scenario(text, overrides, name=p.stem)


def bundled_config(name: str) -> str:
    """Text of a scenario file shipped inside the package (e.g. 'example1')."""
    from importlib.resources import files

    res = files("fracspray.configs").joinpath(f"{name}.cfg")
    if not res.is_file():
        available = sorted(
            r.name[:-4] for r in files("fracspray.configs").iterdir() if r.name.endswith(".cfg")
        )
        raise ConfigError(f"no bundled config {name!r}; available: {', '.join(available)}")
    return res.read_text()
