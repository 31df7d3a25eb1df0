"""Run configuration: a flat ``key = value`` text format with dotted sections.

Example::

    # quadcopter hover, propeller forcing only
    platform.mass_kg = 0.7
    platform.inertia_kgm2 = 0.01, 0.01, 0.02
    forcing.sources = propeller
    sim.duration_s = 5

Blank lines and ``#`` comments are ignored. Vectors are comma separated.
Every invalid or unknown key is reported at once in a :class:`ConfigError`.
"""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional

from .dynamics import DEFAULT_DIVERGENCE_BOUND, DEFAULT_INERTIA
from .errors import ConfigError, InvalidParameterError
from .forcing import SCENARIOS, WIND_MODES, PropellerParams, WindParams
from .pointing import PROJECTION_MODES

SOURCES = ("propeller", "wind")
INITIAL_STATES = ("rest", "equilibrium")


@dataclass(frozen=True)
class PlatformConfig:
    mass_kg: float = 0.7
    inertia_kgm2: tuple = DEFAULT_INERTIA
    k_trans: float = 1e3
    k_rot: float = 1e3
    damping_alpha: float = 0.002
    input_matrix: Optional[tuple] = None


@dataclass(frozen=True)
class ForcingConfig:
    sources: tuple = ("propeller",)
    propeller: PropellerParams = field(default_factory=PropellerParams)
    wind: WindParams = field(default_factory=WindParams)


@dataclass(frozen=True)
class LinkConfig:
    range_m: float = 10.0
    divergence_rad: float = 1e-3
    aperture_m: float = 0.037
    projection: str = "angular-only"


@dataclass(frozen=True)
class SimConfig:
    duration_s: float = 5.0
    dt_s: float = 1e-4
    seed: int = 0
    settle_s: float = 0.0
    initial: str = "rest"
    divergence_bound: float = DEFAULT_DIVERGENCE_BOUND


@dataclass(frozen=True)
class OutputConfig:
    directory: str = "out"
    csv_digits: int = 9


@dataclass(frozen=True)
class RunConfig:
    platform: PlatformConfig = field(default_factory=PlatformConfig)
    forcing: ForcingConfig = field(default_factory=ForcingConfig)
    link: LinkConfig = field(default_factory=LinkConfig)
    sim: SimConfig = field(default_factory=SimConfig)
    output: OutputConfig = field(default_factory=OutputConfig)


# ------------------------------------------------------------------ schema


def _positive(v):
    return None if v > 0 else "must be > 0"


def _nonneg(v):
    return None if v >= 0 else "must be >= 0"


def _unit(v):
    return None if 0 <= v <= 1 else "must be in [0, 1]"


def _all_positive(v):
    return None if all(x > 0 for x in v) else "entries must be > 0"


def _all_nonneg(v):
    v = v if isinstance(v, (tuple, list)) else (v,)
    return None if all(x >= 0 for x in v) else "entries must be >= 0"


def _choice(options):
    def check(v):
        return None if v in options else f"must be one of {', '.join(options)}"

    return check


def _sources(v):
    bad = [s for s in v if s not in SOURCES]
    return f"unknown source(s) {', '.join(bad)}; allowed: {', '.join(SOURCES)}" if bad else None


def _digits(v):
    return None if 3 <= v <= 17 else "must be between 3 and 17"


# key -> (kind, check); kinds: float, int, str, bool, vec3, vec3|float, mat6?, list, float?
SCHEMA = {
    "platform.mass_kg": ("float", _positive),
    "platform.inertia_kgm2": ("vec3", _all_positive),
    "platform.k_trans": ("float", _positive),
    "platform.k_rot": ("float", _positive),
    "platform.damping_alpha": ("float", _nonneg),
    "platform.input_matrix": ("mat6?", None),
    "forcing.sources": ("list", _sources),
    "forcing.propeller.m_hap": ("float", _positive),
    "forcing.propeller.b_drag": ("float", _nonneg),
    "forcing.propeller.v_hap": ("float", None),
    "forcing.propeller.a_hap": ("vec3", None),
    "forcing.propeller.hover": ("bool", None),
    "forcing.propeller.ripple_fraction": ("float", _unit),
    "forcing.propeller.blade_pass_hz": ("float", _positive),
    "forcing.propeller.torque_arm_m": ("float", _nonneg),
    "forcing.wind.area_m2": ("vec3|float", _all_nonneg),
    "forcing.wind.rho_strat": ("float", _positive),
    "forcing.wind.scenario": ("str", _choice(SCENARIOS)),
    "forcing.wind.mean_speed_mps": ("float?", lambda v: None if v is None or v >= 0 else "must be >= 0"),
    "forcing.wind.gust_corner_hz": ("float", _positive),
    "forcing.wind.turbulence_intensity": ("float", _nonneg),
    "forcing.wind.mode": ("str", _choice(WIND_MODES)),
    "forcing.wind.pressure_offset_m": ("vec3", None),
    "forcing.wind.gust_dt": ("float", _positive),
    "link.range_m": ("float", _positive),
    "link.divergence_rad": ("float", _positive),
    "link.aperture_m": ("float", _positive),
    "link.projection": ("str", _choice(PROJECTION_MODES)),
    "sim.duration_s": ("float", _positive),
    "sim.dt_s": ("float", _positive),
    "sim.seed": ("int", _nonneg),
    "sim.settle_s": ("float", _nonneg),
    "sim.initial": ("str", _choice(INITIAL_STATES)),
    "sim.divergence_bound": ("float", _positive),
    "output.directory": ("str", None),
    "output.csv_digits": ("int", _digits),
}


def _floats(text):
    vals = [float(x) for x in text.replace(";", ",").split(",") if x.strip()]
    if not all(math.isfinite(v) for v in vals):
        raise ValueError("non-finite value")
    return vals


def _convert(kind: str, text: str):
    text = text.strip()
    if kind == "float":
        v = float(text)
        if not math.isfinite(v):
            raise ValueError("non-finite value")
        return v
    if kind == "float?":
        return None if text.lower() in ("", "none", "default") else _convert("float", text)
    if kind == "int":
        return int(text)
    if kind == "str":
        return text
    if kind == "bool":
        low = text.lower()
        if low in ("true", "yes", "1", "on"):
            return True
        if low in ("false", "no", "0", "off"):
            return False
        raise ValueError("expected true or false")
    if kind == "list":
        return tuple(s.strip() for s in text.split(",") if s.strip() and s.strip() != "none")
    if kind == "vec3":
        v = _floats(text)
        if len(v) != 3:
            raise ValueError(f"expected 3 values, got {len(v)}")
        return tuple(v)
    if kind == "vec3|float":
        v = _floats(text)
        if len(v) == 1:
            return v[0]
        if len(v) != 3:
            raise ValueError(f"expected 1 or 3 values, got {len(v)}")
        return tuple(v)
    if kind == "mat6?":
        if text.lower() in ("", "none", "identity"):
            return None
        v = _floats(text)
        if len(v) != 36:
            raise ValueError(f"expected 36 row-major values, got {len(v)}")
        return tuple(v)
    raise AssertionError(kind)


def _format(kind: str, value) -> str:
    if value is None:
        return "none"
    if kind == "bool":
        return "true" if value else "false"
    if kind in ("float", "float?"):
        return repr(float(value))
    if kind == "list":
        return ", ".join(value) if value else "none"
    if kind in ("vec3", "mat6?", "vec3|float"):
        if isinstance(value, (tuple, list)):
            return ", ".join(repr(float(x)) for x in value)
        return repr(float(value))
    return str(value)


def _get(cfg, key):
    obj = cfg
    for part in key.split("."):
        obj = getattr(obj, part)
    return obj


def _with(obj, parts, value):
    if len(parts) == 1:
        return dataclasses.replace(obj, **{parts[0]: value})
    child = getattr(obj, parts[0])
    return dataclasses.replace(obj, **{parts[0]: _with(child, parts[1:], value)})


def from_mapping(values: dict) -> RunConfig:
    """Build a config from already-typed ``key -> value`` pairs, validating every field."""
    problems = []
    for key, value in values.items():
        check = SCHEMA[key][1]
        if check is not None and value is not None:
            msg = check(value)
            if msg:
                problems.append(f"{key}: {msg} (got {_format(SCHEMA[key][0], value)})")
    if problems:
        raise ConfigError(problems)
    cfg = RunConfig()
    try:
        for key, value in values.items():
            cfg = _with(cfg, key.split("."), value)
    except InvalidParameterError as exc:
        raise ConfigError(str(exc)) from exc
    return cfg


def parse(text: str, source: str = "<config>") -> RunConfig:
    problems = []
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            problems.append(f"{source}:{lineno}: expected 'key = value'")
            continue
        key, text_value = (s.strip() for s in line.split("=", 1))
        if key not in SCHEMA:
            problems.append(f"{key}: unknown key ({source}:{lineno})")
            continue
        if key in values:
            problems.append(f"{key}: duplicate key ({source}:{lineno})")
            continue
        try:
            values[key] = _convert(SCHEMA[key][0], text_value)
        except ValueError as exc:
            problems.append(f"{key}: invalid value {text_value!r} ({exc})")
    if problems:
        # still report range problems for the fields that did convert
        try:
            from_mapping(values)
        except ConfigError as exc:
            problems.extend(exc.problems)
        raise ConfigError(problems)
    return from_mapping(values)


def dumps(cfg: RunConfig) -> str:
    lines = []
    section = None
    for key, (kind, _) in SCHEMA.items():
        head = key.rsplit(".", 1)[0]
        if head != section:
            if section is not None:
                lines.append("")
            lines.append(f"# {head}")
            section = head
        lines.append(f"{key} = {_format(kind, _get(cfg, key))}")
    return "\n".join(lines) + "\n"


def shipped_configs() -> list[str]:
    root = resources.files("fsopoint") / "configs"
    return sorted(p.name[: -len(".cfg")] for p in root.iterdir() if p.name.endswith(".cfg"))


def load(path_or_name: str) -> RunConfig:
    """Load a config file, or a shipped config by name (e.g. ``quadcopter_paper``)."""
    p = Path(path_or_name)
    if p.is_file():
        return parse(p.read_text(), source=str(p))
    shipped = resources.files("fsopoint") / "configs" / f"{path_or_name}.cfg"
    if shipped.is_file():
        return parse(shipped.read_text(), source=f"{path_or_name}.cfg")
    raise ConfigError(f"--config: no such file or shipped config: {path_or_name}")
