"""Experiment configuration: an INI file with one section per component.

Powers are given in dBm and converted to watts when the link budget is
built.  Angles accept simple expressions in ``pi`` (``pi/2``).  Values are
emitted with ``repr`` so that ``parse_config(emit_config(c)) == c``.
"""

from __future__ import annotations

import ast
import configparser
import io
import operator
import re
from dataclasses import dataclass, fields, replace

import numpy as np

from .alternating import OptimizationOptions
from .channel import PropagationParams
from .errors import ConfigError, OamSwiptError
from .geometry import SystemGeometry
from .metrics import LinkBudget

__all__ = [
    "BudgetDbm",
    "SweepSpec",
    "ConvergenceSpec",
    "ExperimentConfig",
    "parse_config",
    "load_config",
    "emit_config",
    "apply_overrides",
    "with_value",
    "sweep_values",
    "ris_offset_position",
]


@dataclass(frozen=True)
class BudgetDbm:
    P_t_dbm: float = 30.0
    Q_min_dbm: float | None = -15.0
    eta: float = 0.8
    sigma_n_dbm: float = -20.0
    sigma_cov_dbm: float = -33.0

    def to_budget(self) -> LinkBudget:
        return LinkBudget.from_dbm(self.P_t_dbm, self.Q_min_dbm, self.eta, self.sigma_n_dbm, self.sigma_cov_dbm)


@dataclass(frozen=True)
class SweepSpec:
    variable: str
    start: float
    stop: float
    step: float
    schemes: tuple[str, ...]

    def __post_init__(self):
        if self.step <= 0:
            raise ConfigError(f"sweep step must be positive, got {self.step}")
        if self.stop < self.start:
            raise ConfigError(f"sweep bounds out of order: {self.start} > {self.stop}")


@dataclass(frozen=True)
class ConvergenceSpec:
    K_values: tuple[float, ...] = (1.0, 0.5)
    ris_sizes: tuple[str, ...] = ("4x4", "8x8")


@dataclass(frozen=True)
class ExperimentConfig:
    geometry: SystemGeometry = SystemGeometry()
    propagation: PropagationParams = PropagationParams()
    budget: BudgetDbm = BudgetDbm()
    optimization: OptimizationOptions = OptimizationOptions()
    nlos_K: float = 0.5
    convergence: ConvergenceSpec = ConvergenceSpec()
    power_sweep: SweepSpec = SweepSpec(
        "budget.P_t_dbm", 10.0, 40.0, 5.0,
        ("ris-4x4", "ris-8x8", "los-oam", "nlos-oam", "mimo-ris-4x4", "mimo-ris-8x8"),
    )
    distance_sweep: SweepSpec = SweepSpec("ris_distance", 0.4, 2.0, 0.02, ("ris-4x4", "ris-8x8"))
    out: str = "results"
    jobs: int = 0

    def link_budget(self) -> LinkBudget:
        return self.budget.to_budget()


# INI section -> ExperimentConfig attribute holding a dataclass
_SECTIONS = {
    "geometry": "geometry",
    "propagation": "propagation",
    "budget": "budget",
    "optimization": "optimization",
    "convergence": "convergence",
    "power_sweep": "power_sweep",
    "distance_sweep": "distance_sweep",
}
_SCALARS = {"baselines": {"nlos_K": "nlos_K"}, "output": {"out": "out", "jobs": "jobs"}}

_OPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul, ast.Div: operator.truediv}


def _eval_number(text: str) -> float:
    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id == "pi":
            return float(np.pi)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            val = ev(node.operand)
            return -val if isinstance(node.op, ast.USub) else val
        if isinstance(node, ast.BinOp) and type(node.op) in _OPS:
            return _OPS[type(node.op)](ev(node.left), ev(node.right))
        raise ValueError(f"not a number: {text!r}")

    return ev(ast.parse(text.strip(), mode="eval"))


def _coerce(raw: str, default):
    raw = raw.strip()
    if isinstance(default, bool):
        low = raw.lower()
        if low in ("true", "yes", "on", "1"):
            return True
        if low in ("false", "no", "off", "0"):
            return False
        raise ValueError(f"not a boolean: {raw!r}")
    if isinstance(default, int):
        return int(raw)
    if isinstance(default, tuple):
        items = [item.strip() for item in raw.split(",") if item.strip()]
        if default and isinstance(default[0], float):
            return tuple(_eval_number(item) for item in items)
        return tuple(items)
    if isinstance(default, str):
        return raw
    if default is None or isinstance(default, float):
        if raw.lower() == "none":
            return None
        return _eval_number(raw)
    raise TypeError(f"unsupported field type {type(default)!r}")


def _emit_value(value) -> str:
    if value is None:
        return "none"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, tuple):
        return ", ".join(_emit_value(v) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _line_of(text: str | None, section: str, key: str) -> str:
    if not text:
        return ""
    current = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        header = re.match(r"^\[(.+)\]$", stripped)
        if header:
            current = header.group(1).strip()
        elif current == section and re.match(rf"^{re.escape(key)}\s*[=:]", stripped):
            return f" (line {lineno})"
    return ""


def _section_line(text: str | None, section: str) -> str:
    for lineno, line in enumerate((text or "").splitlines(), start=1):
        if line.strip() == f"[{section}]":
            return f" (line {lineno})"
    return ""


def _build(parser: configparser.ConfigParser, text: str | None) -> ExperimentConfig:
    base = ExperimentConfig()
    updates = {}
    known = set(_SECTIONS) | set(_SCALARS)
    for section in parser.sections():
        if section not in known:
            raise ConfigError(f"unknown section [{section}]{_section_line(text, section)}")

    for section, attr in _SECTIONS.items():
        if not parser.has_section(section):
            continue
        default_obj = getattr(base, attr)
        names = {f.name for f in fields(default_obj)}
        kwargs = {}
        for key, raw in parser.items(section):
            if key not in names:
                raise ConfigError(f"[{section}] unknown key {key!r}{_line_of(text, section, key)}")
            try:
                kwargs[key] = _coerce(raw, getattr(default_obj, key))
            except (ValueError, SyntaxError, TypeError) as exc:
                raise ConfigError(f"[{section}] {key}{_line_of(text, section, key)}: {exc}") from None
        try:
            updates[attr] = replace(default_obj, **kwargs)
        except (OamSwiptError, ValueError) as exc:
            raise ConfigError(f"[{section}]: {exc}") from None

    for section, keys in _SCALARS.items():
        if not parser.has_section(section):
            continue
        for key, raw in parser.items(section):
            if key not in keys:
                raise ConfigError(f"[{section}] unknown key {key!r}{_line_of(text, section, key)}")
            try:
                updates[keys[key]] = _coerce(raw, getattr(base, keys[key]))
            except (ValueError, SyntaxError) as exc:
                raise ConfigError(f"[{section}] {key}{_line_of(text, section, key)}: {exc}") from None

    config = replace(base, **updates)
    _validate(config)
    return config


def _validate(config: ExperimentConfig):
    if config.power_sweep.variable != "budget.P_t_dbm":
        raise ConfigError("[power_sweep] variable must be budget.P_t_dbm")
    if config.distance_sweep.variable != "ris_distance":
        raise ConfigError("[distance_sweep] variable must be ris_distance")
    for spec in (config.power_sweep, config.distance_sweep):
        _check_variable(spec.variable)
    try:
        config.link_budget()
    except ValueError as exc:
        raise ConfigError(f"[budget]: {exc}") from None
    if not 0 <= config.nlos_K <= 1:
        raise ConfigError("[baselines] nlos_K must lie in [0, 1]")


def _new_parser() -> configparser.ConfigParser:
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str  # keys are case sensitive (N_t vs n_t)
    return parser


def parse_config(text: str, overrides=()) -> ExperimentConfig:
    parser = _new_parser()
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(str(exc)) from None
    apply_overrides(parser, overrides)
    return _build(parser, text)


def load_config(path=None, overrides=()) -> ExperimentConfig:
    if path is None:
        return parse_config("", overrides)
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read(), overrides)


def apply_overrides(parser: configparser.ConfigParser, overrides) -> None:
    """Apply ``section.key=value`` strings on top of a parsed file."""
    for item in overrides:
        if "=" not in item or "." not in item.split("=", 1)[0]:
            raise ConfigError(f"--set expects section.key=value, got {item!r}")
        lhs, value = item.split("=", 1)
        section, key = lhs.strip().split(".", 1)
        if not parser.has_section(section):
            parser.add_section(section)
        parser.set(section, key.strip(), value.strip())


def emit_config(config: ExperimentConfig) -> str:
    parser = _new_parser()
    for section, attr in _SECTIONS.items():
        obj = getattr(config, attr)
        parser[section] = {f.name: _emit_value(getattr(obj, f.name)) for f in fields(obj)}
    for section, keys in _SCALARS.items():
        parser[section] = {key: _emit_value(getattr(config, attr)) for key, attr in keys.items()}
    buf = io.StringIO()
    parser.write(buf)
    return buf.getvalue()


def sweep_values(spec: SweepSpec) -> np.ndarray:
    count = int(np.floor((spec.stop - spec.start) / spec.step + 1e-9)) + 1
    return np.round(spec.start + spec.step * np.arange(count), 12)


def ris_offset_position(geometry: SystemGeometry, distance: float) -> tuple[float, float, float]:
    """RIS centre at ``distance`` from the origin, sliding along its y offset.

    ``p_x`` and ``p_z`` are kept; ``p_y`` keeps its sign (negative if zero)
    and takes whatever magnitude puts the centre at ``distance``.
    """
    fixed = np.hypot(geometry.p_x, geometry.p_z)
    if distance < fixed - 1e-12:
        raise ConfigError(f"distance {distance} m is shorter than the fixed offset {fixed:.4g} m")
    sign = 1.0 if geometry.p_y > 0 else -1.0
    return geometry.p_x, sign * float(np.sqrt(max(distance**2 - fixed**2, 0.0))), geometry.p_z


def _check_variable(variable: str):
    if variable == "ris_distance":
        return
    section, _, key = variable.partition(".")
    obj = {"geometry": SystemGeometry(), "propagation": PropagationParams(), "budget": BudgetDbm()}.get(section)
    if obj is None or key not in {f.name for f in fields(obj)}:
        raise ConfigError(f"unknown sweep variable {variable!r}")


def with_value(config: ExperimentConfig, variable: str, value: float) -> ExperimentConfig:
    """Copy of ``config`` with one sweep variable set."""
    _check_variable(variable)
    if variable == "ris_distance":
        p_x, p_y, p_z = ris_offset_position(config.geometry, value)
        return replace(config, geometry=config.geometry.replace(p_x=p_x, p_y=p_y, p_z=p_z))
    section, _, key = variable.partition(".")
    obj = getattr(config, section)
    default = getattr(obj, key)
    value = int(value) if isinstance(default, int) and not isinstance(default, bool) else float(value)
    return replace(config, **{section: replace(obj, **{key: value})})
