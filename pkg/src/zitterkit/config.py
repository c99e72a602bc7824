"""Run configuration: JSON file plus command-line overrides."""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path

from .operator_core import ZitterError
from .representations import RepresentationError, RepSpec


class ConfigError(ZitterError, ValueError):
    pass


def parse_spin(value) -> Fraction:
    try:
        s = Fraction(str(value).strip())
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"cannot parse spin {value!r}; use e.g. 0, 1/2, 1, 3/2") from None
    if s < 0 or (2 * s).denominator != 1:
        raise ConfigError(f"spin must be a non-negative half-integer, got {value!r}")
    return s


def parse_vector(value) -> list[float]:
    if isinstance(value, str):
        parts = [x for x in value.replace(" ", "").split(",") if x]
    else:
        parts = list(value)
    try:
        vec = [float(x) for x in parts]
    except (TypeError, ValueError):
        raise ConfigError(f"cannot parse momentum {value!r}; use 'px,py,pz'") from None
    if len(vec) != 3 or not all(math.isfinite(x) for x in vec):
        raise ConfigError(f"momentum needs three finite components, got {value!r}")
    return vec


def parse_mix(value) -> list[float]:
    if isinstance(value, str):
        parts = [x for x in value.replace(" ", "").split(",") if x]
    else:
        parts = list(value)
    try:
        mix = [float(x) for x in parts]
    except (TypeError, ValueError):
        raise ConfigError(f"cannot parse branch mix {value!r}; use 'lp,lm'") from None
    if len(mix) != 2:
        raise ConfigError("branch mix needs two coefficients (lambda+, lambda-)")
    if mix[0] == 0 and mix[1] == 0:
        raise ConfigError("branch mix (0, 0) describes no state")
    return mix


@dataclass
class RunConfig:
    rep: str = "dirac"
    mass: float = 1.0
    spin: str = "1/2"
    gfv_n: float | None = None
    p: list = field(default_factory=lambda: [0.6, 0.0, 0.8])
    sigma: float = 0.1
    samples: int = 33
    axis: int = 1
    mix: list = field(default_factory=lambda: [0.8, 0.6])
    tmax: float | None = None
    steps: int = 512
    out: str | None = None
    format: str = "csv"
    entry: list = field(default_factory=lambda: [0, -1])
    sweep_pmax: float = 5.0
    sweep_points: int = 11
    random_momenta: int = 100
    check_tol: float = 1e-12
    oracle_tol: float = 1e-10
    inject_fault: str | None = None

    def rep_spec(self) -> RepSpec:
        try:
            return RepSpec(self.rep, self.mass, parse_spin(self.spin), self.gfv_n)
        except RepresentationError as exc:
            raise ConfigError(str(exc)) from None

    def resolved(self) -> dict:
        d = asdict(self)
        d.pop("out")
        return d


_KNOWN = {f for f in RunConfig.__dataclass_fields__}

_DEFAULT_SPIN = {"dirac": "1/2", "fv": "0", "photon": "1", "gfv": "0", "fw": "1/2"}


def load_config(path: str | None, overrides: dict) -> RunConfig:
    """Merge file values and flag overrides (flags win) and validate."""
    data: dict = {}
    if path:
        try:
            data = json.loads(Path(path).read_text())
        except FileNotFoundError:
            raise ConfigError(f"config file not found: {path}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file {path} is not valid JSON: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a JSON object")
        unknown = sorted(set(data) - _KNOWN)
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    data.update({k: v for k, v in overrides.items() if v is not None})

    rep = str(data.get("rep", "dirac")).lower()
    data["rep"] = rep
    if "spin" not in data:
        data["spin"] = _DEFAULT_SPIN.get(rep, "1/2")
    if "mass" not in data and rep == "photon":
        data["mass"] = 0.0
    cfg = RunConfig(**data)
    _validate(cfg)
    return cfg


def _validate(cfg: RunConfig) -> None:
    cfg.spin = str(parse_spin(cfg.spin))
    cfg.mass = float(cfg.mass)
    if cfg.gfv_n is not None:
        cfg.gfv_n = float(cfg.gfv_n)
    cfg.p = parse_vector(cfg.p)
    cfg.mix = parse_mix(cfg.mix)
    cfg.rep_spec()
    if not (cfg.sigma > 0):
        raise ConfigError("sigma must be positive")
    if int(cfg.samples) < 1:
        raise ConfigError("samples must be >= 1")
    if cfg.axis not in (1, 2, 3):
        raise ConfigError("axis must be 1, 2 or 3")
    if int(cfg.steps) < 2:
        raise ConfigError("steps must be >= 2")
    if cfg.tmax is not None and not cfg.tmax > 0:
        raise ConfigError("tmax must be positive")
    if cfg.format not in ("csv", "json"):
        raise ConfigError("format must be csv or json")
    if len(cfg.entry) != 2:
        raise ConfigError("entry must be [row, col]")
    if not cfg.sweep_pmax > 0 or int(cfg.sweep_points) < 2:
        raise ConfigError("sweep needs sweep_pmax > 0 and sweep_points >= 2")
    if int(cfg.random_momenta) < 1:
        raise ConfigError("random_momenta must be >= 1")
    if cfg.inject_fault not in (None, "spin"):
        raise ConfigError("inject_fault must be 'spin' or absent")
