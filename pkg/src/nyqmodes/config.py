"""Experiment configuration: typed, validated, JSON round-trippable.

The defaults reproduce the reference setup (32-unit periodic box, h = 0.1,
repulsive 3·sech(x/2) bump, central differences, four top modes).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, fields, is_dataclass, replace
from typing import Any, Dict, Mapping, Optional

from .errors import ConfigError, GridError
from .gridpot import Grid, SechFamily, make_grid
from .operators import Scheme

__all__ = [
    "GridConfig",
    "PotentialConfig",
    "OutputConfig",
    "ExperimentConfig",
    "from_dict",
    "from_file",
    "to_dict",
    "to_json",
    "apply_overrides",
]


@dataclass(frozen=True)
class GridConfig:
    x_min: float = -16.0
    L: float = 32.0
    h: float = 0.1


@dataclass(frozen=True)
class PotentialConfig:
    kind: str = "sech"
    A: float = 3.0
    w: float = 0.5


@dataclass(frozen=True)
class OutputConfig:
    format: str = "csv"
    path: Optional[str] = None


@dataclass(frozen=True)
class ExperimentConfig:
    grid: GridConfig = field(default_factory=GridConfig)
    potential: PotentialConfig = field(default_factory=PotentialConfig)
    scheme: str = "cd"
    k: int = 4
    refine: int = 8
    output: OutputConfig = field(default_factory=OutputConfig)

    def validate(self) -> "ExperimentConfig":
        if self.scheme not in ("cd", "numerov"):
            raise ConfigError(f"scheme: expected 'cd' or 'numerov', got {self.scheme!r}")
        if self.k < 1:
            raise ConfigError(f"k: must be a positive integer, got {self.k}")
        if self.refine < 1:
            raise ConfigError(f"refine: must be a positive integer, got {self.refine}")
        if self.potential.kind != "sech":
            raise ConfigError(f"potential.kind: unknown kind {self.potential.kind!r}")
        if not self.potential.w > 0:
            raise ConfigError(f"potential.w: must be positive, got {self.potential.w}")
        if self.output.format not in ("csv", "json"):
            raise ConfigError(
                f"output.format: expected 'csv' or 'json', got {self.output.format!r}"
            )
        try:
            self.build_grid()
        except GridError as exc:
            raise ConfigError(f"grid: {exc}") from exc
        return self

    def build_grid(self) -> Grid:
        # demodulation needs the alternating carrier well defined, hence even N
        return make_grid(self.grid.x_min, self.grid.L, self.grid.h, require_even=True)

    def build_potential(self) -> SechFamily:
        return SechFamily(A=self.potential.A, w=self.potential.w)

    def build_scheme(self) -> Scheme:
        return Scheme(self.scheme)


def _coerce(value: Any, typ: type, path: str) -> Any:
    if typ is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{path}: expected a number, got {value!r}")
        return float(value)
    if typ is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{path}: expected an integer, got {value!r}")
        return value
    if isinstance(value, str) or value is None:
        return value
    raise ConfigError(f"{path}: expected a string, got {value!r}")


def _from_mapping(cls, data: Mapping, path: str):
    if not isinstance(data, Mapping):
        raise ConfigError(f"{path or 'config'}: expected an object, got {data!r}")
    known = {f.name: f for f in fields(cls)}
    unknown = set(data) - set(known)
    if unknown:
        where = f"{path}." if path else ""
        raise ConfigError(f"unknown key {where}{sorted(unknown)[0]}")
    kwargs = {}
    for name, f in known.items():
        if name not in data:
            continue
        sub = f"{path}.{name}" if path else name
        if is_dataclass(f.type) or f.type in (GridConfig, PotentialConfig, OutputConfig):
            kwargs[name] = _from_mapping(f.type, data[name], sub)
        else:
            typ = float if f.type in ("float", float) else int if f.type in ("int", int) else str
            kwargs[name] = _coerce(data[name], typ, sub)
    return cls(**kwargs)


_SECTIONS = {"grid": GridConfig, "potential": PotentialConfig, "output": OutputConfig}


def from_dict(data: Mapping) -> ExperimentConfig:
    if not isinstance(data, Mapping):
        raise ConfigError(f"config: expected an object, got {type(data).__name__}")
    unknown = set(data) - {f.name for f in fields(ExperimentConfig)}
    if unknown:
        raise ConfigError(f"unknown key {sorted(unknown)[0]}")
    kwargs: Dict[str, Any] = {}
    for f in fields(ExperimentConfig):
        if f.name not in data:
            continue
        if f.name in _SECTIONS:
            kwargs[f.name] = _from_mapping(_SECTIONS[f.name], data[f.name], f.name)
        elif f.name in ("k", "refine"):
            kwargs[f.name] = _coerce(data[f.name], int, f.name)
        else:
            kwargs[f.name] = _coerce(data[f.name], str, f.name)
    return ExperimentConfig(**kwargs).validate()


def from_file(path: str) -> ExperimentConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed JSON in {path}: {exc}") from exc
    return from_dict(data)


def to_dict(cfg: ExperimentConfig) -> Dict[str, Any]:
    return {
        "grid": {"x_min": cfg.grid.x_min, "L": cfg.grid.L, "h": cfg.grid.h},
        "potential": {
            "kind": cfg.potential.kind,
            "A": cfg.potential.A,
            "w": cfg.potential.w,
        },
        "scheme": cfg.scheme,
        "k": cfg.k,
        "refine": cfg.refine,
        "output": {"format": cfg.output.format, "path": cfg.output.path},
    }


def to_json(cfg: ExperimentConfig) -> str:
    return json.dumps(to_dict(cfg), indent=2, sort_keys=True) + "\n"


_OVERRIDE_PATHS = {
    "grid.x_min": float,
    "grid.L": float,
    "grid.h": float,
    "potential.kind": str,
    "potential.A": float,
    "potential.w": float,
    "scheme": str,
    "k": int,
    "refine": int,
    "output.format": str,
    "output.path": str,
}


def apply_overrides(cfg: ExperimentConfig, overrides: Mapping[str, str]) -> ExperimentConfig:
    """Apply dotted-path string overrides (CLI style) onto a config."""
    for dotted, raw in overrides.items():
        if dotted not in _OVERRIDE_PATHS:
            raise ConfigError(f"unknown config path {dotted!r}")
        typ = _OVERRIDE_PATHS[dotted]
        try:
            value: Any = typ(raw)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"{dotted}: cannot parse {raw!r} as {typ.__name__}") from exc
        parts = dotted.split(".")
        if len(parts) == 1:
            cfg = replace(cfg, **{parts[0]: value})
        else:
            section = getattr(cfg, parts[0])
            cfg = replace(cfg, **{parts[0]: replace(section, **{parts[1]: value})})
    return cfg.validate()
