"""Flat ``key = value`` run configuration."""

from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace
from pathlib import Path

from ..lsystem import RewriteConfig
from ..moea.engine import MODES, SURVIVOR_MODES, EvolutionConfig
from ..sim import SimConfig


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    # evolution
    mu: int = 100
    lam: int = 100
    generations: int = 100
    tournament_k: int = 4
    p_crossover: float = 0.8
    p_mutation: float = 0.8
    mode: str = "both"
    survivor_selection: str = "nsga2_truncation"
    seed: int = 0
    repetitions: int = 10
    # body limits and grammar
    max_joints: int = 10
    max_bricks: int = 20
    iterations: int = 3
    max_string_length: int = 1000
    # simulator
    dt: float = 0.05
    duration: float = 60.0
    c_start: float | None = 10.0  # None means calibrate before running
    module_length: float = 0.1
    module_mass: float = 1.0
    beta: float = 0.05
    kappa: float = 1.0
    gamma_t: float = 1.0
    gamma_r: float = 1.0
    omega_ref: float = math.pi
    calibration_samples: int = 20
    # plumbing
    output_dir: str = "results"
    workers: int = 1

    @property
    def modes(self) -> tuple[str, ...]:
        return MODES if self.mode == "both" else (self.mode,)

    def evolution(self, mode: str) -> EvolutionConfig:
        return EvolutionConfig(
            mu=self.mu, lam=self.lam, generations=self.generations,
            tournament_k=self.tournament_k, p_crossover=self.p_crossover,
            p_mutation=self.p_mutation, mode=mode,
            survivor_selection=self.survivor_selection, seed=self.seed,
        )

    def sim(self, c_start: float | None = None) -> SimConfig:
        c = c_start if c_start is not None else self.c_start
        if c is None:
            raise ConfigError("c_start is 'auto'; calibrate first")
        return SimConfig(
            dt=self.dt, duration=self.duration, c_start=c,
            module_length=self.module_length, module_mass=self.module_mass,
            beta=self.beta, kappa=self.kappa, gamma_t=self.gamma_t,
            gamma_r=self.gamma_r, omega_ref=self.omega_ref,
        )

    def rewrite(self) -> RewriteConfig:
        return RewriteConfig(self.iterations, self.max_string_length)

    def dump(self) -> str:
        lines = []
        for f in fields(self):
            v = getattr(self, f.name)
            key = "lambda" if f.name == "lam" else f.name
            lines.append(f"{key} = {'auto' if v is None else v}")
        return "\n".join(lines) + "\n"


_TYPES = {f.name: f.type for f in fields(RunConfig)}
_POSITIVE = {
    "mu", "lam", "tournament_k", "repetitions", "max_string_length", "dt",
    "duration", "module_length", "module_mass", "beta", "kappa", "gamma_t",
    "gamma_r", "omega_ref", "calibration_samples", "workers",
}
_NON_NEGATIVE = {"generations", "seed", "max_joints", "max_bricks", "iterations"}
_CHOICES = {"mode": MODES + ("both",), "survivor_selection": SURVIVOR_MODES}


def _convert(key: str, raw: str):
    kind = _TYPES[key]
    raw = raw.strip()
    try:
        if key == "c_start":
            if raw.lower() == "auto":
                return None
            return float(raw)
        if kind == "int":
            return int(raw)
        if kind == "float":
            return float(raw)
        return raw
    except ValueError:
        raise ConfigError(f"{key}: cannot parse {raw!r} as {kind}") from None


def _validate(cfg: RunConfig) -> None:
    for key in _POSITIVE:
        if not getattr(cfg, key) > 0:
            raise ConfigError(f"{key} must be positive, got {getattr(cfg, key)}")
    for key in _NON_NEGATIVE:
        if getattr(cfg, key) < 0:
            raise ConfigError(f"{key} must be >= 0, got {getattr(cfg, key)}")
    for key in ("p_crossover", "p_mutation"):
        if not 0.0 <= getattr(cfg, key) <= 1.0:
            raise ConfigError(f"{key} must lie in [0, 1]")
    for key, allowed in _CHOICES.items():
        if getattr(cfg, key) not in allowed:
            raise ConfigError(f"{key} must be one of {', '.join(allowed)}")
    if cfg.c_start is not None and not cfg.c_start > 0:
        raise ConfigError("c_start must be positive or 'auto'")
    try:
        cfg.sim(1.0)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def parse_pairs(lines, origin: str = "config") -> dict:
    values = {}
    for n, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, raw = line.partition("=")
        if not sep:
            raise ConfigError(f"{origin}:{n}: expected 'key = value', got {line!r}")
        key = key.strip()
        if key == "lambda":
            key = "lam"
        if key not in _TYPES:
            raise ConfigError(f"{origin}:{n}: unknown key {key!r}")
        values[key] = _convert(key, raw)
    return values


def load_config(path=None, overrides=()) -> RunConfig:
    """Read a config file (optional), apply ``key=value`` overrides, validate."""
    values = {}
    if path is not None:
        text = Path(path).read_text(encoding="utf-8")
        values.update(parse_pairs(text.splitlines(), str(path)))
    values.update(parse_pairs(overrides, "override"))
    cfg = replace(RunConfig(), **values)
    _validate(cfg)
    return cfg
