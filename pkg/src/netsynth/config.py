"""Run configuration: flat ``key = value`` files plus command-line overrides."""
from __future__ import annotations

import os
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Optional

from .objectives import ModelParams, validate_params
from .optimizer import OptimizerConfig

SEED_ENV = "NETSYNTH_SEED"


class ConfigError(ValueError):
    pass


def default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"{SEED_ENV}={raw!r} is not an integer") from None


@dataclass
class RunConfig:
    n: int = 300
    a: float = 0.0
    b: float = 1.0
    x_min: int = 2
    c: float = 3.9
    e: int = 762
    # community variant, active when k > 0
    k: int = 0
    s: float = 0.5
    community_seed: int = 0
    # search
    max_iters: int = 5_000_000
    stall_limit: int = 50_000
    aspl_tolerance: float = 0.05
    aspl_slack: float = 0.0
    acceptance: str = "greedy"
    rule: str = "strict"
    move: str = "endpoint"
    anneal_t0: float = 0.05
    anneal_decay: float = 0.995
    aspl_mode: str = "exact"
    aspl_samples: int = 64
    seed: Optional[int] = None
    # output
    out_dir: str = "."
    prefix: str = "net"
    report_format: str = "json"

    def __post_init__(self):
        if self.seed is None:
            self.seed = default_seed()

    def model(self) -> ModelParams:
        return ModelParams(self.n, self.a, self.b, self.x_min, self.c, self.e)

    def optimizer(self) -> OptimizerConfig:
        return OptimizerConfig(
            max_iters=self.max_iters,
            stall_limit=self.stall_limit,
            aspl_tolerance=self.aspl_tolerance,
            aspl_slack=self.aspl_slack,
            seed=self.seed,
            acceptance=self.acceptance,
            rule=self.rule,
            move=self.move,
            anneal_t0=self.anneal_t0,
            anneal_decay=self.anneal_decay,
            aspl_mode=self.aspl_mode,
            aspl_samples=self.aspl_samples,
        )

    def validate(self, check_model: bool = True) -> None:
        """Raise ConfigError for bad settings; InfeasibleParams for bad models.

        A sweep supplies its own edge budgets, so it skips the model check.
        """
        try:
            self.optimizer()
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        if self.report_format not in ("json", "text"):
            raise ConfigError(f"unknown report_format {self.report_format!r}")
        if self.k < 0 or self.k == 1:
            raise ConfigError("k must be 0 (off) or at least 2")
        if self.k > self.n:
            raise ConfigError(f"k={self.k} exceeds n={self.n}")
        if self.k and not 0 < self.s <= 1:
            raise ConfigError("s must lie in (0, 1]")
        if check_model:
            validate_params(self.n, self.a, self.b, self.x_min, self.c, self.e)

    def as_text(self) -> str:
        return "".join(f"{k} = {v}\n" for k, v in asdict(self).items())


_TYPES = {f.name: f.type for f in fields(RunConfig)}


def _coerce(key: str, raw: str):
    kind = _TYPES[key]
    try:
        if kind in ("int", "Optional[int]"):
            return int(raw)
        if kind == "float":
            return float(raw)
    except ValueError:
        raise ConfigError(f"{key}: cannot parse {raw!r} as {kind}") from None
    return raw


def parse_assignments(pairs: dict[str, str]) -> dict:
    out = {}
    for key, raw in pairs.items():
        if key not in _TYPES:
            raise ConfigError(f"unknown config key {key!r}")
        out[key] = _coerce(key, raw)
    return out


def read_config_text(text: str) -> dict[str, str]:
    pairs = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value")
        key, value = (part.strip() for part in line.split("=", 1))
        pairs[key] = value
    return pairs


def load_config(path=None, overrides: Optional[dict] = None) -> RunConfig:
    values: dict = {}
    if path is not None:
        values.update(parse_assignments(read_config_text(Path(path).read_text())))
    if overrides:
        values.update({k: v for k, v in overrides.items() if v is not None})
    unknown = set(values) - set(_TYPES)
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    return RunConfig(**values)
