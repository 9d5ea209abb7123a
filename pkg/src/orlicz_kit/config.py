"""Run configuration loaded from TOML or JSON and overridden by flags."""
from __future__ import annotations

import json
import os
import sys
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .entropy import EPS_LADDER


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    tolerance: float = 1e-10
    bracket_cap: float = 1e30
    p_values: list = field(default_factory=lambda: [2.0])
    eps_ladder: list = field(default_factory=lambda: list(EPS_LADDER))
    grid: list = field(default_factory=lambda: [0.01, 100.0, 200])
    model: str = "carleman"
    dt: float = 1e-3
    T: float = 20.0
    threads: int = 1

    def __post_init__(self):
        self.validate()

    def validate(self):
        if not self.tolerance > 0:
            raise ConfigError("tolerance must be positive")
        if not self.bracket_cap > 1:
            raise ConfigError("bracket_cap must exceed 1")
        if not self.dt > 0 or not self.T >= 0:
            raise ConfigError("need dt > 0 and T >= 0")
        if any(not e > 0 for e in self.eps_ladder):
            raise ConfigError("eps_ladder entries must be positive")
        if any(not p >= 1 for p in self.p_values):
            raise ConfigError("p_values entries must be >= 1")
        if self.model not in ("carleman", "broadwell"):
            raise ConfigError(f"unknown model {self.model!r}")
        if len(self.grid) != 3 or not 0 < self.grid[0] < self.grid[1] or int(self.grid[2]) < 2:
            raise ConfigError("grid must be [lo, hi, n] with 0 < lo < hi, n >= 2")
        if int(self.threads) < 1:
            raise ConfigError("threads must be >= 1")

    def to_dict(self) -> dict:
        return asdict(self)

    def updated(self, **kw) -> "RunConfig":
        d = self.to_dict()
        d.update({k: v for k, v in kw.items() if v is not None})
        return RunConfig(**d)


def default_threads() -> int:
    raw = os.environ.get("ORLICZ_KIT_THREADS", "")
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        raise ConfigError(f"ORLICZ_KIT_THREADS must be an integer, got {raw!r}") from None


def load_config(path=None) -> RunConfig:
    data = {}
    if path is not None:
        path = Path(path)
        if not path.is_file():
            raise ConfigError(f"no such config file: {path}")
        text = path.read_text()
        try:
            data = json.loads(text) if path.suffix.lower() == ".json" else tomllib.loads(text)
        except (ValueError, tomllib.TOMLDecodeError) as exc:
            raise ConfigError(f"{path}: {exc}") from None
    known = {f.name for f in fields(RunConfig)}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    data.setdefault("threads", default_threads())
    try:
        return RunConfig(**data)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None
