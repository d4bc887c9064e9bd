"""Simulation parameters and JSON config ingestion."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Mapping


TRAIL_CLOCKS = ("seconds", "steps")


class ConfigError(ValueError):
    """Raised for unknown keys, mistyped values or violated invariants."""


@dataclass(frozen=True)
class SimConfig:
    """Every model parameter of one foraging run.

    Defaults reproduce the reference colony: 1024 ants, 50,000 steps on a
    1920 x 1080 world with 4-unit cells. ``food_capacity=None`` means the
    food source never runs out.

    ``trail_clock`` sets the unit of trail age and patience drain:
    ``"seconds"`` advances them by ``dt`` per step, ``"steps"`` by one.
    """

    n: int = 1024
    N: int = 50_000
    W: float = 1920.0
    H: float = 1080.0
    c: float = 4.0
    L_food: tuple[float, float] = (372.0, 36.0)
    r_food: float = 16.0
    L_nest: tuple[float, float] = (960.0, 540.0)
    r_nest: float = 20.0
    v: float = 50.0
    dt: float = 0.016
    theta_s_max: float = 0.8 * math.pi
    ls_max: float = 40.0
    eta: float = 0.1 * math.pi
    lam: float = 0.01
    tau_turn: int = 7
    tau_attack: int = 100
    chi: int = 32
    k: float = 1.0
    m: float = 1.0
    f_d: float = 0.0
    defense_enabled: bool = False
    rho_max: float = 250.0
    t_p: float = 5.0
    food_capacity: int | None = None
    trail_clock: str = "seconds"
    seed: int = 0
    sample_every: int = 100

    def __post_init__(self) -> None:
        # JSON gives lists; keep the dataclass hashable.
        object.__setattr__(self, "L_food", tuple(float(v) for v in self.L_food))
        object.__setattr__(self, "L_nest", tuple(float(v) for v in self.L_nest))
        self.validate()

    @property
    def tick(self) -> float:
        """Advance of the trail and patience clocks per simulation step."""
        return self.dt if self.trail_clock == "seconds" else 1.0

    @property
    def nx(self) -> int:
        return int(round(self.W / self.c))

    @property
    def ny(self) -> int:
        return int(round(self.H / self.c))

    @property
    def n_detractors(self) -> int:
        return int(math.floor(self.f_d * self.n + 0.5))

    @property
    def n_cooperators(self) -> int:
        return self.n - self.n_detractors

    def validate(self) -> None:
        for name in ("W", "H", "c", "r_food", "r_nest", "v", "ls_max", "dt"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name}: must be > 0, got {getattr(self, name)!r}")
        for name in ("W", "H"):
            cells = getattr(self, name) / self.c
            if abs(cells - round(cells)) > 1e-9:
                raise ConfigError(f"{name}: {getattr(self, name)} is not divisible by c={self.c}")
        if self.n < 0 or self.N < 0:
            raise ConfigError("n, N: must be non-negative")
        if self.chi < 1 or self.tau_turn < 1 or self.tau_attack < 0:
            raise ConfigError("chi, tau_turn must be >= 1 and tau_attack >= 0")
        if self.sample_every < 1:
            raise ConfigError("sample_every: must be >= 1")
        if not 0.0 <= self.f_d <= 1.0:
            raise ConfigError(f"f_d: must lie in [0, 1], got {self.f_d}")
        if self.n_detractors > self.n:
            raise ConfigError("f_d: detractor count exceeds colony size")
        if self.m < 0 or self.k < 0 or self.lam <= 0:
            raise ConfigError("m, k must be >= 0 and lam > 0")
        if not self.rho_max > 0:
            raise ConfigError(f"rho_max: must be > 0, got {self.rho_max}")
        if not self.t_p >= 1:
            raise ConfigError(f"t_p: must be >= 1, got {self.t_p}")
        if self.eta < 0 or self.theta_s_max < 0:
            raise ConfigError("eta, theta_s_max: must be >= 0")
        if self.trail_clock not in TRAIL_CLOCKS:
            raise ConfigError(f"trail_clock: expected one of {TRAIL_CLOCKS}, got {self.trail_clock!r}")
        if self.food_capacity is not None and self.food_capacity < 0:
            raise ConfigError("food_capacity: must be >= 0 or null")
        for name, (cx, cy) in (("L_food", self.L_food), ("L_nest", self.L_nest)):
            if not (0 <= cx <= self.W and 0 <= cy <= self.H):
                raise ConfigError(f"{name}: ({cx}, {cy}) lies outside the world")

    def with_(self, **changes: Any) -> "SimConfig":
        return replace(self, **changes)

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self)
        d["L_food"] = list(self.L_food)
        d["L_nest"] = list(self.L_nest)
        return d


_FIELDS = {f.name: f for f in fields(SimConfig)}


def _coerce(key: str, value: Any) -> Any:
    default = getattr(SimConfig, key, None)
    if key in ("L_food", "L_nest"):
        if isinstance(value, str):
            value = [p for p in value.replace("(", "").replace(")", "").split(",")]
        try:
            pair = tuple(float(v) for v in value)
        except (TypeError, ValueError):
            raise ConfigError(f"{key}: expected a pair of numbers, got {value!r}") from None
        if len(pair) != 2:
            raise ConfigError(f"{key}: expected a pair of numbers, got {value!r}")
        return pair
    if key == "trail_clock":
        if not isinstance(value, str):
            raise ConfigError(f"{key}: expected a string, got {value!r}")
        return value
    if key == "food_capacity":
        if value is None or (isinstance(value, str) and value.lower() in ("none", "null", "inf")):
            return None
        return _coerce_int(key, value)
    if isinstance(default, bool):
        if isinstance(value, bool):
            return value
        if isinstance(value, str) and value.lower() in ("true", "1", "yes", "on"):
            return True
        if isinstance(value, str) and value.lower() in ("false", "0", "no", "off"):
            return False
        raise ConfigError(f"{key}: expected a boolean, got {value!r}")
    if isinstance(default, int):
        return _coerce_int(key, value)
    if isinstance(value, bool):
        raise ConfigError(f"{key}: expected a number, got {value!r}")
    try:
        return float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{key}: expected a number, got {value!r}") from None


def _coerce_int(key: str, value: Any) -> int:
    if isinstance(value, bool):
        raise ConfigError(f"{key}: expected an integer, got {value!r}")
    if isinstance(value, int):
        return value
    try:
        as_float = float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{key}: expected an integer, got {value!r}") from None
    if not as_float.is_integer():
        raise ConfigError(f"{key}: expected an integer, got {value!r}")
    return int(as_float)


def config_from_mapping(values: Mapping[str, Any], base: SimConfig | None = None) -> SimConfig:
    """Build a validated config from a flat mapping, rejecting unknown keys."""
    changes = {}
    for key, value in values.items():
        if key not in _FIELDS:
            raise ConfigError(f"{key}: unknown configuration key")
        changes[key] = _coerce(key, value)
    base = base if base is not None else SimConfig()
    return replace(base, **changes)


def parse_overrides(pairs: list[str] | None) -> dict[str, str]:
    out: dict[str, str] = {}
    for pair in pairs or []:
        key, sep, value = pair.partition("=")
        if not sep or not key.strip():
            raise ConfigError(f"override {pair!r}: expected key=value")
        out[key.strip()] = value.strip()
    return out


def load_config(path: str | Path | None = None, overrides: Mapping[str, Any] | None = None) -> SimConfig:
    """Read a flat JSON object of config fields; missing fields keep defaults.

    Overrides (already split into key/value) are applied on top of the file.
    """
    values: dict[str, Any] = {}
    if path is not None:
        try:
            raw = json.loads(Path(path).read_text())
        except OSError as exc:
            raise ConfigError(f"{path}: {exc.strerror}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON ({exc.msg})") from exc
        if not isinstance(raw, dict):
            raise ConfigError(f"{path}: expected a JSON object")
        values.update(raw)
    values.update(overrides or {})
    return config_from_mapping(values)
