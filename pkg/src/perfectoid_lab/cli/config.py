"""Run configuration: defaults, then the file named by PERFECTOID_LAB_CONFIG, then flags."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, replace
from fractions import Fraction

from ..errors import LabError
from ..exact import is_prime, rat_json

ENV_VAR = "PERFECTOID_LAB_CONFIG"


class ConfigError(LabError):
    code = "E_CONFIG"
    exit_code = 2


def parse_rational(text) -> Fraction:
    if isinstance(text, dict):
        return Fraction(int(text["num"]), int(text["den"]))
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"not a rational number: {text!r}") from None


@dataclass(frozen=True)
class Config:
    p: int = 2
    v_omega: Fraction | None = None
    prec: Fraction = Fraction(4)
    depth: int = 4
    sample_seed: int = 0
    output: str = "text"

    def __post_init__(self):
        if not is_prime(self.p):
            raise ConfigError(f"p = {self.p} is not prime")
        if self.v_omega is None:
            object.__setattr__(self, "v_omega", Fraction(1, self.p))
        # 1 > |w^p| >= |p| with v(p) = 1 means 0 < p v(w) <= 1
        if not 0 < self.v_omega or self.p * self.v_omega > 1:
            raise ConfigError(f"v_omega = {self.v_omega} violates 0 < p * v_omega <= 1")
        if self.prec <= 0:
            raise ConfigError("prec must be positive")
        if self.depth < 0:
            raise ConfigError("depth must be non-negative")
        if self.output not in ("text", "json"):
            raise ConfigError("output must be text or json")

    def to_json(self):
        return {
            "p": self.p,
            "v_omega": rat_json(self.v_omega),
            "prec": rat_json(self.prec),
            "depth": self.depth,
            "sample_seed": self.sample_seed,
        }


_KEYS = {
    "p": int,
    "v_omega": parse_rational,
    "prec": parse_rational,
    "depth": int,
    "sample_seed": int,
    "output": str,
}


def _coerce(values: dict) -> dict:
    out = {}
    for k, v in values.items():
        k = k.replace("-", "_")
        if k == "seed":
            k = "sample_seed"
        if k not in _KEYS:
            raise ConfigError(f"unknown config key {k!r}")
        out[k] = _KEYS[k](v)
    return out


def load_config(overrides: dict | None = None, env=None) -> Config:
    env = os.environ if env is None else env
    values = {}
    path = env.get(ENV_VAR)
    if path:
        try:
            with open(path) as fh:
                values.update(_coerce(json.load(fh)))
        except OSError as e:
            raise ConfigError(f"cannot read config file {path}: {e}") from None
        except json.JSONDecodeError as e:
            raise ConfigError(f"config file {path} is not JSON: {e}") from None
    values.update(_coerce({k: v for k, v in (overrides or {}).items() if v is not None}))
    cfg = Config(**{k: v for k, v in values.items() if k != "v_omega"})
    if "v_omega" in values:
        cfg = replace(cfg, v_omega=values["v_omega"])
    return cfg
