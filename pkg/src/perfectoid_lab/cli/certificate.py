"""JSON certificates: every value is rendered exactly, rationals as {num, den}."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from ..berkovich import SeminormPoint
from ..cones import Cone
from ..exact import INF, NormValue, rat_json
from ..fields import KElement, LaurentPoly
from ..series import DigitSeries

SCHEMA = "perfectoid-lab/certificate/1"


def encode(x):
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction) or (isinstance(x, float) and x in (INF, -INF)):
        return rat_json(x) if x != -INF else "-inf"
    if isinstance(x, NormValue):
        if x.is_zero():
            return {"zero": True, "expr": "0"}
        return {"valuation": rat_json(x.v), "factor": rat_json(x.factor), "root": x.root,
                "expr": repr(x)[len("NormValue("):-1]}
    if isinstance(x, DigitSeries):
        out = x.to_json()
        out["expr"] = x.to_expr()
        return out
    if isinstance(x, Cone):
        return x.to_json()
    if isinstance(x, SeminormPoint):
        return {"coordinates": x.describe()}
    if isinstance(x, (KElement, LaurentPoly)):
        return repr(x)
    if isinstance(x, dict):
        return {str(k) if not isinstance(k, Fraction) else str(k): encode(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [encode(v) for v in x]
    if hasattr(x, "to_json"):
        return encode(x.to_json())
    raise TypeError(f"cannot encode {type(x).__name__}")


@dataclass
class Certificate:
    command: list
    config: dict
    result: object
    provenance: object = "exact"
    witnesses: list = field(default_factory=list)
    status: str = "ok"

    def to_json(self):
        return {
            "schema": SCHEMA,
            "command": self.command,
            "config": self.config,
            "result": encode(self.result),
            "provenance": encode(self.provenance),
            "witnesses": encode(self.witnesses),
            "status": self.status,
        }

    def dumps(self):
        return json.dumps(self.to_json(), sort_keys=True, indent=2)
