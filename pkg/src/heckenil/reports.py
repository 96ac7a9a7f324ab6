"""Serializable result records."""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from typing import Any

EXACT_BASIS = "EXACT_BASIS"
TRUNCATED = "TRUNCATED"
ARITHMETIC = "ARITHMETIC"


def encode_degree(d):
    return "-inf" if d == -math.inf else int(d)


def decode_degree(d):
    return -math.inf if d == "-inf" else int(d)


@dataclass
class NilpotencyReport:
    """Index of nilpotency of T'_ell on one starting power, with its trajectory.

    ``trajectory[u]`` is the degree of the (u+1)-th iterate; the last entry
    is always -inf and the length equals ``index``.
    """

    p: int
    ell: int
    space: str
    k: int
    index: int
    trajectory: list
    slack: int = 16

    def to_dict(self) -> dict:
        d = asdict(self)
        d["trajectory"] = [encode_degree(x) for x in self.trajectory]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "NilpotencyReport":
        return cls(
            p=int(d["p"]),
            ell=int(d["ell"]),
            space=str(d["space"]),
            k=int(d["k"]),
            index=int(d["index"]),
            trajectory=[decode_degree(x) for x in d["trajectory"]],
            slack=int(d.get("slack", 16)),
        )

    def key(self) -> tuple:
        return (self.p, self.ell, self.space, self.k, self.slack)


@dataclass
class CongruenceReport:
    """Pass/fail evidence for one family of checks.

    ``failures`` holds witnesses; an empty list means the family passed.
    ``rigor`` says whether the evidence is an identity in a finite basis,
    a truncated q-expansion comparison, or plain arithmetic.
    """

    family: str
    params: dict
    checked: int = 0
    failures: list = field(default_factory=list)
    precision: int | None = None
    rigor: str = EXACT_BASIS
    notes: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        d = asdict(self)
        d["passed"] = self.passed
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "CongruenceReport":
        d = dict(d)
        d.pop("passed", None)
        return cls(**d)

    def to_json(self) -> str:
        return json.dumps(sanitize(self.to_dict()), sort_keys=True)

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f", {len(self.failures)} failures" if self.failures else ""
        return f"{status} {self.family} {self.params} checked={self.checked}{extra} [{self.rigor}]"


def sanitize(o: Any):
    """Recursively convert values into plain JSON types (infinities become strings)."""
    if isinstance(o, dict):
        return {str(k): sanitize(v) for k, v in o.items()}
    if isinstance(o, (list, tuple, set)):
        return [sanitize(v) for v in o]
    if isinstance(o, float):
        if math.isinf(o):
            return "-inf" if o < 0 else "inf"
        return o
    if hasattr(o, "item"):
        return sanitize(o.item())
    if o is None or isinstance(o, (bool, int, str)):
        return o
    return str(o)
