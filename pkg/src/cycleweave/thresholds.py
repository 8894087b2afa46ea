"""Exact rational thresholds and extraction configuration.

All threshold tests compare an integer count against a ``Fraction``.  The
helpers below turn each comparison into an integer comparison via exact
floor/ceil, so no floating point value ever decides a predicate.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path
from typing import Any, Literal, Union

Rational = Fraction
RationalLike = Union[int, str, Fraction]

BETA_DENOMINATOR = 2**20


class InvalidThresholds(ValueError):
    pass


def rational(x: RationalLike) -> Fraction:
    """Parse ``3``, ``"3/4"``, ``"0.25"`` or a Fraction exactly.  Floats are refused."""
    if isinstance(x, float):
        raise TypeError("floats are not accepted as thresholds; pass a string or Fraction")
    return Fraction(x)


def encode(q: Fraction) -> dict[str, int]:
    return {"num": q.numerator, "den": q.denominator}


def decode(d: dict[str, int]) -> Fraction:
    return Fraction(d["num"], d["den"])


# "at least t"  ->  c >= t  <=>  c >= ceil(t)
def at_least_bound(t: Fraction) -> int:
    return math.ceil(t)


# "at most t"   ->  c <= t  <=>  c <= floor(t)
def at_most_bound(t: Fraction) -> int:
    return math.floor(t)


# "fewer than t" -> c < t  <=>  c <= ceil(t) - 1
def fewer_than_bound(t: Fraction) -> int:
    return math.ceil(t) - 1


def k_from_beta(n: int, beta: float | str) -> tuple[Fraction, dict[str, Any]]:
    """Round ``n**beta`` to a multiple of 2**-20; returns k and a rounding record."""
    raw = float(n) ** float(beta)
    k = Fraction(round(raw * BETA_DENOMINATOR), BETA_DENOMINATOR)
    return k, {"beta": str(beta), "n_pow_beta": repr(raw), "k": encode(k)}


@dataclass(frozen=True)
class ThresholdSet:
    """Extraction thresholds plus the certificate thresholds t1, t2, t3.

    In paper mode every value is a function of ``n`` and ``k``.  In custom
    mode the four extraction thresholds are given and the certificate
    thresholds default to ``t1 = 2 * t_bad``, ``t2 = t_bad``,
    ``t3 = t_gamma_deg`` (the same ratios as in paper mode).
    """

    n: int
    k: Fraction | None
    mode: Literal["paper", "custom"]
    t_peel: Fraction
    t_codeg: Fraction
    t_gamma_deg: Fraction
    t_bad_per_vertex: Fraction
    t1: Fraction
    t2: Fraction
    t3: Fraction
    k_rounding: dict[str, Any] | None = None

    @classmethod
    def paper(cls, n: int, k: RationalLike, k_rounding: dict[str, Any] | None = None) -> "ThresholdSet":
        k = rational(k)
        if k <= 0:
            raise InvalidThresholds(f"k must be positive, got {k}")
        return cls(
            n=n,
            k=k,
            mode="paper",
            t_peel=Fraction(n) / (2 * k),
            t_codeg=Fraction(n) / (32 * k**2),
            t_gamma_deg=Fraction(n) / (2**16 * k**5),
            t_bad_per_vertex=Fraction(n) / (2**7 * k**2),
            t1=Fraction(n) / (2**6 * k**2),
            t2=Fraction(n) / (2**7 * k**2),
            t3=Fraction(n) / (2**16 * k**5),
            k_rounding=k_rounding,
        )

    @classmethod
    def custom(
        cls,
        t_peel: RationalLike,
        t_codeg: RationalLike,
        t_gamma_deg: RationalLike,
        t_bad_per_vertex: RationalLike,
        *,
        t1: RationalLike | None = None,
        t2: RationalLike | None = None,
        t3: RationalLike | None = None,
        n: int = 0,
    ) -> "ThresholdSet":
        t_bad = rational(t_bad_per_vertex)
        ts = cls(
            n=n,
            k=None,
            mode="custom",
            t_peel=rational(t_peel),
            t_codeg=rational(t_codeg),
            t_gamma_deg=rational(t_gamma_deg),
            t_bad_per_vertex=t_bad,
            t1=rational(t1) if t1 is not None else 2 * t_bad,
            t2=rational(t2) if t2 is not None else t_bad,
            t3=rational(t3) if t3 is not None else rational(t_gamma_deg),
        )
        ts.validate()
        return ts

    def validate(self) -> None:
        for name in ("t_peel", "t_codeg", "t_gamma_deg", "t_bad_per_vertex", "t1", "t2", "t3"):
            if getattr(self, name) <= 0:
                raise InvalidThresholds(f"{name} must be positive, got {getattr(self, name)}")

    def with_n(self, n: int) -> "ThresholdSet":
        if self.mode == "paper":
            return ThresholdSet.paper(n, self.k, self.k_rounding)
        return replace(self, n=n)

    def paper_precondition_holds(self) -> bool:
        return self.n > 2**20 * self.k**5

    def min_edges(self) -> Fraction:
        return Fraction(self.n) ** 2 / self.k

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "mode": self.mode,
            "n": self.n,
            "k": encode(self.k) if self.k is not None else None,
        }
        for name in ("t_peel", "t_codeg", "t_gamma_deg", "t_bad_per_vertex", "t1", "t2", "t3"):
            out[name] = encode(getattr(self, name))
        if self.k_rounding is not None:
            out["k_rounding"] = self.k_rounding
        return out


@dataclass(frozen=True)
class PivotStrategy:
    kind: Literal["exhaustive", "sampled"] = "exhaustive"
    count: int = 0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.kind == "sampled" and self.count < 1:
            raise ValueError("sampled pivot strategy needs count >= 1")

    @classmethod
    def parse(cls, text: str, seed: int = 0) -> "PivotStrategy":
        if text == "exhaustive":
            return cls()
        if text.startswith("sampled:"):
            return cls("sampled", int(text.split(":", 1)[1]), seed)
        raise ValueError(f"unknown pivot strategy {text!r}")

    def to_dict(self) -> dict[str, Any]:
        if self.kind == "exhaustive":
            return {"kind": "exhaustive"}
        return {"kind": "sampled", "count": self.count, "seed": self.seed}


@dataclass(frozen=True)
class ExtractConfig:
    thresholds: ThresholdSet
    pivot_strategy: PivotStrategy = field(default_factory=PivotStrategy)
    record_trace: bool = True
    # keep the pivot itself in A' when it has >= t_codeg neighbors in N_H(pivot)
    keep_pivot: bool = True

    def to_dict(self) -> dict[str, Any]:
        return {
            "thresholds": self.thresholds.to_dict(),
            "pivot_strategy": self.pivot_strategy.to_dict(),
            "keep_pivot": self.keep_pivot,
        }


def read_config_file(path: str | Path) -> dict[str, str]:
    """Read a ``key = value`` text file (``#`` comments) or a JSON object.

    Values are returned as strings; rationals stay unparsed until the
    caller decides which fields apply.
    """
    text = Path(path).read_text(encoding="utf-8")
    if text.lstrip().startswith("{"):
        return {str(k): str(v) for k, v in json.loads(text).items()}
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected 'key = value'")
        key, value = line.split("=", 1)
        out[key.strip().replace("-", "_")] = value.strip().strip('"')
    return out
