"""Evaluators for the exponent, linear-form, and counting envelopes, plus abc quality.

Every effective constant is an explicit input (default 1). These are shapes
for diagnostics; nothing here certifies a count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from sunitcount.errors import DomainError, InvalidTripleError
from sunitcount.ntcore import rad
from sunitcount.solver import Solution, evertse_bound
from sunitcount.sunits import PrimeSet, as_prime_set

ENVELOPES = ("PP6", "PP7", "PP9", "PP10", "PP11", "PP12")


@dataclass(frozen=True)
class BoundConstants:
    C0_lemma1: float = 1.0
    C1_lemma2: float = 1.0
    c_bw: float = 1.0
    C_abc: float = 1.0
    abc_eps: float = 1.0
    theorem_constants: dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        scalars = {k: getattr(self, k) for k in ("C0_lemma1", "C1_lemma2", "c_bw", "C_abc", "abc_eps")}
        for name, value in {**scalars, **self.theorem_constants}.items():
            if not value > 0:
                raise DomainError(f"constant {name} must be positive, got {value}")

    def theorem(self, name: str) -> float:
        return self.theorem_constants.get(name, 1.0)

    @classmethod
    def from_mapping(cls, values: dict[str, str | float]) -> BoundConstants:
        """Build from ``key = value`` config entries; ``C_PP6`` etc. set theorem constants."""
        kw: dict = {}
        theorem: dict[str, float] = {}
        for key, raw in values.items():
            if key in ("C0_lemma1", "C1_lemma2", "c_bw", "C_abc", "abc_eps"):
                kw[key] = float(raw)
            elif key.startswith("C_PP"):
                theorem[key[2:]] = float(raw)
        return cls(**kw, theorem_constants=theorem)


def _require_H(H: float) -> None:
    if H < 16:
        raise DomainError(f"envelopes need H >= 16, got {H}")


def lemma1_envelope(s: int, H: float, consts: BoundConstants = BoundConstants()) -> float:
    """C0 * (log H)**(s+1) * log log H, the exponent cap when v <= u**delta with delta < 1."""
    _require_H(H)
    L = math.log(H)
    return consts.C0_lemma1 * L ** (s + 1) * math.log(L)


def lemma2_envelope(p: int, H: float, consts: BoundConstants = BoundConstants()) -> float:
    """C1 * log H / log p, the abc-conditional exponent cap at the prime p."""
    if p < 2 or p > H:
        raise DomainError(f"need 2 <= p <= H, got p={p}, H={H}")
    return consts.C1_lemma2 * math.log(H) / math.log(p)


def bw_lower_bound(heights: Sequence[float], n: int, B: float, consts: BoundConstants = BoundConstants()) -> float:
    """Natural log of the Baker-Wuestholz lower bound for a non-zero linear form in n logarithms."""
    if len(heights) != n:
        raise DomainError(f"{len(heights)} heights given for n={n}")
    if B < 3:
        raise DomainError(f"B must be >= 3, got {B}")
    prod = math.prod(max(h, 1.0) for h in heights)
    return -((consts.c_bw * n) ** (2 * n)) * math.log(B) * prod


def theorem_envelopes(s: int, H: float, selector: str, consts: BoundConstants = BoundConstants()) -> float:
    """Value of one of the counting envelopes PP6, PP7, PP9, PP10, PP11, PP12."""
    _require_H(H)
    L = math.log(H)
    LL = math.log(L)
    C = consts.theorem(selector)
    if selector == "PP6":
        return C * H ** (s - 1) * L ** (s + 3) * LL**2
    if selector == "PP7":
        return C * (H / L) ** (s - 1)
    if selector == "PP9":
        return C * (H * L**s * LL) ** (s // 2)
    if selector == "PP10":
        return C * (H * L**s * LL) ** (2 * s // 3)
    if selector == "PP11":
        return C * (H / L) ** (s // 2)
    if selector == "PP12":
        return C * (H / L) ** (2 * s // 3)
    raise DomainError(f"unknown envelope {selector!r}; expected one of {ENVELOPES}")


@dataclass(frozen=True)
class AbcTripleReport:
    a: int
    b: int
    c: int
    radical: int
    quality: float

    def to_dict(self) -> dict:
        return {"a": self.a, "b": self.b, "c": self.c, "radical": self.radical, "quality": self.quality}


def abc_quality(a: int, b: int, c: int) -> AbcTripleReport:
    """log c / log rad(abc) for coprime positive a + b = c."""
    if min(a, b, c) < 1 or a + b != c:
        raise InvalidTripleError(f"need positive a + b = c, got {(a, b, c)}")
    if math.gcd(a, b) != 1:
        raise InvalidTripleError(f"{(a, b, c)} is not coprime")
    r = rad(a * b * c)
    return AbcTripleReport(a, b, c, r, math.log(c) / math.log(r))


@dataclass(frozen=True)
class ExponentAudit:
    """Per-prime maximum of ord_p(uvw) * log p / log H over a batch of solutions."""

    per_prime: dict[int, float]
    maximum: float | None

    def to_dict(self) -> dict:
        return {"per_prime": {str(p): x for p, x in self.per_prime.items()}, "max": self.maximum}


def empirical_exponent_audit(solutions: Iterable[Solution], S: PrimeSet | Iterable[int], H: float) -> ExponentAudit:
    solutions = list(solutions)
    if not solutions:
        return ExponentAudit({}, None)
    S = as_prime_set(S)
    logH = math.log(H)
    per_prime = {}
    for p in S:
        e = max(x.u.exponent(p) + x.v.exponent(p) + x.w.exponent(p) for x in solutions)
        per_prime[p] = e * math.log(p) / logH
    return ExponentAudit(per_prime, max(per_prime.values()))


__all__ = [
    "AbcTripleReport",
    "BoundConstants",
    "ENVELOPES",
    "ExponentAudit",
    "abc_quality",
    "bw_lower_bound",
    "empirical_exponent_audit",
    "evertse_bound",
    "lemma1_envelope",
    "lemma2_envelope",
    "theorem_envelopes",
]
