"""Positive S-units: prime sets, smooth-number enumeration, membership, delta comparisons."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator

from sunitcount.errors import DomainError, InvalidPrimeSetError
from sunitcount.ntcore import is_prime


@dataclass(frozen=True)
class PrimeSet:
    """A finite, strictly ascending set of distinct primes."""

    primes: tuple[int, ...]

    def __post_init__(self):
        primes = tuple(int(p) for p in self.primes)
        if not primes:
            raise InvalidPrimeSetError("a prime set needs at least one prime")
        if any(x >= y for x, y in zip(primes, primes[1:])):
            raise InvalidPrimeSetError(f"primes must be strictly ascending: {primes}")
        bad = [p for p in primes if not is_prime(p)]
        if bad:
            raise InvalidPrimeSetError(f"not prime: {bad}")
        object.__setattr__(self, "primes", primes)

    @classmethod
    def of(cls, primes: Iterable[int]) -> PrimeSet:
        """Build from any iterable; sorts, rejects duplicates."""
        primes = list(primes)
        if len(set(primes)) != len(primes):
            raise InvalidPrimeSetError(f"duplicate primes in {primes}")
        return cls(tuple(sorted(primes)))

    @property
    def s(self) -> int:
        return len(self.primes)

    @property
    def P(self) -> int:
        return self.primes[-1]

    def __iter__(self) -> Iterator[int]:
        return iter(self.primes)

    def __len__(self) -> int:
        return len(self.primes)

    def __contains__(self, p: object) -> bool:
        return p in self.primes

    def __str__(self) -> str:
        return "{" + ",".join(map(str, self.primes)) + "}"


def as_prime_set(S: PrimeSet | Iterable[int]) -> PrimeSet:
    return S if isinstance(S, PrimeSet) else PrimeSet.of(S)


@dataclass(frozen=True)
class SUnitValue:
    """A positive S-unit with its exponent vector, aligned with the prime set order."""

    value: int
    exponents: tuple[tuple[int, int], ...]

    @property
    def exponent_map(self) -> dict[int, int]:
        return dict(self.exponents)

    def exponent(self, p: int) -> int:
        return self.exponent_map.get(p, 0)

    @property
    def support(self) -> frozenset[int]:
        return frozenset(p for p, k in self.exponents if k)

    def __int__(self) -> int:
        return self.value


@dataclass(frozen=True)
class DeltaBound:
    """An exact rational exponent 0 <= p/q <= 1 for the constraint v <= u**(p/q)."""

    p: int
    q: int = 1

    def __post_init__(self):
        if self.q <= 0 or self.p < 0 or self.p > self.q:
            raise DomainError(f"delta must satisfy 0 <= p/q <= 1, got {self.p}/{self.q}")
        g = math.gcd(self.p, self.q)
        object.__setattr__(self, "p", self.p // g)
        object.__setattr__(self, "q", self.q // g)

    @classmethod
    def parse(cls, text: str) -> DeltaBound:
        """Parse ``"p/q"`` or an integer ``"0"``/``"1"``. Decimals are refused."""
        num, sep, den = text.strip().partition("/")
        try:
            return cls(int(num), int(den) if sep else 1)
        except ValueError:
            raise DomainError(f"delta must be written as p/q, got {text!r}") from None

    @classmethod
    def from_fraction(cls, x: Fraction | int) -> DeltaBound:
        x = Fraction(x)
        return cls(x.numerator, x.denominator)

    def as_fraction(self) -> Fraction:
        return Fraction(self.p, self.q)

    def __str__(self) -> str:
        return f"{self.p}/{self.q}"


def delta_le(v: int, u: int, delta: DeltaBound) -> bool:
    """Decide ``v <= u**(p/q)`` exactly as ``v**q <= u**p``."""
    if u < 1 or v < 1:
        raise DomainError("delta comparison needs u, v >= 1")
    p, q = delta.p, delta.q
    if p == 0 or u == 1:
        return v == 1
    # bit-length brackets: 2**(k*(n-1)) <= x**k < 2**(k*n) for x with n bits
    bv, bu = v.bit_length(), u.bit_length()
    if q * bv <= p * (bu - 1):
        return True
    if q * (bv - 1) >= p * bu:
        return False
    return v**q <= u**p


def _sunit_exponents(n: int, primes: tuple[int, ...]) -> tuple[tuple[int, int], ...] | None:
    exps = []
    for p in primes:
        k = 0
        while n % p == 0:
            n //= p
            k += 1
        exps.append((p, k))
    return tuple(exps) if n == 1 else None


def is_sunit(n: int, S: PrimeSet | Iterable[int]) -> tuple[bool, dict[int, int] | None]:
    """Whether every prime factor of ``n`` lies in ``S``; the exponent vector when it does."""
    if n < 1:
        raise DomainError(f"S-unit membership needs n >= 1, got {n}")
    S = as_prime_set(S)
    exps = _sunit_exponents(n, S.primes)
    return (False, None) if exps is None else (True, dict(exps))


@lru_cache(maxsize=512)
def smooth_table(
    primes: tuple[int, ...],
    X: int,
    exponent_cap: int | None = None,
    max_omega: int | None = None,
) -> tuple[tuple[int, tuple[int, ...]], ...]:
    """All ``primes``-smooth integers <= X as ascending ``(value, exponents)`` pairs.

    Depth-first over the primes in descending order, cutting off as soon as the
    running product exceeds X. ``exponent_cap`` bounds every exponent and
    ``max_omega`` bounds the number of distinct primes used.
    """
    s = len(primes)
    order = sorted(range(s), key=lambda i: -primes[i])
    out: list[tuple[int, tuple[int, ...]]] = []
    exps = [0] * s
    kmax = exponent_cap if exponent_cap is not None else X.bit_length()
    wmax = s if max_omega is None else max_omega

    def walk(depth: int, value: int, used: int) -> None:
        if depth == s:
            out.append((value, tuple(exps)))
            return
        i = order[depth]
        p = primes[i]
        walk(depth + 1, value, used)
        if used >= wmax:
            return
        k = 0
        while k < kmax:
            value *= p
            if value > X:
                break
            k += 1
            exps[i] = k
            walk(depth + 1, value, used + 1)
        exps[i] = 0

    if X >= 1:
        walk(0, 1, 0)
    out.sort()
    return tuple(out)


def enumerate_sunits(S: PrimeSet | Iterable[int], X: int) -> list[SUnitValue]:
    """Positive S-units <= X in ascending order, each with its exponent vector."""
    if X < 1:
        raise DomainError(f"height cap must be >= 1, got {X}")
    S = as_prime_set(S)
    return [SUnitValue(v, tuple(zip(S.primes, e))) for v, e in smooth_table(S.primes, X)]
