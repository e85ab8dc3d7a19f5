"""S-normalized coefficient triples and S-equivalence.

Two triples are S-equivalent when b_i = lam * eps_i * a_sigma(i) for a
permutation sigma, a non-zero rational lam, and rational S-units eps_i.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Iterable, Sequence

from sunitcount.sunits import PrimeSet, as_prime_set

IntTriple = Sequence[int]


@dataclass(frozen=True)
class EquivalenceWitness:
    """``sigma[i]`` is the 0-based index of the source entry feeding target entry i."""

    sigma: tuple[int, int, int]
    lam: Fraction
    epsilons: tuple[Fraction, Fraction, Fraction]

    def apply(self, t1: IntTriple) -> tuple[Fraction, ...]:
        return tuple(self.lam * e * t1[j] for e, j in zip(self.epsilons, self.sigma))


def _strip(n: int, primes: Iterable[int]) -> int:
    n = abs(n)
    for p in primes:
        while n % p == 0:
            n //= p
    return n


def s_free_part(x: Fraction, S: PrimeSet) -> Fraction:
    """|x| with every prime of S removed from numerator and denominator."""
    return Fraction(_strip(x.numerator, S), _strip(x.denominator, S))


def is_rational_sunit(x: Fraction, S: PrimeSet) -> bool:
    return x != 0 and s_free_part(x, S) == 1


def is_s_normalized(t: IntTriple, S: PrimeSet | Iterable[int]) -> bool:
    S = as_prime_set(S)
    a, b, c = t
    if not 0 < a <= b <= c:
        return False
    if math.gcd(a, b) != 1 or math.gcd(a, c) != 1 or math.gcd(b, c) != 1:
        return False
    return all(x % p for x in (a, b, c) for p in S)


def are_s_equivalent(
    t1: IntTriple, t2: IntTriple, S: PrimeSet | Iterable[int]
) -> tuple[bool, EquivalenceWitness | None]:
    """Test S-equivalence by S-unit ratio checks over the six permutations."""
    S = as_prime_set(S)
    if 0 in t1 or 0 in t2:
        raise ValueError("triples must have non-zero entries")
    for sigma in permutations(range(3)):
        r = [Fraction(t2[i], t1[sigma[i]]) for i in range(3)]
        if is_rational_sunit(r[1] / r[0], S) and is_rational_sunit(r[2] / r[0], S):
            lam = s_free_part(r[0], S)
            eps = tuple(x / lam for x in r)
            return True, EquivalenceWitness(sigma, lam, eps)
    return False, None


def try_normalize(t: IntTriple, S: PrimeSet | Iterable[int]) -> tuple[int, int, int] | None:
    """Strip signs and S-parts, divide out the common factor, sort; verify before returning.

    Returns None when this construction does not reach an S-normalized triple.
    """
    S = as_prime_set(S)
    if 0 in t:
        raise ValueError("triples must have non-zero entries")
    stripped = [_strip(x, S) for x in t]
    g = math.gcd(*stripped)
    cand = tuple(sorted(x // g for x in stripped))
    if not is_s_normalized(cand, S):
        return None
    ok, _ = are_s_equivalent(t, cand, S)
    return cand if ok else None
