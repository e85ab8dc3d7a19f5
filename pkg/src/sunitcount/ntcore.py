"""Exact integer primitives: sieving, valuations, radicals, prime counting, heights."""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from sunitcount.errors import DomainError


def sieve_primes(H: int) -> list[int]:
    """Return all primes <= H in ascending order (Eratosthenes)."""
    if H < 2:
        raise DomainError(f"sieve bound must be >= 2, got {H}")
    flags = bytearray([1]) * (H + 1)
    flags[0] = flags[1] = 0
    for p in range(2, math.isqrt(H) + 1):
        if flags[p]:
            flags[p * p :: p] = bytes(len(range(p * p, H + 1, p)))
    return [i for i, f in enumerate(flags) if f]


@lru_cache(maxsize=64)
def _small_primes(bound: int) -> tuple[int, ...]:
    return tuple(sieve_primes(max(bound, 2)))


def prime_pi(H: int) -> int:
    """Number of primes <= H (0 for H < 2)."""
    return 0 if H < 2 else len(_small_primes(H))


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    if n < 1 << 20:
        r = math.isqrt(n)
        return all(n % p for p in _small_primes(1 << 10) if p <= r)
    # deterministic Miller-Rabin for n < 3.3e24
    d, e = n - 1, 0
    while d % 2 == 0:
        d //= 2
        e += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(e - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def ord_p(n: int, p: int) -> int:
    """Exponent of the exact power of ``p`` dividing ``n``."""
    if n == 0:
        raise DomainError("valuation of 0 is undefined")
    if p < 2:
        raise DomainError(f"{p} is not a prime")
    n = abs(n)
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


def factorize(n: int) -> dict[int, int]:
    """Trial-division factorization of a positive integer, as ``{prime: exponent}``."""
    if n < 1:
        raise DomainError(f"cannot factor {n}")
    out: dict[int, int] = {}
    if n == 1:
        return out
    # table bound rounded to a power of two so the cache stays small
    bound = 1 << min(max(math.isqrt(n).bit_length(), 1), 20)
    for p in _small_primes(bound):
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out[p] = e
    else:
        # inputs beyond the precomputed table: continue on odd candidates
        p = (1 << 20) + 1
        while p * p <= n:
            if n % p == 0:
                e = 0
                while n % p == 0:
                    n //= p
                    e += 1
                out[p] = e
            p += 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def rad(n: int) -> int:
    """Product of the distinct primes dividing ``n``; rad(1) = 1."""
    return math.prod(factorize(n))


def omega(n: int) -> int:
    """Number of distinct prime factors of ``n``; omega(1) = 0."""
    return len(factorize(n))


def height(alpha: Fraction | int) -> float:
    """Logarithmic height log max(|num|, |den|) of a non-zero rational."""
    alpha = Fraction(alpha)
    if alpha == 0:
        raise DomainError("height of 0 is undefined")
    return math.log(max(abs(alpha.numerator), alpha.denominator))
