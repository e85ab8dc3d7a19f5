"""Enumeration of coprime positive S-unit solutions of a*u + b*v = c*w under explicit caps."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable

import numpy as np

from sunitcount.errors import ContractViolation, DomainError, InvalidPrimeSetError, InvalidTripleError
from sunitcount.ntcore import factorize
from sunitcount.sunits import DeltaBound, PrimeSet, SUnitValue, as_prime_set, delta_le, is_sunit, smooth_table

_INT64_SAFE = 1 << 62
_GRID_CELLS = 1 << 21


@dataclass(frozen=True)
class Triple:
    """Positive coefficients (a, b, c) of a*u + b*v = c*w."""

    a: int
    b: int
    c: int

    def __post_init__(self):
        if min(self.a, self.b, self.c) < 1:
            raise InvalidTripleError(f"coefficients must be positive, got {self.as_tuple()}")

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.c)

    @cached_property
    def prime_factors(self) -> frozenset[int]:
        return frozenset(factorize(self.a * self.b * self.c))

    @property
    def r(self) -> int:
        return len(self.prime_factors)

    @property
    def radical_abc(self) -> int:
        return math.prod(self.prime_factors)

    @property
    def all_odd(self) -> bool:
        return self.a % 2 == 1 and self.b % 2 == 1 and self.c % 2 == 1

    def swapped(self) -> Triple:
        """The triple (b, a, c)."""
        return Triple(self.b, self.a, self.c)

    def __str__(self) -> str:
        return f"({self.a},{self.b},{self.c})"


@dataclass(frozen=True)
class Solution:
    u: SUnitValue
    v: SUnitValue
    w: SUnitValue
    support: frozenset[int]

    @property
    def omega(self) -> int:
        return len(self.support)

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.u.value, self.v.value, self.w.value)

    def sort_key(self) -> tuple[int, int]:
        return (self.w.value, self.u.value)


@dataclass(frozen=True)
class SolveConfig:
    """Search truncation and filters.

    ``height_cap`` bounds each of u, v, w; ``exponent_cap`` bounds every
    exponent; ``delta`` keeps only solutions with v <= u**delta; ``full_rank``
    keeps only solutions whose support is the whole prime set.
    """

    height_cap: int = 10**6
    exponent_cap: int | None = None
    delta: DeltaBound | None = None
    full_rank: bool = False

    def __post_init__(self):
        if self.height_cap < 1:
            raise DomainError(f"height cap must be >= 1, got {self.height_cap}")
        if self.exponent_cap is not None and self.exponent_cap < 1:
            raise DomainError(f"exponent cap must be >= 1, got {self.exponent_cap}")


def evertse_bound(s: int) -> int:
    """Evertse's upper bound 3 * 7**(2s+1) on the number of solutions."""
    return 3 * 7 ** (2 * s + 1)


def check_prime_set(triple: Triple, S: PrimeSet) -> None:
    shared = sorted(triple.prime_factors.intersection(S.primes))
    if shared:
        raise InvalidPrimeSetError(f"primes {shared} of S divide abc={triple.a * triple.b * triple.c}")


class _Table:
    """Sorted smooth values with exponent lookup."""

    def __init__(self, primes: tuple[int, ...], cfg: SolveConfig, max_omega: int | None):
        rows = smooth_table(primes, cfg.height_cap, cfg.exponent_cap, max_omega)
        self.values = [v for v, _ in rows]
        self.exps = {v: e for v, e in rows}

    def width(self, *vals: int) -> int:
        return sum(1 for x in vals for k in self.exps[x] if k)


def _accept(t: Triple, u: int, v: int, w: int, table: _Table, s: int, cfg: SolveConfig, max_omega: int | None) -> bool:
    if cfg.delta is not None and not delta_le(v, u, cfg.delta):
        return False
    if cfg.full_rank or max_omega is not None:
        width = table.width(u, v, w)
        if cfg.full_rank and width != s:
            return False
        if max_omega is not None and width > max_omega:
            return False
    return True


def _grid_chunk(t, arr, lo, hi):
    """Candidate (u, v, w) index hits for w in arr[lo:hi], row-major (w, then u)."""
    a, b, c = t.a, t.b, t.c
    W = arr[lo:hi]
    n_u = int(np.searchsorted(arr, (c * int(W[-1]) - 1) // a, side="right"))
    if n_u == 0:
        return []
    U = arr[:n_u]
    R = c * W[:, None] - a * U[None, :]
    ok = R > 0
    if b > 1:
        ok &= R % b == 0
        Q = R // b
    else:
        Q = R
    Q = np.where(ok, Q, 0)
    pos = np.minimum(np.searchsorted(arr, Q), len(arr) - 1)
    ok &= arr[pos] == Q
    wi, ui = np.nonzero(ok)
    if len(wi) == 0:
        return []
    Wh, Uh = W[wi], U[ui]
    # gcd(u, w) = 1 forces v coprime to both because S is coprime to abc
    keep = np.gcd(Wh, Uh) == 1
    return list(zip(Uh[keep].tolist(), Q[wi[keep], ui[keep]].tolist(), Wh[keep].tolist()))


def _python_scan(t, values, index, lo, hi):
    a, b, c = t.a, t.b, t.c
    out = []
    for w in values[lo:hi]:
        cw = c * w
        for u in values:
            au = a * u
            if au >= cw:
                break
            rem = cw - au
            if rem % b or rem // b not in index or math.gcd(u, w) != 1:
                continue
            out.append((u, rem // b, w))
    return out


@lru_cache(maxsize=8192)
def _search(
    t: Triple,
    primes: tuple[int, ...],
    cfg: SolveConfig,
    max_omega: int | None = None,
    first_only: bool = False,
    jobs: int = 1,
) -> tuple[tuple[int, int, int], ...]:
    table = _Table(primes, cfg, max_omega)
    values = table.values
    n = len(values)
    s = len(primes)
    if not n:
        return ()
    fast = max(t.a, t.c) * values[-1] < _INT64_SAFE
    if fast:
        arr = np.array(values, dtype=np.int64)
        step = max(1, _GRID_CELLS // n)
        scan = lambda lo, hi: _grid_chunk(t, arr, lo, hi)
    else:
        index = set(values)
        step = max(1, 4096 // n)
        scan = lambda lo, hi: _python_scan(t, values, index, lo, hi)
    bounds = [(lo, min(lo + step, n)) for lo in range(0, n, step)]

    def run(lo_hi):
        return [x for x in scan(*lo_hi) if _accept(t, *x, table, s, cfg, max_omega)]

    if first_only:
        for lo_hi in bounds:
            hits = run(lo_hi)
            if hits:
                return (hits[0],)
        return ()
    if jobs > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(run, bounds))
    else:
        parts = [run(x) for x in bounds]
    return tuple(x for part in parts for x in part)


def _build(t: Triple, S: PrimeSet, triples: Iterable[tuple[int, int, int]], cfg: SolveConfig) -> list[Solution]:
    table = smooth_table(S.primes, cfg.height_cap, cfg.exponent_cap, None)
    exps = dict(table) if len(table) < 1 << 16 else None
    out = []
    for u, v, w in triples:
        if t.a * u + t.b * v != t.c * w:
            raise AssertionError(f"solver produced a non-solution {(u, v, w)} for {t}")
        units = []
        for x in (u, v, w):
            e = exps[x] if exps is not None else tuple(k for _, k in _exps_of(x, S.primes))
            units.append(SUnitValue(x, tuple(zip(S.primes, e))))
        support = frozenset().union(*(x.support for x in units))
        out.append(Solution(*units, support))
    return out


def _exps_of(x: int, primes: tuple[int, ...]) -> list[tuple[int, int]]:
    out = []
    for p in primes:
        k = 0
        while x % p == 0:
            x //= p
            k += 1
        out.append((p, k))
    return out


def _prepare(triple, S, cfg):
    if not isinstance(triple, Triple):
        triple = Triple(*triple)
    S = as_prime_set(S)
    check_prime_set(triple, S)
    return triple, S, cfg or SolveConfig()


def solve(
    triple: Triple | tuple[int, int, int],
    S: PrimeSet | Iterable[int],
    cfg: SolveConfig | None = None,
    *,
    jobs: int = 1,
) -> list[Solution]:
    """All coprime positive S-unit solutions within the caps, sorted by (w, u)."""
    triple, S, cfg = _prepare(triple, S, cfg)
    sols = _build(triple, S, _search(triple, S.primes, cfg, None, False, max(1, jobs)), cfg)
    if len(sols) > evertse_bound(S.s):
        raise AssertionError(f"{len(sols)} solutions exceed Evertse's bound for s={S.s}")
    return sols


def is_solvable(
    triple: Triple | tuple[int, int, int],
    S: PrimeSet | Iterable[int],
    cfg: SolveConfig | None = None,
) -> tuple[bool, Solution | None]:
    """Whether a solution exists within the caps, with the first one in (w, u) order."""
    triple, S, cfg = _prepare(triple, S, cfg)
    found = _search(triple, S.primes, cfg, None, True)
    if not found:
        return False, None
    return True, _build(triple, S, found, cfg)[0]


def solve_support_bounded(
    triple: Triple,
    S: PrimeSet,
    cfg: SolveConfig,
    max_omega: int,
    *,
    jobs: int = 1,
) -> list[Solution]:
    """Solutions over ``S`` whose support has at most ``max_omega`` primes."""
    triple, S, cfg = _prepare(triple, S, cfg)
    return _build(triple, S, _search(triple, S.primes, cfg, max_omega, False, max(1, jobs)), cfg)


def solve_with_unit_v(
    triple: Triple | tuple[int, int, int],
    S: PrimeSet | Iterable[int],
    cfg: SolveConfig | None = None,
    max_omega: int | None = None,
) -> list[Solution]:
    """Solutions of a*u + b = c*w (v fixed to 1) by a single pass over w.

    Independent of the pair grid used by ``solve``; the delta filter is moot
    since v = 1 <= u**delta always.
    """
    triple, S, cfg = _prepare(triple, S, cfg)
    a, b, c = triple.as_tuple()
    rows = smooth_table(S.primes, cfg.height_cap, cfg.exponent_cap, max_omega)
    exps = dict(rows)
    found = []
    for w, ew in rows:
        rem = c * w - b
        if rem <= 0 or rem % a:
            continue
        u = rem // a
        eu = exps.get(u)
        if eu is None or math.gcd(u, w) != 1:
            continue
        width = sum(1 for k in eu + ew if k)
        if cfg.full_rank and width != S.s:
            continue
        if max_omega is not None and width > max_omega:
            continue
        found.append((u, 1, w))
    return _build(triple, S, found, cfg)


def reduce_to_coprime(
    u: int,
    v: int,
    w: int,
    triple: Triple | tuple[int, int, int],
    S: PrimeSet | Iterable[int] | None = None,
) -> tuple[int, int, int]:
    """Divide out common factors of a solution until u, v, w are pairwise coprime."""
    t = triple if isinstance(triple, Triple) else Triple(*triple)
    if min(u, v, w) < 1 or t.a * u + t.b * v != t.c * w:
        raise ContractViolation(f"{(u, v, w)} does not solve {t.a}u + {t.b}v = {t.c}w")
    if S is not None:
        S = as_prime_set(S)
        check_prime_set(t, S)
        if not all(is_sunit(x, S)[0] for x in (u, v, w)):
            raise ContractViolation(f"{(u, v, w)} is not a triple of S-units for S={S}")
    while (g := math.gcd(u, v, w)) > 1:
        u, v, w = u // g, v // g, w // g
    if math.gcd(u, v) != 1 or math.gcd(u, w) != 1 or math.gcd(v, w) != 1:
        raise ContractViolation(f"{(u, v, w)} cannot be made pairwise coprime: a common prime divides abc")
    return u, v, w
