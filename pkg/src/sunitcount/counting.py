"""Counting functions N, N^delta, M, M^delta over s-subsets of the primes up to H.

Two independent algorithms are provided. ``count_naive`` runs the solver on
every eligible s-subset. ``count_by_supports`` solves once over all eligible
primes and counts the s-subsets that contain the support of some solution,
using inclusion-exclusion over the inclusion-minimal supports; this is valid
because solvability over S carries over to every superset of S.
"""

from __future__ import annotations

import itertools
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from math import comb

from sunitcount.errors import DomainError, GuardLimitError
from sunitcount.ntcore import prime_pi, sieve_primes
from sunitcount.solver import (
    SolveConfig,
    Triple,
    solve,
    solve_support_bounded,
    solve_with_unit_v,
)
from sunitcount.sunits import DeltaBound, PrimeSet

VARIANTS = ("N", "N_delta", "M", "M_delta")
_ALIASES = {"N": "N", "NDELTA": "N_delta", "N_DELTA": "N_delta", "M": "M", "MDELTA": "M_delta", "M_DELTA": "M_delta"}

DEFAULT_SUBSET_LIMIT = 10**7
DEFAULT_FAMILY_LIMIT = 5000

EXACT = "exact"
UNDER_CAP = "under-cap"


def parse_variant(name: str) -> str:
    try:
        return _ALIASES[name.upper()]
    except KeyError:
        raise DomainError(f"unknown variant {name!r}; expected one of {VARIANTS}") from None


@dataclass(frozen=True)
class CountQuery:
    triple: Triple
    s: int
    H: int
    variant: str = "N"
    delta: DeltaBound | None = None
    cfg: SolveConfig = field(default_factory=SolveConfig)

    def __post_init__(self):
        object.__setattr__(self, "variant", parse_variant(self.variant))
        if not isinstance(self.triple, Triple):
            object.__setattr__(self, "triple", Triple(*self.triple))
        if self.s < 1:
            raise DomainError(f"set size must be >= 1, got {self.s}")
        if self.H < 2:
            raise DomainError(f"prime bound must be >= 2, got {self.H}")
        if self.variant.endswith("_delta") != (self.delta is not None):
            raise DomainError(f"variant {self.variant} and delta={self.delta} disagree")

    @property
    def is_full_rank(self) -> bool:
        return self.variant.startswith("M")

    def solve_config(self) -> SolveConfig:
        """The per-subset solver configuration implied by the variant."""
        return replace(self.cfg, delta=self.delta, full_rank=self.is_full_rank)


@dataclass(frozen=True)
class CountReport:
    """A counting-function value.

    ``strata`` maps t to the number of counted subsets whose smallest
    solution support has t primes. ``exactness`` is ``"exact"`` only when every
    rejected subset carries a cap-independent impossibility certificate.
    """

    count: int
    exactness: str
    strata: dict[int, int]
    eligible_primes: int
    members: tuple[tuple[int, ...], ...] | None = None

    def to_dict(self) -> dict:
        out = {
            "count": self.count,
            "exactness": self.exactness,
            "strata": {str(t): n for t, n in sorted(self.strata.items())},
            "eligible_primes": self.eligible_primes,
        }
        if self.members is not None:
            out["members"] = [list(m) for m in self.members]
        return out


def eligible_primes(triple: Triple, H: int) -> list[int]:
    """Primes <= H that do not divide abc."""
    return [p for p in sieve_primes(H) if p not in triple.prime_factors]


def _exactness(triple: Triple, m: int, s: int, count: int) -> str:
    if count == comb(m, s):
        return EXACT
    # parity: a, b, c odd and 2 not in S makes a*u + b*v even and c*w odd
    if triple.all_odd and count == comb(m - 1, s - 1):
        return EXACT
    return UNDER_CAP


def _naive_chunk(triple: Triple, primes: tuple[int, ...], s: int, cfg: SolveConfig, lo: int, hi: int, collect: bool):
    count = 0
    strata: Counter[int] = Counter()
    members = []
    for subset in itertools.islice(itertools.combinations(primes, s), lo, hi):
        sols = solve(triple, PrimeSet(subset), cfg)
        if sols:
            count += 1
            strata[min(x.omega for x in sols)] += 1
            if collect:
                members.append(subset)
    return count, strata, members


def count_naive(
    q: CountQuery,
    *,
    jobs: int = 1,
    limit: int = DEFAULT_SUBSET_LIMIT,
    collect: bool = False,
) -> CountReport:
    """Count by running the solver on every eligible s-subset."""
    primes = tuple(eligible_primes(q.triple, q.H))
    m = len(primes)
    total = comb(m, q.s)
    if total > limit:
        raise GuardLimitError(f"{total} subsets exceed the naive counting limit {limit}", limit, total)
    cfg = q.solve_config()
    jobs = max(1, jobs)
    if jobs == 1 or total < 2 * jobs:
        parts = [_naive_chunk(q.triple, primes, q.s, cfg, 0, total, collect)]
    else:
        step = -(-total // jobs)
        spans = [(lo, min(lo + step, total)) for lo in range(0, total, step)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(_naive_chunk, q.triple, primes, q.s, cfg, lo, hi, collect) for lo, hi in spans]
            parts = [f.result() for f in futures]
    count = sum(p[0] for p in parts)
    strata = sum((p[1] for p in parts), Counter())
    members = tuple(x for p in parts for x in p[2]) if collect else None
    return CountReport(count, _exactness(q.triple, m, q.s, count), dict(sorted(strata.items())), m, members)


def minimal_supports(supports) -> list[frozenset[int]]:
    """Inclusion-minimal members of a family of sets, ordered by (size, sorted elements)."""
    family: list[frozenset[int]] = []
    for sup in sorted(set(supports), key=lambda x: (len(x), sorted(x))):
        if not any(f <= sup for f in family):
            family.append(sup)
    return family


def count_supersets(family_masks: list[int], m: int, s: int) -> int:
    """Number of s-subsets of an m-set containing at least one member of the family.

    Inclusion-exclusion over sub-families; a branch is dropped once its union
    exceeds s elements since every term below it is binom(m-k, s-k) = 0.
    """
    total = 0

    def walk(start: int, union: int, sign: int) -> None:
        nonlocal total
        for j in range(start, len(family_masks)):
            nu = union | family_masks[j]
            k = nu.bit_count()
            if k > s:
                continue
            total += sign * comb(m - k, s - k)
            walk(j + 1, nu, -sign)

    walk(0, 0, 1)
    return total


def support_family(q: CountQuery, *, jobs: int = 1, family_limit: int = DEFAULT_FAMILY_LIMIT) -> list[frozenset[int]]:
    """Minimal supports of solutions over all eligible primes with at most s primes."""
    primes = eligible_primes(q.triple, q.H)
    if not primes:
        return []
    cfg = replace(q.solve_config(), full_rank=False)
    sols = solve_support_bounded(q.triple, PrimeSet(tuple(primes)), cfg, q.s, jobs=jobs)
    family = minimal_supports(x.support for x in sols)
    if len(family) > family_limit:
        raise GuardLimitError(
            f"{len(family)} minimal supports exceed the family limit {family_limit}", family_limit, len(family)
        )
    return family


def count_by_supports(q: CountQuery, *, jobs: int = 1, family_limit: int = DEFAULT_FAMILY_LIMIT) -> CountReport:
    """Count N or N^delta by inclusion-exclusion over minimal solution supports."""
    if q.is_full_rank:
        raise DomainError(f"support counting applies to monotone variants only, not {q.variant}")
    primes = eligible_primes(q.triple, q.H)
    m, s = len(primes), q.s
    if m < s:
        return CountReport(0, EXACT, {}, m)
    family = support_family(q, jobs=jobs, family_limit=family_limit)
    pos = {p: i for i, p in enumerate(primes)}
    masks = [sum(1 << pos[p] for p in f) for f in family]
    cumulative = [count_supersets([x for x, f in zip(masks, family) if len(f) <= t], m, s) for t in range(s + 1)]
    strata = {t: cumulative[t] - (cumulative[t - 1] if t else 0) for t in range(s + 1)}
    count = cumulative[s]
    return CountReport(count, _exactness(q.triple, m, s, count), {t: n for t, n in strata.items() if n}, m)


def _full_rank_report(q: CountQuery, supports, m: int) -> CountReport:
    count = len({sup for sup in supports if len(sup) == q.s})
    return CountReport(count, _exactness(q.triple, m, q.s, count), {q.s: count} if count else {}, m)


def count_M_by_supports(q: CountQuery, *, jobs: int = 1) -> CountReport:
    """Count M or M^delta as the number of distinct s-prime supports of solutions.

    A full-rank solution over S has support exactly S, so each counted subset
    is the support of one of its solutions.
    """
    if not q.is_full_rank:
        raise DomainError(f"full-rank support counting applies to M variants only, not {q.variant}")
    primes = eligible_primes(q.triple, q.H)
    m = len(primes)
    if m < q.s:
        return CountReport(0, EXACT, {}, m)
    cfg = replace(q.solve_config(), full_rank=False)
    sols = solve_support_bounded(q.triple, PrimeSet(tuple(primes)), cfg, q.s, jobs=jobs)
    return _full_rank_report(q, (x.support for x in sols), m)


def count_M0_by_unit_v(triple: Triple, s: int, H: int, cfg: SolveConfig | None = None) -> CountReport:
    """M^0 through the dedicated a*u + b = c*w search instead of the delta filter."""
    q = CountQuery(triple, s, H, "M_delta", DeltaBound(0), cfg or SolveConfig())
    primes = eligible_primes(q.triple, H)
    m = len(primes)
    if m < s:
        return CountReport(0, EXACT, {}, m)
    sols = solve_with_unit_v(q.triple, PrimeSet(tuple(primes)), replace(q.cfg, delta=None, full_rank=False), s)
    return _full_rank_report(q, (x.support for x in sols), m)


def count(q: CountQuery, algorithm: str = "supports", **kwargs) -> CountReport:
    """Dispatch to the naive or support-based algorithm for the query's variant."""
    if algorithm == "naive":
        return count_naive(q, **kwargs)
    if algorithm != "supports":
        raise DomainError(f"unknown algorithm {algorithm!r}")
    kwargs.pop("limit", None)
    kwargs.pop("collect", None)
    if q.is_full_rank:
        kwargs.pop("family_limit", None)
        return count_M_by_supports(q, **kwargs)
    return count_by_supports(q, **kwargs)


def closed_form_N(triple: Triple | tuple[int, int, int], s: int, H: int) -> int | None:
    """Exact N when a + b = c (and H exceeds every prime of abc) or when (a, b, c) = (1, 1, 1)."""
    t = triple if isinstance(triple, Triple) else Triple(*triple)
    if t.a + t.b == t.c:
        if H <= max(t.prime_factors):
            return None
        return comb(prime_pi(H) - t.r, s)
    if t.as_tuple() == (1, 1, 1) and H >= 2:
        return comb(prime_pi(H) - 1, s - 1)
    return None


def split_bound_counts(
    triple: Triple | tuple[int, int, int],
    s: int,
    H: int,
    cfg: SolveConfig | None = None,
    algorithm: str = "supports",
) -> tuple[int, int, int]:
    """(N_{a,b,c}, N^1_{a,b,c}, N^1_{b,a,c}) under one configuration."""
    t = triple if isinstance(triple, Triple) else Triple(*triple)
    cfg = cfg or SolveConfig()
    one = DeltaBound(1)
    n = count(CountQuery(t, s, H, "N", None, cfg), algorithm).count
    n_ab = count(CountQuery(t, s, H, "N_delta", one, cfg), algorithm).count
    n_ba = count(CountQuery(t.swapped(), s, H, "N_delta", one, cfg), algorithm).count
    return n, n_ab, n_ba


def split_bound_check(
    triple: Triple | tuple[int, int, int],
    s: int,
    H: int,
    cfg: SolveConfig | None = None,
    algorithm: str = "supports",
) -> bool:
    """Check N_{a,b,c} <= N^1_{a,b,c} + N^1_{b,a,c}."""
    n, n_ab, n_ba = split_bound_counts(triple, s, H, cfg, algorithm)
    return n <= n_ab + n_ba
