import random
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from oracles import brute_count, brute_superset_count, trial_primes
from sunitcount.counting import (
    EXACT,
    UNDER_CAP,
    CountQuery,
    closed_form_N,
    count,
    count_by_supports,
    count_M0_by_unit_v,
    count_M_by_supports,
    count_naive,
    count_supersets,
    minimal_supports,
    split_bound_check,
    split_bound_counts,
    support_family,
)
from sunitcount.errors import DomainError, GuardLimitError
from sunitcount.solver import SolveConfig, Triple
from sunitcount.sunits import DeltaBound

SMALL = SolveConfig(2000)


def q(t, s, H, variant="N", delta=None, cfg=SMALL):
    return CountQuery(Triple(*t), s, H, variant, delta, cfg)


def test_naive_examples_against_brute_force():
    # all six 2-subsets of {2,3,5,7}; the solvable ones contain 2
    expected = brute_count((1, 1, 1), 2, 10, 2000)
    assert expected == [(2, 3), (2, 5), (2, 7)]
    assert count_naive(q((1, 1, 1), 2, 10)).count == 3 == comb(3, 1)
    assert count_naive(q((1, 2, 3), 1, 10)).count == 2
    m = count_naive(q((1, 1, 1), 2, 10, "M"), collect=True)
    assert m.count == 3 and m.members == ((2, 3), (2, 5), (2, 7))
    assert m.members == tuple(brute_count((1, 1, 1), 2, 10, 2000, full_rank=True))


def test_support_examples():
    assert support_family(q((1, 1, 1), 2, 10)) == [frozenset({2})]
    assert count_by_supports(q((1, 1, 1), 2, 10)).count == 3
    assert support_family(q((1, 2, 3), 1, 10)) == [frozenset()]
    assert count_by_supports(q((1, 2, 3), 1, 10)).count == 2
    assert count_by_supports(q((3, 5, 16), 1, 10)) == count_naive(q((3, 5, 16), 1, 10))


def test_full_rank_support_examples():
    assert count_M_by_supports(q((1, 1, 1), 2, 10, "M")).count == 3
    m0 = q((1, 1, 1), 1, 10, "M_delta", DeltaBound(0))
    assert count_M_by_supports(m0).count == 1 == count_naive(m0).count
    assert count_M_by_supports(q((1, 1, 1), 5, 10, "M")).count == 0
    assert count_naive(q((1, 1, 1), 5, 10, "M")).count == 0


def test_variant_validation():
    with pytest.raises(DomainError):
        q((1, 1, 1), 1, 10, "N_delta")
    with pytest.raises(DomainError):
        q((1, 1, 1), 1, 10, "N", DeltaBound(1))
    with pytest.raises(DomainError):
        count_by_supports(q((1, 1, 1), 1, 10, "M"))
    with pytest.raises(DomainError):
        count_M_by_supports(q((1, 1, 1), 1, 10))
    assert CountQuery(Triple(1, 1, 1), 1, 10, "Mdelta", DeltaBound(0)).variant == "M_delta"


def test_guard_limit():
    with pytest.raises(GuardLimitError) as info:
        count_naive(q((1, 1, 1), 3, 100), limit=100)
    assert info.value.limit == 100 and info.value.size == comb(len(trial_primes(100)), 3)
    with pytest.raises(GuardLimitError):
        count_by_supports(q((3, 5, 16), 3, 50), family_limit=1)


def test_closed_form_examples():
    assert closed_form_N((1, 2, 3), 1, 10) == 2
    assert closed_form_N((1, 1, 1), 3, 20) == comb(len(trial_primes(20)) - 1, 2) == 21
    assert closed_form_N((1, 1, 2), 1, 10) == 3
    assert closed_form_N((2, 3, 5), 1, 5) is None
    assert closed_form_N((3, 5, 16), 1, 50) is None


def test_split_bound_examples():
    assert split_bound_check((1, 1, 1), 2, 10, SMALL)
    n, n_ab, n_ba = split_bound_counts((1, 1, 1), 2, 10, SMALL)
    assert n_ab == n_ba and n <= 2 * n_ab
    assert split_bound_check((1, 2, 3), 1, 10, SMALL)
    assert split_bound_check((3, 5, 16), 2, 20, SMALL)
    assert split_bound_check((3, 5, 16), 2, 20, SMALL, algorithm="naive")


def test_exactness_flags():
    assert count_naive(q((1, 2, 3), 2, 20)).exactness == EXACT
    assert count_by_supports(q((1, 1, 1), 2, 20)).exactness == EXACT
    assert count_by_supports(q((3, 5, 16), 2, 20)).exactness == UNDER_CAP
    assert count_M_by_supports(q((1, 2, 3), 1, 20, "M")).exactness == UNDER_CAP


def test_strata():
    r = count_by_supports(q((1, 2, 3), 2, 20))
    assert r.strata == {0: r.count}
    r = count_by_supports(q((3, 5, 16), 3, 40))
    assert 0 not in r.strata and sum(r.strata.values()) == r.count
    assert r.strata == count_naive(q((3, 5, 16), 3, 40)).strata


triple_st = st.tuples(st.integers(1, 9), st.integers(1, 9), st.integers(1, 17))


@settings(max_examples=40, deadline=None)
@given(triple_st, st.integers(1, 4), st.integers(2, 37))
def test_supports_equal_naive(t, s, H):
    query = q(t, s, H)
    assert count_by_supports(query) == count_naive(query)
    mq = q(t, s, H, "M")
    assert count_M_by_supports(mq) == count_naive(mq)


@settings(max_examples=15, deadline=None)
@given(triple_st, st.integers(1, 2), st.integers(2, 13))
def test_naive_matches_brute_force_oracle(t, s, H):
    X = 300
    cfg = SolveConfig(X)
    assert count_naive(q(t, s, H, cfg=cfg)).count == len(brute_count(t, s, H, X))
    assert count_naive(q(t, s, H, "M", cfg=cfg)).count == len(brute_count(t, s, H, X, full_rank=True))


@settings(max_examples=25, deadline=None)
@given(triple_st, st.integers(1, 3), st.integers(2, 30), st.integers(1, 15))
def test_monotone_in_H(t, s, H, extra):
    assert count_by_supports(q(t, s, H)).count <= count_by_supports(q(t, s, H + extra)).count


@settings(max_examples=25, deadline=None)
@given(triple_st, st.integers(1, 3), st.integers(2, 30))
def test_delta_and_full_rank_orderings(t, s, H):
    deltas = [DeltaBound(0), DeltaBound(1, 3), DeltaBound(1, 2), DeltaBound(1)]
    n_delta = [count_by_supports(q(t, s, H, "N_delta", d)).count for d in deltas]
    m_delta = [count_M_by_supports(q(t, s, H, "M_delta", d)).count for d in deltas]
    assert n_delta == sorted(n_delta) and m_delta == sorted(m_delta)
    assert all(m <= n for m, n in zip(m_delta, n_delta))
    assert count_M_by_supports(q(t, s, H, "M")).count <= count_by_supports(q(t, s, H)).count


@pytest.mark.parametrize("t", [(1, 1, 1), (1, 3, 5), (3, 5, 7), (1, 1, 3)])
@pytest.mark.parametrize("s", [1, 2, 3])
def test_odd_triples_need_two(t, s):
    for variant, delta in [("N", None), ("M", None), ("N_delta", DeltaBound(1, 2)), ("M_delta", DeltaBound(1, 2))]:
        r = count_naive(q(t, s, 30, variant, delta), collect=True)
        assert all(2 in m for m in r.members)
        assert r.count <= comb(len(trial_primes(30)) - 1, s - 1)


@pytest.mark.parametrize("t", [(1, 1, 2), (1, 2, 3), (2, 3, 5), (1, 4, 5)])
def test_a_plus_b_law_is_cap_independent(t):
    for s, H in [(1, 10), (2, 20), (3, 30)]:
        expected = closed_form_N(t, s, H)
        tiny = SolveConfig(1)
        assert count_naive(q(t, s, H, cfg=tiny)).count == expected
        assert count_by_supports(q(t, s, H, cfg=tiny)).count == expected
        assert count_by_supports(q(t, s, H, cfg=tiny)).exactness == EXACT


def test_m0_dedicated_path():
    rng = random.Random(5)
    for _ in range(10):
        t = Triple(rng.randint(1, 9), rng.randint(1, 9), rng.randint(1, 17))
        s, H = rng.randint(1, 3), rng.randint(5, 40)
        via_filter = count_M_by_supports(q(t.as_tuple(), s, H, "M_delta", DeltaBound(0)))
        assert count_M0_by_unit_v(t, s, H, SMALL) == via_filter


def test_naive_workers_give_identical_reports():
    query = q((3, 5, 16), 2, 40)
    assert count_naive(query, jobs=3) == count_naive(query, jobs=1)


def test_dispatch():
    query = q((1, 1, 1), 2, 10)
    assert count(query, "naive") == count(query, "supports")
    with pytest.raises(DomainError):
        count(query, "magic")


def test_minimal_supports():
    fam = [frozenset({2, 3}), frozenset({2}), frozenset({3, 5}), frozenset({2, 5, 7}), frozenset({3, 5})]
    assert minimal_supports(fam) == [frozenset({2}), frozenset({3, 5})]
    assert minimal_supports([frozenset(), frozenset({7})]) == [frozenset()]


@settings(max_examples=200)
@given(
    st.lists(st.frozensets(st.integers(0, 7), max_size=4), max_size=6),
    st.integers(0, 8),
)
def test_inclusion_exclusion_matches_enumeration(family, s):
    universe = list(range(8))
    family = minimal_supports(family)
    masks = [sum(1 << i for i in f) for f in family]
    assert count_supersets(masks, 8, s) == brute_superset_count(family, universe, s)
