"""Exact solving and counting of two-variable S-unit equations a*u + b*v = c*w."""

from sunitcount.errors import (
    ContractViolation,
    DomainError,
    GuardLimitError,
    InvalidPrimeSetError,
    InvalidTripleError,
)
from sunitcount.ntcore import height, omega, ord_p, rad, sieve_primes
from sunitcount.sunits import DeltaBound, PrimeSet, SUnitValue, delta_le, enumerate_sunits, is_sunit
from sunitcount.solver import Solution, SolveConfig, Triple, is_solvable, reduce_to_coprime, solve
from sunitcount.counting import (
    CountQuery,
    CountReport,
    closed_form_N,
    count_by_supports,
    count_M_by_supports,
    count_naive,
    split_bound_check,
)

__version__ = "0.1.0"

__all__ = [
    "ContractViolation",
    "CountQuery",
    "CountReport",
    "DeltaBound",
    "DomainError",
    "GuardLimitError",
    "InvalidPrimeSetError",
    "InvalidTripleError",
    "PrimeSet",
    "SUnitValue",
    "Solution",
    "SolveConfig",
    "Triple",
    "closed_form_N",
    "count_M_by_supports",
    "count_by_supports",
    "count_naive",
    "delta_le",
    "enumerate_sunits",
    "height",
    "is_solvable",
    "is_sunit",
    "omega",
    "ord_p",
    "rad",
    "reduce_to_coprime",
    "sieve_primes",
    "solve",
    "split_bound_check",
]
