"""Convex interpolants and cone-convex counterexamples in exact arithmetic.

Scalars go in as int, str ("3/4", "0.25") or fractions.Fraction and come
back as canonical "p/q" strings.
"""

from fractions import Fraction

from ._core import (
    Counterexample,
    Interpolant,
    WscError,
    build_prop41,
    cli_main,
    infimum_gap_demo,
    normalize,
    plan_case,
)

__all__ = [
    "Counterexample",
    "Interpolant",
    "WscError",
    "build_prop41",
    "cli_main",
    "fractions",
    "infimum_gap_demo",
    "normalize",
    "plan_case",
]


def fractions(values):
    """Converts a list of scalar strings to Fractions."""
    return [Fraction(v) for v in values]
