"""Exact rational arithmetic: unit-fraction predicates, reflection-order bookkeeping,
and reduction of hypergeometric exponent differences.

Everything in this module is exact; no floats enter or leave.  Rationals are
``fractions.Fraction`` throughout (arbitrary-precision, always in lowest terms
with positive denominator), serialized as "p/q" strings.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

__all__ = [
    "Rational",
    "ExponentTriple",
    "ReductionWitness",
    "ReductionError",
    "parse_rational",
    "format_rational",
    "is_unit_fraction",
    "conditional_unit_fraction",
    "is_in_two_over_n",
    "k_from_p",
    "exponent_differences",
    "reduce_parameters",
]

Rational = Fraction


class ReductionError(ValueError):
    """No reduced representative found within the search bound."""


def parse_rational(text):
    """Parse "p/q" or a plain integer string into a Fraction.

    Decimal notation is rejected on purpose: the stratum conditions are exact
    and must never be fed rounded values.
    """
    text = text.strip()
    if "." in text or "e" in text.lower():
        raise ValueError(f"expected an exact rational like '3/10', got {text!r}")
    try:
        if "/" in text:
            num, den = text.split("/")
            return Fraction(int(num), int(den))
        return Fraction(int(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"malformed rational {text!r}") from exc


def format_rational(x):
    """Canonical "p/q" string (plain integer when the denominator is 1)."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def is_unit_fraction(x):
    """True iff x = 1/n for an integer n >= 1.

    Note 1 itself qualifies (n = 1) and 0 does not: the index set here is
    {1, 2, 3, ...}.
    """
    x = Fraction(x)
    return x > 0 and x.numerator == 1


def conditional_unit_fraction(x):
    """The guarded membership test: vacuously true for x <= 0, else is_unit_fraction.

    The boundary x = 0 counts as vacuous (literal reading of the guard "if > 0");
    the enumeration layer surfaces the resulting borderline cases instead of
    patching them here.
    """
    x = Fraction(x)
    return x <= 0 or is_unit_fraction(x)


def is_in_two_over_n(x):
    """True iff x = 2/n for an integer n >= 1 (so 1/5 = 2/10 qualifies)."""
    x = Fraction(x)
    return x > 0 and x.numerator in (1, 2)


def k_from_p(p):
    """Solve (1 - 2k)/2 = 1/p for the coupling k, requiring integer p >= 3."""
    if not isinstance(p, int) or isinstance(p, bool):
        raise ValueError(f"p must be an integer, got {p!r}")
    if p < 3:
        raise ValueError(f"reflection order p must be >= 3, got {p}")
    return Fraction(p - 2, 2 * p)


@dataclass(frozen=True)
class ExponentTriple:
    """Exponent differences (kappa, lambda, mu) of a second-order Fuchsian scheme."""

    kappa: Fraction
    lam: Fraction
    mu: Fraction

    def as_tuple(self):
        return (self.kappa, self.lam, self.mu)

    def is_reduced(self):
        k, l, m = self.kappa, self.lam, self.mu
        if k < 0 or l < 0 or m < 0:
            return False
        return k + l <= 1 and k + m <= 1 and l + m <= 1


@dataclass(frozen=True)
class ReductionWitness:
    """Signs and integer shifts applied to the raw differences, in order."""

    signs: tuple
    shifts: tuple


def exponent_differences(alpha, beta, gamma):
    """Raw differences (1 - gamma, gamma - (alpha+beta), beta - alpha)."""
    alpha, beta, gamma = Fraction(alpha), Fraction(beta), Fraction(gamma)
    return ExponentTriple(1 - gamma, gamma - (alpha + beta), beta - alpha)


def reduce_parameters(alpha, beta, gamma, bound=4):
    """Find a reduced representative of the exponent-difference triple.

    Bounded exhaustive search over integer shifts in [-bound, bound] (applied
    difference-wise) and all eight sign patterns; shifts are tried in order of
    increasing total size so an already-reduced input comes back unchanged with
    the identity witness.  Raises ReductionError when the bound is too small.
    """
    raw = exponent_differences(alpha, beta, gamma).as_tuple()
    shift_range = range(-bound, bound + 1)
    shifts_ordered = sorted(
        itertools.product(shift_range, repeat=3),
        key=lambda s: (sum(abs(v) for v in s), s),
    )
    sign_patterns = [
        (1, 1, 1), (1, 1, -1), (1, -1, 1), (-1, 1, 1),
        (1, -1, -1), (-1, 1, -1), (-1, -1, 1), (-1, -1, -1),
    ]
    for shifts in shifts_ordered:
        for signs in sign_patterns:
            cand = ExponentTriple(*(e * (d + s) for e, d, s in zip(signs, raw, shifts)))
            if cand.is_reduced():
                return cand, ReductionWitness(signs=signs, shifts=shifts)
    raise ReductionError(
        f"no reduced representative of {tuple(map(format_rational, raw))} "
        f"within shift bound {bound}"
    )
