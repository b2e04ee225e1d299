"""Exact-arithmetic layer: predicates and exponent-difference reduction."""

from fractions import Fraction as F

import pytest

from schwarz_atlas.exact import (
    ExponentTriple,
    ReductionError,
    conditional_unit_fraction,
    exponent_differences,
    format_rational,
    is_in_two_over_n,
    is_unit_fraction,
    k_from_p,
    parse_rational,
    reduce_parameters,
)


def test_unit_fraction_basics():
    assert is_unit_fraction(F(1, 3))
    assert not is_unit_fraction(F(2, 3))
    assert not is_unit_fraction(F(0))
    assert is_unit_fraction(F(1))
    assert not is_unit_fraction(F(-1, 4))


def test_unit_fraction_random_range():
    for n in range(1, 2000):
        assert is_unit_fraction(F(1, n))
        assert not is_unit_fraction(F(1, n) + 1 if n == 1 else F(n + 1, n))
    # a sparse sweep further out
    for n in (10**3, 10**4 + 7, 10**6):
        assert is_unit_fraction(F(1, n))


def test_conditional_unit_fraction():
    assert conditional_unit_fraction(F(-1, 12))
    assert conditional_unit_fraction(F(0))      # vacuous at the boundary
    assert not conditional_unit_fraction(F(5, 8))
    assert conditional_unit_fraction(F(1, 8))


def test_two_over_n():
    assert is_in_two_over_n(F(1, 5))   # 2/10
    assert is_in_two_over_n(F(2, 7))
    assert is_in_two_over_n(F(2))      # 2/1
    assert not is_in_two_over_n(F(3, 7))
    assert not is_in_two_over_n(F(0))


def test_k_from_p_values():
    assert k_from_p(3) == F(1, 6)
    assert k_from_p(4) == F(1, 4)
    assert k_from_p(10) == F(2, 5)
    with pytest.raises(ValueError):
        k_from_p(2)
    with pytest.raises(ValueError):
        k_from_p("4")


def test_k_from_p_round_trip():
    for p in range(3, 500):
        k = k_from_p(p)
        assert (1 - 2 * k) / 2 == F(1, p)
        # denominators like 2p never overflow
        assert k.denominator <= 2 * p


def test_exact_addition_two_ways():
    a, b = F(3517, 9041), F(-221, 7919)
    assert a + b == F(3517 * 7919 + (-221) * 9041, 9041 * 7919)


def test_rational_serialization():
    assert format_rational(F(-3, 7)) == "-3/7"
    assert format_rational(F(4, 2)) == "2"
    assert parse_rational("-3/7") == F(-3, 7)
    assert parse_rational(" 5 ") == F(5)
    for bad in ("1/0", "x", "0.5", "1e-3"):
        with pytest.raises(ValueError):
            parse_rational(bad)


def test_exponent_differences_forward():
    d = exponent_differences(F(1, 84), F(13, 84), F(1, 2))
    assert d.as_tuple() == (F(1, 2), F(1, 3), F(1, 7))
    assert d.is_reduced()


def test_reduce_identity_on_reduced_input():
    triple, witness = reduce_parameters(F(1, 84), F(13, 84), F(1, 2))
    assert triple.as_tuple() == (F(1, 2), F(1, 3), F(1, 7))
    assert witness.signs == (1, 1, 1)
    assert witness.shifts == (0, 0, 0)


def test_reduce_zero_case():
    triple, _ = reduce_parameters(F(1, 2), F(1, 2), F(1))
    assert triple.as_tuple() == (F(0), F(0), F(0))


def _search_oracle(alpha, beta, gamma, bound=3):
    """Independent exhaustive search: all shifts in [-bound, bound], all sign
    patterns, collect every reduced candidate."""
    raw = exponent_differences(alpha, beta, gamma).as_tuple()
    found = []
    for s1 in range(-bound, bound + 1):
        for s2 in range(-bound, bound + 1):
            for s3 in range(-bound, bound + 1):
                for e1 in (1, -1):
                    for e2 in (1, -1):
                        for e3 in (1, -1):
                            cand = ExponentTriple(
                                e1 * (raw[0] + s1), e2 * (raw[1] + s2), e3 * (raw[2] + s3))
                            if cand.is_reduced():
                                found.append(cand.as_tuple())
    return found


def test_reduce_matches_search_oracle():
    alpha, beta, gamma = F(-1, 2), F(1, 3), F(6, 7)
    triple, witness = reduce_parameters(alpha, beta, gamma)
    assert triple.is_reduced()
    assert triple.as_tuple() in _search_oracle(alpha, beta, gamma)
    # the witness reproduces the output from the raw differences
    raw = exponent_differences(alpha, beta, gamma).as_tuple()
    rebuilt = tuple(e * (d + s) for e, d, s in zip(witness.signs, raw, witness.shifts))
    assert rebuilt == triple.as_tuple()


def test_reduce_always_succeeds_on_moderate_inputs():
    vals = [F(n, d) for n in range(-3, 4) for d in (2, 3, 7)]
    for alpha in vals[::3]:
        for beta in vals[::4]:
            for gamma in vals[::5]:
                triple, _ = reduce_parameters(alpha, beta, gamma)
                k, l, m = triple.as_tuple()
                assert k >= 0 and l >= 0 and m >= 0
                assert k + l <= 1 and k + m <= 1 and l + m <= 1


def test_reduce_failure_reported():
    with pytest.raises(ReductionError):
        reduce_parameters(F(100), F(0), F(0), bound=2)
