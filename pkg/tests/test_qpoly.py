from fractions import Fraction

import mpmath
import pytest
import sympy as sp
from hypothesis import assume, given
from hypothesis import strategies as st

from conftest import from_sympy, int_polys, rat_polys, t, to_sympy
from ellsurf.qpoly import (
    INF,
    NEG_INF,
    ONE,
    ZERO,
    Poly,
    PolySyntaxError,
    RatFunc,
    coefficient_strings,
    format_poly,
    from_coefficient_strings,
    gcd,
    is_squarefree,
    mahler_measure,
    naive_height,
    parse_poly,
    parse_ratfunc,
    reverse_pad,
    squarefree_decompose,
    valuation,
)
from ellsurf.qpoly import T as TP

F = Fraction


def mahler_oracle(f: Poly) -> float:
    """Mahler measure from 40-digit mpmath roots of sympy's squarefree factors."""
    lc, factors = sp.sqf_list(to_sympy(f))
    out = mpmath.mpf(abs(float(lc)))
    with mpmath.workdps(40):
        for g, e in factors:
            cs = [mpmath.mpf(sp.Rational(c).p) / sp.Rational(c).q for c in g.all_coeffs()]
            out *= abs(cs[0]) ** e
            if len(cs) > 1:
                for r in mpmath.polyroots(cs, maxsteps=200, extraprec=100):
                    out *= max(1, abs(r)) ** e
    return float(out)


# --- construction and arithmetic -------------------------------------------


def test_canonical_form_strips_trailing_zeros():
    assert Poly([1, 2, 0, 0]).coeffs == (F(1), F(2))
    assert Poly([0, 0]).is_zero()
    assert Poly([]).degree == NEG_INF
    assert ZERO.degree < 0 < ONE.degree + 1


def test_zero_degree_is_sentinel_not_minus_one():
    assert ZERO.degree != -1
    assert ZERO.degree == NEG_INF


def test_arithmetic_small():
    f = Poly([1, 1])
    assert f * f == Poly([1, 2, 1])
    assert f**3 == Poly([1, 3, 3, 1])
    q, r = divmod(Poly([1, 0, 1]), f)
    assert q == Poly([-1, 1]) and r == Poly([2])
    assert (Poly([1, 3, 3, 1])).exact_div(f) == f * f
    with pytest.raises(ArithmeticError):
        Poly([1, 0, 1]).exact_div(f)


def test_evaluation_and_derivative():
    f = Poly([F(1, 2), 0, 3])
    assert f(F(1, 3)) == F(1, 2) + F(1, 3)
    assert f.derivative() == Poly([0, 6])


@given(rat_polys(), rat_polys(), rat_polys())
def test_ring_laws_against_sympy(f, g, h):
    assert to_sympy(f * (g + h)) == to_sympy(f) * (to_sympy(g) + to_sympy(h))
    assert to_sympy(f - g) == to_sympy(f) - to_sympy(g)


@given(rat_polys(), rat_polys())
def test_division_matches_sympy(f, g):
    assume(g)
    q, r = divmod(f, g)
    sq, sr = sp.div(to_sympy(f), to_sympy(g))
    assert q == from_sympy(sq) and r == from_sympy(sr)


# --- parsing and formatting -----------------------------------------------


@pytest.mark.parametrize(
    "text, coeffs",
    [
        ("t", [0, 1]),
        ("4*t^3 + 27", [27, 0, 0, 4]),
        ("1/2*t^2 - 3", [-3, 0, F(1, 2)]),
        ("  -7*t^6+2*t^3 +1 ", [1, 0, 0, 2, 0, 0, -7]),
        ("0", []),
        ("t^2 - t^2", []),
        ("3 + t + t", [3, 2]),
        ("-3+2", [-1]),
        ("t^0", [1]),
    ],
)
def test_parse_examples(text, coeffs):
    assert parse_poly(text) == Poly(coeffs)


@pytest.mark.parametrize(
    "text, offset",
    [("", 0), ("t +", 3), ("2**t", 2), ("t^", 2), ("x", 0), ("1/0", 2), ("-t", 1), ("3 t", 2)],
)
def test_parse_errors_report_offset(text, offset):
    with pytest.raises(PolySyntaxError) as exc:
        parse_poly(text)
    assert exc.value.offset == offset


def test_parse_rejects_huge_exponent():
    with pytest.raises(PolySyntaxError):
        parse_poly("t^99999999")


@given(rat_polys(max_degree=8))
def test_format_parse_round_trip(f):
    assert parse_poly(format_poly(f)) == f
    assert from_coefficient_strings(coefficient_strings(f)) == f


def test_coefficient_strings_low_to_high():
    assert coefficient_strings(Poly([F(-3), 0, F(1, 2)])) == ["-3", "0", "1/2"]


# --- gcd and squarefree -----------------------------------------------------


@given(int_polys(), int_polys(), int_polys(max_degree=3))
def test_gcd_matches_sympy(f, g, h):
    a, b = f * h, g * h
    expected = sp.gcd(to_sympy(a), to_sympy(b))
    got = gcd(a, b)
    if expected.is_zero:
        assert got.is_zero()
    else:
        assert to_sympy(got) == expected.monic()


def test_gcd_zero_cases():
    assert gcd(ZERO, ZERO).is_zero()
    assert gcd(ZERO, Poly([2, 4])) == Poly([F(1, 2), 1])


@pytest.mark.parametrize(
    "f, expected",
    [
        (TP**3 + TP**2, [(TP, 2), (TP + 1, 1)]),
        (Poly([27, 0, 0, 4]), [(Poly([F(27, 4), 0, 0, 1]), 1)]),
        ((TP**2 + 1) ** 2, [(TP**2 + 1, 2)]),
    ],
)
def test_squarefree_examples(f, expected):
    assert sorted(squarefree_decompose(f), key=lambda x: x[1]) == sorted(expected, key=lambda x: x[1])


def test_squarefree_example_gcd_with_derivative_is_one():
    g = Poly([27, 0, 0, 4])
    assert gcd(g, g.derivative()) == ONE


def test_squarefree_edge_cases():
    assert squarefree_decompose(Poly([5])) == []
    with pytest.raises(ValueError):
        squarefree_decompose(ZERO)


@given(int_polys(max_degree=3, nonzero=True), int_polys(max_degree=3, nonzero=True), int_polys(max_degree=2, nonzero=True))
def test_squarefree_reconstructs(f, g, h):
    p = f * g * g * h * h * h
    parts = squarefree_decompose(p)
    prod = ONE
    for q, e in parts:
        assert q.lc == 1
        assert gcd(q, q.derivative()) == ONE
        prod = prod * q**e
    assert prod * p.lc == p
    mults = [e for _, e in parts]
    assert len(mults) == len(set(mults))


@given(int_polys(max_degree=8, nonzero=True))
def test_squarefree_agrees_with_sympy(f):
    _, sym = sp.sqf_list(to_sympy(f))
    by_mult = {}
    for g, e in sym:
        by_mult[e] = by_mult.get(e, 1) * g.monic()
    ours = {e: to_sympy(g) for g, e in squarefree_decompose(f)}
    assert ours == {e: g.monic() for e, g in by_mult.items()}
    assert is_squarefree(f) == (sp.gcd(to_sympy(f), to_sympy(f).diff(t)).degree() == 0)


# --- valuation, reversal, heights ----------------------------------------


def test_valuation_examples():
    assert valuation(TP**5 + TP**3, TP) == 3
    assert valuation(Poly([27, 0, 0, 4]), TP - 1) == 0
    assert valuation(ZERO, TP) == INF


def test_valuation_requires_monic_nonconstant():
    with pytest.raises(ValueError):
        valuation(TP, Poly([3]))
    with pytest.raises(ValueError):
        valuation(TP, TP * 2)


@given(int_polys(nonzero=True), int_polys(nonzero=True), st.sampled_from([TP, TP + 1, TP**2 + 1, TP**2 - 2]))
def test_valuation_additive(f, g, p):
    assert valuation(f * g, p) == valuation(f, p) + valuation(g, p)


def test_reverse_pad_examples():
    assert reverse_pad(TP, 4) == TP**3
    assert reverse_pad(ONE, 6) == TP**6
    assert reverse_pad(TP**4, 4) == ONE
    with pytest.raises(ValueError):
        reverse_pad(TP**5, 4)


@given(rat_polys(max_degree=6), st.integers(0, 4))
def test_reverse_pad_involution(f, extra):
    assume(f)
    d = f.degree + extra
    assert reverse_pad(reverse_pad(f, d), d) == f


def test_naive_height_examples():
    assert naive_height(Poly([-5, 0, 3])) == 5
    assert naive_height(ZERO) == 0
    assert naive_height(Poly([3, F(1, 2)])) == 3


# --- Mahler measure --------------------------------------------------------


def test_mahler_examples():
    assert mahler_measure(TP).value == pytest.approx(1, abs=1e-12)
    r = mahler_measure(TP**2 - 2)
    assert abs(r.value - 2) < 1e-9
    assert r.error < 1e-9
    assert mahler_measure(Poly([4, 2])).value == pytest.approx(4, abs=1e-10)


def test_mahler_repeated_roots_and_constants():
    assert mahler_measure(Poly([-7])).value == 7
    assert mahler_measure((TP - 3) ** 4 * (TP + F(1, 2))).value == pytest.approx(81, rel=1e-10)


@given(int_polys(max_degree=8, bound=20, nonzero=True))
def test_mahler_matches_mpmath(f):
    assume(f.degree >= 1)
    r = mahler_measure(f)
    assert r.value == pytest.approx(mahler_oracle(f), rel=1e-8)


@given(int_polys(max_degree=8, nonzero=True), int_polys(max_degree=8, nonzero=True))
def test_mahler_multiplicative(f, g):
    mf, mg, mfg = mahler_measure(f), mahler_measure(g), mahler_measure(f * g)
    assert mfg.value == pytest.approx(mf.value * mg.value, rel=1e-8)


@given(int_polys(max_degree=6, nonzero=True), st.fractions(min_value=-50, max_value=50, max_denominator=20))
def test_mahler_scaling(f, c):
    assume(c)
    assert mahler_measure(f * c).value == pytest.approx(abs(float(c)) * mahler_measure(f).value, rel=1e-9)


# --- rational functions -----------------------------------------------------


def test_ratfunc_reduces_and_normalizes():
    r = RatFunc(TP**2 - 1, (TP - 1) * 2)
    assert r.num == Poly([F(1, 2), F(1, 2)]) and r.den == ONE
    assert RatFunc(TP, TP) == RatFunc(ONE)
    with pytest.raises(ZeroDivisionError):
        RatFunc(TP, ZERO)


def test_ratfunc_reverse_and_order():
    r = RatFunc(TP**2 + 1, TP)
    assert r.order_at_infinity() == -1
    # s^2 * r(1/s) = s (1 + s^2)
    assert r.reverse(2) == RatFunc(TP + TP**3)


def test_parse_ratfunc_forms():
    assert parse_ratfunc("2*t^2") == RatFunc(2 * TP**2)
    assert parse_ratfunc("(t^2 - 1)/(t - 1)") == RatFunc(TP + 1)
    assert parse_ratfunc("1/t^2") == RatFunc(ONE, TP**2)
    assert parse_ratfunc("t^4 + 1/t^3") == RatFunc(TP**4 + 1, TP**3)
    assert parse_ratfunc("1/2*t") == RatFunc(TP * F(1, 2))
    with pytest.raises(PolySyntaxError):
        parse_ratfunc("(t")
