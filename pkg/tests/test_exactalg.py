from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, strategies as st

from filiform.exactalg import (
    MultiplicativeSet, NotInvertible, NotLinear, ParseError, PolyFraction, Polynomial, T,
    a, const, linear_span_member, m, parse, rank, rational_str, row_reduce, solve_linear,
    substitute_fractions, to_rational, var,
)
from oracles import to_sympy

VARS = [a(1, 4), a(2, 6), a(3, 8), m(3, 2), m(4, 1), T]

coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def polys(draw, max_terms=4):
    p = Polynomial.zero()
    for _ in range(draw(st.integers(0, max_terms))):
        c = draw(coeffs)
        mono = const(c)
        for v in draw(st.lists(st.sampled_from(VARS), max_size=3)):
            mono = mono * var(v)
        p = p + mono
    return p


def test_parse_and_print_canonical():
    p = parse("a[1,4]*m[3,2]^2 - 1/2*t + 3")
    assert str(p) == str(parse(str(p)))
    assert p.degree(m(3, 2)) == 2
    assert p.eval({a(1, 4): Fraction(2), m(3, 2): Fraction(1), T: Fraction(4)}) == 3


def test_parse_rejects_garbage():
    with pytest.raises(ParseError):
        parse("a[1,4] +* 2")


def test_rational_helpers():
    assert to_rational("-6/4") == Fraction(-3, 2)
    assert rational_str(Fraction(128, 5)) == "128/5"
    assert rational_str(Fraction(4)) == "4"
    with pytest.raises(TypeError):
        to_rational(0.5)


@given(polys(), polys(), polys())
def test_ring_axioms(p, q, r):
    assert p + q == q + p
    assert p * q == q * p
    assert (p + q) + r == p + (q + r)
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert p - p == Polynomial.zero()
    assert p * Polynomial.one() == p


@given(polys(), polys())
def test_products_agree_with_sympy(p, q):
    assert to_sympy(p * q) == sp.expand(to_sympy(p) * to_sympy(q))
    assert to_sympy(p - q) == sp.expand(to_sympy(p) - to_sympy(q))


@given(polys())
def test_text_round_trip(p):
    assert parse(str(p)) == p


@given(polys(), polys())
def test_exact_division(p, q):
    if q.is_zero():
        return
    assert (p * q).exact_div(q) == p


def test_multiplicative_set_certification():
    s = MultiplicativeSet(["a[1,4]", "a[2,6] - a[1,4]"])
    assert s.certifies(parse("-3*a[1,4]^2*(a[2,6] - a[1,4])"))
    assert not s.certifies(parse("a[1,4] + 1"))
    assert not s.certifies(Polynomial.zero())
    with pytest.raises(ValueError):
        MultiplicativeSet([Polynomial.zero()])


def test_solve_linear_certified_and_not():
    s = MultiplicativeSet(["a[1,4]"])
    sol, c = solve_linear(parse("a[1,4]*m[4,2] - a[1,4]*m[3,2]^2"), m(4, 2), s)
    assert sol == PolyFraction(parse("m[3,2]^2")) and c == parse("a[1,4]")
    with pytest.raises(NotInvertible):
        solve_linear(parse("a[2,6]*m[4,2] + 1"), m(4, 2), s)
    with pytest.raises(NotLinear):
        solve_linear(parse("m[4,2]^2 + 1"), m(4, 2), s)


def test_substitute_fractions_clears_denominators():
    f = PolyFraction(parse("m[3,2]"), parse("a[1,4]"))
    out = substitute_fractions(parse("a[1,4]^2*m[5,2]^2 + 1"), {m(5, 2): f})
    assert out == PolyFraction(parse("m[3,2]^2 + 1"))


def test_row_reduce_matches_sympy_rank():
    rows = [[1, 2, 3], [2, 4, 6], [0, 1, Fraction(1, 2)]]
    red, piv = row_reduce(rows)
    assert rank(rows) == sp.Matrix(rows).rank() == 2
    assert piv == [0, 1]


@given(st.lists(st.lists(st.integers(-3, 3), min_size=4, max_size=4), min_size=1, max_size=5))
def test_rank_property(rows):
    assert rank(rows) == sp.Matrix(rows).rank()


def test_linear_span_member():
    p, q = parse("a[1,4] + a[2,6]"), parse("a[2,6] - a[3,8]")
    c = linear_span_member(parse("2*a[1,4] + 3*a[2,6] - a[3,8]"), [p, q])
    assert c == [2, 1]
    assert linear_span_member(parse("a[1,4]*a[2,6]"), [p, q]) is None
