"""Polynomial arithmetic, monomial orders, parsing and printing."""

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bsw.errors import StructuralError, ValidationError
from bsw.poly import (Polynomial, RingContext, cmp_monomials, format_polynomial,
                      monomial_key, parse_polynomial, parse_polynomials,
                      weighted_degree_info)

R2 = RingContext(("x", "y"))
R3 = RingContext(("x", "y", "z"))
RW = RingContext(("z", "w"), (2, 5))


def P(text, ring=R2):
    return parse_polynomial(text, ring)


# ---------------------------------------------------------------- strategies

coeffs = st.fractions(
    min_value=Fraction(-4), max_value=Fraction(4), max_denominator=6)
exps2 = st.tuples(st.integers(0, 5), st.integers(0, 5))


@st.composite
def polys(draw, ring=R2, exps=exps2):
    terms = draw(st.dictionaries(exps, coeffs, max_size=5))
    p = Polynomial.zero(ring)
    for e, c in terms.items():
        p = p + Polynomial.monomial(ring, e, c)
    return p


# ---------------------------------------------------------------- ring axioms

@given(polys(), polys(), polys())
def test_ring_axioms(p, q, r):
    assert (p + q) + r == p + (q + r)
    assert p + q == q + p
    assert (p * q) * r == p * (q * r)
    assert p * q == q * p
    assert p * (q + r) == p * q + p * r
    assert p + Polynomial.zero(R2) == p
    assert p * Polynomial.constant(R2, 1) == p
    assert p - p == Polynomial.zero(R2)


@given(polys(), st.integers(0, 4))
def test_power_is_repeated_product(p, k):
    expect = Polynomial.constant(R2, 1)
    for _ in range(k):
        expect = expect * p
    assert p ** k == expect


@given(polys())
def test_zero_product(p):
    assert (p * Polynomial.zero(R2)).is_zero()


def test_no_zero_terms_stored():
    p = P("x + y") - P("y")
    assert p == P("x")
    assert len(p.terms()) == 1


# ---------------------------------------------------------------- orders

def test_degrevlex_tie_break():
    ctx = RingContext(("x", "y", "z"), order="degrevlex")
    # same degree: smaller exponent on the last differing variable wins
    assert cmp_monomials((1, 0, 1), (0, 1, 1), ctx) == 1
    assert cmp_monomials((2, 0, 0), (1, 1, 0), ctx) == 1
    assert cmp_monomials((1, 1, 1), (1, 1, 1), ctx) == 0


def test_weighted_order_respects_weights():
    # z has weight 2, w weight 5: w > z^2
    assert cmp_monomials((0, 1), (2, 0), RW) == 1
    assert cmp_monomials((5, 0), (0, 2), RW) == 1  # equal weight 10: revlex tie-break
    assert monomial_key((5, 0), RW)[0] == 10


def test_lex_order():
    ctx = RingContext(("x", "y"), order="lex")
    assert cmp_monomials((1, 0), (0, 9), ctx) == 1


@given(st.tuples(st.integers(0, 4), st.integers(0, 4)),
       st.tuples(st.integers(0, 4), st.integers(0, 4)),
       st.tuples(st.integers(0, 4), st.integers(0, 4)))
def test_order_is_total_and_multiplicative(a, b, c):
    # antisymmetric total order, compatible with multiplication
    s = cmp_monomials(a, b, R2)
    assert s == -cmp_monomials(b, a, R2)
    ab = tuple(x + y for x, y in zip(a, c))
    bb = tuple(x + y for x, y in zip(b, c))
    assert cmp_monomials(ab, bb, R2) == s


def test_unknown_order_rejected():
    with pytest.raises(ValidationError):
        RingContext(("x",), order="mystery")


def test_ring_validation():
    with pytest.raises(ValidationError):
        RingContext(())
    with pytest.raises(ValidationError):
        RingContext(("x", "x"))
    with pytest.raises(ValidationError):
        RingContext(("x",), (0,))
    with pytest.raises(ValidationError):
        RingContext(("x", "y"), (1,))


def test_ring_mismatch_rejected():
    with pytest.raises(StructuralError):
        P("x") + P("x", R3)


# ---------------------------------------------------------------- degrees

def test_weighted_degree_info():
    info = weighted_degree_info(P("z^5 - w^2", RW))
    assert info.min_degree == 10 and info.max_degree == 10
    assert info.quasi_homogeneous
    info2 = weighted_degree_info(P("z^2 + w", RW))
    assert not info2.quasi_homogeneous
    with pytest.raises(ValidationError):
        weighted_degree_info(Polynomial.zero(RW))


def test_derivative():
    assert P("x^3*y").derivative(0) == P("3*x^2*y")
    assert P("x^3*y").derivative(1) == P("x^3")
    assert P("z^5 - w^2", RW).derivative(1) == P("-2*w", RW)


def test_eval_complex():
    v = P("x^2 + y").eval_complex((2 + 0j, 1j))
    assert v == 4 + 1j


# ---------------------------------------------------------------- parse/print

def test_parse_examples():
    p = P("3/2*x^2*y - z", R3)
    assert p.terms() == {(2, 1, 0): Fraction(3, 2), (0, 0, 1): Fraction(-1)}
    assert P("x*(x + y)") == P("x^2 + x*y")
    assert P("(x + y)^2") == P("x^2 + 2*x*y + y^2")
    assert P("-x - -y") == P("y - x")
    assert P("7") == Polynomial.constant(R2, 7)


def test_parse_errors_carry_position():
    with pytest.raises(ValidationError) as e:
        P("x + ")
    assert "position" in str(e.value)
    with pytest.raises(ValidationError):
        P("q + 1")  # unknown variable
    with pytest.raises(ValidationError):
        P("x^-2")
    with pytest.raises(ValidationError):
        P("(x + y")
    with pytest.raises(ValidationError):
        P("")


def test_parse_polynomials_splits_top_level():
    lst = parse_polynomials("x^2, (x + y), y", R2)
    assert lst == [P("x^2"), P("x + y"), P("y")]


def test_format_canonical():
    assert str(P("y + x^2 - 1")) == "x^2 + y - 1"
    assert str(P("-x*y")) == "-x*y"
    assert str(P("1/2*x - 3/4")) == "1/2*x - 3/4"
    assert str(Polynomial.zero(R2)) == "0"
    assert format_polynomial(P("w^2 - z^5", RW)) == "-z^5 + w^2"  # weight 10 tie, revlex


@given(polys())
def test_print_parse_round_trip(p):
    assert parse_polynomial(format_polynomial(p), R2) == p


@given(polys(), polys())
def test_hash_consistent_with_eq(p, q):
    if p == q:
        assert hash(p) == hash(q)
