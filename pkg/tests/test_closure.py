"""Newton-polyhedron closure of monomial ideals and containment checks."""

import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from _oracles import np_member_bruteforce
from bsw.closure import (MonomialIdeal, bs_verify_monomial,
                         closure_containment_witness, minimalize_antichain,
                         newton_closure, newton_facets, np_member)
from bsw.errors import ResourceCapError, StructuralError, ValidationError
from bsw.poly import RingContext, parse_polynomials

R2 = RingContext(("x", "y"))

exps2 = st.tuples(st.integers(0, 5), st.integers(0, 5))
exps3 = st.tuples(st.integers(0, 4), st.integers(0, 4), st.integers(0, 4))
mono2 = st.builds(lambda g: MonomialIdeal(2, tuple(g)),
                  st.lists(exps2, min_size=1, max_size=4))
mono3 = st.builds(lambda g: MonomialIdeal(3, tuple(g)),
                  st.lists(exps3, min_size=1, max_size=4))


def M2(*exps):
    return MonomialIdeal(2, tuple(exps))


# ---------------------------------------------------------------- basics

def test_antichain_minimalization():
    assert M2((2, 0), (3, 1), (2, 0)).exponents == ((2, 0),)
    assert minimalize_antichain([(1, 2), (2, 1), (2, 2)]) == ((1, 2), (2, 1))
    assert minimalize_antichain([(0, 0), (1, 0)]) == ((0, 0),)


def test_construction_validation():
    with pytest.raises(ValidationError):
        M2((1, -1))
    with pytest.raises(StructuralError):
        M2((1, 2, 3))
    with pytest.raises(ValidationError):
        MonomialIdeal(2, ())


def test_from_polynomials():
    M = MonomialIdeal.from_polynomials(parse_polynomials("x^2, y^2", R2))
    assert M.exponents == ((0, 2), (2, 0))
    with pytest.raises(ValidationError):
        MonomialIdeal.from_polynomials(parse_polynomials("x + y", R2))


def test_member_divisibility():
    M = M2((2, 0), (0, 2))
    assert M.member((2, 5)) and M.member((0, 2))
    assert not M.member((1, 1))
    assert M2((0, 0)).member((0, 0))  # unit ideal contains everything


def test_power():
    M = M2((1, 0), (0, 1))
    assert M.power(2).exponents == ((0, 2), (1, 1), (2, 0))
    assert M.power(1).exponents == M.exponents
    with pytest.raises(ValidationError):
        M.power(0)
    with pytest.raises(ResourceCapError):
        M.power(5, cap=3)


# ---------------------------------------------------------------- closure

def test_closure_examples():
    assert newton_closure(M2((2, 0), (0, 2))).exponents == ((0, 2), (1, 1), (2, 0))
    assert newton_closure(M2((3, 0), (0, 2))).exponents == ((0, 2), (2, 1), (3, 0))
    assert newton_closure(M2((4, 0), (0, 4))).exponents == (
        (0, 4), (1, 3), (2, 2), (3, 1), (4, 0))
    assert newton_closure(M2((1, 0), (0, 1))).exponents == ((0, 1), (1, 0))
    assert newton_closure(M2((2, 3))).exponents == ((2, 3),)
    # a staircase that is already integrally closed
    stairs = M2((2, 0), (1, 1), (0, 3))
    assert newton_closure(stairs).exponents == stairs.exponents


def test_closure_example_3d():
    M = MonomialIdeal(3, ((2, 0, 0), (0, 2, 0), (0, 0, 2)))
    got = newton_closure(M).exponents
    assert got == tuple(sorted(
        e for e in itertools.product(range(3), repeat=3) if sum(e) == 2))


@given(mono2)
def test_closure_contains_ideal(M):
    C = newton_closure(M)
    assert all(C.member(e) for e in M.exponents)


@given(mono2)
def test_closure_idempotent(M):
    C = newton_closure(M)
    assert newton_closure(C) == C


@given(mono2, st.lists(exps2, max_size=2))
def test_closure_monotone(M, extra):
    N = MonomialIdeal(2, M.exponents + tuple(extra))
    CN = newton_closure(N)
    assert all(CN.member(e) for e in newton_closure(M).exponents)


@given(st.builds(lambda g: MonomialIdeal(2, tuple(g)),
                 st.lists(exps2, min_size=1, max_size=3)),
       st.builds(lambda g: MonomialIdeal(2, tuple(g)),
                 st.lists(exps2, min_size=1, max_size=3)))
def test_closure_submultiplicative(M, N):
    prod = MonomialIdeal(2, tuple(
        tuple(a + b for a, b in zip(u, v))
        for u in M.exponents for v in N.exponents))
    CP = newton_closure(prod)
    for u in newton_closure(M).exponents:
        for v in newton_closure(N).exponents:
            assert CP.member(tuple(a + b for a, b in zip(u, v)))


@given(mono2)
def test_closure_coordinate_symmetry(M):
    swap = lambda e: (e[1], e[0])
    MS = MonomialIdeal(2, tuple(swap(e) for e in M.exponents))
    assert newton_closure(MS).exponents == tuple(
        sorted(swap(e) for e in newton_closure(M).exponents))


# ---------------------------------------------------------------- facets

@given(mono2, st.integers(2, 3))
def test_power_facets_are_scaled_facets(M, e):
    facets_M = newton_facets(M)
    facets_Me = newton_facets(M.power(e))
    box = [e * max(g[j] for g in M.exponents) + 1 for j in range(2)]
    for v in itertools.product(*(range(b + 1) for b in box)):
        assert np_member(v, facets_Me) == np_member(v, facets_M, scale=e)


@given(mono3)
def test_facets_are_valid_and_monotone(M):
    for c, r in newton_facets(M):
        assert all(ci >= 0 for ci in c)
        assert all(sum(ci * gi for ci, gi in zip(c, g)) >= r for g in M.exponents)


@given(mono2, exps2)
def test_np_member_matches_bruteforce_2d(M, v):
    # in the plane a witness combines at most two generators, with a
    # multiplier denominator bounded by a coordinate difference (<= 5)
    facets = newton_facets(M)
    assert np_member(v, facets) == np_member_bruteforce(v, M.exponents, k_max=5)


@given(mono3, exps3)
def test_np_member_sound_3d(M, v):
    if np_member_bruteforce(v, M.exponents, k_max=8):
        assert np_member(v, newton_facets(M))


# ---------------------------------------------------------------- bs check

def test_bs_verify_examples():
    assert bs_verify_monomial(M2((2, 0), (0, 2)), 1) == (True, None)
    assert bs_verify_monomial(M2((3, 0), (0, 2)), 1) == (True, None)
    for ell in (1, 2, 3):
        assert bs_verify_monomial(M2((1, 0), (0, 1)), ell) == (True, None)


def test_bs_verify_sharpness():
    # exponent min(m,d)+ell-1 = 2 is needed: closure(M) itself escapes M
    M = M2((2, 0), (0, 2))
    assert closure_containment_witness(M, 1, M) == (1, 1)
    holds, counterexample = bs_verify_monomial(M, 1, d=1)
    assert not holds and counterexample == (1, 1)


def test_bs_verify_validation():
    M = M2((2, 0), (0, 2))
    with pytest.raises(ValidationError):
        bs_verify_monomial(M, 0)
    with pytest.raises(ValidationError):
        bs_verify_monomial(M, 1, d=0)


def test_witness_arity_mismatch():
    with pytest.raises(StructuralError):
        closure_containment_witness(M2((1, 0)), 1, MonomialIdeal(3, ((1, 0, 0),)))


@given(st.builds(lambda g: MonomialIdeal(2, tuple(g)),
                 st.lists(exps2, min_size=1, max_size=3)),
       st.integers(1, 2))
def test_closure_of_power_contained_in_itself(M, e):
    target = newton_closure(M.power(e))
    assert closure_containment_witness(M, e, target) is None
