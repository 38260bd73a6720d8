"""Ideals and Groebner bases over Q[x_1..x_n].

Plain Buchberger with the product criterion, the chain criterion and
normal-strategy pair selection; no F4/F5.  Every run is budgeted: one
work unit per pair treated and per single reduction step, and running
out raises BudgetExceededError carrying the partial basis.

Krull dimension comes from the leading-term ideal of a reduced basis via
maximal independent variable subsets; intersection goes through one
auxiliary elimination variable with the internal elim1 block order.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .errors import BudgetExceededError, ResourceCapError, StructuralError, ValidationError
from .poly import (
    Exponent,
    Polynomial,
    RingContext,
    exp_add,
    exp_divides,
    exp_lcm,
    exp_sub,
)

DEFAULT_BUDGET = 500_000
POWER_CAP = 200_000


class GroebnerBasis:
    """Reduced Groebner basis: monic, auto-reduced, sorted by leading term."""

    __slots__ = ("elements", "order", "ring")

    def __init__(self, elements, order: str, ring: RingContext):
        self.elements = tuple(elements)
        self.order = order
        self.ring = ring

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def is_unit(self) -> bool:
        return len(self.elements) == 1 and self.elements[0].constant_value() == 1

    def __str__(self):
        return "{" + ", ".join(str(g) for g in self.elements) + "}"


class Ideal:
    """Finitely generated ideal; caches its reduced basis once computed."""

    __slots__ = ("ring", "generators", "_gb")

    def __init__(self, ring: RingContext, generators):
        gens = []
        for g in generators:
            if not isinstance(g, Polynomial):
                raise StructuralError("ideal generators must be Polynomials")
            if g.ring != ring:
                raise StructuralError("generator ring mismatch")
            if not g.is_zero():
                gens.append(g)
        self.ring = ring
        self.generators = tuple(gens)
        self._gb: GroebnerBasis | None = None

    def groebner(self, budget: int | None = None) -> GroebnerBasis:
        if self._gb is None:
            self._gb = groebner_basis(self, budget=budget)
        return self._gb

    def __str__(self):
        return "(" + ", ".join(str(g) for g in self.generators) + ")"


class _Budget:
    __slots__ = ("left", "total")

    def __init__(self, units: int):
        self.left = units
        self.total = units

    def spend(self, cost: int, partial):
        self.left -= cost
        if self.left < 0:
            raise BudgetExceededError(
                f"Groebner budget of {self.total} work units exhausted",
                partial=tuple(partial),
                spent=self.total - self.left,
            )


def _divide(p: Polynomial, reducers: list[Polynomial], budget: _Budget | None = None):
    """Multivariate division: p = sum q_i * reducers[i] + r.

    Deterministic: always cancels the largest reducible term, trying
    reducers in list order.  No term of r is divisible by any leading
    term of the reducers.
    """
    ring = p.ring
    key = ring.order_key
    lts = [g.leading_term() for g in reducers]
    quotients = [Polynomial.zero(ring) for _ in reducers]
    remainder: dict[Exponent, Fraction] = {}
    h = p
    while not h.is_zero():
        e, c = h.leading_term()
        hit = -1
        for i, (elt, clt) in enumerate(lts):
            if exp_divides(elt, e):
                hit = i
                break
        if budget is not None:
            budget.spend(1, reducers)
        if hit < 0:
            remainder[e] = c
            h = h - Polynomial.monomial(ring, e, c)
        else:
            factor = c / lts[hit][1]
            shift = exp_sub(e, lts[hit][0])
            quotients[hit] = quotients[hit] + Polynomial.monomial(ring, shift, factor)
            h = h - reducers[hit].mul_term(shift, factor)
    return quotients, Polynomial(ring, remainder)


def normal_form(p: Polynomial, basis, budget: int | None = None) -> Polynomial:
    """Normal form of p against a Groebner basis (unique remainder)."""
    reducers = _as_reducers(p, basis)
    b = _Budget(budget) if budget is not None else None
    _, r = _divide(p, reducers, b)
    return r


def _as_reducers(p: Polynomial, basis) -> list[Polynomial]:
    if isinstance(basis, GroebnerBasis):
        if basis.ring != p.ring:
            raise StructuralError("basis ring does not match polynomial ring")
        if basis.order != p.ring.order:
            raise StructuralError("basis order does not match ring order")
        return list(basis.elements)
    return list(basis)


def _spoly(f: Polynomial, g: Polynomial) -> Polynomial:
    ef, cf = f.leading_term()
    eg, cg = g.leading_term()
    lcm = exp_lcm(ef, eg)
    return f.mul_term(exp_sub(lcm, ef), 1 / cf) - g.mul_term(exp_sub(lcm, eg), 1 / cg)


def buchberger(gens: list[Polynomial], ring: RingContext, budget: _Budget) -> list[Polynomial]:
    """Core loop; returns a (non-reduced) basis containing the input."""
    G: list[Polynomial] = []
    for g in sorted((g for g in gens if not g.is_zero()),
                    key=lambda g: ring.order_key(g.leading_monomial())):
        G.append(g.monic())
    pairs = {(i, j) for i in range(len(G)) for j in range(i + 1, len(G))}
    done: set[tuple[int, int]] = set()

    def lcm_of(i: int, j: int) -> Exponent:
        return exp_lcm(G[i].leading_monomial(), G[j].leading_monomial())

    while pairs:
        # normal strategy: smallest lcm in the ring order, ties by index
        i, j = min(pairs, key=lambda ij: (ring.order_key(lcm_of(*ij)), ij))
        pairs.discard((i, j))
        done.add((i, j))
        budget.spend(1, G)
        ei = G[i].leading_monomial()
        ej = G[j].leading_monomial()
        lcm = exp_lcm(ei, ej)
        # product criterion: coprime leading terms reduce to zero
        if lcm == exp_add(ei, ej):
            continue
        # chain criterion: some g_k divides the lcm and both side pairs settled
        skip = False
        for k in range(len(G)):
            if k == i or k == j:
                continue
            if exp_divides(G[k].leading_monomial(), lcm):
                a = (min(i, k), max(i, k))
                b = (min(j, k), max(j, k))
                if a not in pairs and b not in pairs:
                    skip = True
                    break
        if skip:
            continue
        _, r = _divide(_spoly(G[i], G[j]), G, budget)
        if not r.is_zero():
            G.append(r.monic())
            t = len(G) - 1
            pairs.update((i2, t) for i2 in range(t))
    return G


def _reduce_basis(G: list[Polynomial], ring: RingContext, budget: _Budget) -> tuple[Polynomial, ...]:
    # minimal: drop elements whose lt is divisible by another lt
    G = sorted(G, key=lambda g: ring.order_key(g.leading_monomial()))
    minimal: list[Polynomial] = []
    for idx, g in enumerate(G):
        e = g.leading_monomial()
        others = [h.leading_monomial() for k, h in enumerate(G) if k != idx]
        if any(exp_divides(o, e) for o in others if o != e) or any(
            o == e for o in (h.leading_monomial() for h in minimal)
        ):
            continue
        minimal.append(g)
    # reduced: each element in normal form against the rest
    reduced: list[Polynomial] = []
    for idx, g in enumerate(minimal):
        rest = minimal[:idx] + minimal[idx + 1:]
        _, r = _divide(g, rest, budget)
        if not r.is_zero():
            reduced.append(r.monic())
    reduced.sort(key=lambda g: ring.order_key(g.leading_monomial()))
    return tuple(reduced)


def groebner_basis(I: Ideal, budget: int | None = None) -> GroebnerBasis:
    """Reduced Groebner basis of I in its ring's order, budgeted."""
    ring = I.ring
    b = _Budget(budget if budget is not None else DEFAULT_BUDGET)
    if not I.generators:
        return GroebnerBasis((), ring.order, ring)
    G = buchberger(list(I.generators), ring, b)
    return GroebnerBasis(_reduce_basis(G, ring, b), ring.order, ring)


def ideal_member(p: Polynomial, I: Ideal, budget: int | None = None,
                 certificate: bool = False):
    """Membership via zero normal form against the reduced basis.

    With certificate=True returns (bool, cofactors) where the cofactors
    are the division record h_i against the basis elements, so that
    p = sum h_i g_i exactly when the bool is True.
    """
    if p.ring != I.ring:
        raise StructuralError("polynomial and ideal rings differ")
    gb = I.groebner(budget=budget)
    qs, r = _divide(p, list(gb.elements))
    member = r.is_zero()
    if certificate:
        return member, (tuple(qs) if member else None)
    return member


def ideal_combine(I: Ideal, J: Ideal, kind: str, budget: int | None = None) -> Ideal:
    """sum | product | intersection of two ideals in the same ring."""
    if I.ring != J.ring:
        raise StructuralError("ideals live in different rings")
    ring = I.ring
    if kind == "sum":
        return Ideal(ring, I.generators + J.generators)
    if kind == "product":
        gens = [f * g for f in I.generators for g in J.generators]
        return Ideal(ring, gens)
    if kind == "intersection":
        return _intersect(I, J, budget)
    raise ValidationError(f"unknown combine kind {kind!r}")


def _fresh_tname(ring: RingContext) -> str:
    t = "_t"
    while t in ring.variable_names:
        t += "_"
    return t


def _intersect(I: Ideal, J: Ideal, budget: int | None) -> Ideal:
    """I cap J = (t*I + (1-t)*J) cap Q[x] with one elimination variable."""
    ring = I.ring
    if not I.generators or not J.generators:
        return Ideal(ring, ())
    ext = RingContext(
        (_fresh_tname(ring),) + ring.variable_names,
        (1,) + ring.weights,
        "elim1",
    )

    def lift(p: Polynomial, tdeg: int) -> Polynomial:
        return Polynomial(ext, {(tdeg,) + e: c for e, c in p.terms().items()})

    t = Polynomial.variable(ext, 0)
    one = Polynomial.constant(ext, 1)
    gens = [t * lift(g, 0) for g in I.generators]
    gens += [(one - t) * lift(g, 0) for g in J.generators]
    gb = Ideal(ext, gens).groebner(budget=budget)
    out = []
    for g in gb.elements:
        tms = g.terms()
        if all(e[0] == 0 for e in tms):
            out.append(Polynomial(ring, {e[1:]: c for e, c in tms.items()}))
    return Ideal(ring, out)


def ideal_power(I: Ideal, ell: int, cap: int = POWER_CAP) -> Ideal:
    """I^ell from products of generators; guarded against blowup."""
    if ell < 1:
        raise ValidationError("power wants ell >= 1")
    m = len(I.generators)
    if m == 0:
        return Ideal(I.ring, ())
    if m ** ell > cap:
        raise ResourceCapError(f"ideal power would need {m ** ell} products (cap {cap})")
    gens = [
        _product(I.ring, combo)
        for combo in itertools.combinations_with_replacement(I.generators, ell)
    ]
    return Ideal(I.ring, gens)


def _product(ring: RingContext, polys) -> Polynomial:
    out = Polynomial.constant(ring, 1)
    for p in polys:
        out = out * p
    return out


def krull_dimension(I: Ideal, budget: int | None = None) -> int:
    """dim V(I): largest variable subset independent modulo leading terms.

    Unit ideal -> -1 (empty variety); zero ideal in n vars -> n.
    """
    ring = I.ring
    gb = I.groebner(budget=budget)
    if not gb.elements:
        return ring.n
    supports = []
    for g in gb.elements:
        e = g.leading_monomial()
        supports.append(frozenset(i for i, k in enumerate(e) if k > 0))
    if frozenset() in supports:
        return -1  # a unit leading term
    n = ring.n
    for size in range(n, -1, -1):
        for S in itertools.combinations(range(n), size):
            Sset = set(S)
            if all(not sup <= Sset for sup in supports):
                return size
    return -1
