"""Groebner bases for submodules of free modules, and syzygies.

A vector polynomial is a dict from module monomial (component, exponent)
to Fraction.  Syzygies of columns m_1..m_c of a matrix over O^r are read
off a Groebner basis of the graph module generated by w_j = m_j + e_j
inside O^r + O^c, under a block order where the image block dominates:
basis elements whose image part vanishes are exactly a basis of the
syzygy module, and within the tail block we use the Schreyer order
induced by the leading terms of the m_j (ties to the smaller column), so
the result is a Groebner basis of Syz(m_1..m_c) under that induced order.

The product criterion is unsound for modules, so only the chain
criterion prunes pairs here.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import BudgetExceededError, StructuralError, ValidationError
from .poly import Exponent, Polynomial, RingContext, exp_add, exp_divides, exp_lcm, exp_sub

ModMono = tuple[int, Exponent]  # (component, exponent)

MODULE_ORDER_TAG = "module-Schreyer"


class VecPoly:
    """Element of a free module O^ncomp, sparse over module monomials."""

    __slots__ = ("ring", "ncomp", "terms")

    def __init__(self, ring: RingContext, ncomp: int, terms):
        clean: dict[ModMono, Fraction] = {}
        items = terms.items() if isinstance(terms, dict) else terms
        for (pos, e), c in items:
            c = Fraction(c)
            if c == 0:
                continue
            if not 0 <= pos < ncomp:
                raise StructuralError("component index out of range")
            key = (pos, tuple(e))
            s = clean.get(key, Fraction(0)) + c
            if s == 0:
                clean.pop(key, None)
            else:
                clean[key] = s
        self.ring = ring
        self.ncomp = ncomp
        self.terms = clean

    def is_zero(self) -> bool:
        return not self.terms

    def add(self, other: "VecPoly") -> "VecPoly":
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = out.get(k, Fraction(0)) + c
            if s == 0:
                out.pop(k, None)
            else:
                out[k] = s
        return VecPoly(self.ring, self.ncomp, out)

    def scale(self, c) -> "VecPoly":
        c = Fraction(c)
        return VecPoly(self.ring, self.ncomp, {k: c * v for k, v in self.terms.items()})

    def mul_term(self, e: Exponent, c) -> "VecPoly":
        c = Fraction(c)
        return VecPoly(
            self.ring,
            self.ncomp,
            {(p, exp_add(e0, e)): c * v for (p, e0), v in self.terms.items()},
        )

    def sub(self, other: "VecPoly") -> "VecPoly":
        return self.add(other.scale(-1))

    def component(self, pos: int) -> Polynomial:
        return Polynomial(
            self.ring, {e: c for (p, e), c in self.terms.items() if p == pos}
        )

    @classmethod
    def from_column(cls, ring: RingContext, column: list[Polynomial]) -> "VecPoly":
        terms = {}
        for pos, poly in enumerate(column):
            for e, c in poly.terms().items():
                terms[(pos, e)] = c
        return cls(ring, len(column), terms)


class ModuleOrder:
    """Key-based order on module monomials; bigger key = bigger monomial."""

    def key(self, m: ModMono):
        raise NotImplementedError

    def leading(self, v: VecPoly) -> tuple[ModMono, Fraction]:
        if v.is_zero():
            raise ValidationError("zero vector has no leading term")
        m = max(v.terms, key=self.key)
        return m, v.terms[m]


class TopOrder(ModuleOrder):
    """Ring order on the monomial, ties to the smaller component."""

    def __init__(self, ctx: RingContext):
        self.ctx = ctx

    def key(self, m: ModMono):
        pos, e = m
        return (self.ctx.order_key(e), -pos)


class SchreyerOrder(ModuleOrder):
    """Order induced by leading terms of inducing columns.

    x^a e_j > x^b e_k iff lt(x^a m_j) > lt(x^b m_k) under the base
    order on the target module, with ties going to the smaller column.
    """

    def __init__(self, base: ModuleOrder, inducing_lts: list[ModMono]):
        self.base = base
        self.lts = inducing_lts

    def key(self, m: ModMono):
        pos, e = m
        tpos, te = self.lts[pos]
        return (self.base.key((tpos, exp_add(te, e))), -pos)


class BlockOrder(ModuleOrder):
    """Image components [0, split) dominate tail components [split, n)."""

    def __init__(self, split: int, image: ModuleOrder, tail: ModuleOrder):
        self.split = split
        self.image = image
        self.tail = tail

    def key(self, m: ModMono):
        pos, e = m
        if pos < self.split:
            return (1, self.image.key((pos, e)))
        return (0, self.tail.key((pos - self.split, e)))


def _divide_vec(v: VecPoly, reducers: list[VecPoly], order: ModuleOrder,
                budget=None) -> VecPoly:
    """Normal form of v against reducers; same strategy as the ring case."""
    lts = [order.leading(g) for g in reducers]
    rem: dict[ModMono, Fraction] = {}
    h = v
    while not h.is_zero():
        (pos, e), c = order.leading(h)
        hit = -1
        for i, ((gpos, ge), gc) in enumerate(lts):
            if gpos == pos and exp_divides(ge, e):
                hit = i
                break
        if budget is not None:
            budget.spend(1, reducers)
        if hit < 0:
            rem[(pos, e)] = c
            h = h.sub(VecPoly(v.ring, v.ncomp, {(pos, e): c}))
        else:
            (gpos, ge), gc = lts[hit]
            h = h.sub(reducers[hit].mul_term(exp_sub(e, ge), c / gc))
    return VecPoly(v.ring, v.ncomp, rem)


class _Budget:
    __slots__ = ("left", "total")

    def __init__(self, units: int):
        self.left = units
        self.total = units

    def spend(self, cost: int, partial):
        self.left -= cost
        if self.left < 0:
            raise BudgetExceededError(
                f"module Groebner budget of {self.total} exhausted",
                partial=tuple(partial), spent=self.total - self.left,
            )


def module_groebner(gens: list[VecPoly], order: ModuleOrder,
                    budget_units: int = 2_000_000) -> list[VecPoly]:
    """Buchberger for submodules; chain criterion only, normal selection."""
    budget = _Budget(budget_units)
    G = [g.scale(1 / order.leading(g)[1]) for g in gens if not g.is_zero()]
    G.sort(key=lambda g: order.key(order.leading(g)[0]))
    pairs = set()
    for i in range(len(G)):
        for j in range(i + 1, len(G)):
            if order.leading(G[i])[0][0] == order.leading(G[j])[0][0]:
                pairs.add((i, j))

    def lcm_key(ij):
        i, j = ij
        (pos, ei), _ = order.leading(G[i])
        (_, ej), _ = order.leading(G[j])
        return (order.key((pos, exp_lcm(ei, ej))), ij)

    while pairs:
        i, j = min(pairs, key=lcm_key)
        pairs.discard((i, j))
        budget.spend(1, G)
        (pos, ei), ci = order.leading(G[i])
        (_, ej), cj = order.leading(G[j])
        lcm = exp_lcm(ei, ej)
        skip = False
        for k in range(len(G)):
            if k in (i, j):
                continue
            (kpos, ke), _ = order.leading(G[k])
            if kpos == pos and exp_divides(ke, lcm):
                a = (min(i, k), max(i, k))
                b = (min(j, k), max(j, k))
                if a not in pairs and b not in pairs:
                    skip = True
                    break
        if skip:
            continue
        s = G[i].mul_term(exp_sub(lcm, ei), 1 / ci).sub(
            G[j].mul_term(exp_sub(lcm, ej), 1 / cj)
        )
        r = _divide_vec(s, G, order, budget)
        if not r.is_zero():
            r = r.scale(1 / order.leading(r)[1])
            t = len(G)
            G.append(r)
            rpos = order.leading(r)[0][0]
            for i2 in range(t):
                if order.leading(G[i2])[0][0] == rpos:
                    pairs.add((i2, t))
    return G


def _autoreduce(G: list[VecPoly], order: ModuleOrder) -> list[VecPoly]:
    """Minimal + reduced form, canonical ordering by leading term."""
    G = [g for g in G if not g.is_zero()]
    G.sort(key=lambda g: order.key(order.leading(g)[0]))
    minimal: list[VecPoly] = []
    seen_lts: list[ModMono] = []
    for g in G:
        (pos, e), _ = order.leading(g)
        if any(p == pos and exp_divides(ee, e) for p, ee in seen_lts):
            continue
        minimal.append(g)
        seen_lts.append((pos, e))
    out = []
    for i, g in enumerate(minimal):
        rest = minimal[:i] + minimal[i + 1:]
        r = _divide_vec(g, rest, order) if rest else g
        if not r.is_zero():
            out.append(r.scale(1 / order.leading(r)[1]))
    out.sort(key=lambda g: order.key(order.leading(g)[0]))
    return out


def syzygy_columns(columns: list[VecPoly], ctx: RingContext) -> list[VecPoly]:
    """Generators (a Groebner basis under the induced Schreyer order) of
    the syzygies of the given columns of O^r.

    Zero columns get the immediate syzygy e_j.  Output columns are
    VecPoly in O^c, c = len(columns), sorted by the Schreyer order.
    """
    if not columns:
        return []
    r = columns[0].ncomp
    c = len(columns)
    top = TopOrder(ctx)
    zero_syz = []
    live_idx = [j for j, m in enumerate(columns) if not m.is_zero()]
    for j, m in enumerate(columns):
        if m.is_zero():
            zero_syz.append(VecPoly(ctx, c, {(j, (0,) * ctx.n): 1}))
    if not live_idx:
        return zero_syz
    inducing = [top.leading(columns[j])[0] for j in live_idx]
    order = BlockOrder(r, top, SchreyerOrder(top, inducing))
    graph = []
    for slot, j in enumerate(live_idx):
        terms = dict(columns[j].terms)
        terms[(r + slot, (0,) * ctx.n)] = Fraction(1)
        graph.append(VecPoly(ctx, r + len(live_idx), terms))
    G = module_groebner(graph, order)
    tails = []
    for g in G:
        if all(pos >= r for (pos, _e) in g.terms):
            tails.append(VecPoly(ctx, len(live_idx),
                                 {(pos - r, e): cc for (pos, e), cc in g.terms.items()}))
    tail_order = SchreyerOrder(top, inducing)
    tails = _autoreduce(tails, tail_order)
    # re-embed into the full column count (restoring zero-column slots)
    out = []
    for t in tails:
        out.append(VecPoly(ctx, c, {(live_idx[pos], e): cc
                                    for (pos, e), cc in t.terms.items()}))
    return zero_syz + out
