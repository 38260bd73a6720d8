"""Exact sparse multivariate polynomials over Q.

A polynomial is stored as a dict from exponent tuple to Fraction with no
zero coefficients; the ring is a small immutable context carrying the
variable names, positive integer weights and a monomial-order tag.
Coefficients stay exact rationals end to end.  Representatives of germs
are polynomials only; there is no truncated-series layer.

Monomial orders are realized as sort keys: for two exponent vectors a, b
we have a > b in the order iff order_key(a) > order_key(b) as Python
tuples.  Keys are additive, so every order here is multiplicative, and
every key strictly grows with the (weighted) degree, so 1 is minimal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator

from .errors import StructuralError, ValidationError

Exponent = tuple[int, ...]

RING_ORDERS = ("weighted-degrevlex", "degrevlex", "lex")
# "elim1" is internal: first variable forms an elimination block, the
# rest are compared weighted-degrevlex.  Used for ideal intersection.
_KNOWN_ORDERS = RING_ORDERS + ("elim1",)


@dataclass(frozen=True)
class RingContext:
    """Polynomial ring C[x_1..x_n] with weights and a monomial order."""

    variable_names: tuple[str, ...]
    weights: tuple[int, ...] = ()
    order: str = "weighted-degrevlex"

    def __post_init__(self):
        names = tuple(self.variable_names)
        object.__setattr__(self, "variable_names", names)
        if not names:
            raise ValidationError("ring needs at least one variable")
        if len(set(names)) != len(names):
            raise ValidationError("variable names must be distinct")
        for nm in names:
            if not nm.isidentifier():
                raise ValidationError(f"bad variable name {nm!r}")
        w = tuple(self.weights) if self.weights else (1,) * len(names)
        if len(w) != len(names):
            raise ValidationError("weights length must match variable count")
        if any((not isinstance(x, int)) or x < 1 for x in w):
            raise ValidationError("weights must be positive integers")
        object.__setattr__(self, "weights", w)
        if self.order not in _KNOWN_ORDERS:
            raise ValidationError(f"unknown order tag {self.order!r}")

    @property
    def n(self) -> int:
        return len(self.variable_names)

    def weighted_degree(self, e: Exponent) -> int:
        return sum(w * k for w, k in zip(self.weights, e))

    def order_key(self, e: Exponent):
        return monomial_key(e, self)

    def var_index(self, name: str) -> int:
        try:
            return self.variable_names.index(name)
        except ValueError:
            raise ValidationError(f"unknown variable {name!r}") from None


def monomial_key(e: Exponent, ctx: RingContext):
    """Sort key realizing ctx.order; larger key = larger monomial."""
    if ctx.order == "lex":
        return tuple(e)
    if ctx.order == "degrevlex":
        return (sum(e), tuple(-x for x in reversed(e)))
    if ctx.order == "weighted-degrevlex":
        return (ctx.weighted_degree(e), tuple(-x for x in reversed(e)))
    if ctx.order == "elim1":
        rest = e[1:]
        wrest = ctx.weights[1:]
        wdeg = sum(w * k for w, k in zip(wrest, rest))
        return (e[0], wdeg, tuple(-x for x in reversed(rest)))
    raise StructuralError(f"order {ctx.order!r} not comparable here")


def cmp_monomials(e1: Exponent, e2: Exponent, ctx: RingContext) -> int:
    """-1, 0 or 1 as e1 <, =, > e2 under ctx.order."""
    if len(e1) != ctx.n or len(e2) != ctx.n:
        raise StructuralError("exponent arity does not match ring")
    k1, k2 = monomial_key(e1, ctx), monomial_key(e2, ctx)
    if k1 < k2:
        return -1
    if k1 > k2:
        return 1
    return 0


def exp_add(a: Exponent, b: Exponent) -> Exponent:
    return tuple(x + y for x, y in zip(a, b))

def exp_sub(a: Exponent, b: Exponent) -> Exponent:
    return tuple(x - y for x, y in zip(a, b))

def exp_divides(a: Exponent, b: Exponent) -> bool:
    return all(x <= y for x, y in zip(a, b))

def exp_lcm(a: Exponent, b: Exponent) -> Exponent:
    return tuple(max(x, y) for x, y in zip(a, b))


class Polynomial:
    """Immutable sparse polynomial; do not mutate `_terms` after construction."""

    __slots__ = ("ring", "_terms", "_hash")

    def __init__(self, ring: RingContext, terms):
        clean: dict[Exponent, Fraction] = {}
        for e, c in (terms.items() if isinstance(terms, dict) else terms):
            e = tuple(e)
            if len(e) != ring.n:
                raise StructuralError("exponent arity does not match ring")
            if any((not isinstance(x, int)) or x < 0 for x in e):
                raise StructuralError("exponents must be nonnegative integers")
            c = Fraction(c)
            if c == 0:
                continue
            c0 = clean.get(e)
            if c0 is None:
                clean[e] = c
            else:
                s = c0 + c
                if s == 0:
                    del clean[e]
                else:
                    clean[e] = s
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "_terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, *a):
        raise AttributeError("Polynomial is immutable")

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, ring: RingContext) -> "Polynomial":
        return cls(ring, {})

    @classmethod
    def constant(cls, ring: RingContext, c) -> "Polynomial":
        return cls(ring, {(0,) * ring.n: Fraction(c)})

    @classmethod
    def variable(cls, ring: RingContext, i: int) -> "Polynomial":
        e = [0] * ring.n
        e[i] = 1
        return cls(ring, {tuple(e): Fraction(1)})

    @classmethod
    def monomial(cls, ring: RingContext, e: Exponent, c=1) -> "Polynomial":
        return cls(ring, {tuple(e): Fraction(c)})

    # -- basic queries ------------------------------------------------

    def is_zero(self) -> bool:
        return not self._terms

    def terms(self) -> dict[Exponent, Fraction]:
        return dict(self._terms)

    def num_terms(self) -> int:
        return len(self._terms)

    def sorted_terms(self, reverse: bool = True) -> list[tuple[Exponent, Fraction]]:
        key = self.ring.order_key
        return sorted(self._terms.items(), key=lambda t: key(t[0]), reverse=reverse)

    def leading_term(self) -> tuple[Exponent, Fraction]:
        if not self._terms:
            raise ValidationError("zero polynomial has no leading term")
        key = self.ring.order_key
        e = max(self._terms, key=key)
        return e, self._terms[e]

    def leading_monomial(self) -> Exponent:
        return self.leading_term()[0]

    def leading_coeff(self) -> Fraction:
        return self.leading_term()[1]

    def constant_value(self) -> Fraction | None:
        """The coefficient if the polynomial is a constant, else None (0 -> 0)."""
        if not self._terms:
            return Fraction(0)
        if len(self._terms) == 1:
            e, c = next(iter(self._terms.items()))
            if all(x == 0 for x in e):
                return c
        return None

    # -- arithmetic ---------------------------------------------------

    def _check(self, other: "Polynomial"):
        if not isinstance(other, Polynomial):
            raise StructuralError("expected a Polynomial operand")
        if other.ring != self.ring:
            raise StructuralError("operands live in different rings")

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = out.get(e, Fraction(0)) + c
            if s == 0:
                out.pop(e, None)
            else:
                out[e] = s
        return Polynomial(self.ring, out)

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.ring, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        out: dict[Exponent, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = exp_add(e1, e2)
                s = out.get(e, Fraction(0)) + c1 * c2
                if s == 0:
                    out.pop(e, None)
                else:
                    out[e] = s
        return Polynomial(self.ring, out)

    def __pow__(self, k: int) -> "Polynomial":
        if not isinstance(k, int) or k < 0:
            raise ValidationError("polynomial power wants a nonnegative integer")
        out = Polynomial.constant(self.ring, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def scale(self, c) -> "Polynomial":
        c = Fraction(c)
        return Polynomial(self.ring, {e: c * v for e, v in self._terms.items()})

    def mul_term(self, e: Exponent, c) -> "Polynomial":
        c = Fraction(c)
        return Polynomial(self.ring, {exp_add(e0, e): c * v for e0, v in self._terms.items()})

    def monic(self) -> "Polynomial":
        if self.is_zero():
            return self
        return self.scale(1 / self.leading_coeff())

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Polynomial)
            and self.ring == other.ring
            and self._terms == other._terms
        )

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash((self.ring, frozenset(self._terms.items())))
            object.__setattr__(self, "_hash", h)
        return h

    # -- calculus / evaluation ----------------------------------------

    def derivative(self, i: int) -> "Polynomial":
        """Partial derivative with respect to variable i."""
        out: dict[Exponent, Fraction] = {}
        for e, c in self._terms.items():
            if e[i] == 0:
                continue
            e2 = list(e)
            e2[i] -= 1
            out[tuple(e2)] = c * e[i]
        return Polynomial(self.ring, out)

    def eval_complex(self, point) -> complex:
        """Evaluate at a tuple of complex numbers (float path, not exact)."""
        if len(point) != self.ring.n:
            raise StructuralError("point arity does not match ring")
        total = 0j
        for e, c in self._terms.items():
            v = complex(c)
            for z, k in zip(point, e):
                if k:
                    v *= z ** k
            total += v
        return total

    # -- printing -----------------------------------------------------

    def __str__(self) -> str:
        return format_polynomial(self)

    def __repr__(self) -> str:
        return f"Polynomial({format_polynomial(self)!r})"


@dataclass(frozen=True)
class WeightedDegreeInfo:
    min_degree: int
    max_degree: int
    quasi_homogeneous: bool


def weighted_degree_info(p: Polynomial) -> WeightedDegreeInfo:
    """Weighted degree range of p; degree of 0 is undefined."""
    if p.is_zero():
        raise ValidationError("degree of the zero polynomial is undefined")
    degs = [p.ring.weighted_degree(e) for e in p._terms]
    lo, hi = min(degs), max(degs)
    return WeightedDegreeInfo(lo, hi, lo == hi)


def _format_monomial(e: Exponent, names: tuple[str, ...]) -> str:
    parts = []
    for nm, k in zip(names, e):
        if k == 1:
            parts.append(nm)
        elif k > 1:
            parts.append(f"{nm}^{k}")
    return "*".join(parts)


def format_polynomial(p: Polynomial) -> str:
    """Canonical text form: terms in decreasing ring order, exact coefficients."""
    if p.is_zero():
        return "0"
    chunks: list[str] = []
    for i, (e, c) in enumerate(p.sorted_terms()):
        mono = _format_monomial(e, p.ring.variable_names)
        mag = abs(c)
        if mono and mag == 1:
            body = mono
        elif mono:
            body = f"{mag}*{mono}"
        else:
            body = str(mag)
        if i == 0:
            chunks.append(body if c > 0 else "-" + body)
        else:
            chunks.append((" + " if c > 0 else " - ") + body)
    return "".join(chunks)


class _Tokens:
    """Tiny tokenizer for the polynomial text syntax, tracking positions."""

    def __init__(self, text: str):
        self.text = text
        self.i = 0

    def skip_ws(self):
        while self.i < len(self.text) and self.text[self.i].isspace():
            self.i += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.i] if self.i < len(self.text) else ""

    def take(self) -> str:
        ch = self.peek()
        self.i += 1
        return ch

    def error(self, msg: str):
        raise ValidationError(f"{msg} at position {self.i} in {self.text!r}")

    def read_int(self) -> int:
        self.skip_ws()
        j = self.i
        while j < len(self.text) and self.text[j].isdigit():
            j += 1
        if j == self.i:
            self.error("expected an integer")
        val = int(self.text[self.i:j])
        self.i = j
        return val

    def read_name(self) -> str:
        self.skip_ws()
        j = self.i
        while j < len(self.text) and (self.text[j].isalnum() or self.text[j] == "_"):
            j += 1
        if j == self.i:
            self.error("expected a name")
        name = self.text[self.i:j]
        self.i = j
        return name


def parse_polynomial(text: str, ring: RingContext) -> Polynomial:
    """Parse `3/2*x^2*y - z` style syntax; errors carry position info.

    Grammar: sum of terms; a term is a product of factors joined by `*`;
    a factor is a rational, a variable, or a parenthesized sum, with an
    optional `^nat`.
    """
    tk = _Tokens(text)
    p = _parse_sum(tk, ring)
    tk.skip_ws()
    if tk.i != len(text):
        tk.error("trailing input")
    return p


def _parse_sum(tk: _Tokens, ring: RingContext) -> Polynomial:
    total = Polynomial.zero(ring)
    sign = 1
    first = True
    while True:
        ch = tk.peek()
        if ch == "+":
            tk.take()
        elif ch == "-":
            tk.take()
            sign = -sign
        elif not first:
            break
        # allow runs of signs like "- -x"
        while tk.peek() in ("+", "-"):
            if tk.take() == "-":
                sign = -sign
        term = _parse_product(tk, ring)
        total = total + (term if sign == 1 else -term)
        sign = 1
        first = False
        if tk.peek() not in ("+", "-"):
            break
    return total


def _parse_product(tk: _Tokens, ring: RingContext) -> Polynomial:
    p = _parse_factor(tk, ring)
    while tk.peek() == "*":
        tk.take()
        p = p * _parse_factor(tk, ring)
    return p


def _parse_factor(tk: _Tokens, ring: RingContext) -> Polynomial:
    ch = tk.peek()
    if ch == "(":
        tk.take()
        p = _parse_sum(tk, ring)
        if tk.peek() != ")":
            tk.error("expected ')'")
        tk.take()
    elif ch.isdigit():
        num = tk.read_int()
        if tk.peek() == "/":
            tk.take()
            den = tk.read_int()
            if den == 0:
                tk.error("zero denominator")
            p = Polynomial.constant(ring, Fraction(num, den))
        else:
            p = Polynomial.constant(ring, num)
    elif ch.isalpha() or ch == "_":
        name = tk.read_name()
        idx = ring.var_index(name)
        p = Polynomial.variable(ring, idx)
    else:
        tk.error("expected a factor")
    if tk.peek() == "^":
        tk.take()
        k = tk.read_int()
        p = p ** k
    return p


def parse_polynomials(text: str, ring: RingContext) -> list[Polynomial]:
    """Comma-separated list of polynomials."""
    out = []
    depth = 0
    start = 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            out.append(parse_polynomial(text[start:i], ring))
            start = i + 1
    out.append(parse_polynomial(text[start:], ring))
    return out
