"""Numerical semigroups and fractional-ideal containments on curve germs.

For a monomial curve germ the value semigroup S determines everything:
an ideal is a finite antichain of shifts, membership is subtraction, and
the integral closure of A is {s in S : s >= v(A)} where v(A) is the
minimal shift (order of vanishing).

Truncation sufficiency (used by every loop below): every s in S with
s >= ell * v(A) + conductor(S) lies in A^ell, because subtracting ell
copies of the minimal shift leaves s - ell*v(A) >= conductor, which is
in S.  So containment checks only scan the finite window below
ell*v(A) + conductor, and the containment exponent search terminates by
N <= ell + ceil(conductor / v(A)): once N*v(A) reaches the bound the
window is empty and containment holds.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import ceil, gcd

from .errors import ResourceCapError, ValidationError

POWER_CAP = 200_000
MU_CAP = 100_000


@dataclass(frozen=True)
class NumericalSemigroup:
    generators: tuple[int, ...]
    conductor: int
    gaps: tuple[int, ...]

    def contains(self, s: int) -> bool:
        if s < 0:
            return False
        if s >= self.conductor:
            return True
        return s not in self._gap_set

    @property
    def _gap_set(self):
        return frozenset(self.gaps)

    @property
    def genus(self) -> int:
        return len(self.gaps)

    def members_below(self, bound: int) -> list[int]:
        return [s for s in range(bound) if self.contains(s)]

    def __str__(self):
        return "<" + ", ".join(str(g) for g in self.generators) + ">"


def semigroup_build(generators) -> NumericalSemigroup:
    """Membership table, conductor and gaps for <g_1, ..., g_k>, gcd 1."""
    gens = tuple(sorted(set(int(g) for g in generators)))
    if not gens or any(g < 1 for g in gens):
        raise ValidationError("semigroup generators must be positive integers")
    g = 0
    for x in gens:
        g = gcd(g, x)
    if g != 1:
        raise ValidationError("semigroup generators must have gcd 1")
    gmin, gmax = gens[0], gens[-1]
    bound = gmin * gmax + 2
    while True:
        member = [False] * bound
        member[0] = True
        for i in range(1, bound):
            for x in gens:
                if i >= x and member[i - x]:
                    member[i] = True
                    break
        run_start = _find_run(member, gmin)
        if run_start is not None:
            c = run_start
            while c > 0 and member[c - 1]:
                c -= 1
            gaps = tuple(i for i in range(c) if not member[i])
            return NumericalSemigroup(gens, c, gaps)
        bound *= 2


def _find_run(member: list[bool], length: int) -> int | None:
    run = 0
    for i, ok in enumerate(member):
        run = run + 1 if ok else 0
        if run >= length:
            return i - length + 1
    return None


@dataclass(frozen=True)
class SemigroupIdeal:
    """Fractional ideal of a germ: antichain of positive shifts."""

    shifts: tuple[int, ...]

    @property
    def valuation(self) -> int:
        return self.shifts[0]

    def __str__(self):
        return "(" + ", ".join(str(s) for s in self.shifts) + ")"


def semigroup_ideal(S: NumericalSemigroup, shifts) -> SemigroupIdeal:
    shifts = sorted(set(int(s) for s in shifts))
    if not shifts:
        raise ValidationError("ideal needs at least one shift")
    for s in shifts:
        if s < 1:
            raise ValidationError("shifts must be positive")
        if not S.contains(s):
            raise ValidationError(f"shift {s} is not in the semigroup")
    kept: list[int] = []
    for s in shifts:
        if not any(S.contains(s - k) for k in kept):
            kept.append(s)
    return SemigroupIdeal(tuple(kept))


def germ_ideal_member(s: int, A: SemigroupIdeal, S: NumericalSemigroup) -> bool:
    """s in A iff s - shift lands in S for some shift."""
    if not S.contains(s):
        raise ValidationError(f"{s} is not in the semigroup")
    return any(S.contains(s - g) for g in A.shifts)


def germ_closure_member(s: int, A: SemigroupIdeal, S: NumericalSemigroup) -> bool:
    """Closure membership is the valuation test s >= v(A)."""
    if not S.contains(s):
        raise ValidationError(f"{s} is not in the semigroup")
    return s >= A.valuation


def ideal_power(A: SemigroupIdeal, ell: int, S: NumericalSemigroup,
                cap: int = POWER_CAP) -> SemigroupIdeal:
    """A^ell: minimalized ell-fold sumset of the shifts."""
    if ell < 1:
        raise ValidationError("power wants ell >= 1")
    m = len(A.shifts)
    count = 1
    for i in range(ell):
        count = count * (m + i) // (i + 1)
    if count > cap:
        raise ResourceCapError(f"semigroup ideal power needs {count} sums (cap {cap})")
    sums = {sum(c) for c in itertools.combinations_with_replacement(A.shifts, ell)}
    return semigroup_ideal(S, sums)


def closure_ideal(A: SemigroupIdeal, S: NumericalSemigroup) -> SemigroupIdeal:
    """Integral closure: the ideal {s in S : s >= v(A)}.

    Its minimal shifts all lie below v(A) + conductor.
    """
    v = A.valuation
    window = [s for s in range(v, v + max(S.conductor, 1)) if S.contains(s)]
    if not window:
        window = [v]
    return semigroup_ideal(S, window)


def containment_holds(A: SemigroupIdeal, N: int, ell: int, S: NumericalSemigroup,
                      mode: str = "power") -> tuple[bool, int | None]:
    """Is the N-th closure test set inside A^ell?  (holds, first_failure).

    mode "power": test set is the closure of A^N, i.e. {s in S : s >= N*v(A)};
    mode "closure-power": test set is (closure of A)^N.
    """
    if mode not in ("power", "closure-power"):
        raise ValidationError(f"unknown mode {mode!r}")
    v = A.valuation
    Al = ideal_power(A, ell, S)
    bound = ell * v + S.conductor  # everything above is in A^ell
    in_target = lambda s: any(S.contains(s - g) for g in Al.shifts)
    if mode == "closure-power":
        CN = ideal_power(closure_ideal(A, S), N, S)
        candidates = (
            s for s in range(N * v, bound)
            if S.contains(s) and any(S.contains(s - g) for g in CN.shifts)
        )
    else:
        candidates = (s for s in range(N * v, bound) if S.contains(s))
    for s in candidates:
        if not in_target(s):
            return False, s
    return True, None


def germ_bs_exponent(A: SemigroupIdeal, ell: int, S: NumericalSemigroup,
                     mode: str = "power", with_witness: bool = False):
    """Least N with the N-th closure test set inside A^ell.

    The witness (with_witness=True) is the element proving N-1 fails,
    certifying minimality; None when N == 1.
    """
    if ell < 1:
        raise ValidationError("ell must be at least 1")
    v = A.valuation
    n_cap = ell + ceil(S.conductor / v) + 1
    last_failure: int | None = None
    for N in range(1, n_cap + 1):
        holds, failure = containment_holds(A, N, ell, S, mode=mode)
        if holds:
            return (N, last_failure) if with_witness else N
        last_failure = failure
    raise AssertionError("exponent search exceeded its provable bound")


def enumerate_ideals(S: NumericalSemigroup, v_max: int):
    """All antichain ideals with valuation <= v_max, deterministically.

    For valuation v the remaining shifts live in (v, v + conductor) and
    must avoid v + S pairwise, so the search space is finite.
    """
    if v_max < 1:
        raise ValidationError("v_max must be at least 1")
    for v in range(1, v_max + 1):
        if not S.contains(v):
            continue
        ground = [
            s for s in range(v + 1, v + S.conductor)
            if S.contains(s) and not S.contains(s - v)
        ]

        def rec(start: int, chosen: tuple[int, ...]):
            yield SemigroupIdeal((v,) + chosen)
            for i in range(start, len(ground)):
                c = ground[i]
                if all(not S.contains(c - x) for x in chosen):
                    yield from rec(i + 1, chosen + (c,))

        yield from rec(0, ())


def huneke_mu(S: NumericalSemigroup, v_max: int, ell_max: int,
              cap: int = MU_CAP) -> tuple[int, SemigroupIdeal, int]:
    """Exhaustive uniform exponent over the enumerated family.

    mu = max over ideals A with v(A) <= v_max and ell <= ell_max of
    (germ_bs_exponent(A, ell) - ell + 1); returns (mu, witness ideal,
    witness ell), first maximizer in enumeration order.  This is an
    empirical lower bound for the germ's uniform exponent: the family
    is every antichain ideal of the value semigroup up to the gauge.
    """
    if ell_max < 1:
        raise ValidationError("ell_max must be at least 1")
    best: tuple[int, SemigroupIdeal, int] | None = None
    count = 0
    for A in enumerate_ideals(S, v_max):
        count += 1
        if count > cap:
            raise ResourceCapError(f"mu search exceeded {cap} ideals")
        for ell in range(1, ell_max + 1):
            N = germ_bs_exponent(A, ell, S)
            cand = N - ell + 1
            if best is None or cand > best[0]:
                best = (cand, A, ell)
    assert best is not None
    return best
