"""Free complexes, resolutions, and singularity strata.

A complex is a chain O^{r_0} <- O^{r_1} <- ... <- O^{r_N} of free
modules with polynomial matrices f_k: E_k -> E_{k-1}; composition of
consecutive maps must vanish and is checked on construction.  Graded
complexes carry per-basis-element weighted-degree shifts, and entry
(i, j) of f_k is then quasi-homogeneous of degree shifts[k][j] -
shifts[k-1][i].

Resolutions are built by iterated syzygy computation and certified
exact with the rank/codimension criterion: the complex is exact iff for
every k some rho_k-minor of f_k is nonzero, all (rho_k+1)-minors vanish,
and the rho_k-minor locus has codimension >= k in C^n, where rho_k is
the alternating sum of ranks from level k up.

Strata: given a resolving complex of O/I and the expected ranks, Z_k is
the locus inside Z = V(I) where f_k drops below rank rho_k.  With
p = n - dim Z the interesting strata are Z^0 (the Jacobian singular
locus of Z) and Z^r = Z_{p+r} for r >= 1; all codimensions reported for
strata are measured inside Z.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import BudgetExceededError, StructuralError, ValidationError
from .groebner import Ideal, krull_dimension
from .modgb import SchreyerOrder, TopOrder, VecPoly, _divide_vec, module_groebner, syzygy_columns
from .poly import Polynomial, RingContext, weighted_degree_info


class PolyMatrix:
    """Immutable matrix of polynomials over one ring.

    `cols_hint` pins the column count of a zero-row matrix, which keeps
    degenerate maps shape-checkable inside complexes.
    """

    __slots__ = ("ring", "rows", "cols", "entries")

    def __init__(self, ring: RingContext, entries, cols_hint: int = 0):
        rows = tuple(tuple(e) for e in entries)
        ncols = len(rows[0]) if rows else cols_hint
        for row in rows:
            if len(row) != ncols:
                raise StructuralError("ragged matrix")
            for p in row:
                if not isinstance(p, Polynomial) or p.ring != ring:
                    raise StructuralError("matrix entry ring mismatch")
        self.ring = ring
        self.rows = len(rows)
        self.cols = ncols
        self.entries = rows

    @classmethod
    def from_columns(cls, ring: RingContext, nrows: int, columns: list[VecPoly]) -> "PolyMatrix":
        ents = [[col.component(i) for col in columns] for i in range(nrows)]
        return cls(ring, ents, cols_hint=len(columns))

    def column(self, j: int) -> VecPoly:
        return VecPoly.from_column(self.ring, [self.entries[i][j] for i in range(self.rows)])

    def columns(self) -> list[VecPoly]:
        return [self.column(j) for j in range(self.cols)]

    def compose(self, other: "PolyMatrix") -> "PolyMatrix":
        """self @ other (apply other first)."""
        if self.cols != other.rows:
            raise StructuralError("composition shape mismatch")
        zero = Polynomial.zero(self.ring)
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = zero
                for k in range(self.cols):
                    acc = acc + self.entries[i][k] * other.entries[k][j]
                row.append(acc)
            out.append(row)
        return PolyMatrix(self.ring, out)

    def is_zero(self) -> bool:
        return all(p.is_zero() for row in self.entries for p in row)

    def to_strings(self) -> list[list[str]]:
        return [[str(p) for p in row] for row in self.entries]

    def __str__(self):
        return "[" + "; ".join(", ".join(str(p) for p in row) for row in self.entries) + "]"


def _det(matrix_entries, rows: tuple[int, ...], cols: tuple[int, ...], memo, ring) -> Polynomial:
    """Determinant of the (rows x cols) submatrix by first-column expansion."""
    key = (rows, cols)
    got = memo.get(key)
    if got is not None:
        return got
    if len(rows) == 1:
        out = matrix_entries[rows[0]][cols[0]]
    else:
        out = Polynomial.zero(ring)
        c0 = cols[0]
        rest = cols[1:]
        for idx, r in enumerate(rows):
            e = matrix_entries[r][c0]
            if e.is_zero():
                continue
            sub = _det(matrix_entries, rows[:idx] + rows[idx + 1:], rest, memo, ring)
            term = e * sub
            out = out + (term if idx % 2 == 0 else -term)
    memo[key] = out
    return out


def minors(M: PolyMatrix, size: int) -> list[Polynomial]:
    """All size x size minors, deduplicated, zeros dropped, deterministic order."""
    if size <= 0:
        raise ValidationError("minor size must be positive")
    if size > min(M.rows, M.cols):
        return []
    memo: dict = {}
    out: list[Polynomial] = []
    seen = set()
    for rows in itertools.combinations(range(M.rows), size):
        for cols in itertools.combinations(range(M.cols), size):
            d = _det(M.entries, rows, cols, memo, M.ring)
            if d.is_zero():
                continue
            d = d.monic()
            if d in seen:
                continue
            seen.add(d)
            out.append(d)
    return out


@dataclass(frozen=True)
class FreeComplex:
    """ranks[k] = rank E_k; maps[k-1] = f_k: E_k -> E_{k-1}."""

    ring: RingContext
    ranks: tuple[int, ...]
    maps: tuple[PolyMatrix, ...]
    graded: bool = False
    shifts: tuple[tuple[int, ...], ...] | None = None

    def __post_init__(self):
        if len(self.maps) != len(self.ranks) - 1:
            raise StructuralError("need one map per adjacent rank pair")
        for k, M in enumerate(self.maps, start=1):
            if (M.rows, M.cols) != (self.ranks[k - 1], self.ranks[k]):
                raise StructuralError(f"map {k} shape does not match ranks")
        for k in range(len(self.maps) - 1):
            if not self.maps[k].compose(self.maps[k + 1]).is_zero():
                raise StructuralError(f"composition f_{k+1} o f_{k+2} is nonzero")
        if self.graded:
            if self.shifts is None or len(self.shifts) != len(self.ranks):
                raise StructuralError("graded complex needs shifts per level")
            for lvl, (rk, sh) in enumerate(zip(self.ranks, self.shifts)):
                if len(sh) != rk:
                    raise StructuralError(f"shift count at level {lvl} mismatched")
            for k, M in enumerate(self.maps, start=1):
                for i in range(M.rows):
                    for j in range(M.cols):
                        p = M.entries[i][j]
                        if p.is_zero():
                            continue
                        info = weighted_degree_info(p)
                        want = self.shifts[k][j] - self.shifts[k - 1][i]
                        if not info.quasi_homogeneous or info.max_degree != want:
                            raise StructuralError(
                                f"entry ({i},{j}) of map {k} breaks the grading"
                            )

    @property
    def length(self) -> int:
        return len(self.maps)

    def to_json_dict(self) -> dict:
        return {
            "variables": list(self.ring.variable_names),
            "weights": list(self.ring.weights),
            "order": self.ring.order,
            "ranks": list(self.ranks),
            "maps": [M.to_strings() for M in self.maps],
            "graded": self.graded,
            "shifts": [list(s) for s in self.shifts] if self.shifts else None,
        }


def complex_from_json_dict(doc: dict) -> FreeComplex:
    from .poly import parse_polynomial

    ring = RingContext(tuple(doc["variables"]), tuple(doc["weights"]), doc["order"])
    maps = []
    for rows in doc["maps"]:
        maps.append(PolyMatrix(ring, [[parse_polynomial(s, ring) for s in row] for row in rows]))
    shifts = tuple(tuple(s) for s in doc["shifts"]) if doc.get("shifts") else None
    return FreeComplex(ring, tuple(doc["ranks"]), tuple(maps), doc.get("graded", False), shifts)


def expected_ranks(C: FreeComplex) -> tuple[int, ...]:
    """rho_k = sum_{i>=k} (-1)^(i-k) rank E_i for k = 1..N."""
    N = C.length
    out = []
    for k in range(1, N + 1):
        out.append(sum((-1) ** (i - k) * C.ranks[i] for i in range(k, N + 1)))
    return tuple(out)


def syzygies(M: PolyMatrix) -> PolyMatrix:
    """Matrix whose columns are a Groebner basis (induced Schreyer order)
    of the syzygy module of M's columns."""
    cols = syzygy_columns(M.columns(), M.ring)
    return PolyMatrix.from_columns(M.ring, M.cols, cols)


def _column_degree(col: VecPoly, prev_shifts, ring: RingContext) -> int:
    deg = None
    for pos in range(col.ncomp):
        p = col.component(pos)
        if p.is_zero():
            continue
        info = weighted_degree_info(p)
        if not info.quasi_homogeneous:
            raise StructuralError("syzygy entry not quasi-homogeneous in graded mode")
        d = info.max_degree + prev_shifts[pos]
        if deg is None:
            deg = d
        elif deg != d:
            raise StructuralError("syzygy column degrees inconsistent in graded mode")
    if deg is None:
        raise StructuralError("zero syzygy column")
    return deg


def _prune_generators(cols: list[VecPoly], ctx: RingContext,
                      sort_keys) -> list[VecPoly]:
    """Greedy minimal generating subset: keep a column only if it is not
    in the module generated by the already-kept ones.  With columns
    sorted by increasing degree this yields a minimal generating set in
    the graded case."""
    order = TopOrder(ctx)
    ranked = sorted(range(len(cols)), key=lambda j: sort_keys[j])
    kept: list[VecPoly] = []
    kept_gb: list[VecPoly] = []
    for j in ranked:
        v = cols[j]
        if kept_gb:
            r = _divide_vec(v, kept_gb, order)
            if r.is_zero():
                continue
        kept.append(v)
        kept_gb = module_groebner(kept, order)
    return kept


def free_resolution(I: Ideal, max_len: int | None = None, graded: bool | None = None,
                    certify: bool = True, budget: int | None = None) -> FreeComplex:
    """Iterated-syzygy resolution of O/I with f_1 = the generator row.

    Syzygy generating sets are pruned to minimal ones from level 2 on,
    which keeps the chain within the global-dimension bound; the first
    map keeps the generators exactly as given, so redundant generators
    surface as unit entries for minimalize to strip.
    """
    ring = I.ring
    n = ring.n
    if max_len is None:
        max_len = n
    gens = list(I.generators)
    if not gens:
        return FreeComplex(ring, (1,), (), graded=True, shifts=((0,),))
    if graded is None:
        graded = all(weighted_degree_info(g).quasi_homogeneous for g in gens)
    if graded:
        infos = [weighted_degree_info(g) for g in gens]
        if any(not info.quasi_homogeneous for info in infos):
            raise ValidationError("graded resolution wants quasi-homogeneous generators")
        if any(info.max_degree == 0 for info in infos):
            raise ValidationError("resolution wants a proper ideal")
    else:
        if I.groebner(budget=budget).is_unit():
            raise ValidationError("resolution wants a proper ideal")

    ranks = [1, len(gens)]
    maps = [PolyMatrix(ring, [list(gens)])]
    shifts: list[tuple[int, ...]] = [(0,)]
    if graded:
        shifts.append(tuple(weighted_degree_info(g).max_degree for g in gens))

    current = maps[0]
    while True:
        cols = syzygy_columns(current.columns(), ring)
        cols = [c for c in cols if not c.is_zero()]
        if not cols:
            break
        top = TopOrder(ring)
        if graded:
            degs = [_column_degree(c, shifts[-1], ring) for c in cols]
            sort_keys = [(degs[j], top.key(top.leading(cols[j])[0])) for j in range(len(cols))]
        else:
            sort_keys = [top.key(top.leading(c)[0]) for c in cols]
        cols = _prune_generators(cols, ring, sort_keys)
        if len(maps) == max_len:
            raise BudgetExceededError(
                f"resolution did not terminate within max_len={max_len}",
                partial=tuple(maps),
            )
        M = PolyMatrix.from_columns(ring, current.cols, cols)
        maps.append(M)
        ranks.append(M.cols)
        if graded:
            shifts.append(tuple(_column_degree(c, shifts[-1], ring) for c in cols))
        current = M

    C = FreeComplex(ring, tuple(ranks), tuple(maps), graded=graded,
                    shifts=tuple(shifts) if graded else None)
    if certify:
        ok, failures = check_acyclicity(C, budget=budget)
        if not ok:
            raise StructuralError(f"resolution failed exactness certification: {failures}")
    return C


def minimalize(C: FreeComplex) -> FreeComplex:
    """Strip unit (degree-0) entries by row/column reduction.

    Graded complexes only.  Pivots are chosen deterministically: lowest
    map index first, then row-major within the map.  The result has no
    nonzero constant entries and the same homology; for a resolution its
    ranks are the graded Betti numbers.
    """
    if not C.graded:
        raise ValidationError("minimalize needs a graded complex")
    ring = C.ring
    ents: list[list[list[Polynomial]]] = [
        [list(row) for row in M.entries] for M in C.maps
    ]
    shifts = [list(s) for s in C.shifts]

    def find_pivot():
        for k, M in enumerate(ents):
            for i, row in enumerate(M):
                for j, p in enumerate(row):
                    c = p.constant_value()
                    if c is not None and c != 0:
                        return k, i, j, c
        return None

    while True:
        hit = find_pivot()
        if hit is None:
            break
        k, pi, pj, c = hit
        M = ents[k]
        nrows = len(M)
        ncols = len(M[0]) if nrows else 0
        # clear the pivot row with column operations (basis change in E_{k+1})
        for j in range(ncols):
            if j == pj or M[pi][j].is_zero():
                continue
            lam = M[pi][j].scale(1 / c)
            for i in range(nrows):
                M[i][j] = M[i][j] - lam * M[i][pj]
            if k + 1 < len(ents):
                nxt = ents[k + 1]
                for b in range(len(nxt[0]) if nxt else 0):
                    nxt[pj][b] = nxt[pj][b] + lam * nxt[j][b]
        # clear the pivot column with row operations (basis change in E_k)
        for i in range(nrows):
            if i == pi or M[i][pj].is_zero():
                continue
            lam = M[i][pj].scale(1 / c)
            for j in range(ncols):
                M[i][j] = M[i][j] - lam * M[pi][j]
            if k - 1 >= 0:
                prv = ents[k - 1]
                for a in range(len(prv)):
                    prv[a][pi] = prv[a][pi] + lam * prv[a][i]
        # the complement row/column must now vanish by the complex property
        if k + 1 < len(ents) and ents[k + 1]:
            assert all(p.is_zero() for p in ents[k + 1][pj])
        if k - 1 >= 0:
            assert all(row[pi].is_zero() for row in ents[k - 1])
        # delete basis element pj of E_{k+1} and pi of E_k
        for i in range(nrows):
            del M[i][pj]
        del M[pi]
        if k + 1 < len(ents):
            del ents[k + 1][pj]
        if k - 1 >= 0:
            for row in ents[k - 1]:
                del row[pi]
        del shifts[k + 1][pj]
        del shifts[k][pi]

    ranks = [len(s) for s in shifts]
    # drop trailing zero-rank levels
    while len(ranks) > 1 and ranks[-1] == 0:
        ranks.pop()
        shifts.pop()
        ents.pop()
    maps = [PolyMatrix(ring, M, cols_hint=ranks[k]) for k, M in enumerate(ents, start=1)]
    return FreeComplex(ring, tuple(ranks), tuple(maps), graded=True,
                       shifts=tuple(tuple(s) for s in shifts))


def koszul_complex(elems: list[Polynomial]) -> FreeComplex:
    """Koszul complex on a_1..a_m: E_k = Lambda^k O^m, maps by interior
    multiplication with alternating signs."""
    if not elems:
        raise ValidationError("Koszul complex wants at least one element")
    ring = elems[0].ring
    for a in elems:
        if a.ring != ring:
            raise StructuralError("Koszul inputs in different rings")
        if a.is_zero():
            raise ValidationError("Koszul inputs must be nonzero")
    m = len(elems)
    graded = all(weighted_degree_info(a).quasi_homogeneous for a in elems)
    degs = [weighted_degree_info(a).max_degree for a in elems]
    bases = [list(itertools.combinations(range(m), k)) for k in range(m + 1)]
    maps = []
    for k in range(1, m + 1):
        src = bases[k]
        tgt = bases[k - 1]
        tgt_index = {S: i for i, S in enumerate(tgt)}
        zero = Polynomial.zero(ring)
        M = [[zero for _ in src] for _ in tgt]
        for j, S in enumerate(src):
            for idx, t in enumerate(S):
                row = tgt_index[S[:idx] + S[idx + 1:]]
                term = elems[t] if idx % 2 == 0 else -elems[t]
                M[row][j] = M[row][j] + term
        maps.append(PolyMatrix(ring, M))
    ranks = tuple(len(b) for b in bases)
    shifts = tuple(tuple(sum(degs[t] for t in S) for S in bases[k]) for k in range(m + 1)) \
        if graded else None
    return FreeComplex(ring, ranks, tuple(maps), graded=graded, shifts=shifts)


def rank_locus_ideal(C: FreeComplex, k: int, ambient: Ideal) -> tuple[Ideal, bool]:
    """Ideal cutting out Z_k = {rank f_k < rho_k} inside V(ambient).

    Returns (ideal, degenerate); degenerate=True means rho_k exceeds the
    matrix size, the rank can never be attained, and the locus is all of
    V(ambient)."""
    if not 1 <= k <= C.length:
        raise ValidationError(f"no map f_{k} in a length-{C.length} complex")
    if ambient.ring != C.ring:
        raise StructuralError("ambient ideal ring mismatch")
    rho = expected_ranks(C)[k - 1]
    M = C.maps[k - 1]
    if rho > min(M.rows, M.cols):
        return Ideal(C.ring, ambient.generators), True
    mins = minors(M, rho)
    return Ideal(C.ring, tuple(mins) + ambient.generators), False


def check_acyclicity(C: FreeComplex, budget: int | None = None):
    """Exactness certificate via ranks and minor-locus codimensions.

    Returns (acyclic, failures); each failure is (k, reason).  The test
    is exact over a polynomial ring: codimension equals grade there.
    """
    ring = C.ring
    n = ring.n
    rho = expected_ranks(C)
    failures = []
    for k in range(1, C.length + 1):
        M = C.maps[k - 1]
        r = rho[k - 1]
        if r > min(M.rows, M.cols):
            failures.append((k, f"expected rank {r} exceeds matrix size"))
            continue
        mins = minors(M, r) if r > 0 else None
        if r > 0 and not mins:
            failures.append((k, f"all {r}-minors vanish"))
            continue
        if r + 1 <= min(M.rows, M.cols) and minors(M, r + 1):
            failures.append((k, f"some {r + 1}-minor is nonzero"))
            continue
        if r > 0:
            locus = Ideal(ring, mins)
            codim = n - krull_dimension(locus, budget=budget)
            if codim < k:
                failures.append((k, f"rank-drop locus has codim {codim} < {k}"))
    return (not failures, tuple(failures))


def jacobian_matrix(I: Ideal) -> PolyMatrix:
    ring = I.ring
    return PolyMatrix(
        ring,
        [[g.derivative(j) for j in range(ring.n)] for g in I.generators],
    )


@dataclass(frozen=True)
class StratumInfo:
    ideal: Ideal
    dim: int                 # -1 for empty
    codim_in_z: int | None   # None = empty stratum (infinite codim)

    @property
    def empty(self) -> bool:
        return self.dim < 0


@dataclass(frozen=True)
class StrataReport:
    ring: RingContext
    variety_ideal: Ideal
    ambient_dim: int
    d: int                       # dim Z
    p: int                       # codim of Z in C^n
    expected: tuple[int, ...]    # rho_k for the resolving complex
    zk_ideals: dict              # k -> Ideal (rho_k-minors + I)
    zsing_ideal: Ideal
    strata: dict                 # r -> StratumInfo, r = 0..length-p
    purity_ok: bool
    degenerate: tuple[str, ...]  # warnings from unit-minor conventions
    notes: tuple[str, ...]

    def stratum(self, r: int) -> StratumInfo | None:
        """None means the stratum is empty because the complex ends."""
        return self.strata.get(r)


def strata(C: FreeComplex, I: Ideal, budget: int | None = None) -> StrataReport:
    """Rank-drop strata of the resolving complex C of O/I, plus the
    Jacobian singular stratum Z^0; codims are measured inside Z."""
    ring = I.ring
    if C.ring != ring:
        raise StructuralError("complex and ideal rings differ")
    n = ring.n
    d = krull_dimension(I, budget=budget)
    if d < 0:
        raise ValidationError("strata of an empty variety are undefined")
    p = n - d
    rho = expected_ranks(C)
    degenerate: list[str] = []

    jac = jacobian_matrix(I)
    if p > min(jac.rows, jac.cols):
        z0_ideal = Ideal(ring, I.generators)
        degenerate.append("jacobian smaller than expected codim; Z^0 = Z")
    elif p == 0:
        z0_ideal = Ideal(ring, (Polynomial.constant(ring, 1),))
    else:
        z0_ideal = Ideal(ring, tuple(minors(jac, p)) + I.generators)

    zk: dict[int, Ideal] = {}
    for k in range(1, C.length + 1):
        ideal_k, degen = rank_locus_ideal(C, k, I)
        zk[k] = ideal_k
        if degen:
            degenerate.append(f"rho_{k} exceeds the size of f_{k}; Z_{k} = Z")

    strata_map: dict[int, StratumInfo] = {}
    dim0 = krull_dimension(z0_ideal, budget=budget)
    strata_map[0] = StratumInfo(z0_ideal, dim0, (d - dim0) if dim0 >= 0 else None)
    for r in range(1, C.length - p + 1):
        idl = zk[p + r]
        dr = krull_dimension(idl, budget=budget)
        strata_map[r] = StratumInfo(idl, dr, (d - dr) if dr >= 0 else None)

    purity_ok = all(
        info.empty or (info.codim_in_z is not None and info.codim_in_z >= r + 1)
        for r, info in strata_map.items()
        if r >= 1
    )
    notes = (
        "codims measured inside Z (codim_Z = dim Z - dim stratum)",
        "strata beyond the complex length are empty and omitted",
    )
    return StrataReport(
        ring=ring, variety_ideal=I, ambient_dim=n, d=d, p=p, expected=rho,
        zk_ideals=zk, zsing_ideal=z0_ideal, strata=strata_map,
        purity_ok=purity_ok, degenerate=tuple(degenerate), notes=notes,
    )


def check_cm_depth(S: StrataReport) -> tuple[bool, int, int]:
    """(is_CM, depth_lower, depth_exact).

    Z^r empty for all r > d - nu is equivalent to depth >= nu, so the
    largest empty tail pins depth exactly and both depth fields agree.
    """
    r_max = 0
    for r, info in S.strata.items():
        if r >= 1 and not info.empty:
            r_max = max(r_max, r)
    depth = S.d - r_max
    return (r_max == 0, depth, depth)


def check_bs_condition(S: StrataReport, a: Ideal, m: int | None = None):
    """Does codim_Z(Z^r cap Z^a) >= m + 1 + r hold for all r >= 0?

    Returns (holds, witness); witness is the first failing (r, codim).
    """
    if a.ring != S.ring:
        raise StructuralError("test ideal ring mismatch")
    if m is None:
        m = len(a.generators)
    if m < 1:
        raise ValidationError("m must be at least 1")
    for r in sorted(S.strata):
        info = S.strata[r]
        if info.empty:
            continue
        meet = Ideal(S.ring, info.ideal.generators + a.generators)
        dim_meet = krull_dimension(meet)
        if dim_meet < 0:
            continue
        codim = S.d - dim_meet
        if codim < m + 1 + r:
            return False, (r, codim)
    return True, None


def normality_witness(S: StrataReport):
    """First (r, codim) violating codim_Z Z^r >= 2 + r, else None."""
    for r in sorted(S.strata):
        info = S.strata[r]
        if info.empty:
            continue
        if info.codim_in_z is None or info.codim_in_z >= 2 + r:
            continue
        return (r, info.codim_in_z)
    return None


def check_normality_condition(S: StrataReport) -> bool:
    """Serre-type criterion: codim_Z Z^r >= 2 + r for every r >= 0."""
    return normality_witness(S) is None
