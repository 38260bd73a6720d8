"""Free resolutions, minimalization, Koszul complexes, rank strata."""

import pytest

from bsw.errors import StructuralError, ValidationError
from bsw.groebner import Ideal, ideal_member, krull_dimension
from bsw.poly import Polynomial, RingContext, parse_polynomial, parse_polynomials
from bsw.resolution import (FreeComplex, PolyMatrix, check_acyclicity,
                            check_bs_condition, check_cm_depth,
                            check_normality_condition, complex_from_json_dict,
                            expected_ranks, free_resolution, koszul_complex,
                            minimalize, minors, normality_witness,
                            rank_locus_ideal, strata, syzygies)

R2 = RingContext(("x", "y"))
R3 = RingContext(("x", "y", "z"))
R4 = RingContext(("x", "y", "z", "w"))
RW = RingContext(("z", "w"), (2, 5))


def P(text, ring=R2):
    return parse_polynomial(text, ring)


def ideal(text, ring=R2):
    return Ideal(ring, tuple(parse_polynomials(text, ring)))


def PM(ring, rows):
    return PolyMatrix(ring, [[parse_polynomial(s, ring) for s in row] for row in rows])


def resolve(text, ring, **kw):
    return free_resolution(ideal(text, ring), **kw)


# ---------------------------------------------------------------- syzygies

def test_syzygy_of_regular_pair():
    M = PM(R2, [["x", "y"]])
    S = syzygies(M)
    assert len(S.entries[0]) == 1
    col = [S.entries[0][0], S.entries[1][0]]
    assert M.compose(S).is_zero()
    # proportional to (-y, x)
    assert col[0] * P("x") + col[1] * P("y") == Polynomial.zero(R2)
    assert not col[0].is_zero()


def test_syzygy_with_unit_cofactor():
    M = PM(R2, [["x^2", "x"]])
    S = syzygies(M)
    assert M.compose(S).is_zero()
    # some column is (c, -c*x): the redundancy of x^2 over x is visible
    found = False
    for j in range(len(S.entries[0])):
        a, b = S.entries[0][j], S.entries[1][j]
        c = a.constant_value()
        if c not in (None, 0) and b == P("x").scale(-c):
            found = True
    assert found


def test_syzygy_of_unit():
    M = PM(R2, [["1"]])
    S = syzygies(M)
    assert len(S.entries[0]) == 0


# ---------------------------------------------------------------- resolutions

def test_resolution_principal():
    C = resolve("z^5 - w^2", RW)
    assert C.ranks == (1, 1)
    assert C.graded


def test_resolution_two_planes():
    C = resolve("x*z, x*w, y*z, y*w", R4)
    assert minimalize(C).ranks == (1, 4, 4, 1)


def test_resolution_regular_pair_matches_koszul():
    C = minimalize(resolve("x, y", R2))
    K = koszul_complex((P("x"), P("y")))
    assert C.ranks == K.ranks == (1, 2, 1)


def test_resolution_rejects_unit_ideal():
    with pytest.raises(ValidationError):
        resolve("1", R2)
    with pytest.raises(ValidationError):
        resolve("x - 1, x", R2)  # unit, but only after basis computation


def test_resolution_first_map_is_generator_row():
    I = ideal("x*z, x*w, y*z, y*w", R4)
    C = free_resolution(I)
    assert tuple(C.maps[0].entries[0]) == I.generators


def test_resolution_length_bound():
    C = resolve("x^2, x*y, y^3", R2)
    assert C.length <= 2
    ok, fails = check_acyclicity(C)
    assert ok, fails


def test_graded_autodetect():
    assert resolve("z^5 - w^2", RW).graded
    assert not resolve("z^2 + w, z^3", RW).graded
    with pytest.raises(ValidationError):
        resolve("z^2 + w, z^3", RW, graded=True)


# ---------------------------------------------------------------- minimalize

def test_minimalize_keeps_minimal_complex():
    K = koszul_complex((P("x"), P("y")))
    M = minimalize(K)
    assert M.ranks == K.ranks
    assert [m.to_strings() for m in M.maps] == [m.to_strings() for m in K.maps]


def test_minimalize_duplicate_generator():
    # (x, x): the syzygy (1, -1) is a unit column; reduction leaves (x)
    C = resolve("x, x", R2)
    assert C.ranks == (1, 2, 1)
    M = minimalize(C)
    assert M.ranks == (1, 1)
    assert M.maps[0].to_strings() == [["x"]]


def test_minimalize_requires_graded():
    C = resolve("z^2 + w, z^3", RW)
    with pytest.raises(ValidationError):
        minimalize(C)


def test_minimalize_two_planes_stable():
    C = resolve("x*z, x*w, y*z, y*w", R4)
    M = minimalize(C)
    assert M.ranks == (1, 4, 4, 1)
    # no unit entries anywhere
    for mp in M.maps:
        for row in mp.entries:
            for p in row:
                cv = p.constant_value()
                assert cv is None or cv == 0


# ---------------------------------------------------------------- koszul

def test_koszul_shapes():
    assert koszul_complex((P("x"),)).ranks == (1, 1)
    K2 = koszul_complex((P("x"), P("y")))
    assert K2.ranks == (1, 2, 1)
    assert koszul_complex((P("x", R3), P("y", R3), P("z", R3))).ranks == (1, 3, 3, 1)


def test_koszul_f2_sign_convention():
    K = koszul_complex((P("x"), P("y")))
    col = [K.maps[1].entries[0][0], K.maps[1].entries[1][0]]
    # (-y, x) up to overall sign
    assert {str(col[0]), str(col[1])} in ({"-y", "x"}, {"y", "-x"})
    assert K.maps[0].compose(K.maps[1]).is_zero()


def test_koszul_acyclicity_detector():
    ok, _ = check_acyclicity(koszul_complex((P("x", R3), P("y", R3), P("z", R3))))
    assert ok
    ok2, fails = check_acyclicity(koszul_complex((P("x"), P("x*y"))))
    assert not ok2
    assert fails and fails[0][0] == 2  # the k=2 locus is too big


def test_regular_sequence_loci_codims():
    K = koszul_complex((P("x", R3), P("y", R3), P("z", R3)))
    for k in (1, 2, 3):
        locus, degenerate = rank_locus_ideal(K, k, Ideal(R3, ()))
        assert not degenerate
        assert 3 - krull_dimension(locus) >= k


# ---------------------------------------------------------------- shape checks

def test_expected_ranks():
    assert expected_ranks(resolve("z^5 - w^2", RW)) == (1,)
    C = resolve("x*z, x*w, y*z, y*w", R4)
    assert expected_ranks(C) == (1, 3, 1)
    K = koszul_complex((P("x", R3), P("y", R3), P("z", R3)))
    assert expected_ranks(K) == (1, 2, 1)


def test_rank_consistency():
    for C in (resolve("x*z, x*w, y*z, y*w", R4),
              koszul_complex((P("x", R3), P("y", R3), P("z", R3))),
              resolve("x^2, x*y, y^3", R2)):
        rho = expected_ranks(C)
        assert rho[0] == C.ranks[0]  # resolves a cyclic module
        for k in range(1, C.length):
            assert rho[k - 1] + rho[k] == C.ranks[k]
        assert rho[C.length - 1] == C.ranks[C.length]


def test_complex_property_enforced():
    with pytest.raises(StructuralError):
        FreeComplex(R2, (1, 1, 1), (PM(R2, [["x"]]), PM(R2, [["y"]])), False, None)
    with pytest.raises(StructuralError):
        FreeComplex(R2, (1, 2), (PM(R2, [["x"]]),), False, None)


def test_json_round_trip():
    C = resolve("x*z, x*w, y*z, y*w", R4)
    D = complex_from_json_dict(C.to_json_dict())
    assert D.ranks == C.ranks
    assert [m.to_strings() for m in D.maps] == [m.to_strings() for m in C.maps]
    assert D.shifts == C.shifts


# ---------------------------------------------------------------- rank loci

def test_rank_locus_cusp():
    C = resolve("z^5 - w^2", RW)
    locus, degenerate = rank_locus_ideal(C, 1, ideal("z^5 - w^2", RW))
    assert not degenerate
    assert krull_dimension(locus) == 1  # Z_1 = Z for a hypersurface


def test_rank_locus_two_planes_top():
    I = ideal("x*z, x*w, y*z, y*w", R4)
    C = minimalize(free_resolution(I))
    locus, degenerate = rank_locus_ideal(C, 3, I)
    assert not degenerate
    assert krull_dimension(locus) == 0


def test_rank_locus_koszul_pair():
    K = koszul_complex((P("x"), P("y")))
    locus, _ = rank_locus_ideal(K, 2, Ideal(R2, ()))
    assert krull_dimension(locus) == 0
    assert ideal_member(P("x"), locus) and ideal_member(P("y"), locus)


def test_rank_locus_out_of_range():
    C = resolve("z^5 - w^2", RW)
    with pytest.raises(ValidationError):
        rank_locus_ideal(C, 2, ideal("z^5 - w^2", RW))


def test_rank_locus_degenerate_convention():
    # rho_1 = 2 can never be attained by a 1x2 matrix: locus is everything
    C = FreeComplex(R2, (1, 2), (PM(R2, [["x", "y"]]),), False, None)
    locus, degenerate = rank_locus_ideal(C, 1, Ideal(R2, ()))
    assert degenerate
    assert locus.generators == ()


# ---------------------------------------------------------------- strata suite

def cusp_strata(p=5):
    I = ideal(f"z^{p} - w^2", RW)
    return strata(free_resolution(I), I), I


def test_strata_cusp():
    S, _ = cusp_strata()
    assert (S.d, S.p) == (1, 1)
    z0 = S.strata[0]
    assert not z0.empty
    assert z0.dim == 0 and z0.codim_in_z == 1
    assert all(S.strata[r].empty for r in S.strata if r >= 1)
    assert S.purity_ok


def test_strata_smooth():
    I = ideal("w - z^2", RingContext(("z", "w")))
    S = strata(free_resolution(I), I)
    assert S.strata[0].empty
    assert all(info.empty for info in S.strata.values())
    assert check_normality_condition(S)


def test_strata_two_planes():
    I = ideal("x*z, x*w, y*z, y*w", R4)
    S = strata(free_resolution(I), I)
    assert (S.d, S.p) == (2, 2)
    assert S.strata[1].dim == 0 and S.strata[1].codim_in_z == 2
    assert S.stratum(2) is None  # beyond complex length: empty
    assert S.purity_ok


def test_strata_cone():
    I = ideal("x*z - y^2", R3)
    S = strata(free_resolution(I), I)
    assert (S.d, S.p) == (2, 1)
    assert S.strata[0].dim == 0 and S.strata[0].codim_in_z == 2


def test_strata_empty_variety_rejected():
    I = ideal("x - 1, x")  # unit ideal: no points
    with pytest.raises(ValidationError):
        strata(free_resolution(ideal("x, y")), I)


def test_strata_nesting():
    I = ideal("x*z, x*w, y*z, y*w", R4)
    C = free_resolution(I)
    S = strata(C, I)
    ks = sorted(S.zk_ideals)
    for a, b in zip(ks, ks[1:]):
        da = krull_dimension(S.zk_ideals[a])
        db = krull_dimension(S.zk_ideals[b])
        assert db <= da
        meet = Ideal(I.ring, S.zk_ideals[a].generators + S.zk_ideals[b].generators)
        assert krull_dimension(meet) == db  # V(Z_b) sits inside V(Z_a)


# ---------------------------------------------------------------- criteria

def test_cm_depth_suite():
    S, _ = cusp_strata()
    assert check_cm_depth(S) == (True, 1, 1)
    I = ideal("x*z, x*w, y*z, y*w", R4)
    S2 = strata(free_resolution(I), I)
    assert check_cm_depth(S2) == (False, 1, 1)
    I3 = ideal("w - z^2", RingContext(("z", "w")))
    S3 = strata(free_resolution(I3), I3)
    assert check_cm_depth(S3) == (True, 1, 1)
    I4 = ideal("x*z - y^2", R3)
    S4 = strata(free_resolution(I4), I4)
    assert check_cm_depth(S4) == (True, 2, 2)


def test_normality_suite():
    S, _ = cusp_strata()
    assert not check_normality_condition(S)
    assert normality_witness(S) == (0, 1)
    I = ideal("x*z - y^2", R3)
    assert check_normality_condition(strata(free_resolution(I), I))
    I2 = ideal("w - z^2", RingContext(("z", "w")))
    assert check_normality_condition(strata(free_resolution(I2), I2))


def test_bs_condition_suite():
    S, I = cusp_strata()
    holds, witness = check_bs_condition(S, Ideal(RW, (P("z", RW),)), 1)
    assert not holds and witness == (0, 1)
    I2 = ideal("w - z^2", RingContext(("z", "w")))
    S2 = strata(free_resolution(I2), I2)
    a2 = Ideal(I2.ring, (parse_polynomial("z", I2.ring),))
    assert check_bs_condition(S2, a2, 1) == (True, None)
    I3 = ideal("x*z - y^2", R3)
    S3 = strata(free_resolution(I3), I3)
    holds3, _ = check_bs_condition(S3, Ideal(R3, (P("x", R3),)), 1)
    assert holds3


def test_bs_condition_validates_m():
    S, _ = cusp_strata()
    with pytest.raises(ValidationError):
        check_bs_condition(S, Ideal(RW, (P("z", RW),)), 0)


# ------------------------------------------------- resolution independence

def test_strata_independent_of_resolution():
    """Complete intersection: Koszul vs minimalized iterated-syzygy chain."""
    I = Ideal(R3, (P("x*y", R3), P("z", R3)))
    K = koszul_complex(I.generators)
    ok, _ = check_acyclicity(K)
    assert ok  # regular sequence, so the Koszul complex resolves
    C = minimalize(free_resolution(I))
    assert C.ranks == K.ranks
    SK = strata(K, I)
    SC = strata(C, I)
    assert (SK.d, SK.p) == (SC.d, SC.p)
    for k in SK.zk_ideals:
        assert krull_dimension(SK.zk_ideals[k]) == krull_dimension(SC.zk_ideals[k])
    assert sorted(SK.strata) == sorted(SC.strata)
    for r in SK.strata:
        a, b = SK.strata[r], SC.strata[r]
        assert a.empty == b.empty
        if not a.empty:
            assert a.dim == b.dim and a.codim_in_z == b.codim_in_z
            # same variety: generators of one vanish on the other, up to power 4
            for g in a.ideal.generators:
                assert any(ideal_member(g ** j, b.ideal) for j in range(1, 5))
            for g in b.ideal.generators:
                assert any(ideal_member(g ** j, a.ideal) for j in range(1, 5))


def test_minors_helper():
    M = PM(R2, [["x", "y"], ["y", "x"]])
    assert sorted(str(m) for m in minors(M, 1)) == ["x", "y"]
    two = minors(M, 2)
    assert [str(m) for m in two] == ["x^2 - y^2"]
