import random
from fractions import Fraction
from functools import cmp_to_key

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from uinvariants.errors import BadIndex, DegenerateInput
from uinvariants.generators import build_J, gen_indices, generator_values
from uinvariants.orbits import random_slice_point
from uinvariants.polycore import Poly, VarId, registry, s
from uinvariants.slices import (
    SlicePoint,
    block_formula,
    build_S,
    build_Sstar,
    coord_cmp,
    coord_var,
    order_key,
    ordered_coords,
    restrict,
    restricted_generator,
    slice_coord_at,
    slice_position,
    solve_slice,
    tri_decompose,
)


def S(n):
    return lambda k, i: s(k, i, n)


# ------------------------------------------------------------------ geometry


def test_build_S_examples():
    z = Poly.zero(registry(2))
    assert build_S(2).rows() == ((z, s(2, 0, 2)), (s(1, 0, 2), s(2, 1, 2)))
    assert build_S(3)[2, 3] == s(3, 1, 3)
    assert build_S(1).rows() == ((s(1, 0, 1),),)


@pytest.mark.parametrize("n", range(1, 8))
def test_index_map_is_the_antitriangle(n):
    seen = {}
    for a in range(1, n + 1):
        for b in range(1, n + 1):
            ki = slice_coord_at(a, b, n)
            if a + b < n + 1:
                assert ki is None
            else:
                assert ki is not None
                assert slice_position(*ki, n) == (a, b)
                seen[ki] = (a, b)
                if a + b == n + 1:
                    assert ki[1] == 0
    assert sorted(seen) == gen_indices(n)


def test_ordering_n3_chain():
    assert ordered_coords(3) == [(1, 0), (2, 0), (3, 0), (2, 1), (3, 2), (3, 1)]
    assert coord_cmp((2, 1), (3, 2)) == -1
    assert coord_cmp((3, 1), (3, 1)) == 0
    assert coord_cmp((3, 1), (3, 2)) == 1


def test_ordering_n4_chain():
    assert ordered_coords(4) == [(1, 0), (2, 0), (3, 0), (4, 0), (2, 1), (3, 2), (3, 1), (4, 3), (4, 2), (4, 1)]


@given(st.integers(1, 7).flatmap(lambda n: st.tuples(st.sampled_from(gen_indices(n)), st.sampled_from(gen_indices(n)), st.sampled_from(gen_indices(n)))))
def test_coord_cmp_is_total_order(triple):
    a, b, c = triple
    assert coord_cmp(a, b) == -coord_cmp(b, a)
    assert (coord_cmp(a, b) == 0) == (a == b)
    if coord_cmp(a, b) <= 0 and coord_cmp(b, c) <= 0:
        assert coord_cmp(a, c) <= 0


def test_ordered_coords_consistent_with_cmp():
    for n in range(1, 7):
        assert sorted(gen_indices(n), key=cmp_to_key(coord_cmp)) == ordered_coords(n)


# -------------------------------------------------------------- restriction


def test_restrict_n2():
    n = 2
    s_ = S(n)
    assert restrict(build_J(1, 0, n), n) == s_(1, 0)
    assert restrict(build_J(2, 0, n), n) == -s_(1, 0) * s_(2, 0)
    assert restrict(build_J(2, 1, n), n) == s_(1, 0) * s_(2, 1)


def test_restrict_n3():
    n = 3
    s_ = S(n)
    Ss = build_Sstar(n)
    s10_star, s20_star = Ss[3, 1], Ss[2, 2]
    # starred entries from the adjugate of S (checked against sympy)
    assert s10_star == -s_(1, 0) * s_(2, 0)
    assert s20_star == -s_(1, 0) * s_(3, 0)
    assert restrict(build_J(1, 0, n), n) == s_(1, 0)
    assert restrict(build_J(2, 0, n), n) == -s_(1, 0) * s_(2, 0)
    assert restrict(build_J(3, 0, n), n) == -s_(1, 0) * s_(2, 0) * s_(3, 0)
    assert restrict(build_J(2, 1, n), n) == -s10_star * s_(2, 1)
    minor = s_(2, 0) * s_(3, 2) - s_(3, 1) * s_(2, 1)
    assert restrict(build_J(3, 1, n), n) == s10_star * minor
    assert restrict(build_J(3, 1, n), n) == -s_(1, 0) * s_(2, 0) * minor
    # the displayed 3x3 determinant [[s10, s21, s32], [*, s*20, 0], [s*10, 0, 0]]
    # equals -s*10 * s*20 * s32
    assert restrict(build_J(3, 2, n), n) == -s10_star * s20_star * s_(3, 2)
    assert restrict(build_J(3, 2, n), n) == -s_(1, 0) ** 2 * s_(2, 0) * s_(3, 0) * s_(3, 2)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_homomorphism_route_matches_restrict(n):
    for k, i in gen_indices(n):
        assert restricted_generator(k, i, n) == restrict(build_J(k, i, n), n)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_restrict_commutes_with_evaluation(n):
    rng = random.Random(f"restrict/{n}")
    for _ in range(3):
        pt = random_slice_point(n, rng)
        B = pt.to_matrix()
        xpt = {VarId("x", (a + 1, b + 1), n): B[a][b] for a in range(n) for b in range(n)}
        spt = {coord_var(*ki, n): v for ki, v in pt.coords.items()}
        for k, i in gen_indices(n):
            f = build_J(k, i, n)
            assert restrict(f, n).eval(spt) == f.eval(xpt)


# -------------------------------------------------- triangular decomposition


def test_tri_decompose_examples():
    s2 = S(2)
    d = tri_decompose(2, 1, 2)
    assert (d.phi, d.psi) == (s2(1, 0), 0)
    d = tri_decompose(2, 0, 2)
    assert (d.phi, d.psi) == (-s2(1, 0), 0)
    s3 = S(3)
    d = tri_decompose(3, 1, 3)
    assert d.phi == s3(1, 0) * s3(2, 0) * s3(2, 1)
    assert d.psi == -s3(1, 0) * s3(2, 0) ** 2 * s3(3, 2)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_restricted_generator_is_affine_in_its_coordinate(n):
    for k, i in gen_indices(n):
        poly = restricted_generator(k, i, n)
        mine = order_key(k, i)
        assert poly.degree_in(coord_var(k, i, n)) == 1
        for kj in gen_indices(n):
            if order_key(*kj) > mine:
                assert poly.degree_in(coord_var(*kj, n)) == 0
        d = tri_decompose(k, i, n)
        assert d.phi * s(k, i, n) + d.psi == poly


def test_tri_decompose_bad_index():
    with pytest.raises(BadIndex):
        tri_decompose(2, 2, 3)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_block_formula(n):
    for k, i in gen_indices(n):
        bf = block_formula(k, i, n)
        assert bf["det_C_is_monomial"]
        assert bf["product"] == restricted_generator(k, i, n)
        # the monomial uses only anti-diagonal coordinates
        assert all(v.indices[1] == 0 for v in bf["det_C"].variables())


# --------------------------------------------------------------------- solve


def test_solve_slice_n2():
    pt = solve_slice({(1, 0): 3, (2, 0): -6, (2, 1): 21}, 2)
    assert pt.coords == {(1, 0): 3, (2, 0): 2, (2, 1): 7}


@pytest.mark.parametrize("method", ["symbolic", "numeric"])
def test_solve_slice_degenerate(method):
    with pytest.raises(DegenerateInput):
        solve_slice({(1, 0): 0, (2, 0): -6, (2, 1): 21}, 2, method=method)
    with pytest.raises(DegenerateInput):
        solve_slice({(1, 0): 3, (2, 0): 0, (2, 1): 21}, 2, method=method)


def test_solve_slice_missing_values():
    with pytest.raises(BadIndex):
        solve_slice({(1, 0): 3}, 2)


def on_slope_locus(pt):
    """True when some slope of the triangular system vanishes at pt."""
    vals = {coord_var(*ki, pt.n): v for ki, v in pt.coords.items()}
    return any(tri_decompose(*ki, pt.n).phi.eval(vals) == 0 for ki in gen_indices(pt.n))


def check_round_trip(pt, methods=("symbolic", "numeric")):
    values = generator_values(pt.to_matrix())
    for method in methods:
        if on_slope_locus(pt):
            with pytest.raises(DegenerateInput):
                solve_slice(values, pt.n, method=method)
        else:
            assert solve_slice(values, pt.n, method=method) == pt


@pytest.mark.parametrize("n", range(1, 8))
def test_solve_round_trip_on_slice(n):
    rng = random.Random(f"solve/{n}")
    for _ in range(3):
        check_round_trip(random_slice_point(n, rng))


def test_solve_round_trip_large_numeric():
    n = 10
    pt = random_slice_point(n, random.Random("big"))
    assert solve_slice(generator_values(pt.to_matrix()), n) == pt


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 5), st.randoms(use_true_random=False))
def test_solve_inverts_fingerprint_property(n, rnd):
    check_round_trip(random_slice_point(n, random.Random(rnd.random())), methods=("auto",))


def test_slope_locus_raises_degenerate():
    # phi of J_{3,1} at n = 3 is s10*s20*s21, so s21 = 0 leaves s31 undetermined
    pt = SlicePoint(3, {(1, 0): 5, (2, 0): 3, (3, 0): 2, (2, 1): 0, (3, 2): 7, (3, 1): 1})
    assert on_slope_locus(pt)
    with pytest.raises(DegenerateInput):
        solve_slice(generator_values(pt.to_matrix()), 3)


def test_slopes_beyond_monomials():
    # from n = 4 on some slopes are sums, e.g. the slope of J_{4,1}
    assert all(len(tri_decompose(k, i, 3).phi) == 1 for k, i in gen_indices(3))
    assert len(tri_decompose(4, 1, 4).phi) == 2


def test_slice_point_json_round_trip():
    pt = SlicePoint(2, {(1, 0): 3, (2, 0): Fraction(2, 3), (2, 1): 5})
    assert pt.to_json_obj() == {"n": 2, "coords": {"s[1][0]": "3", "s[2][0]": "2/3", "s[2][1]": "5"}}
    assert SlicePoint.from_json(pt.to_json()) == pt
    assert pt.to_matrix() == [[0, Fraction(2, 3)], [3, 5]]
    assert SlicePoint.from_matrix(pt.to_matrix()) == pt


def test_tri_decomp_value_reads_only_lower_coords():
    d = tri_decompose(3, 1, 3)
    coords = {(1, 0): 2, (2, 0): 3, (2, 1): 5, (3, 2): 7, (3, 1): 11}
    # phi = s10*s20*s21 = 30, psi = -s10*s20^2*s32 = -126
    assert d.value(coords) == 30 * 11 - 126
