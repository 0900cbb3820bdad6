import math

import pytest
from hypothesis import given, settings, strategies as st

from curveinterp.errors import InvalidInput
from curveinterp.exact_algebra import FieldSpec, Matrix, Poly, Rng, mat_kernel
from curveinterp.euler_model import (
    SplittingType,
    coset_h0,
    divisor_rows,
    h0_general_twist,
    h1_general_twist,
    is_balanced,
    omega_h0,
    random_fiber_functionals,
    splitting_from_coset,
    splitting_type,
    tangent_eval_rows,
    tangent_h0,
)
from curveinterp.rational_maps import RationalMap, random_map


def line(F, r):
    """[1 : x : 0 : ... : 0] moved to a general line by a fixed triangular change."""
    rows = [[1, 0], [0, 1]] + [[i, i + 1] for i in range(1, r)]
    return RationalMap(F, rows)


def conic(F):
    return RationalMap(F, [[1, 0, 0], [0, 1, 0], [0, 0, 1]])


# kernel model ---------------------------------------------------------------


def test_omega_h0_line(F):
    f = line(F, 2)
    assert omega_h0(f, 0) == 0
    assert omega_h0(f, 1) == 1
    assert omega_h0(f, 2) == 3


@pytest.mark.parametrize("r", [2, 3, 4, 5])
def test_line_splitting(F, r):
    assert splitting_type(line(F, r)).degrees == (2,) + (1,) * (r - 1)


def test_conic_splitting(F):
    assert splitting_type(conic(F)).degrees == (3, 3)


def test_general_quartic_in_p3(F):
    f = random_map(3, 4, Rng(0, F))
    s = splitting_type(f)
    assert s.degrees == (6, 5, 5)
    assert splitting_from_coset(f, Rng(1, F)) == s


def test_splitting_needs_base_point_free(F):
    f = RationalMap(F, [[-1, 0, 1], [-1, 1, 0], [0, -1, 1]], check=False)
    with pytest.raises(InvalidInput):
        splitting_type(f)


def test_special_map_is_unbalanced(F):
    # [1 : x : x^4] has splitting {7, 5}: a map with too much contact to a line
    f = RationalMap(F, [[1, 0, 0, 0, 0], [0, 1, 0, 0, 0], [0, 0, 0, 0, 1]])
    s = splitting_type(f)
    assert s.degrees == (7, 5)
    assert not s.balanced
    assert splitting_from_coset(f, Rng(2, F)) == s


@pytest.mark.parametrize("degrees, expected", [((2, 1), True), ((3, 3), True), ((4, 2), False), ((), True)])
def test_is_balanced(degrees, expected):
    assert is_balanced(SplittingType(degrees)) is expected


def test_h0_general_twist_examples():
    assert h0_general_twist(SplittingType((2, 1)), -1, 1, 0) == 3
    assert h0_general_twist(SplittingType((2, 1)), -1, 1, 2) == 0
    assert h1_general_twist(SplittingType((2, 1)), -1, 1, 2) == 1
    assert h0_general_twist(SplittingType((3, 3)), 0, 2, 3) == 2


@settings(max_examples=25)
@given(st.integers(1, 4), st.integers(1, 6), st.integers(0, 10**6))
def test_duality_consistency(r, d, seed):
    F = FieldSpec()
    f = random_map(r, d, Rng(seed, F))
    s, table = splitting_type(f, with_table=True)
    for m in range(0, (r + 1) * d + 2):
        assert omega_h0(f, m) == sum(max(0, m - a + 1) for a in s.degrees)
    assert set(table) <= set(range((r + 1) * d + 2))


@settings(max_examples=30)
@given(st.integers(1, 4), st.integers(1, 8), st.integers(0, 10**6))
def test_general_maps_are_balanced(r, d, seed):
    s = splitting_type(random_map(r, d, Rng(seed, FieldSpec())))
    assert s.balanced
    assert sum(s.degrees) == (r + 1) * d and s.rank == r


# coset model ----------------------------------------------------------------


def test_line_vanishing_drops_by_r(F):
    f = line(F, 3)
    assert tangent_h0(f) == 4 * 2 - 1
    assert tangent_h0(f, [5]) == 4 * 2 - 1 - 3


def test_conic_vanishing_dims(F):
    f = conic(F)
    pts = Rng(3, F).points(4)
    assert [tangent_h0(f, pts[:e]) for e in range(1, 5)] == [6, 4, 2, 0]


def test_empty_constraint_keeps_dimension(F):
    f = conic(F)
    assert tangent_eval_rows(f, 3, constraint=[]) == []
    assert coset_h0(f, []) == 8


def test_constraint_must_vanish_on_image(F):
    f = conic(F)
    with pytest.raises(InvalidInput):
        tangent_eval_rows(f, 2, constraint=[[1, 0, 0]])  # f(2) = [1:2:4]


def test_codim_constraint_dims(F, rng):
    f = line(F, 2)
    rows = tangent_eval_rows(f, 4, random_fiber_functionals(f, 4, 1, rng))
    assert coset_h0(f, rows) == 4


@settings(max_examples=20)
@given(st.integers(1, 4), st.integers(1, 5), st.integers(0, 10**6))
def test_matrix_matches_formula(r, d, seed):
    F = FieldSpec()
    rng = Rng(seed, F)
    f = random_map(r, d, rng)
    s = splitting_type(f)
    chi = (r + 1) * d + r
    pts = rng.points(math.ceil(chi / r) + 1)
    for e in range(len(pts)):
        assert tangent_h0(f, pts[:e]) == h0_general_twist(s, 0, d, e) == max(0, chi - e * r)


def hyperplane_pullback(f, rng):
    while True:
        h = rng.vector(f.r + 1)
        poly = sum((Poly(f.field, [c]) * p for c, p in zip(h, f.polys)), Poly(f.field, []))
        if poly.degree == f.d:
            return poly


@settings(max_examples=15)
@given(st.integers(1, 3), st.integers(1, 5), st.integers(0, 10**6))
def test_twisted_law_genus_zero(r, d, seed):
    F = FieldSpec()
    rng = Rng(seed, F)
    f = random_map(r, d, rng)
    s = splitting_type(f)
    shifted = SplittingType(tuple(a - d for a in s.degrees))
    assert shifted.balanced
    h = hyperplane_pullback(f, rng)
    chi = d + r
    pts = rng.points(math.ceil(chi / r) + 1)
    for e in range(len(pts)):
        assert tangent_h0(f, pts[:e], [h]) == max(0, chi - e * r)


def test_divisor_rows_match_pointwise_vanishing(F, rng):
    # vanishing along a split h equals vanishing at its roots
    f = random_map(2, 3, rng)
    roots = rng.points(3)
    h = Poly.from_roots(F, roots)
    assert coset_h0(f, divisor_rows(f, h)) == tangent_h0(f, roots)
