import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from curveinterp.errors import FieldTooSmall, InvalidInput
from curveinterp.exact_algebra import (
    DEFAULT_PRIME,
    FieldSpec,
    Matrix,
    Poly,
    Rng,
    default_prime,
    is_squarefree,
    mat_inverse,
    mat_kernel,
    mat_mul,
    mat_rank,
    mat_vec,
    poly_eval,
    poly_gcd,
    random_invertible,
    sample_points,
)


def brute_kernel_size(m: Matrix) -> int:
    """Count solutions of m v = 0 by enumerating F_p^n (tiny fields only)."""
    p = m.field.characteristic
    return sum(
        1 for v in itertools.product(range(p), repeat=m.ncols)
        if not any(mat_vec(m, list(v)))
    )


def matrices(p, max_rows=4, max_cols=4):
    return st.integers(1, max_rows).flatmap(
        lambda n: st.integers(1, max_cols).flatmap(
            lambda k: st.lists(st.lists(st.integers(0, p - 1), min_size=k, max_size=k),
                               min_size=n, max_size=n)))


# field ----------------------------------------------------------------------


def test_default_prime(monkeypatch):
    monkeypatch.delenv("CURVEINTERP_PRIME", raising=False)
    assert default_prime() == DEFAULT_PRIME == 1000003
    monkeypatch.setenv("CURVEINTERP_PRIME", "101")
    assert default_prime() == 101


@pytest.mark.parametrize("bad", [1, 4, 1000001, -7])
def test_field_rejects_non_primes(bad):
    with pytest.raises(InvalidInput):
        FieldSpec(bad)


def test_coercion():
    F = FieldSpec(7)
    assert F(-1) == 6
    assert F("1/2") == 4
    assert F(Fraction(3, 2)) == 5
    with pytest.raises(InvalidInput):
        F("1/7")
    with pytest.raises(InvalidInput):
        F(True)
    Q = FieldSpec(0)
    assert Q("-3/4") == Fraction(-3, 4)
    assert Q.to_json(Q("6/3")) == 2 and Q.to_json(Q("1/3")) == "1/3"


# kernel and rank ------------------------------------------------------------


def test_kernel_zero_matrix(F):
    basis = mat_kernel(Matrix.zeros(F, 2, 3))
    assert len(basis) == 3


def test_kernel_identity(F):
    assert mat_kernel(Matrix.identity(F, 3)) == []


def test_kernel_rank_deficient_f7(F7):
    m = Matrix(F7, [[1, 2], [2, 4]])
    basis = mat_kernel(m)
    assert len(basis) == 1
    (v,) = basis
    # proportional to (2, -1)
    assert (v[0] * F7(-1) - v[1] * 2) % 7 == 0
    assert brute_kernel_size(m) == 7 ** 1


@pytest.mark.parametrize("n", [1, 3, 6])
def test_rank_identity(F, n):
    assert mat_rank(Matrix.identity(F, n)) == n


def test_rank_zero_and_f7(F, F7):
    assert mat_rank(Matrix.zeros(F, 3, 4)) == 0
    assert mat_rank(Matrix(F7, [[1, 2], [2, 4]])) == 1


def test_kernel_is_echelon_normalized(F):
    m = Matrix(F, [[1, 1, 0, 2], [0, 0, 1, 3]])
    basis = mat_kernel(m)
    # one vector per free column, 1 at that column and 0 at the other free ones
    assert [[v[1], v[3]] for v in basis] == [[1, 0], [0, 1]]


@given(matrices(3, 4, 5))
def test_kernel_matches_enumeration_f3(rows):
    m = Matrix(FieldSpec(3), rows)
    assert 3 ** len(mat_kernel(m)) == brute_kernel_size(m)


@given(matrices(DEFAULT_PRIME, 6, 6))
def test_rank_nullity(rows):
    m = Matrix(FieldSpec(), rows)
    basis = mat_kernel(m)
    assert mat_rank(m) + len(basis) == m.ncols
    for v in basis:
        assert not any(mat_vec(m, v))


@given(matrices(11, 5, 5), st.randoms(use_true_random=False), st.integers(1, 10))
def test_rank_row_operations_invariant(rows, rnd, scale):
    F = FieldSpec(11)
    base = mat_rank(Matrix(F, rows))
    shuffled = list(rows)
    rnd.shuffle(shuffled)
    assert mat_rank(Matrix(F, shuffled)) == base
    i = rnd.randrange(len(rows))
    scaled = [list(r) for r in rows]
    scaled[i] = [x * scale for x in scaled[i]]
    assert mat_rank(Matrix(F, scaled)) == base


@given(st.lists(st.lists(st.integers(-20, 20), min_size=4, max_size=4), min_size=3, max_size=3))
def test_rank_over_q_bounds_reductions(rows):
    # reduction mod p can only lower the rank
    q_rank = mat_rank(Matrix(FieldSpec(0), rows))
    assert mat_rank(Matrix(FieldSpec(), rows)) == q_rank
    assert mat_rank(Matrix(FieldSpec(5), rows)) <= q_rank


def test_inverse_roundtrip(F, rng):
    a = random_invertible(F, 4, rng)
    assert mat_mul(a, mat_inverse(a)) == Matrix.identity(F, 4)


# polynomials ----------------------------------------------------------------


def test_poly_eval_examples(F, F7):
    assert poly_eval(Poly(F7, [1, 2]), 3) == 0
    assert poly_eval(Poly(F, []), 12345) == 0
    assert poly_eval(Poly(F, [0, 0, 0, 1]), 2) == 8


def test_zero_poly_degree(F):
    assert Poly(F, [0, 0]).degree == float("-inf")
    assert Poly(F, [0, 1]).degree == 1


polys = st.lists(st.integers(0, 96), max_size=6)


@given(polys, polys, st.integers(0, 96))
def test_eval_is_ring_homomorphism(a, b, x):
    F = FieldSpec(97)
    f, g = Poly(F, a), Poly(F, b)
    assert poly_eval(f + g, x) == (poly_eval(f, x) + poly_eval(g, x)) % 97
    assert poly_eval(f * g, x) == poly_eval(f, x) * poly_eval(g, x) % 97


@given(polys, st.lists(st.integers(0, 96), min_size=1, max_size=4).filter(lambda c: c[-1] != 0))
def test_divmod(a, b):
    F = FieldSpec(97)
    f, g = Poly(F, a), Poly(F, b)
    q, r = divmod(f, g)
    assert q * g + r == f
    assert r.degree < g.degree


def test_gcd_and_squarefree(F):
    a = Poly.from_roots(F, [1, 2, 3])
    b = Poly.from_roots(F, [2, 3, 5])
    assert poly_gcd(a, b) == Poly.from_roots(F, [2, 3])
    assert is_squarefree(a)
    assert not is_squarefree(Poly.from_roots(F, [4, 4, 1]))


# sampling -------------------------------------------------------------------


def test_sample_points_examples():
    rng = Rng(0, FieldSpec(5))
    assert sample_points(rng, 0) == []
    pts = sample_points(rng, 3)
    assert len(set(pts)) == 3 and all(0 <= x < 5 for x in pts)
    with pytest.raises(FieldTooSmall):
        sample_points(rng, 7)


def test_points_respect_exclusions():
    rng = Rng(1, FieldSpec(7))
    pts = rng.points(4, exclude=[0, 1, 2])
    assert sorted(pts) == [3, 4, 5, 6]


def test_rng_forks_are_reproducible(F):
    a = Rng(9, F).fork("x", 1).vector(5)
    b = Rng(9, F).fork("x", 1).vector(5)
    c = Rng(9, F).fork("x", 2).vector(5)
    assert a == b and a != c


def test_rational_sampling_is_integral():
    rng = Rng(3, FieldSpec(0))
    xs = rng.vector(20)
    assert all(isinstance(x, Fraction) and x.denominator == 1 for x in xs)
