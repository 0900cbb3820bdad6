"""Section spaces of f^*T_{P^r}(t) for a single map f: P^1 -> P^r.

Two independent models are kept on purpose:

* the *kernel model* for f^*Omega: h^0(f^*Omega(m)) is the kernel dimension
  of (s_0, ..., s_r) -> sum s_i f_i on H^0(O(m-d))^{r+1}.  It only counts,
  and is what :func:`splitting_type` is read from.
* the *coset model* for f^*T: sections are (r+1)-tuples of degree-d
  polynomials modulo the line spanned by f itself.  A section vanishes at p
  when s(p) lies on the line through f(p); that is r linear conditions.  This
  model supports evaluation, twisting and gluing.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from .errors import InvalidInput
from .exact_algebra import FieldSpec, Matrix, Poly, Rng, mat_kernel, mat_rank, rank_of_vectors
from .rational_maps import RationalMap, annihilators, monomials


@dataclass(frozen=True)
class SplittingType:
    """Degrees a_1 >= ... >= a_r with f^*T = O(a_1) + ... + O(a_r)."""

    degrees: tuple

    def __post_init__(self):
        object.__setattr__(self, "degrees", tuple(sorted(self.degrees, reverse=True)))

    @property
    def rank(self) -> int:
        return len(self.degrees)

    @property
    def balanced(self) -> bool:
        return is_balanced(self)

    def __str__(self):
        return "{" + ", ".join(map(str, self.degrees)) + "}"


def is_balanced(s: SplittingType) -> bool:
    """max - min <= 1; on P^1 this is exactly interpolation for a split bundle."""
    return not s.degrees or s.degrees[0] - s.degrees[-1] <= 1


def h0_general_twist(s: SplittingType, t: int, d: int, e: int) -> int:
    """h^0 of f^*T(t)(-D) for a reduced divisor D of degree e, from the splitting."""
    return sum(max(0, a + t * d - e + 1) for a in s.degrees)


def h1_general_twist(s: SplittingType, t: int, d: int, e: int) -> int:
    return sum(max(0, -(a + t * d - e) - 1) for a in s.degrees)


# ---------------------------------------------------------------------------
# kernel model


def omega_matrix(f: RationalMap, m: int) -> Matrix:
    """Multiplication H^0(O(m-d))^{r+1} -> H^0(O(m)) by (f_0, ..., f_r)."""
    field, d, r = f.field, f.d, f.r
    k = m - d + 1  # dimension of H^0(O(m-d))
    cols = (r + 1) * max(k, 0)
    rows = [[field(0)] * cols for _ in range(m + 1)] if m >= 0 else []
    for i, frow in enumerate(f.coeffs):
        for j in range(max(k, 0)):
            col = i * k + j
            for a, c in enumerate(frow):
                if c:
                    rows[a + j][col] = c
    return Matrix(field, rows, cols)


def omega_h0(f: RationalMap, m: int) -> int:
    """h^0(f^*Omega_{P^r}(m))."""
    if m < f.d:
        return 0
    mat = omega_matrix(f, m)
    return mat.ncols - mat_rank(mat)


def splitting_type(f: RationalMap, with_table: bool = False):
    """Splitting type of f^*T_{P^r} read off first differences of h^0(f^*Omega(m)).

    h(m) - h(m-1) counts the a_i <= m.  The scan stops as soon as all r
    degrees are found, and never goes beyond (r+1)d + 1.
    """
    if not f.is_base_point_free():
        raise InvalidInput("splitting type needs a base-point-free map")
    r, d = f.r, f.d
    table = {}
    degrees: list[int] = []
    prev_h, prev_count = 0, 0
    for m in range(0, (r + 1) * d + 2):
        h = omega_h0(f, m)
        table[m] = h
        count = h - prev_h
        if count < prev_count or count > r:
            raise ArithmeticError(f"inconsistent h0 differences at m={m}: {prev_count} -> {count}")
        degrees += [m] * (count - prev_count)
        prev_h, prev_count = h, count
        if count == r:
            break
    s = SplittingType(tuple(degrees))
    if len(degrees) != r or sum(degrees) != (r + 1) * d:
        raise ArithmeticError(f"splitting {s} inconsistent with rank {r} and degree {(r + 1) * d}")
    return (s, table) if with_table else s


# ---------------------------------------------------------------------------
# coset model


@dataclass
class TangentSectionSpace:
    """H^0(f^*T) as coset representatives modulo the coefficient vector of f."""

    f: RationalMap
    basis: list

    @property
    def dim(self) -> int:
        return len(self.basis)


def tangent_section_space(f: RationalMap) -> TangentSectionSpace:
    # complement of <f>: drop the unit vector at f's first nonzero coordinate
    vec = f.coeff_vector
    lead = next(i for i, c in enumerate(vec) if c)
    one, zero = f.field(1), f.field(0)
    basis = []
    for i in range(len(vec)):
        if i != lead:
            e = [zero] * len(vec)
            e[i] = one
            basis.append(e)
    return TangentSectionSpace(f, basis)


def eval_row(f: RationalMap, p, functional: Sequence) -> list:
    """Row of the functional s -> functional(s(p)) on the coefficient space of f."""
    field, d = f.field, f.d
    mono = monomials(field, p, d)
    row = [field(0)] * ((f.r + 1) * (d + 1))
    for i, lam in enumerate(functional):
        if lam:
            for j, m in enumerate(mono):
                row[i * (d + 1) + j] = field(lam * m)
    return row


def tangent_eval_rows(f: RationalMap, p, constraint=None) -> list:
    """Rows cutting out sections with sigma(p) = 0, or sigma(p) in a subspace.

    ``constraint`` is None for full vanishing (r rows), or a list of c
    functionals on k^{r+1}, each vanishing on f(p), describing a
    codimension-c subspace of the fiber.
    """
    y = f.evaluate_raw(p)
    if not any(y):
        raise InvalidInput(f"p={p} is a base point")
    functionals = annihilators(f.field, y) if constraint is None else [list(c) for c in constraint]
    for lam in functionals:
        if f.field.dot(lam, y):
            raise InvalidInput("constraint functional does not vanish on f(p); not defined on the fiber")
    return [eval_row(f, p, lam) for lam in functionals]


def random_fiber_functionals(f: RationalMap, p, c: int, rng: Rng, attempts: int = 50) -> list:
    """c independent random functionals on the fiber at p: a general codim-c subspace."""
    ann = annihilators(f.field, f.evaluate_raw(p))
    if not 0 <= c <= len(ann):
        raise InvalidInput(f"codimension {c} out of range 0..{len(ann)}")
    for _ in range(attempts):
        out = []
        for _ in range(c):
            coefs = rng.vector(len(ann))
            out.append([f.field(sum(a * v[k] for a, v in zip(coefs, ann))) for k in range(f.r + 1)])
        if rank_of_vectors(f.field, out, f.r + 1) == c:
            return out
    raise InvalidInput(f"could not draw {c} independent fiber functionals")


def divisor_rows(f: RationalMap, h: Poly) -> list:
    """Rows forcing sigma to vanish along the reduced divisor of h.

    sigma vanishes at a root alpha of h iff s(alpha) is parallel to f(alpha),
    i.e. iff h divides every 2x2 minor s_a f_b - s_b f_a.  This is linear in
    s and defined over the base field even when h has no roots there.
    """
    field, d, r = f.field, f.d, f.r
    deg_h = int(h.degree)
    width = (r + 1) * (d + 1)
    polys = f.polys
    # x^j f_b mod h, cached
    cache = {}

    def reduced(j, b):
        key = (j, b)
        if key not in cache:
            mono = Poly(field, [0] * j + [1])
            cache[key] = list((mono * polys[b] % h).coeffs)
        return cache[key]

    rows = []
    for a, b in combinations(range(r + 1), 2):
        block = [[field(0)] * width for _ in range(deg_h)]
        for j in range(d + 1):
            for k, c in enumerate(reduced(j, b)):
                block[k][a * (d + 1) + j] = field(block[k][a * (d + 1) + j] + c)
            for k, c in enumerate(reduced(j, a)):
                block[k][b * (d + 1) + j] = field(block[k][b * (d + 1) + j] - c)
        rows.extend(block)
    return rows


def coset_h0(f: RationalMap, rows: list) -> int:
    """dim of {sigma in H^0(f^*T) : rows(sigma) = 0}; rows must all vanish on f."""
    width = (f.r + 1) * (f.d + 1)
    return len(mat_kernel(Matrix(f.field, rows, width))) - 1


def tangent_h0(f: RationalMap, points: Sequence = (), twist_polys: Sequence[Poly] = ()) -> int:
    """h^0(f^*T(-H_1 - ... - H_k)(-p_1 - ... - p_e)) in the coset model."""
    rows = []
    for p in points:
        rows += tangent_eval_rows(f, p)
    for h in twist_polys:
        rows += divisor_rows(f, h)
    return coset_h0(f, rows)


def splitting_from_coset(f: RationalMap, rng: Rng) -> SplittingType:
    """Splitting type recovered from the coset model alone (cross-check of the Omega route).

    h^0(f^*T(-e points)) = sum max(0, a_i - e + 1); its second differences
    count the a_i equal to each value.
    """
    r, d = f.r, f.d
    top = (r + 1) * d + 2
    pts = rng.points(top + 1)
    h = [tangent_h0(f, pts[:e]) for e in range(top + 2)]
    degrees = []
    for e in range(1, top + 2):
        # number of a_i >= e - 1 is h(e-1) - h(e)
        ge_prev = h[e - 1] - h[e]
        ge_next = h[e] - h[e + 1] if e + 1 < len(h) else 0
        degrees += [e - 1] * (ge_prev - ge_next)
        if h[e] == 0:
            break
    return SplittingType(tuple(degrees))
