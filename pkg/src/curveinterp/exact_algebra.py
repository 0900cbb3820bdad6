"""Exact arithmetic over a prime field F_p or the rationals.

Scalars are plain Python objects: ints reduced into ``range(p)`` for a prime
field, :class:`fractions.Fraction` for characteristic 0.  Matrices are dense
row-major lists; polynomials are ascending coefficient tuples.  Everything
here is deterministic except :class:`Rng`, whose output depends only on its
seed.
"""

from __future__ import annotations

import hashlib
import os
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import gmpy2

from .errors import FieldTooSmall, InvalidInput, ResamplingExhausted

DEFAULT_PRIME = 1000003
NEG_INF = float("-inf")

# half-width of the integer box used when "sampling" rationals
RATIONAL_SAMPLE_BOUND = 2**20


def default_prime() -> int:
    """The default characteristic, overridable through ``CURVEINTERP_PRIME``."""
    env = os.environ.get("CURVEINTERP_PRIME")
    if env:
        try:
            return int(env)
        except ValueError as exc:
            raise InvalidInput(f"CURVEINTERP_PRIME={env!r} is not an integer") from exc
    return DEFAULT_PRIME


@dataclass(frozen=True)
class FieldSpec:
    """A prime field ``F_p`` (``characteristic = p``) or ``Q`` (``characteristic = 0``)."""

    characteristic: int = DEFAULT_PRIME

    def __post_init__(self):
        c = self.characteristic
        if not isinstance(c, int) or c < 0:
            raise InvalidInput(f"characteristic must be a nonnegative integer, got {c!r}")
        if c != 0 and not gmpy2.is_prime(c):
            raise InvalidInput(f"characteristic {c} is not prime")

    @property
    def p(self) -> int:
        return self.characteristic

    @property
    def is_prime_field(self) -> bool:
        return self.characteristic != 0

    @property
    def size(self) -> float:
        return self.characteristic if self.characteristic else float("inf")

    def __call__(self, x):
        """Coerce ``x`` (int, Fraction, or a string like ``"-3/4"``) into the field."""
        if isinstance(x, bool):
            raise InvalidInput("booleans are not field scalars")
        if isinstance(x, str):
            try:
                x = Fraction(x.strip())
            except ValueError as exc:
                raise InvalidInput(f"cannot parse scalar {x!r}") from exc
        p = self.characteristic
        if isinstance(x, Fraction):
            if p == 0:
                return x
            if x.denominator % p == 0:
                raise InvalidInput(f"{x} has denominator divisible by {p}")
            return x.numerator * pow(x.denominator, -1, p) % p
        if isinstance(x, int):
            return x % p if p else Fraction(x)
        raise InvalidInput(f"unsupported scalar type {type(x).__name__}")

    def inv(self, x):
        if not x:
            raise ZeroDivisionError("inverse of zero")
        p = self.characteristic
        return pow(x, -1, p) if p else 1 / x

    def neg(self, x):
        p = self.characteristic
        return (-x) % p if p else -x

    def dot(self, u: Sequence, v: Sequence):
        s = sum(a * b for a, b in zip(u, v))
        return s % self.characteristic if self.characteristic else s

    def to_json(self, x):
        """JSON-friendly form: ints for F_p and integral rationals, ``"a/b"`` otherwise."""
        if isinstance(x, Fraction):
            return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
        return int(x)

    def is_square(self, x) -> bool:
        if self.characteristic == 0:
            raise NotImplementedError("square test over Q")
        return x == 0 or pow(x, (self.characteristic - 1) // 2, self.characteristic) == 1


# ---------------------------------------------------------------------------
# matrices


class Matrix:
    """Dense matrix with entries in a :class:`FieldSpec`.

    ``ncols`` is stored explicitly so that matrices with zero rows still know
    their width (the kernel of a 0 x n matrix is all of k^n).
    """

    __slots__ = ("field", "ncols", "entries")

    def __init__(self, field: FieldSpec, entries: Iterable[Sequence], ncols: int | None = None):
        rows = [[field(x) for x in row] for row in entries]
        if ncols is None:
            if not rows:
                raise InvalidInput("ncols is required for a matrix without rows")
            ncols = len(rows[0])
        for row in rows:
            if len(row) != ncols:
                raise InvalidInput(f"ragged matrix: row of length {len(row)} in a {ncols}-column matrix")
        self.field = field
        self.ncols = ncols
        self.entries = rows

    @classmethod
    def _trusted(cls, field, rows, ncols):
        m = cls.__new__(cls)
        m.field, m.entries, m.ncols = field, rows, ncols
        return m

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "Matrix":
        one, zero = field(1), field(0)
        return cls._trusted(field, [[one if i == j else zero for j in range(n)] for i in range(n)], n)

    @classmethod
    def zeros(cls, field: FieldSpec, nrows: int, ncols: int) -> "Matrix":
        return cls._trusted(field, [[field(0)] * ncols for _ in range(nrows)], ncols)

    @property
    def nrows(self) -> int:
        return len(self.entries)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def row(self, i) -> list:
        return list(self.entries[i])

    def column(self, j) -> list:
        return [row[j] for row in self.entries]

    def transpose(self) -> "Matrix":
        return Matrix._trusted(self.field, [list(c) for c in zip(*self.entries)] if self.entries else
                               [[] for _ in range(self.ncols)], self.nrows)

    def stack(self, other: "Matrix") -> "Matrix":
        if other.ncols != self.ncols:
            raise InvalidInput("cannot stack matrices of different widths")
        return Matrix._trusted(self.field, self.entries + other.entries, self.ncols)

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            return mat_mul(self, other)
        return mat_vec(self, other)

    def __eq__(self, other):
        return (isinstance(other, Matrix) and self.field == other.field
                and self.ncols == other.ncols and self.entries == other.entries)

    def __repr__(self):
        return f"Matrix({self.nrows}x{self.ncols} over char {self.field.characteristic}, {self.entries})"


def rref(m: Matrix) -> tuple[list[list], list[int]]:
    """Reduced row echelon form: the nonzero rows and their pivot columns."""
    p = m.field.characteristic
    inv = m.field.inv
    rows = [list(r) for r in m.entries if any(r)]
    ncols = m.ncols
    pivots: list[int] = []
    top = 0
    for col in range(ncols):
        if top == len(rows):
            break
        piv = next((i for i in range(top, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[top], rows[piv] = rows[piv], rows[top]
        c = inv(rows[top][col])
        if p:
            prow = [x * c % p for x in rows[top]]
        else:
            prow = [x * c for x in rows[top]]
        rows[top] = prow
        for i in range(len(rows)):
            if i == top:
                continue
            a = rows[i][col]
            if not a:
                continue
            if p:
                rows[i] = [(x - a * y) % p for x, y in zip(rows[i], prow)]
            else:
                rows[i] = [x - a * y for x, y in zip(rows[i], prow)]
        pivots.append(col)
        top += 1
    return rows[:top], pivots


def mat_rank(m: Matrix) -> int:
    return len(rref(m)[1])


def mat_kernel(m: Matrix) -> list[list]:
    """Basis of the right kernel, one vector per free column.

    The basis is the canonical one read off the reduced echelon form: the
    vector for free column ``j`` has a 1 in position ``j``, zeros in the
    other free positions, so the output is independent of row order.
    """
    field = m.field
    rows, pivots = rref(m)
    pivot_set = set(pivots)
    zero, one = field(0), field(1)
    basis = []
    for j in range(m.ncols):
        if j in pivot_set:
            continue
        v = [zero] * m.ncols
        v[j] = one
        for row, pc in zip(rows, pivots):
            if row[j]:
                v[pc] = field.neg(row[j])
        basis.append(v)
    return basis


def mat_vec(m: Matrix, v: Sequence) -> list:
    if len(v) != m.ncols:
        raise InvalidInput(f"vector of length {len(v)} against {m.ncols} columns")
    return [m.field.dot(row, v) for row in m.entries]


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    if a.ncols != b.nrows:
        raise InvalidInput(f"shape mismatch {a.shape} @ {b.shape}")
    cols = b.transpose().entries
    return Matrix._trusted(a.field, [[a.field.dot(r, c) for c in cols] for r in a.entries], b.ncols)


def mat_inverse(m: Matrix) -> Matrix:
    n = m.nrows
    if n != m.ncols:
        raise InvalidInput("only square matrices are invertible")
    ident = Matrix.identity(m.field, n)
    aug = Matrix._trusted(m.field, [r + i for r, i in zip(m.entries, ident.entries)], 2 * n)
    rows, pivots = rref(aug)
    if pivots[:n] != list(range(n)) or len(rows) < n:
        raise ZeroDivisionError("matrix is singular")
    return Matrix._trusted(m.field, [r[n:] for r in rows], n)


def rank_of_vectors(field: FieldSpec, vectors: Sequence[Sequence], dim: int) -> int:
    return mat_rank(Matrix._trusted(field, [list(v) for v in vectors], dim))


def random_invertible(field: FieldSpec, n: int, rng: "Rng", attempts: int = 100) -> Matrix:
    for _ in range(attempts):
        m = Matrix._trusted(field, [rng.vector(n) for _ in range(n)], n)
        if mat_rank(m) == n:
            return m
    raise ResamplingExhausted(f"no invertible {n}x{n} matrix after {attempts} draws")


# ---------------------------------------------------------------------------
# univariate polynomials


class Poly:
    """Univariate polynomial, coefficients in ascending degree, trailing zeros trimmed."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: FieldSpec, coeffs: Iterable = ()):
        cs = [field(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.field = field
        self.coeffs = tuple(cs)

    @classmethod
    def from_roots(cls, field: FieldSpec, roots: Iterable) -> "Poly":
        out = cls(field, [1])
        for a in roots:
            out = out * cls(field, [field.neg(field(a)), 1])
        return out

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading(self):
        return self.coeffs[-1] if self.coeffs else self.field(0)

    def __call__(self, x):
        return poly_eval(self, x)

    def __eq__(self, other):
        return isinstance(other, Poly) and self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __repr__(self):
        return f"Poly({list(self.coeffs)})"

    def _combine(self, other, sign):
        p = self.field.characteristic
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        a = a + (0,) * (n - len(a))
        b = b + (0,) * (n - len(b))
        if p:
            return Poly(self.field, [(x + sign * y) % p for x, y in zip(a, b)])
        return Poly(self.field, [x + sign * y for x, y in zip(a, b)])

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return Poly(self.field, [self.field.neg(c) for c in self.coeffs])

    def __mul__(self, other):
        if not isinstance(other, Poly):
            other = Poly(self.field, [other])
        if not self.coeffs or not other.coeffs:
            return Poly(self.field)
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Poly(self.field, out)

    __rmul__ = __mul__

    def __divmod__(self, other):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        field = self.field
        p = field.characteristic
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return Poly(field), self
        quo = [0] * (dq + 1)
        lead_inv = field.inv(other.coeffs[-1])
        m = len(other.coeffs)
        for k in range(dq, -1, -1):
            c = rem[k + m - 1] * lead_inv
            c = c % p if p else c
            quo[k] = c
            if c:
                for i, b in enumerate(other.coeffs):
                    rem[k + i] -= c * b
                    if p:
                        rem[k + i] %= p
        return Poly(field, quo), Poly(field, rem[: m - 1])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        c = self.field.inv(self.coeffs[-1])
        return self * c

    def derivative(self) -> "Poly":
        return Poly(self.field, [i * c for i, c in enumerate(self.coeffs)][1:])


def poly_eval(f: Poly, x):
    """Horner evaluation at ``x``."""
    field = f.field
    x = field(x)
    p = field.characteristic
    acc = 0 if p else Fraction(0)
    for c in reversed(f.coeffs):
        acc = acc * x + c
        if p:
            acc %= p
    return acc


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd (zero if both inputs are zero)."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def is_squarefree(f: Poly) -> bool:
    if f.is_zero():
        return False
    return poly_gcd(f, f.derivative()).degree == 0


# ---------------------------------------------------------------------------
# randomness


def _derive_seed(seed: int, tags: tuple) -> int:
    digest = hashlib.sha256(repr((seed, tags)).encode()).digest()
    return int.from_bytes(digest[:8], "big")


class Rng:
    """Seeded sampler of field scalars standing in for "general" choices.

    Over ``F_p`` scalars are uniform; over ``Q`` they are uniform integers in
    a box of half-width :data:`RATIONAL_SAMPLE_BOUND`.
    """

    def __init__(self, seed: int, field: FieldSpec | None = None):
        self.seed = int(seed) & (2**64 - 1)
        self.field = field if field is not None else FieldSpec()
        self._random = random.Random(self.seed)
        self.draws = 0

    def fork(self, *tags) -> "Rng":
        """Independent child stream; depends only on this seed and ``tags``."""
        return Rng(_derive_seed(self.seed, tags), self.field)

    def randrange(self, *args) -> int:
        self.draws += 1
        return self._random.randrange(*args)

    def choice(self, seq):
        self.draws += 1
        return self._random.choice(seq)

    def scalar(self):
        self.draws += 1
        p = self.field.characteristic
        if p:
            return self._random.randrange(p)
        return Fraction(self._random.randint(-RATIONAL_SAMPLE_BOUND, RATIONAL_SAMPLE_BOUND))

    def nonzero_scalar(self):
        while True:
            x = self.scalar()
            if x:
                return x

    def vector(self, n: int) -> list:
        return [self.scalar() for _ in range(n)]

    def points(self, k: int, exclude: Iterable = ()) -> list:
        """``k`` pairwise distinct scalars avoiding ``exclude``."""
        banned = set(exclude)
        if k < 0:
            raise InvalidInput("cannot sample a negative number of points")
        if self.field.size - len(banned) < k:
            raise FieldTooSmall(
                f"F_{self.field.characteristic} cannot host {k} distinct points avoiding {len(banned)}")
        out = []
        while len(out) < k:
            x = self.scalar()
            if x not in banned:
                banned.add(x)
                out.append(x)
        return out


def sample_scalar(rng: Rng):
    return rng.scalar()


def sample_points(rng: Rng, k: int, exclude: Iterable = ()) -> list:
    return rng.points(k, exclude)
