"""Degree-d maps P^1 -> P^r as coefficient tables, and genus-0 incidence solvers.

A map is stored as an (r+1) x (d+1) table; row i holds the ascending
coefficients of the component polynomial f_i in the affine coordinate x of
the chart v = 1.  The point at infinity of P^1 is the string ``"inf"``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Sequence

from .errors import InvalidInput, ResamplingExhausted
from .exact_algebra import (
    FieldSpec,
    Matrix,
    Poly,
    Rng,
    mat_kernel,
    mat_mul,
    mat_rank,
    poly_gcd,
)

INFINITY = "inf"

WITNESS_ATTEMPTS = 16
RESAMPLE_BUDGET = 200


def parse_param(field: FieldSpec, p):
    if isinstance(p, str) and p.strip().lower() in ("inf", "infinity", "oo"):
        return INFINITY
    return field(p)


def monomials(field: FieldSpec, p, d: int) -> list:
    """Values of 1, x, ..., x^d at the parameter ``p`` (homogenized at infinity)."""
    if p == INFINITY:
        return [field(0)] * d + [field(1)]
    out = [field(1)]
    for _ in range(d):
        out.append(field(out[-1] * p))
    return out


def annihilators(field: FieldSpec, vec: Sequence) -> list[list]:
    """Independent functionals vanishing on ``vec`` (len(vec) - 1 of them for vec != 0)."""
    return mat_kernel(Matrix(field, [list(vec)]))


def proportional(field: FieldSpec, u: Sequence, v: Sequence) -> bool:
    """Whether u and v are nonzero and span the same line."""
    if not any(u) or not any(v):
        return False
    return mat_rank(Matrix(field, [list(u), list(v)])) == 1


class ProjPoint:
    """A point of P^r; equality is equality up to a nonzero scalar."""

    __slots__ = ("field", "coords")

    def __init__(self, field: FieldSpec, coords: Sequence):
        cs = tuple(field(c) for c in coords)
        if not any(cs):
            raise InvalidInput("the zero vector is not a projective point")
        self.field = field
        self.coords = cs

    @property
    def r(self) -> int:
        return len(self.coords) - 1

    def normalized(self) -> tuple:
        lead = next(c for c in self.coords if c)
        inv = self.field.inv(lead)
        return tuple(self.field(c * inv) for c in self.coords)

    def __eq__(self, other):
        if not isinstance(other, ProjPoint):
            return NotImplemented
        return self.field == other.field and self.normalized() == other.normalized()

    def __hash__(self):
        return hash(self.normalized())

    def __repr__(self):
        return "[" + " : ".join(str(c) for c in self.coords) + "]"

    def to_json(self) -> list:
        return [self.field.to_json(c) for c in self.coords]


class RationalMap:
    """A map [f_0 : ... : f_r] from P^1 to P^r of degree d."""

    __slots__ = ("field", "coeffs", "r", "d")

    def __init__(self, field: FieldSpec, coeffs: Sequence[Sequence], check: bool = True):
        rows = [[field(c) for c in row] for row in coeffs]
        if len(rows) < 2 or len({len(row) for row in rows}) != 1 or len(rows[0]) < 1:
            raise InvalidInput("coefficient table must have >= 2 rows of equal nonzero length")
        self.field = field
        self.coeffs = rows
        self.r = len(rows) - 1
        self.d = len(rows[0]) - 1
        if check:
            problems = self.defects()
            if problems:
                raise InvalidInput("invalid rational map: " + "; ".join(problems))

    @classmethod
    def from_polys(cls, field: FieldSpec, polys: Sequence, d: int | None = None, check: bool = True):
        polys = [p if isinstance(p, Poly) else Poly(field, p) for p in polys]
        if d is None:
            d = max(int(p.degree) for p in polys if not p.is_zero())
        rows = [list(p.coeffs) + [0] * (d + 1 - len(p.coeffs)) for p in polys]
        return cls(field, rows, check=check)

    @property
    def polys(self) -> list[Poly]:
        return [Poly(self.field, row) for row in self.coeffs]

    @property
    def coeff_vector(self) -> list:
        return [c for row in self.coeffs for c in row]

    @property
    def rank(self) -> int:
        return mat_rank(Matrix(self.field, self.coeffs))

    @property
    def span_dim(self) -> int:
        return self.rank - 1

    def gcd(self) -> Poly:
        g = Poly(self.field)
        for f in self.polys:
            g = poly_gcd(g, f)
        return g

    def is_base_point_free(self) -> bool:
        has_top = any(row[-1] for row in self.coeffs)
        return has_top and self.gcd().degree == 0

    def defects(self, points: Sequence = (), require_nondegenerate: bool = False) -> list[str]:
        """Reasons this table fails to be a base-point-free degree-d map."""
        out = []
        if not any(any(row) for row in self.coeffs):
            return ["zero map"]
        if not any(row[-1] for row in self.coeffs):
            out.append(f"wrong degree: no x^{self.d} term (base point at infinity)")
        for p in points:
            if not any(self.evaluate_raw(p)):
                out.append(f"base point at p={p}")
        gdeg = self.gcd().degree
        if gdeg > 0:
            out.append(f"base points: gcd of components has degree {gdeg}")
        if require_nondegenerate and self.rank < self.r + 1:
            out.append(f"degenerate: coefficient rank {self.rank} < {self.r + 1}")
        return out

    def evaluate_raw(self, p) -> list:
        mono = monomials(self.field, p, self.d)
        return [self.field.dot(row, mono) for row in self.coeffs]

    def __call__(self, p) -> ProjPoint:
        return evaluate(self, p)

    def transform(self, a: Matrix) -> "RationalMap":
        """Compose with the linear automorphism of P^r given by ``a``."""
        return RationalMap(self.field, mat_mul(a, Matrix(self.field, self.coeffs)).entries, check=False)

    def __eq__(self, other):
        return isinstance(other, RationalMap) and self.field == other.field and self.coeffs == other.coeffs

    def __repr__(self):
        return f"RationalMap(r={self.r}, d={self.d}, {self.coeffs})"

    def to_json(self) -> list:
        return [[self.field.to_json(c) for c in row] for row in self.coeffs]


def evaluate(f: RationalMap, p) -> ProjPoint:
    return ProjPoint(f.field, f.evaluate_raw(p))


def is_nondegenerate(f: RationalMap) -> bool:
    return f.rank == f.r + 1


def random_map(r: int, d: int, rng: Rng, budget: int = RESAMPLE_BUDGET) -> RationalMap:
    """A random base-point-free map of exact degree d; nondegenerate when d >= r,
    spanning a P^d when d < r."""
    if d < 1 or r < 1:
        raise InvalidInput(f"need r, d >= 1, got r={r}, d={d}")
    target_rank = min(r, d) + 1
    for _ in range(budget):
        f = RationalMap(rng.field, [rng.vector(d + 1) for _ in range(r + 1)], check=False)
        if f.rank == target_rank and f.is_base_point_free():
            return f
    raise ResamplingExhausted(f"no general degree-{d} map to P^{r} over F_{rng.field.p} in {budget} draws")


# ---------------------------------------------------------------------------
# incidence problems


@dataclass
class IncidenceProblem:
    r: int
    d: int
    pairs: list  # (parameter, ProjPoint)
    hyperplane_count: int = 0
    allow_infinity: bool = False

    def __post_init__(self):
        if self.r < 1 or self.d < 1:
            raise InvalidInput(f"need r, d >= 1, got r={self.r}, d={self.d}")
        params = [p for p, _ in self.pairs]
        if len(set(params)) != len(params):
            raise InvalidInput("parameter points must be pairwise distinct")
        if INFINITY in params and not self.allow_infinity:
            raise InvalidInput("parameter at infinity requires allow_infinity=True")
        for _, q in self.pairs:
            if q.r != self.r:
                raise InvalidInput(f"target {q} is not a point of P^{self.r}")
        if self.hyperplane_count not in (0, self.d):
            raise InvalidInput(f"hyperplane_count must be 0 or d={self.d}, got {self.hyperplane_count}")
        if self.hyperplane_count:
            if len(self.pairs) < self.d:
                raise InvalidInput(f"hyperplane variant needs n >= d={self.d} pairs")
            for p, q in self.pairs[: self.d]:
                if q.coords[-1]:
                    raise InvalidInput(f"target {q} for p={p} is not on the hyperplane x_{self.r + 1} = 0")
                if p == INFINITY:
                    raise InvalidInput("hyperplane-constrained parameters must be finite")

    @property
    def n(self) -> int:
        return len(self.pairs)

    @classmethod
    def from_dict(cls, data: dict, field: FieldSpec) -> "IncidenceProblem":
        try:
            r, d = int(data["r"]), int(data["d"])
            pairs = [(parse_param(field, item["p"]), ProjPoint(field, item["q"])) for item in data["pairs"]]
        except (KeyError, TypeError) as exc:
            raise InvalidInput(f"malformed incidence problem: {exc}") from exc
        return cls(r, d, pairs, int(data.get("hyperplane_count", 0)), bool(data.get("allow_infinity", False)))

    def to_dict(self) -> dict:
        return {
            "r": self.r,
            "d": self.d,
            "pairs": [{"p": p if p == INFINITY else q.field.to_json(p), "q": q.to_json()}
                      for p, q in self.pairs],
            "hyperplane_count": self.hyperplane_count,
            "allow_infinity": self.allow_infinity,
        }


@dataclass
class IncidenceSolution:
    kernel_dim: int
    expected_dim: int
    basis: list
    witness: RationalMap | None
    witness_valid: bool
    reasons: list = dc_field(default_factory=list)
    particular: list | None = None
    seed: int | None = None

    def to_dict(self, field: FieldSpec) -> dict:
        enc = field.to_json
        return {
            "kernel_dim": self.kernel_dim,
            "expected_dim": self.expected_dim,
            "basis": [[enc(c) for c in v] for v in self.basis],
            "particular": None if self.particular is None else [enc(c) for c in self.particular],
            "witness": None if self.witness is None else self.witness.to_json(),
            "witness_valid": self.witness_valid,
            "reasons": list(self.reasons),
            "seed": self.seed,
        }


def _incidence_row(field, functional, p, d, width):
    mono = monomials(field, p, d)
    row = [field(0)] * width
    for i, lam in enumerate(functional):
        if lam:
            for j, m in enumerate(mono):
                row[i * (d + 1) + j] = field(lam * m)
    return row


def _combine(field, vectors, coefs, base=None):
    n = len(vectors[0]) if vectors else len(base)
    out = list(base) if base is not None else [0] * n
    for c, v in zip(coefs, vectors):
        out = [a + c * b for a, b in zip(out, v)]
    return [field(x) for x in out]


def _check_witness(prob: IncidenceProblem, f: RationalMap):
    # independent of system assembly: plain evaluation and proportionality
    for p, q in prob.pairs:
        if not proportional(f.field, f.evaluate_raw(p), q.coords):
            raise AssertionError(f"witness misses incidence f({p}) ~ {q}")


def _pick_witness(prob, field, rng, make, require_nondegenerate):
    reasons: list[str] = []
    for _ in range(WITNESS_ATTEMPTS):
        f = make()
        if f is None:
            continue
        reasons = f.defects([p for p, _ in prob.pairs], require_nondegenerate)
        if not reasons:
            _check_witness(prob, f)
            return f, []
    return None, ["kernel nonzero but no valid witness found in "
                  f"{WITNESS_ATTEMPTS} random combinations"] + reasons


def solve_through_points(prob: IncidenceProblem, field: FieldSpec, rng: Rng | None = None) -> IncidenceSolution:
    """Degree-d maps P^1 -> P^r with f(p_i) ~ q_i, as the kernel of a linear system.

    Each pair contributes r rows: functionals annihilating q_i applied to f(p_i).
    """
    if prob.hyperplane_count:
        raise InvalidInput("use solve_through_points_hyperplane for hyperplane-constrained problems")
    r, d = prob.r, prob.d
    width = (r + 1) * (d + 1)
    rows = [_incidence_row(field, lam, p, d, width)
            for p, q in prob.pairs for lam in annihilators(field, q.coords)]
    basis = mat_kernel(Matrix(field, rows, width))
    expected = max(0, width - r * prob.n)
    rng = rng or Rng(0, field)
    if not basis:
        return IncidenceSolution(0, expected, [], None, False, ["kernel is zero"], seed=rng.seed)

    def make():
        v = _combine(field, basis, rng.vector(len(basis)))
        if not any(v):
            return None
        return RationalMap(field, [v[i * (d + 1):(i + 1) * (d + 1)] for i in range(r + 1)], check=False)

    witness, reasons = _pick_witness(prob, field, rng, make, require_nondegenerate=d >= r)
    return IncidenceSolution(len(basis), expected, basis, witness, witness is not None, reasons, seed=rng.seed)


def solve_through_points_hyperplane(prob: IncidenceProblem, field: FieldSpec,
                                    rng: Rng | None = None) -> IncidenceSolution:
    """Maps [s_1 : ... : s_r : L] with L = prod_{j<=d} (x - p_j) fixed.

    Unknowns are the r free components of degree <= d.  Targets off the
    hyperplane make the system affine; it is homogenized with one extra
    column for the scale of L, and ``kernel_dim`` is the dimension of the
    affine solution set (0 with ``particular=None`` when it is empty).
    """
    if prob.hyperplane_count != prob.d:
        raise InvalidInput("hyperplane solver needs hyperplane_count = d")
    r, d = prob.r, prob.d
    width = r * (d + 1)
    last = Poly.from_roots(field, [p for p, _ in prob.pairs[:d]])
    rows = []
    for idx, (p, q) in enumerate(prob.pairs):
        if idx < d:
            for lam in annihilators(field, q.coords[:r]):
                rows.append(_incidence_row(field, lam, p, d, width) + [field(0)])
        else:
            lval = last.leading() if p == INFINITY else last(p)
            for lam in annihilators(field, q.coords):
                rows.append(_incidence_row(field, lam[:r], p, d, width) + [field(lam[r] * lval)])
    aug = Matrix(field, rows, width + 1)
    directions = mat_kernel(Matrix(field, [row[:width] for row in rows], width))
    expected = max(0, width - (r - 1) * d - r * (prob.n - d))
    rng = rng or Rng(0, field)
    lifted = next((v for v in mat_kernel(aug) if v[width]), None)
    particular = None if lifted is None else [field(c * field.inv(lifted[width])) for c in lifted[:width]]
    if particular is None:
        return IncidenceSolution(0, expected, directions, None, False,
                                 ["inconsistent: no solution with the fixed hyperplane component"],
                                 particular=None, seed=rng.seed)
    last_row = list(last.coeffs)

    def make():
        v = _combine(field, directions, rng.vector(len(directions)), base=particular)
        table = [v[i * (d + 1):(i + 1) * (d + 1)] for i in range(r)] + [last_row]
        return RationalMap(field, table, check=False)

    witness, reasons = _pick_witness(prob, field, rng, make, require_nondegenerate=d >= r)
    return IncidenceSolution(len(directions), expected, directions, witness, witness is not None,
                             reasons, particular=particular, seed=rng.seed)
