"""Nodal curves of rational components mapping to P^r, and interpolation certificates.

A global section of g^*T_{P^r}(t) on a nodal curve is a tuple of coset-model
sections, one per component, agreeing in the shared tangent fiber at every
node.  Everything is a kernel of one stacked matrix:

* per node, r rows comparing the two sides.  If y_j = mu * y_i are the raw
  images, the tangent vectors agree iff mu * s_i(p) - s_j(q) lies on the
  line through y_i;
* per divisor point, r vanishing rows;
* per subspace constraint, c rows;
* for a twist t = -k, rows forcing vanishing along the pullbacks of k
  general hyperplanes (see :func:`euler_model.divisor_rows`).

Every component's own coefficient vector lies in the kernel, so
h^0 = dim ker - #components.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from enum import Enum
from itertools import combinations
from typing import Sequence

from .errors import GluingError, InvalidInput, ResamplingExhausted, SolverFailure
from .euler_model import divisor_rows, eval_row, random_fiber_functionals, tangent_eval_rows
from .exact_algebra import FieldSpec, Matrix, Poly, Rng, is_squarefree, mat_inverse, mat_kernel, rank_of_vectors
from .numerology import chi_twist, rho
from .rational_maps import (
    IncidenceProblem,
    ProjPoint,
    RationalMap,
    annihilators,
    proportional,
    random_map,
    solve_through_points,
)

RESAMPLE_BUDGET = 100


# ---------------------------------------------------------------------------
# curves


class NodalCurve:
    """Rational components f_0, ..., f_{m-1} glued at nodes ((i, p), (j, q))."""

    def __init__(self, components: Sequence[RationalMap], nodes: Sequence = (), seed: int | None = None,
                 history: list | None = None, validate: bool = True):
        if not components:
            raise InvalidInput("a nodal curve needs at least one component")
        self.components = list(components)
        self.field: FieldSpec = self.components[0].field
        self.nodes = [((int(i), p), (int(j), q)) for (i, p), (j, q) in nodes]
        self.seed = seed
        self.history = list(history or [])
        if validate:
            self.validate()

    @property
    def r(self) -> int:
        return self.components[0].r

    @property
    def degree(self) -> int:
        return sum(f.d for f in self.components)

    @property
    def genus(self) -> int:
        return len(self.nodes) - len(self.components) + 1

    @property
    def n_components(self) -> int:
        return len(self.components)

    @property
    def offsets(self) -> list[int]:
        out, acc = [], 0
        for f in self.components:
            out.append(acc)
            acc += (f.r + 1) * (f.d + 1)
        return out

    @property
    def width(self) -> int:
        return sum((f.r + 1) * (f.d + 1) for f in self.components)

    def node_params(self, i: int) -> list:
        out = []
        for (a, p), (b, q) in self.nodes:
            if a == i:
                out.append(p)
            if b == i:
                out.append(q)
        return out

    def node_scale(self, node) -> object:
        """mu with f_j(q) = mu * f_i(p) as raw vectors."""
        (i, p), (j, q) = node
        yi = self.components[i].evaluate_raw(p)
        yj = self.components[j].evaluate_raw(q)
        k = next(k for k, c in enumerate(yi) if c)
        return self.field(yj[k] * self.field.inv(yi[k]))

    def validate(self):
        m = len(self.components)
        for f in self.components:
            if f.field != self.field or f.r != self.r:
                raise InvalidInput("all components must share the field and the target P^r")
            if not f.is_base_point_free():
                raise InvalidInput(f"component {f} has base points")
        for node in self.nodes:
            (i, p), (j, q) = node
            if not (0 <= i < m and 0 <= j < m):
                raise GluingError(f"node {node} refers to a missing component")
            if i == j and p == q:
                raise GluingError(f"node {node} glues a point to itself")
            if not proportional(self.field, self.components[i].evaluate_raw(p),
                                self.components[j].evaluate_raw(q)):
                raise GluingError(f"images disagree at node {node}")
        for i in range(m):
            params = self.node_params(i)
            if len(set(params)) != len(params):
                raise GluingError(f"component {i} has two nodes at the same parameter")
        parent = list(range(m))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for (i, _), (j, _) in self.nodes:
            parent[find(i)] = find(j)
        if len({find(i) for i in range(m)}) != 1:
            raise GluingError("dual graph is disconnected")

    def chi(self, t: int = 0) -> int:
        """Componentwise Euler characteristic sum chi_i - r * #nodes of g^*T(t)."""
        r = self.r
        return sum((r + 1) * f.d + r + t * r * f.d for f in self.components) - r * len(self.nodes)

    def transform(self, a: Matrix) -> "NodalCurve":
        """Apply the automorphism of P^r given by ``a`` to every component."""
        return NodalCurve([f.transform(a) for f in self.components], self.nodes, self.seed, self.history)

    def to_dict(self) -> dict:
        enc = self.field.to_json
        return {
            "field": self.field.characteristic,
            "r": self.r,
            "components": [f.to_json() for f in self.components],
            "nodes": [[[i, enc(p)], [j, enc(q)]] for (i, p), (j, q) in self.nodes],
            "seed": self.seed,
            "history": self.history,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "NodalCurve":
        try:
            field = FieldSpec(int(data["field"]))
            comps = [RationalMap(field, table) for table in data["components"]]
            nodes = [((int(a[0]), field(a[1])), (int(b[0]), field(b[1]))) for a, b in data.get("nodes", [])]
        except (KeyError, TypeError, IndexError) as exc:
            raise InvalidInput(f"malformed curve JSON: {exc}") from exc
        return cls(comps, nodes, data.get("seed"), data.get("history"))

    def __repr__(self):
        return (f"NodalCurve(r={self.r}, degree={self.degree}, genus={self.genus}, "
                f"components={[f.d for f in self.components]}, nodes={len(self.nodes)})")


@dataclass
class DivisorSpec:
    """Reduced points, listed per component."""

    points: list  # list of lists, one per component

    @classmethod
    def empty(cls, curve: NodalCurve) -> "DivisorSpec":
        return cls([[] for _ in curve.components])

    @property
    def degree(self) -> int:
        return sum(len(p) for p in self.points)

    @property
    def distribution(self) -> tuple:
        return tuple(len(p) for p in self.points)


@dataclass
class TwistSpec:
    """Global twist O(t), t <= 0, realized by |t| hyperplane pullbacks."""

    t: int = 0
    hyperplanes: list = dc_field(default_factory=list)

    def __post_init__(self):
        if self.t > 0:
            raise InvalidInput("only twists t <= 0 are supported")
        if len(self.hyperplanes) != -self.t:
            raise InvalidInput(f"twist {self.t} needs {-self.t} hyperplanes, got {len(self.hyperplanes)}")

    def poly(self, f: RationalMap) -> Poly | None:
        """Product of the pulled-back hyperplane equations on one component."""
        if not self.hyperplanes:
            return None
        out = Poly(f.field, [1])
        for h in self.hyperplanes:
            out = out * sum((Poly(f.field, row) * c for row, c in zip(f.coeffs, h)), Poly(f.field))
        return out

    def is_valid(self, curve: NodalCurve, marked: Sequence[Sequence] = ()) -> bool:
        """Pullbacks reduced, of full degree, and avoiding nodes and marked points."""
        for i, f in enumerate(curve.components):
            h = self.poly(f)
            if h is None:
                continue
            if h.degree != -self.t * f.d or not is_squarefree(h):
                return False
            extra = marked[i] if i < len(marked) else ()
            if any(h(p) == 0 for p in list(curve.node_params(i)) + list(extra)):
                return False
        return True

    @classmethod
    def sample(cls, curve: NodalCurve, t: int, rng: Rng, marked: Sequence[Sequence] = (),
               budget: int = RESAMPLE_BUDGET) -> "TwistSpec":
        if t == 0:
            return cls(0, [])
        for _ in range(budget):
            spec = cls(t, [rng.vector(curve.r + 1) for _ in range(-t)])
            if spec.is_valid(curve, marked):
                return spec
        raise ResamplingExhausted(f"no admissible hyperplanes for twist {t} in {budget} draws")

    def transform(self, a: Matrix) -> "TwistSpec":
        """Hyperplanes moved along with the automorphism ``a`` (h -> h a^{-1})."""
        if not self.hyperplanes:
            return self
        inv = mat_inverse(a)
        moved = [[inv.field.dot(h, inv.column(k)) for k in range(inv.ncols)] for h in self.hyperplanes]
        return TwistSpec(self.t, moved)

    def to_dict(self, field: FieldSpec) -> dict:
        return {"t": self.t, "hyperplanes": [[field.to_json(c) for c in h] for h in self.hyperplanes]}


@dataclass
class SubspaceConstraint:
    """sigma|_point lies in the subspace cut out by ``functionals`` on component ``component``."""

    component: int
    point: object
    functionals: list

    @property
    def codim(self) -> int:
        return len(self.functionals)


# ---------------------------------------------------------------------------
# section spaces


def _embed(row, offset, width, field):
    out = [field(0)] * width
    out[offset:offset + len(row)] = row
    return out


def node_rows(curve: NodalCurve) -> list:
    field, width, offs = curve.field, curve.width, curve.offsets
    rows = []
    for node in curve.nodes:
        (i, p), (j, q) = node
        fi, fj = curve.components[i], curve.components[j]
        mu = curve.node_scale(node)
        for lam in annihilators(field, fi.evaluate_raw(p)):
            row = [field(0)] * width
            for k, c in enumerate(eval_row(fi, p, lam)):
                row[offs[i] + k] = field(row[offs[i] + k] + mu * c)
            for k, c in enumerate(eval_row(fj, q, lam)):
                row[offs[j] + k] = field(row[offs[j] + k] - c)
            rows.append(row)
    return rows


def twist_rows(curve: NodalCurve, twist: TwistSpec | None) -> list:
    if twist is None or twist.t == 0:
        return []
    rows = []
    for i, f in enumerate(curve.components):
        for row in divisor_rows(f, twist.poly(f)):
            rows.append(_embed(row, curve.offsets[i], curve.width, curve.field))
    return rows


def point_rows(curve: NodalCurve, divisor: DivisorSpec | None = None,
               constraints: Sequence[SubspaceConstraint] = ()) -> list:
    rows = []
    if divisor is not None:
        for i, pts in enumerate(divisor.points):
            for p in pts:
                for row in tangent_eval_rows(curve.components[i], p):
                    rows.append(_embed(row, curve.offsets[i], curve.width, curve.field))
    for c in constraints:
        for row in tangent_eval_rows(curve.components[c.component], c.point, c.functionals):
            rows.append(_embed(row, curve.offsets[c.component], curve.width, curve.field))
    return rows


def section_kernel(curve: NodalCurve, twist: TwistSpec | None = None, divisor: DivisorSpec | None = None,
                   constraints: Sequence[SubspaceConstraint] = ()) -> list:
    """Kernel basis (coefficient tuples) of the stacked system; includes each f_i."""
    rows = node_rows(curve) + twist_rows(curve, twist) + point_rows(curve, divisor, constraints)
    return mat_kernel(Matrix(curve.field, rows, curve.width))


def global_h0(curve: NodalCurve, twist: TwistSpec | None = None, divisor: DivisorSpec | None = None,
              constraints: Sequence[SubspaceConstraint] = ()) -> int:
    """h^0 of g^*T(t)(-D) intersected with the subspace constraints."""
    return len(section_kernel(curve, twist, divisor, constraints)) - curve.n_components


def projected_h0(curve: NodalCurve, component: int, twist: TwistSpec | None = None,
                 divisor: DivisorSpec | None = None, constraints: Sequence[SubspaceConstraint] = ()) -> int:
    """Dimension of the image of the constrained global sections in H^0 of one component."""
    kernel = section_kernel(curve, twist, divisor, constraints)
    f = curve.components[component]
    lo = curve.offsets[component]
    hi = lo + (f.r + 1) * (f.d + 1)
    return rank_of_vectors(curve.field, [v[lo:hi] for v in kernel], hi - lo) - 1


# ---------------------------------------------------------------------------
# sampling helpers


def _forbidden(curve: NodalCurve, i: int, extra: Sequence = ()) -> set:
    return set(curve.node_params(i)) | set(extra)


def sample_divisor(curve: NodalCurve, distribution: Sequence[int], rng: Rng, twist: TwistSpec | None = None,
                   avoid: Sequence[Sequence] = ()) -> DivisorSpec:
    """Random reduced divisor with the given number of points on each component,
    avoiding nodes, twist pullbacks and ``avoid``."""
    points = []
    for i, k in enumerate(distribution):
        f = curve.components[i]
        h = twist.poly(f) if twist is not None else None
        banned = _forbidden(curve, i, avoid[i] if i < len(avoid) else ())
        chosen: list = []
        for _ in range(RESAMPLE_BUDGET):
            if len(chosen) == k:
                break
            x = rng.points(1, banned)[0]
            banned.add(x)
            if h is None or h(x) != 0:
                chosen.append(x)
        if len(chosen) < k:
            raise ResamplingExhausted(f"could not place {k} points on component {i}")
        points.append(chosen)
    return DivisorSpec(points)


# ---------------------------------------------------------------------------
# certificates


class Verdict(str, Enum):
    PASS = "PASS"
    FAIL = "FAIL"                    # forced failure at e = 0: a disproof over the working field
    NOT_CERTIFIED = "NOT_CERTIFIED"  # no sample reached the expected value; inconclusive


@dataclass
class CertConfig:
    trials: int = 5
    max_distributions: int = 8


@dataclass
class DegreeRecord:
    e: int
    expected: int
    achieved: int | None
    samples: list
    passed: bool
    skipped: bool = False

    def to_dict(self) -> dict:
        return {"e": self.e, "expected": self.expected, "achieved": self.achieved,
                "samples": self.samples, "pass": self.passed, "skipped": self.skipped}


@dataclass
class InterpolationCertificate:
    chi: int
    rank: int
    twist: int
    records: list
    nonspecial: bool
    h1: int
    verdict: Verdict
    seed: int
    hyperplanes: list = dc_field(default_factory=list)
    dim_v: int | None = None

    @property
    def passed(self) -> bool:
        return self.verdict is Verdict.PASS

    def achieved(self) -> dict:
        return {rec.e: rec.achieved for rec in self.records if not rec.skipped}

    def to_dict(self) -> dict:
        out = {
            "chi": self.chi,
            "rank": self.rank,
            "twist": self.twist,
            "nonspecial": self.nonspecial,
            "h1": self.h1,
            "verdict": self.verdict.value,
            "seed": self.seed,
            "hyperplanes": self.hyperplanes,
            "records": [rec.to_dict() for rec in self.records],
        }
        if self.dim_v is not None:
            out["dim_v"] = self.dim_v
        return out


def candidate_distributions(curve: NodalCurve, e: int, previous: tuple | None, cap: int, chi_parts=None) -> list:
    """Concentrated on one component (largest degree first), then the previous
    success plus one point, then an apportionment proportional to chi."""
    m = curve.n_components
    if e == 0:
        return [tuple([0] * m)]
    order = sorted(range(m), key=lambda i: (-curve.components[i].d, i))
    out: list[tuple] = []

    def add(dist):
        if dist not in out:
            out.append(dist)

    for i in order:
        dist = [0] * m
        dist[i] = e
        add(tuple(dist))
    if previous is not None and sum(previous) == e - 1:
        for i in order:
            dist = list(previous)
            dist[i] += 1
            add(tuple(dist))
    if chi_parts is not None and m > 1:
        total = sum(max(c, 0) for c in chi_parts) or 1
        raw = [e * max(c, 0) / total for c in chi_parts]
        dist = [int(x) for x in raw]
        by_remainder = sorted(range(m), key=lambda i: (-(raw[i] - dist[i]), i))
        for i in by_remainder[: e - sum(dist)]:
            dist[i] += 1
        add(tuple(dist))
    return out[:cap]


def _chi_parts(curve: NodalCurve, t: int) -> list:
    r = curve.r
    return [(r + 1) * f.d + r + t * r * f.d for f in curve.components]


def check_interpolation(curve: NodalCurve, twist: int | TwistSpec, rng: Rng,
                        cfg: CertConfig | None = None) -> InterpolationCertificate:
    """Certificate that g^*T(t) satisfies interpolation on this model.

    For each e = 0 .. ceil(chi / r) divisors are sampled until one achieves
    h^0 = max(0, chi - e r).  One such sample pins the generic value by
    semicontinuity; every sample is also checked against the lower bound.
    """
    cfg = cfg or CertConfig()
    r = curve.r
    if isinstance(twist, TwistSpec):
        spec = twist
    else:
        spec = TwistSpec.sample(curve, twist, rng.fork("twist"))
    t = spec.t
    chi = curve.chi(t)
    formula = chi_twist(curve.degree, curve.genus, r, t)
    if chi != formula:
        raise ArithmeticError(f"chi bookkeeping broken: componentwise {chi} vs formula {formula}")
    parts = _chi_parts(curve, t)
    emax = max(0, math.ceil(chi / r))
    records: list[DegreeRecord] = []
    previous = None
    done_at_zero = False
    h0_empty = None
    for e in range(emax + 1):
        expected = max(0, chi - e * r)
        if done_at_zero:
            records.append(DegreeRecord(e, expected, None, [], True, skipped=True))
            continue
        samples, best, success = [], None, None
        for k, dist in enumerate(candidate_distributions(curve, e, previous, cfg.max_distributions, parts)):
            for trial in range(cfg.trials if e else 1):
                div = sample_divisor(curve, dist, rng.fork("divisor", e, k, trial), spec)
                h = global_h0(curve, spec, div)
                if h < expected:
                    raise AssertionError(f"h0={h} below the Riemann-Roch bound {expected} at e={e}")
                samples.append({"distribution": list(dist), "h0": h})
                best = h if best is None else min(best, h)
                if h == expected:
                    success = dist
                    break
            if success is not None:
                break
        if e == 0:
            h0_empty = best
        records.append(DegreeRecord(e, expected, best, samples, success is not None))
        if success is not None:
            previous = success
            if expected == 0:
                done_at_zero = True
    nonspecial = h0_empty == chi
    if nonspecial and all(rec.passed for rec in records):
        verdict = Verdict.PASS
    elif not nonspecial or not records[0].passed:
        verdict = Verdict.FAIL
    else:
        verdict = Verdict.NOT_CERTIFIED
    return InterpolationCertificate(chi, r, t, records, nonspecial, h0_empty - chi, verdict, rng.seed,
                                    spec.to_dict(curve.field)["hyperplanes"])


@dataclass
class SubspaceSpec:
    """V inside H^0 of one component: projections of global sections satisfying
    ``constraints`` and vanishing on ``divisor``."""

    component: int = 0
    constraints: list = dc_field(default_factory=list)
    divisor: DivisorSpec | None = None


def check_subspace_interpolation(curve: NodalCurve, twist: int | TwistSpec, v_spec: SubspaceSpec, rng: Rng,
                                 cfg: CertConfig | None = None) -> InterpolationCertificate:
    """Certificate that V satisfies interpolation: dim(V cap H^0(E(-D))) = max(0, dim V - e r)
    for some reduced D of each degree e on the component carrying V."""
    cfg = cfg or CertConfig()
    r = curve.r
    c = v_spec.component
    marked = [[] for _ in curve.components]
    for con in v_spec.constraints:
        marked[con.component].append(con.point)
    if v_spec.divisor is not None:
        for i, pts in enumerate(v_spec.divisor.points):
            marked[i].extend(pts)
    spec = twist if isinstance(twist, TwistSpec) else TwistSpec.sample(curve, twist, rng.fork("twist"), marked)
    t = spec.t
    base = v_spec.divisor.points if v_spec.divisor is not None else [[] for _ in curve.components]
    dim_v = projected_h0(curve, c, spec, DivisorSpec([list(p) for p in base]), v_spec.constraints)
    single = NodalCurve([curve.components[c]])
    h0_bundle = global_h0(single, spec)
    chi_bundle = single.chi(t)
    nonspecial = h0_bundle == chi_bundle
    records = []
    emax = max(0, math.ceil(dim_v / r))
    for e in range(emax + 1):
        expected = max(0, dim_v - e * r)
        samples, best, ok = [], None, False
        for trial in range(cfg.trials if e else 1):
            dist = [0] * curve.n_components
            dist[c] = e
            extra = sample_divisor(curve, dist, rng.fork("subspace", e, trial), spec, marked)
            pts = [list(base[i]) + extra.points[i] for i in range(curve.n_components)]
            h = projected_h0(curve, c, spec, DivisorSpec(pts), v_spec.constraints)
            if h < expected:
                raise AssertionError(f"dim {h} below the lower bound {expected} at e={e}")
            samples.append({"distribution": dist, "h0": h})
            best = h if best is None else min(best, h)
            if h == expected:
                ok = True
                break
        records.append(DegreeRecord(e, expected, best, samples, ok))
    if nonspecial and all(rec.passed for rec in records):
        verdict = Verdict.PASS
    elif not nonspecial:
        verdict = Verdict.FAIL
    else:
        verdict = Verdict.NOT_CERTIFIED
    return InterpolationCertificate(chi_bundle, r, t, records, nonspecial, h0_bundle - chi_bundle, verdict,
                                    rng.seed, spec.to_dict(curve.field)["hyperplanes"], dim_v=dim_v)


def genmod_check(f: RationalMap, p, c: int, rng: Rng, twist: int = 0, cfg: CertConfig | None = None) -> dict:
    """Sections whose value at a general point lies in a general codim-c subspace:
    dimension max(0, chi - c), and the subspace satisfies interpolation."""
    curve = NodalCurve([f])
    spec = TwistSpec.sample(curve, twist, rng.fork("twist"), [[p]] if p is not None else ())
    if p is None:
        p = sample_divisor(curve, [1], rng.fork("point"), spec).points[0][0]
    functionals = random_fiber_functionals(f, p, c, rng.fork("subspace"))
    constraint = SubspaceConstraint(0, p, functionals)
    chi = curve.chi(spec.t)
    dim = global_h0(curve, spec, constraints=[constraint])
    expected = max(0, chi - c)
    cert = check_subspace_interpolation(curve, spec, SubspaceSpec(0, [constraint]), rng.fork("cert"), cfg)
    return {
        "chi": chi,
        "codim": c,
        "dim": dim,
        "expected_dim": expected,
        "dim_ok": dim == expected,
        "certificate": cert,
        "pass": dim == expected and cert.passed,
    }


# ---------------------------------------------------------------------------
# building curves


def _general_position(field: FieldSpec, images: Sequence[Sequence], r: int) -> bool:
    k = min(len(images), r + 1)
    return all(rank_of_vectors(field, list(sub), r + 1) == k for sub in combinations(images, k))


def attach(curve: NodalCurve, degree: int, s: int, rng: Rng, budget: int = 20) -> NodalCurve:
    """Glue a new degree-``degree`` rational component to ``curve`` at s general points.

    The points are sampled on (random components of) ``curve``; the new map
    is solved for through their images at random parameters.
    """
    field, r = curve.field, curve.r
    for _ in range(budget):
        where = [rng.randrange(curve.n_components) for _ in range(s)]
        placed, images = [], []
        used = {i: set(curve.node_params(i)) for i in range(curve.n_components)}
        for i in where:
            x = rng.points(1, used[i])[0]
            used[i].add(x)
            placed.append((i, x))
            images.append(curve.components[i].evaluate_raw(x))
        if not _general_position(field, images, r):
            continue
        params = rng.points(s)
        prob = IncidenceProblem(r, degree, [(t, ProjPoint(field, y)) for t, y in zip(params, images)])
        sol = solve_through_points(prob, field, rng.fork("attach", len(curve.history)))
        if not sol.witness_valid:
            continue
        new_index = curve.n_components
        nodes = list(curve.nodes) + [((i, x), (new_index, t)) for (i, x), t in zip(placed, params)]
        return NodalCurve(curve.components + [sol.witness], nodes, curve.seed, curve.history)
    raise SolverFailure(f"could not attach a degree-{degree} component through {s} points in {budget} tries")


def assemble(components: Sequence[RationalMap], nodes: Sequence = (), node_plan: Sequence = (),
             rng: Rng | None = None) -> NodalCurve:
    """Build a nodal curve from components.

    Explicit ``nodes`` are validated as given.  Each ``node_plan`` entry
    (i, j, count) samples ``count`` points on component i and re-solves
    component j (same degree) through their images, so images match by
    construction.  A re-solved component may not feed an earlier target.
    """
    comps = list(components)
    all_nodes = list(nodes)
    if node_plan:
        if rng is None:
            raise InvalidInput("a node plan needs an Rng")
        field = comps[0].field
        targets: dict[int, list] = {}
        for i, j, count in node_plan:
            if i == j:
                raise InvalidInput("node plans glue distinct components")
            targets.setdefault(j, []).append((i, count))
        finished: set = set()
        for j, sources in targets.items():
            if any(i in targets and i not in finished for i, _ in sources):
                raise InvalidInput(f"component {j} is glued to a component that is re-solved later")
            used_j = set(p for (a, p), _ in all_nodes if a == j) | set(q for _, (b, q) in all_nodes if b == j)
            for _ in range(RESAMPLE_BUDGET):
                pairs, new_nodes = [], []
                used = {}
                for i, count in sources:
                    used.setdefault(i, set(p for (a, p), _ in all_nodes if a == i)
                                    | set(q for _, (b, q) in all_nodes if b == i))
                    for x in rng.points(count, used[i]):
                        used[i].add(x)
                        pairs.append((x, comps[i].evaluate_raw(x)))
                        new_nodes.append((i, x))
                params = rng.points(len(pairs), used_j)
                prob = IncidenceProblem(comps[j].r, comps[j].d,
                                        [(t, ProjPoint(field, y)) for t, (_, y) in zip(params, pairs)])
                sol = solve_through_points(prob, field, rng.fork("assemble", j))
                if sol.witness_valid:
                    comps[j] = sol.witness
                    all_nodes += [((i, x), (j, t)) for (i, x), t in zip(new_nodes, params)]
                    break
            else:
                raise SolverFailure(f"could not re-solve component {j} through its node images")
            finished.add(j)
    return NodalCurve(comps, all_nodes)


def degeneration_plan(d: int, g: int, r: int, mode: str) -> list[dict]:
    """The recursion (s, g', d') from the top-level (d, g) down to genus 0."""
    if mode not in ("tangent", "twisted"):
        raise InvalidInput(f"mode must be 'tangent' or 'twisted', got {mode!r}")
    if rho(d, g, r) < 0:
        raise InvalidInput(f"infeasible: rho({d},{g},{r}) = {rho(d, g, r)} < 0")
    if mode == "twisted" and d - r * g - 1 < 0:
        raise InvalidInput(f"infeasible for the twisted mode: d - rg - 1 = {d - r * g - 1} < 0")
    steps = []
    while g > 0:
        if mode == "tangent":
            if g >= r + 1:
                s, g2, d2 = r + 2, g - r - 1, d - r
            else:
                s, g2, d2 = g + 1, 0, d - r
        else:
            s, g2, d2 = 2, g - 1, d - r
        if not (rho(d2, g2, r) >= 0 or (g2 == 0 and d2 >= 1)):
            raise ArithmeticError(f"recursion invariant broken at (d, g) = ({d}, {g})")
        steps.append({"d": d, "g": g, "s": s, "g_prime": g2, "d_prime": d2})
        d, g = d2, g2
    return steps


def build_degeneration(d: int, g: int, r: int, mode: str, rng: Rng) -> NodalCurve:
    """All-rational nodal model of degree d and arithmetic genus g.

    Unfolds the recursion: a general degree-d' rational curve at the bottom,
    then at each level a degree-r rational curve through s points of the
    curve built so far.
    """
    steps = degeneration_plan(d, g, r, mode)
    base_degree = steps[-1]["d_prime"] if steps else d
    curve = NodalCurve([random_map(r, base_degree, rng.fork("base"))], seed=rng.seed, history=steps)
    for level, step in enumerate(reversed(steps)):
        curve = attach(curve, r, step["s"], rng.fork("level", level))
    if curve.degree != d or curve.genus != g:
        raise ArithmeticError(f"built degree {curve.degree}, genus {curve.genus}; wanted {d}, {g}")
    return curve


def glue_resolving(x: RationalMap, y: NodalCurve, k: int, rng: Rng, budget: int = 20):
    """Glue X to Y at k points: points are sampled on Y, X (same degree) is
    re-solved through their images at k general parameters of X."""
    field, r = y.field, y.r
    for attempt in range(budget):
        where = [rng.randrange(y.n_components) for _ in range(k)]
        used = {i: set(y.node_params(i)) for i in range(y.n_components)}
        placed, images = [], []
        for i in where:
            pt = rng.points(1, used[i])[0]
            used[i].add(pt)
            placed.append((i, pt))
            images.append(y.components[i].evaluate_raw(pt))
        if len({ProjPoint(field, im) for im in images}) < k:
            continue
        params = rng.points(k)
        prob = IncidenceProblem(r, x.d, [(t, ProjPoint(field, im)) for t, im in zip(params, images)])
        sol = solve_through_points(prob, field, rng.fork("glue", attempt))
        if not sol.witness_valid:
            continue
        xi = y.n_components
        nodes = list(y.nodes) + [((i, pt), (xi, t)) for (i, pt), t in zip(placed, params)]
        return sol.witness, NodalCurve(y.components + [sol.witness], nodes)
    raise SolverFailure(f"could not glue a degree-{x.d} curve at {k} points")


def higher_genus_glue_check(x_side: RationalMap, y_side, k: int, rng: Rng, twist: int = 0,
                            cfg: CertConfig | None = None) -> dict:
    """Gluing harness: X, Y satisfy interpolation, chi(E|_X) is a multiple of r
    and at least r k, hence X cup Y (k nodes) satisfies interpolation.

    Unmet hypotheses are reported and no glued verdict is claimed.
    """
    if not isinstance(x_side, RationalMap):
        raise InvalidInput("the X side must be a single rational component (its node points are re-solved)")
    y_curve = y_side if isinstance(y_side, NodalCurve) else NodalCurve([y_side])
    r = y_curve.r
    chi_x = (r + 1) * x_side.d + r + twist * r * x_side.d
    hyp = {
        "chi_x": chi_x,
        "chi_x_divisible_by_rank": chi_x % r == 0,
        "chi_x_at_least_rank_times_k": chi_x >= r * k,
    }
    report = {"k": k, "rank": r, "hypotheses": hyp, "hypotheses_met": False, "glued": None, "verdict": None}
    if not (hyp["chi_x_divisible_by_rank"] and hyp["chi_x_at_least_rank_times_k"]):
        report["verdict"] = "hypotheses_unmet"
        return report
    x_new, glued = glue_resolving(x_side, y_curve, k, rng.fork("glue"))
    x_cert = check_interpolation(NodalCurve([x_new]), twist, rng.fork("x"), cfg)
    y_cert = check_interpolation(y_curve, twist, rng.fork("y"), cfg)
    hyp["x_interpolates"] = x_cert.passed
    hyp["y_interpolates"] = y_cert.passed
    if not (x_cert.passed and y_cert.passed):
        report["verdict"] = "hypotheses_unmet"
        return report
    report["hypotheses_met"] = True
    cert = check_interpolation(glued, twist, rng.fork("glued"), cfg)
    report["glued"] = {"curve": glued, "certificate": cert, "genus": glued.genus, "degree": glued.degree}
    report["verdict"] = cert.verdict.value
    return report
