"""One test per acceptance criterion; each prints a PASS/FAIL line with its runtime.

Run ``pytest tests/test_acceptance.py -s`` to see the lines inline; they are also
collected into the terminal summary of any pytest run.
"""

import math
import time
from contextlib import contextmanager

import pytest

from conftest import ACCEPTANCE_LINES
from curveinterp.exact_algebra import FieldSpec, Rng
from curveinterp.euler_model import splitting_type
from curveinterp.nodal_glue import NodalCurve, Verdict, check_interpolation, higher_genus_glue_check
from curveinterp.rational_maps import (
    IncidenceProblem,
    ProjPoint,
    RationalMap,
    proportional,
    random_map,
    solve_through_points,
    solve_through_points_hyperplane,
)
from curveinterp.verify import verify_main, verify_twisted
from test_properties import (
    CAMPAIGN,
    aut_invariance_failures,
    campaign,
    chi_bookkeeping_violations,
    replay_mismatches,
    semicontinuity_violations,
)

pytestmark = pytest.mark.acceptance

F = FieldSpec(1000003)


@contextmanager
def criterion(number: int, title: str, limit_s: float):
    """Time the body, print one verdict line, and fail on a failed check or a slow run."""
    state = {"detail": ""}
    start = time.perf_counter()
    error = None
    try:
        yield state
    except AssertionError as exc:
        error = exc
    elapsed = time.perf_counter() - start
    slow = elapsed >= limit_s
    ok = error is None and not slow
    reason = f" ({error})" if error else (f" (over the {limit_s:g} s limit)" if slow else "")
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}; {elapsed:.2f} s{reason}"
    if state["detail"]:
        line += f"; {state['detail']}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    if error is not None:
        raise error
    assert not slow, line


def general_problem(r, d, n, rng, on_hyperplane=0):
    pairs = []
    for i, p in enumerate(rng.points(n)):
        q = rng.vector(r + 1)
        if i < on_hyperplane:
            q[-1] = 0
        pairs.append((p, ProjPoint(F, q)))
    return IncidenceProblem(r, d, pairs, hyperplane_count=on_hyperplane)


def test_criterion_1_line_splitting():
    with criterion(1, "line splitting is {2, 1^(r-1)} for r = 2..5", 1.0) as st:
        for r in range(2, 6):
            f = random_map(r, 1, Rng(r, F))
            assert splitting_type(f).degrees == (2,) + (1,) * (r - 1), r
        st["detail"] = "4 lines"


def test_criterion_2_balanced_genus_zero():
    with criterion(2, "random maps are balanced with degree sum (r+1)d, 1<=r<=4, 1<=d<=8", 30.0) as st:
        count = 0
        for r in range(1, 5):
            for d in range(1, 9):
                for i in range(20):
                    s = splitting_type(random_map(r, d, Rng(0, F).fork(r, d, i)))
                    assert s.balanced, (r, d, i, s)
                    assert sum(s.degrees) == (r + 1) * d, (r, d, i, s)
                    count += 1
        st["detail"] = f"{count} maps"


def test_criterion_3_solver_dimension_law():
    with criterion(3, "solver kernel dimensions (1,1,3)->1 (2,2,4)->1 (2,3,5)->2 (2,2,5)->0", 5.0) as st:
        cases = {(1, 1, 3): 1, (2, 2, 4): 1, (2, 3, 5): 2, (2, 2, 5): 0}
        witnesses = 0
        for (r, d, n), dim in cases.items():
            for i in range(10):
                rng = Rng(i, F).fork(r, d, n)
                prob = general_problem(r, d, n, rng.fork("problem"))
                sol = solve_through_points(prob, F, rng.fork("solve"))
                assert sol.kernel_dim == dim, ((r, d, n), i, sol.kernel_dim)
                assert sol.witness_valid == (dim > 0)
                if sol.witness is not None:
                    for p, q in prob.pairs:
                        assert proportional(F, sol.witness.evaluate_raw(p), q.coords)
                    witnesses += 1
        st["detail"] = f"40 instances, {witnesses} witnesses re-evaluated"


def test_criterion_4_hyperplane_solver():
    with criterion(4, "hyperplane solver (r,d)=(2,2), n=2 on H has kernel_dim 4", 1.0) as st:
        for i in range(5):
            rng = Rng(i, F).fork("hyperplane")
            prob = general_problem(2, 2, 2, rng.fork("problem"), on_hyperplane=2)
            sol = solve_through_points_hyperplane(prob, F, rng.fork("solve"))
            assert sol.kernel_dim == 4
            assert sol.witness_valid
            last = sol.witness.coeffs[2]
            # echelon members of the affine family satisfy the linear system
            # (they may be spurious, with s(p) = 0); random members are valid maps
            echelon = [[F(a + b) for a, b in zip(sol.particular, v)] for v in sol.basis]
            combos = []
            for j in range(10):
                c = rng.fork("member", j).vector(len(sol.basis))
                combos.append([F(a + sum(ci * v[k] for ci, v in zip(c, sol.basis)))
                               for k, a in enumerate(sol.particular)])
            for w in [sol.particular] + echelon + combos:
                f = RationalMap(F, [w[0:3], w[3:6], last], check=False)
                for p, q in prob.pairs:
                    y = f.evaluate_raw(p)
                    assert y[2] == 0
                    assert not any(y) or proportional(F, y, q.coords)
            for w in [sol.witness.coeffs[0] + sol.witness.coeffs[1]] + combos:
                f = RationalMap(F, [w[0:3], w[3:6], last], check=False)
                assert not f.defects([p for p, _ in prob.pairs], require_nondegenerate=True)
                for p, q in prob.pairs:
                    y = f.evaluate_raw(p)
                    assert y[2] == 0 and proportional(F, y, q.coords)
        st["detail"] = "5 instances, witness and 10 random family members valid"


def test_criterion_5_tangent_certificates():
    cases = [(3, 1, 2), (4, 1, 2), (4, 2, 2), (5, 3, 2), (4, 1, 3), (5, 1, 3)]
    with criterion(5, "tangent-bundle certificates PASS on six (d,g,r)", 120.0) as st:
        for d, g, r in cases:
            row = verify_main(d, g, r)
            assert row.verdict == "PASS", (d, g, r, row.verdict)
            cert = row.certificate
            emax = math.ceil(cert.chi / r)
            assert [rec.e for rec in cert.records] == list(range(emax + 1))
            for rec in cert.records:
                assert not rec.skipped and rec.achieved == max(0, cert.chi - rec.e * r), (d, g, r, rec.e)
        st["detail"] = ", ".join(f"{c}" for c in cases)


def test_criterion_6_twisted_certificates():
    with criterion(6, "twisted bundle PASS on the boundary d-rg-1=0, certified FAIL for (4,2,2)", 60.0) as st:
        for d, g, r in [(3, 1, 2), (4, 1, 3), (5, 2, 2)]:
            assert d - r * g - 1 == 0
            row = verify_twisted(d, g, r)
            assert row.verdict == "PASS", (d, g, r, row.verdict)
        row = verify_twisted(4, 2, 2)
        assert row.verdict == "FAIL" and row.chi == 2 and row.h0_empty >= 3
        assert row.certificate.records[0].e == 0
        st["detail"] = f"(4,2,2): h0 = {row.h0_empty} vs chi = {row.chi}"


def test_criterion_7_higher_twists():
    with criterion(7, "twist -2: conic satisfies, plane cubic fails nonspecialness", 1.0) as st:
        conic = check_interpolation(NodalCurve([random_map(2, 2, Rng(1, F))]), -2, Rng(2, F))
        assert conic.records[0].achieved == 0 and conic.h1 == 0
        assert conic.verdict is Verdict.PASS
        cubic = check_interpolation(NodalCurve([random_map(2, 3, Rng(3, F))]), -2, Rng(4, F))
        assert cubic.records[0].achieved == 0 and cubic.h1 == 1
        assert cubic.verdict is Verdict.FAIL
        st["detail"] = f"conic h0 = h1 = 0; cubic h0 = 0, h1 = {cubic.h1}"


def test_criterion_8_gluing_harness():
    with criterion(8, "two conics glued at 2 points PASS; violated hypotheses flagged", 10.0) as st:
        rng = Rng(8, F)
        x, y = random_map(2, 2, rng.fork("x")), random_map(2, 2, rng.fork("y"))
        out = higher_genus_glue_check(x, y, 2, rng.fork("glue"))
        assert out["hypotheses"]["chi_x"] == 8 and out["hypotheses_met"]
        assert out["verdict"] == "PASS" and out["glued"]["genus"] == 1
        odd = higher_genus_glue_check(random_map(2, 1, rng.fork("line")), y, 1, rng.fork("odd"))
        many = higher_genus_glue_check(x, y, 5, rng.fork("many"))
        for report in (odd, many):
            assert report["verdict"] == "hypotheses_unmet" and report["glued"] is None
        st["detail"] = "line with k=1 and conic with k=5 flagged unmet"


def test_criterion_9_property_suites():
    with criterion(9, "semicontinuity, chi bookkeeping, Aut-invariance, replay determinism", 120.0) as st:
        report = campaign()
        assert report.all_ok
        assert semicontinuity_violations(report) == []
        assert chi_bookkeeping_violations(report) == []
        assert aut_invariance_failures(20) == []
        assert replay_mismatches(report, CAMPAIGN) == []
        st["detail"] = f"{len(report.rows)} campaign rows, 20 coordinate changes"
