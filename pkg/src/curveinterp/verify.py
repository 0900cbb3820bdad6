"""Verification campaigns: one row per (d, g, r, mode), reproducible from its seed."""

from __future__ import annotations

import itertools
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field as dc_field, fields

from .errors import InvalidInput
from .exact_algebra import DEFAULT_PRIME, FieldSpec, Rng
from .nodal_glue import (
    CertConfig,
    InterpolationCertificate,
    NodalCurve,
    Verdict,
    build_degeneration,
    check_interpolation,
)
from .numerology import (
    TwistVerdict,
    chi_twist,
    feasibility_unconstrained,
    rho,
    twist_classification,
)

MODES = ("tangent", "twisted", "remark")


@dataclass
class CampaignConfig:
    prime: int = DEFAULT_PRIME
    seed: int = 0
    trials: int = 5
    max_distributions: int = 8
    d_range: list = dc_field(default_factory=list)
    g_range: list = dc_field(default_factory=list)
    r_range: list = dc_field(default_factory=list)
    k_range: list = dc_field(default_factory=lambda: [2, 3])
    modes: list = dc_field(default_factory=lambda: ["tangent"])
    jobs: int = 1

    def __post_init__(self):
        FieldSpec(self.prime)
        bad = [m for m in self.modes if m not in MODES]
        if bad:
            raise InvalidInput(f"unknown modes {bad}; choose from {MODES}")

    @property
    def field(self) -> FieldSpec:
        return FieldSpec(self.prime)

    @property
    def cert(self) -> CertConfig:
        return CertConfig(self.trials, self.max_distributions)


@dataclass
class Row:
    d: int
    g: int
    r: int
    mode: str
    k: int | None
    seed: int
    rho: int
    chi: int | None
    expected: str
    verdict: str
    ok: bool
    h0_empty: int | None = None
    achieved: dict | None = None
    components: list | None = None
    note: str = ""
    runtime_s: float = 0.0
    curve: NodalCurve | None = dc_field(default=None, repr=False, compare=False)
    certificate: InterpolationCertificate | None = dc_field(default=None, repr=False, compare=False)

    def to_dict(self, include_timing: bool = True) -> dict:
        out = {f.name: getattr(self, f.name) for f in fields(self) if f.name not in ("curve", "certificate")}
        if self.achieved is not None:
            out["achieved"] = {str(e): h for e, h in self.achieved.items()}
        if not include_timing:
            out.pop("runtime_s")
        return out


def _infeasible(d, g, r, mode, k, seed, note):
    return Row(d, g, r, mode, k, seed, rho(d, g, r), None, "infeasible", "infeasible", True, note=note)


def _certify(curve, t, rng, cfg):
    cert = check_interpolation(curve, t, rng, cfg)
    return cert, dict(h0_empty=cert.records[0].achieved, achieved=cert.achieved(),
                      components=[f.d for f in curve.components], certificate=cert)


def verify_main(d: int, g: int, r: int, cfg: CertConfig | None = None, seed: int = 0,
                field: FieldSpec | None = None) -> Row:
    """Build the tangent-mode degeneration and certify f^*T_{P^r} interpolates."""
    start = time.perf_counter()
    feas = feasibility_unconstrained(d, g, r, 0)
    if not feas.feasible:
        return _infeasible(d, g, r, "tangent", None, seed, f"infeasible: rho = {feas.rho}")
    rng = Rng(seed, field or FieldSpec())
    curve = build_degeneration(d, g, r, "tangent", rng.fork("build"))
    cert, extra = _certify(curve, 0, rng.fork("certify"), cfg)
    verdict = cert.verdict.value
    return Row(d, g, r, "tangent", None, seed, feas.rho, cert.chi, Verdict.PASS.value, verdict,
               verdict == Verdict.PASS.value, runtime_s=time.perf_counter() - start, curve=curve, **extra)


def verify_twisted(d: int, g: int, r: int, cfg: CertConfig | None = None, seed: int = 0,
                   field: FieldSpec | None = None) -> Row:
    """Certify f^*T(-1) interpolates when d - rg - 1 >= 0; otherwise exhibit the
    forced failure h^0 >= r + 1 > chi on a nondegenerate model."""
    start = time.perf_counter()
    bn = rho(d, g, r)
    if bn < 0:
        return _infeasible(d, g, r, "twisted", None, seed, f"infeasible: rho = {bn}")
    rng = Rng(seed, field or FieldSpec())
    if d - r * g - 1 >= 0:
        curve = build_degeneration(d, g, r, "twisted", rng.fork("build"))
        cert, extra = _certify(curve, -1, rng.fork("certify"), cfg)
        verdict = cert.verdict.value
        return Row(d, g, r, "twisted", None, seed, bn, cert.chi, Verdict.PASS.value, verdict,
                   verdict == Verdict.PASS.value, runtime_s=time.perf_counter() - start, curve=curve, **extra)
    curve = build_degeneration(d, g, r, "tangent", rng.fork("build"))
    cert, extra = _certify(curve, -1, rng.fork("certify"), cfg)
    verdict = cert.verdict.value
    forced = extra["h0_empty"] >= r + 1 > cert.chi
    note = f"d - rg - 1 = {d - r * g - 1} < 0; h0 = {extra['h0_empty']} vs chi = {cert.chi}, forced bound r + 1 = {r + 1}"
    return Row(d, g, r, "twisted", None, seed, bn, cert.chi, Verdict.FAIL.value, verdict,
               verdict == Verdict.FAIL.value and forced, note=note,
               runtime_s=time.perf_counter() - start, curve=curve, **extra)


def verify_remark(d: int, g: int, r: int, k: int, cfg: CertConfig | None = None, seed: int = 0,
                  field: FieldSpec | None = None) -> Row:
    """Compare the closed-form classification of f^*T(-k) with a certificate run."""
    start = time.perf_counter()
    expected = twist_classification(d, g, r, k)
    bn = rho(d, g, r)
    if expected is TwistVerdict.OUT_OF_SCOPE:
        return Row(d, g, r, "remark", k, seed, bn, None, expected.value, expected.value, True,
                   note=f"rho = {bn} < 0")
    rng = Rng(seed, field or FieldSpec())
    curve = build_degeneration(d, g, r, "tangent", rng.fork("build"))
    cert, extra = _certify(curve, -k, rng.fork("certify"), cfg)
    computed = {Verdict.PASS: TwistVerdict.SATISFIES.value, Verdict.FAIL: TwistVerdict.FAILS.value}.get(
        cert.verdict, "inconclusive")
    assert cert.chi == chi_twist(d, g, r, -k)
    return Row(d, g, r, "remark", k, seed, bn, cert.chi, expected.value, computed, computed == expected.value,
               note=f"h1 = {cert.h1}", runtime_s=time.perf_counter() - start, curve=curve, **extra)


def run_row(task: dict) -> Row:
    cfg = CertConfig(task["trials"], task["max_distributions"])
    field = FieldSpec(task["prime"])
    d, g, r, mode, seed = task["d"], task["g"], task["r"], task["mode"], task["seed"]
    if mode == "tangent":
        return verify_main(d, g, r, cfg, seed, field)
    if mode == "twisted":
        return verify_twisted(d, g, r, cfg, seed, field)
    return verify_remark(d, g, r, task["k"], cfg, seed, field)


def plan_rows(cfg: CampaignConfig) -> list[dict]:
    """Tasks in sorted order; row i gets seed ``cfg.seed ^ i``."""
    keys = []
    for mode in sorted(set(cfg.modes), key=MODES.index):
        ks = sorted(set(cfg.k_range)) if mode == "remark" else [None]
        for r, d, g, k in itertools.product(sorted(set(cfg.r_range)), sorted(set(cfg.d_range)),
                                            sorted(set(cfg.g_range)), ks):
            keys.append((mode, r, d, g, k))
    return [
        {"mode": mode, "r": r, "d": d, "g": g, "k": k, "seed": cfg.seed ^ i, "prime": cfg.prime,
         "trials": cfg.trials, "max_distributions": cfg.max_distributions}
        for i, (mode, r, d, g, k) in enumerate(keys)
    ]


@dataclass
class CampaignReport:
    config: CampaignConfig
    rows: list

    @property
    def all_ok(self) -> bool:
        return all(row.ok for row in self.rows)

    def to_dict(self, include_timing: bool = True) -> dict:
        return {
            "config": asdict(self.config),
            "rows": [row.to_dict(include_timing) for row in self.rows],
            "summary": {
                "rows": len(self.rows),
                "ok": sum(row.ok for row in self.rows),
                "unexpected": sum(not row.ok for row in self.rows),
            },
        }

    def to_text(self) -> str:
        header = ["mode", "d", "g", "r", "k", "rho", "chi", "expected", "verdict", "ok", "seed"]
        lines = [[row.mode, row.d, row.g, row.r, "" if row.k is None else row.k, row.rho,
                  "" if row.chi is None else row.chi, row.expected, row.verdict,
                  "yes" if row.ok else "NO", row.seed] for row in self.rows]
        table = [header] + [[str(x) for x in line] for line in lines]
        widths = [max(len(line[i]) for line in table) for i in range(len(header))]
        out = ["  ".join(cell.rjust(w) for cell, w in zip(line, widths)) for line in table]
        ok = sum(row.ok for row in self.rows)
        out.append(f"{ok}/{len(self.rows)} rows as expected")
        return "\n".join(out)


def sweep(cfg: CampaignConfig) -> CampaignReport:
    tasks = plan_rows(cfg)
    if cfg.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            rows = list(pool.map(run_row, tasks))
    else:
        rows = [run_row(task) for task in tasks]
    return CampaignReport(cfg, rows)


def replay_row(row: dict, cfg: CampaignConfig) -> Row:
    """Re-run a row from its recorded inputs and seed."""
    task = {"mode": row["mode"], "d": row["d"], "g": row["g"], "r": row["r"], "k": row["k"],
            "seed": row["seed"], "prime": cfg.prime, "trials": cfg.trials,
            "max_distributions": cfg.max_distributions}
    return run_row(task)
