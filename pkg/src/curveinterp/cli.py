"""Command line interface.

Exit codes: 0 all verdicts as expected, 1 some unexpected verdict, 2 invalid input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import CurveInterpError, InvalidInput
from .exact_algebra import FieldSpec, Rng, default_prime
from .nodal_glue import CertConfig
from .numerology import feasibility_hyperplane, feasibility_unconstrained, twist_classification
from .rational_maps import (
    IncidenceProblem,
    RationalMap,
    random_map,
    solve_through_points,
    solve_through_points_hyperplane,
)
from .euler_model import splitting_type
from .verify import MODES, CampaignConfig, sweep, verify_main, verify_remark, verify_twisted

EXIT_OK, EXIT_UNEXPECTED, EXIT_INVALID = 0, 1, 2


def parse_range(text: str) -> list[int]:
    """``"3"``, ``"3:5"`` (inclusive) or ``"3,4,7"``."""
    out: list[int] = []
    try:
        for part in text.split(","):
            part = part.strip()
            if not part:
                continue
            if ":" in part:
                lo, hi = part.split(":")
                out.extend(range(int(lo), int(hi) + 1))
            else:
                out.append(int(part))
    except ValueError as exc:
        raise InvalidInput(f"bad range {text!r}") from exc
    return out


def _common(parser, suppress: bool):
    default = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--prime", type=int, default=default(None),
                        help="field characteristic (0 = rationals); default $CURVEINTERP_PRIME or 1000003")
    parser.add_argument("--seed", type=int, default=default(0))
    parser.add_argument("--trials", type=int, default=default(5), help="random divisors per distribution")
    parser.add_argument("--json", action="store_true", default=default(False), help="emit JSON")
    parser.add_argument("--out", default=default(None), help="write output to FILE instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="curveinterp", description=__doc__.splitlines()[0])
    _common(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("feasibility", help="closed-form incidence criteria")
    _common(p, suppress=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--k", type=int, default=None, help="also classify the twist T(-k)")
    p.add_argument("--hyperplane", action="store_true", help="first d targets lie on a hyperplane")

    p = sub.add_parser("solve", help="genus-0 maps through prescribed points")
    _common(p, suppress=True)
    p.add_argument("input", nargs="?", default="-", help="JSON problem file, or - for stdin")

    p = sub.add_parser("splitting", help="splitting type of f^*T_{P^r}")
    _common(p, suppress=True)
    p.add_argument("--r", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--coeffs", help="JSON coefficient table (inline or a file path)")

    p = sub.add_parser("verify", help="certify interpolation on a degenerate model")
    _common(p, suppress=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--mode", choices=MODES, default="tangent")
    p.add_argument("--k", type=int, default=2, help="twist magnitude for --mode remark")
    p.add_argument("--dump-curve", help="write the built nodal curve as JSON")

    p = sub.add_parser("sweep", help="verification campaign over ranges")
    _common(p, suppress=True)
    p.add_argument("--d", default="", help="degrees, e.g. 3:5")
    p.add_argument("--g", default="", help="genera, e.g. 0:2")
    p.add_argument("--r", default="", help="target dimensions, e.g. 2,3")
    p.add_argument("--k", default="2,3", help="twists for remark mode")
    p.add_argument("--modes", default="tangent", help="comma-separated subset of " + ",".join(MODES))
    p.add_argument("--distributions", type=int, default=8, help="distribution cap per degree")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--config", help="JSON CampaignConfig file (overrides range flags)")
    return parser


def _field(args) -> FieldSpec:
    return FieldSpec(args.prime if args.prime is not None else default_prime())


def _load_json(text: str):
    try:
        if text == "-":
            return json.load(sys.stdin)
        try:
            is_file = Path(text).is_file()
        except OSError:
            is_file = False
        if is_file:
            return json.loads(Path(text).read_text(encoding="utf-8"))
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"invalid JSON: {exc}") from exc


def cmd_feasibility(args):
    if args.hyperplane:
        report = feasibility_hyperplane(args.d, args.g, args.r, args.n)
    else:
        report = feasibility_unconstrained(args.d, args.g, args.r, args.n)
    out = report.to_dict()
    if args.k is not None:
        out["twist_k"] = args.k
        out["twist_classification"] = twist_classification(args.d, args.g, args.r, args.k).value
    text = "\n".join(f"{key}: {value}" for key, value in out.items())
    return out, text, EXIT_OK


def cmd_solve(args):
    field = _field(args)
    data = _load_json(args.input)
    prob = IncidenceProblem.from_dict(data, field)
    rng = Rng(args.seed, field)
    if prob.hyperplane_count:
        sol = solve_through_points_hyperplane(prob, field, rng)
    else:
        sol = solve_through_points(prob, field, rng)
    out = {"field": field.characteristic, "problem": prob.to_dict(), "solution": sol.to_dict(field)}
    text = (f"kernel_dim: {sol.kernel_dim} (expected {sol.expected_dim})\n"
            f"witness_valid: {sol.witness_valid}\n"
            f"witness: {None if sol.witness is None else sol.witness.to_json()}\n"
            + "".join(f"reason: {r}\n" for r in sol.reasons)).rstrip()
    return out, text, EXIT_OK


def cmd_splitting(args):
    field = _field(args)
    if args.coeffs:
        f = RationalMap(field, _load_json(args.coeffs))
    else:
        if args.r is None or args.d is None:
            raise InvalidInput("splitting needs --r and --d, or --coeffs")
        f = random_map(args.r, args.d, Rng(args.seed, field))
    s, table = splitting_type(f, with_table=True)
    out = {"r": f.r, "d": f.d, "field": field.characteristic, "seed": args.seed, "coeffs": f.to_json(),
           "degrees": list(s.degrees), "balanced": s.balanced, "h0_table": {str(m): h for m, h in table.items()}}
    text = f"degrees: {s}\nbalanced: {s.balanced}"
    return out, text, EXIT_OK


def cmd_verify(args):
    field = _field(args)
    cfg = CertConfig(trials=args.trials)
    if args.mode == "tangent":
        row = verify_main(args.d, args.g, args.r, cfg, args.seed, field)
    elif args.mode == "twisted":
        row = verify_twisted(args.d, args.g, args.r, cfg, args.seed, field)
    else:
        row = verify_remark(args.d, args.g, args.r, args.k, cfg, args.seed, field)
    if args.dump_curve and row.curve is not None:
        Path(args.dump_curve).write_text(json.dumps(row.curve.to_dict(), indent=2) + "\n", encoding="utf-8")
    out = row.to_dict()
    text = "\n".join(f"{key}: {value}" for key, value in out.items())
    return out, text, EXIT_OK if row.ok else EXIT_UNEXPECTED


def cmd_sweep(args):
    if args.config:
        data = _load_json(args.config)
        try:
            cfg = CampaignConfig(**data)
        except TypeError as exc:
            raise InvalidInput(f"bad campaign config: {exc}") from exc
    else:
        cfg = CampaignConfig(
            prime=_field(args).characteristic, seed=args.seed, trials=args.trials,
            max_distributions=args.distributions, d_range=parse_range(args.d), g_range=parse_range(args.g),
            r_range=parse_range(args.r), k_range=parse_range(args.k),
            modes=[m.strip() for m in args.modes.split(",") if m.strip()], jobs=args.jobs,
        )
    report = sweep(cfg)
    return report.to_dict(), report.to_text(), EXIT_OK if report.all_ok else EXIT_UNEXPECTED


COMMANDS = {
    "feasibility": cmd_feasibility,
    "solve": cmd_solve,
    "splitting": cmd_splitting,
    "verify": cmd_verify,
    "sweep": cmd_sweep,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.prime is not None:
            FieldSpec(args.prime)
        payload, text, code = COMMANDS[args.command](args)
    except CurveInterpError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    rendered = json.dumps(payload, indent=2, sort_keys=True) if args.json else text
    if args.out:
        Path(args.out).write_text(rendered + "\n", encoding="utf-8")
    else:
        print(rendered)
    return code


if __name__ == "__main__":
    sys.exit(main())
