"""Command-line interface.

Subcommands: ``match`` (max-sum matching), ``center`` (center point and
certificate, or --check of a stored certificate), ``improve`` (iterated
refutation loop), ``verify`` (randomized suites with optional CSV+figure
reports), and ``plot`` (deterministic SVG).

Exit codes: 0 success; 1 verification violation or failed certificate check;
2 malformed input or flags; 3 brute-force oracle size exceeded; 4 solver
non-convergence; 5 numerical tolerance failure in the improvement engine.

Tolerance precedence: an explicit ``--tol`` wins, then the MATCHCENTER_TOL
environment variable, then the built-in default (1e-9 for the solver).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Optional

from . import fileio, report, svgfig, verify
from .center import DEFAULT_SOLVER_TOL, center_point
from .geometry import SQRT2, Point
from .matching import OracleSizeError, brute_force_max_sum, max_sum_matching
from .minimax import ConvergenceError
from .proofgraph import ToleranceFailure

__all__ = ["main"]

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_PARSE = 2
EXIT_ORACLE = 3
EXIT_NONCONVERGED = 4
EXIT_TOLERANCE = 5

ENV_TOL = "MATCHCENTER_TOL"


def _resolve_tol(args: argparse.Namespace, default: float = DEFAULT_SOLVER_TOL) -> float:
    if getattr(args, "tol", None) is not None:
        return args.tol
    env = os.environ.get(ENV_TOL)
    if env is not None:
        try:
            return float(env)
        except ValueError as exc:
            raise fileio.ParseError(f"bad {ENV_TOL} value {env!r}") from exc
    return default


def _print_json(data) -> None:
    print(json.dumps(data, indent=2))


def cmd_match(args: argparse.Namespace) -> int:
    inst = fileio.load_instance(args.instance)
    m = brute_force_max_sum(inst) if args.oracle else max_sum_matching(inst)
    _print_json(fileio.matching_to_json(m))
    return EXIT_OK


def cmd_center(args: argparse.Namespace) -> int:
    inst = fileio.load_instance(args.instance)
    tol = _resolve_tol(args)
    if args.check is not None:
        problems = fileio.check_certificate(inst, fileio.load_json(args.check))
        if problems:
            for p in problems:
                print(f"check failed: {p}", file=sys.stderr)
            return EXIT_VIOLATION
        print("certificate checks out")
        return EXIT_OK
    if args.matching is not None:
        m = fileio.load_matching(inst, args.matching)
        include_pass = False
    else:
        m = max_sum_matching(inst)
        include_pass = True
    cert = center_point(inst, m, tol=tol)
    payload = fileio.certificate_to_json(inst, m, cert, include_pass=include_pass)
    if args.out is not None:
        fileio.save_json(payload, args.out)
    _print_json(payload)
    return EXIT_OK


def cmd_improve(args: argparse.Namespace) -> int:
    inst = fileio.load_instance(args.instance)
    m = fileio.load_matching(inst, args.matching)
    tol = _resolve_tol(args, default=1e-7)
    result = verify.refutation_loop(inst, m, tol=tol, max_steps=args.max_steps)
    trace = {
        "status": result.status,
        "steps": [
            {
                "triple": list(step.triple),
                "cycle": {"reds": list(step.cycle.reds), "blues": list(step.cycle.blues)},
                "witness_center": [step.witness.center.x, step.witness.center.y],
                "witness_lambda": step.witness.lambda_star,
                "total_after": step.matching.total,
            }
            for step in result.steps
        ],
        "initial_total": m.total,
        "final": fileio.matching_to_json(result.matching),
    }
    if result.certificate is not None:
        trace["final_lambda_star"] = result.certificate.lambda_star
    _print_json(trace)
    return EXIT_OK


def _parse_sizes(text: str) -> tuple:
    try:
        sizes = tuple(int(s) for s in text.split(",") if s.strip())
    except ValueError as exc:
        raise fileio.ParseError(f"bad --sizes value {text!r}") from exc
    if not sizes:
        raise fileio.ParseError("need at least one size")
    return sizes


def cmd_verify(args: argparse.Namespace) -> int:
    fixture_dir = Path(args.fixture_dir) if args.fixture_dir else None
    if args.suite == "diskgap":
        found = verify.search_disk_gap(
            args.trials, base_seed=args.seed, fixture_dir=fixture_dir
        )
        if found is None:
            print(f"diskgap: no gap instance in {args.trials} seeded trials (exhausted)")
        else:
            print(
                f"diskgap: found at seed {found.seed} with residual "
                f"{found.residual:.6g}"
            )
            _print_json(fileio.instance_to_json(found.instance))
        return EXIT_OK

    if args.suite == "theorem":
        n_range = tuple(range(2, min(args.nmax, 7) + 1))
        reports = verify.verify_theorem_suite(
            args.trials,
            n_range=n_range,
            distribution=args.distribution,
            base_seed=args.seed,
            fixture_dir=fixture_dir,
        )
    elif args.suite == "uncolored":
        reports = verify.verify_uncolored_suite(
            args.trials,
            sizes=_parse_sizes(args.sizes),
            base_seed=args.seed,
            fixture_dir=fixture_dir,
        )
    elif args.suite == "squared":
        n_range = tuple(range(2, min(args.nmax, 5) + 1))
        reports = verify.verify_squared_variant(
            args.trials, n_range=n_range, base_seed=args.seed, fixture_dir=fixture_dir
        )
    else:  # pragma: no cover - argparse restricts choices
        raise fileio.ParseError(f"unknown suite {args.suite!r}")

    violations = [r for r in reports if not r.passed]
    worst = min(reports, key=lambda r: r.margin)
    print(
        f"suite={args.suite} trials={len(reports)} violations={len(violations)} "
        f"worst_margin={worst.margin:.3e} (seed={worst.seed}, n={worst.n})"
    )
    if args.report_dir:
        csv_path, fig_path = report.write_report(reports, args.report_dir, args.suite)
        print(f"report: {csv_path} {fig_path}")
    return EXIT_VIOLATION if violations else EXIT_OK


def cmd_plot(args: argparse.Namespace) -> int:
    inst = fileio.load_instance(args.instance)
    if args.matching is not None:
        m = fileio.load_matching(inst, args.matching)
    else:
        m = max_sum_matching(inst)
    if args.center is not None:
        try:
            x, y = (float(v) for v in args.center.split(","))
        except ValueError as exc:
            raise fileio.ParseError(f"bad --center value {args.center!r}") from exc
        center = Point(x, y)
    else:
        center = center_point(inst, m, tol=_resolve_tol(args)).center
    text = svgfig.render_svg(inst, m, center=center, lam=args.lam)
    try:
        Path(args.out).write_text(text)
    except OSError as exc:
        raise fileio.ParseError(f"cannot write {args.out}: {exc}") from exc
    print(f"wrote {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="matchcenter",
        description="Max-sum bichromatic matchings and their minimax center points.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("match", help="compute a max-sum matching")
    p.add_argument("instance", help="instance file (JSON or CSV)")
    p.add_argument(
        "--oracle", action="store_true", help="force the brute-force oracle (n <= 8)"
    )
    p.set_defaults(func=cmd_match)

    p = sub.add_parser("center", help="compute the center point and certificate")
    p.add_argument("instance", help="instance file (JSON or CSV)")
    p.add_argument("--matching", help="matching JSON (default: solve max-sum)")
    p.add_argument("--check", help="re-verify a stored certificate file instead")
    p.add_argument("--out", help="also write the certificate JSON here")
    p.add_argument("--tol", type=float, help="solver tolerance (absolute in lambda)")
    p.set_defaults(func=cmd_center)

    p = sub.add_parser("improve", help="iterate the refutation loop on a matching")
    p.add_argument("instance", help="instance file (JSON or CSV)")
    p.add_argument("matching", help="matching JSON to start from")
    p.add_argument("--max-steps", type=int, default=None, help="step limit")
    p.add_argument("--tol", type=float, help="acceptance tolerance on sqrt(2)")
    p.set_defaults(func=cmd_improve)

    p = sub.add_parser("verify", help="run a randomized verification suite")
    p.add_argument(
        "--suite",
        required=True,
        choices=["theorem", "uncolored", "squared", "diskgap"],
    )
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--nmax", type=int, default=7, help="largest instance size")
    p.add_argument(
        "--distribution",
        default="uniform-square",
        choices=list(verify.DISTRIBUTIONS),
    )
    p.add_argument("--sizes", default="4,6", help="uncolored point counts (csv)")
    p.add_argument("--report-dir", help="write trials CSV and figures here")
    p.add_argument(
        "--fixture-dir",
        default="fixtures",
        help="where violating instances are dumped (default: ./fixtures)",
    )
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("plot", help="render a deterministic SVG figure")
    p.add_argument("instance", help="instance file (JSON or CSV)")
    p.add_argument("--out", required=True, help="output SVG path")
    p.add_argument("--matching", help="matching JSON (default: solve max-sum)")
    p.add_argument("--center", help="center as 'x,y' (default: solve)")
    p.add_argument(
        "--lambda",
        dest="lam",
        type=float,
        default=SQRT2,
        help="ellipse inflation factor (default sqrt(2))",
    )
    p.add_argument("--tol", type=float, help="solver tolerance for the center")
    p.set_defaults(func=cmd_plot)
    return parser


def main(argv: Optional[list] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except fileio.ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OracleSizeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ORACLE
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGED
    except ToleranceFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        for key, value in exc.diagnostics.items():
            print(f"  {key}: {value}", file=sys.stderr)
        return EXIT_TOLERANCE


if __name__ == "__main__":
    sys.exit(main())
