"""
rprf-sim command line.

Results go to stdout (or the requested output file); logs go to stderr.
Exit codes: 0 success, 1 a claim check failed, 2 invalid input or a
simulator error.
"""

import argparse
import json
import sys
from typing import Any, Callable, Dict, List, Optional

from loguru import logger

from src.config import load_experiment_config, settings, simulation_config
from src.core.collision_profiles import is_good, maxload, profile_of
from src.core.function_model import sample_uniform_function, sample_uniform_permutation
from src.core.hybrids_reductions import build_hybrids
from src.harness import ExperimentRunner, fit_exponent, thresholds_from_sweep, verify_claims
from src.harness.formats import (
    csv_header,
    format_function,
    format_hybrids,
    format_profile,
    parse_function,
    parse_profile,
    read_sweep_csv,
    read_text,
    read_threshold_csv,
    sweep_csv,
    threshold_csv,
    write_text,
)
from src.harness.records import SWEEP_HEADER, THRESHOLD_HEADER, FitResult
from src.utils.exceptions import InputReadError, QuerySimError
from src.utils.helpers import make_rng

EXIT_OK = 0
EXIT_CLAIMS_FAILED = 1
EXIT_ERROR = 2


def configure_logging() -> None:
    """Install the stderr sink and the optional rotating file sink."""
    logger.remove()
    logger.add(sys.stderr, level=settings.log_level, format=settings.log_format)
    if settings.log_file:
        logger.add(
            settings.log_file,
            level=settings.log_level,
            rotation=settings.log_rotation,
            retention=settings.log_retention,
        )


def emit(text: str, output: Optional[str] = None) -> None:
    if output:
        write_text(output, text)
    else:
        sys.stdout.write(text)


def format_fit(fit: FitResult) -> str:
    return f"slope {fit.slope!r}\nintercept {fit.intercept!r}\nr2 {fit.r2!r}\n"


def cmd_sample_function(args: argparse.Namespace) -> int:
    rng = make_rng(args.seed)
    sampler = sample_uniform_function if args.dist == "rf" else sample_uniform_permutation
    emit(format_function(sampler(args.n, rng)), args.output)
    return EXIT_OK


def cmd_profile(args: argparse.Namespace) -> int:
    profile = profile_of(parse_function(read_text(args.input), args.input))
    verdict = "undefined" if profile.n < 4 else str(is_good(profile)).lower()
    emit(f"{format_profile(profile)}maxload {maxload(profile)}\ngood {verdict}\n")
    return EXIT_OK


def cmd_hybrids(args: argparse.Namespace) -> int:
    profile = parse_profile(read_text(args.input), args.input)
    d = args.d if args.d is not None else simulation_config.hybrid_exponent
    emit(format_hybrids(build_hybrids(profile, d)), args.output)
    return EXIT_OK


def _experiment_overrides(args: argparse.Namespace, keys: List[str]) -> Dict[str, Any]:
    return {key: getattr(args, key, None) for key in keys}


def cmd_run(args: argparse.Namespace) -> int:
    cfg = load_experiment_config(overrides={
        "n_values": [args.n],
        **_experiment_overrides(args, ["distinguisher", "k", "trials", "seed", "workers"]),
    })
    row = ExperimentRunner(cfg).run_row(args.n, args.budget)
    emit(sweep_csv([row]))
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace) -> int:
    cfg = load_experiment_config(args.config, _experiment_overrides(
        args, ["n_values", "distinguisher", "budgets", "k", "trials", "seed", "output", "workers"]
    ))
    rows = ExperimentRunner(cfg).run_sweep()
    emit(sweep_csv(rows), cfg.output)
    return EXIT_OK


def cmd_scaling(args: argparse.Namespace) -> int:
    cfg = load_experiment_config(args.config, _experiment_overrides(
        args, ["n_values", "distinguisher", "k", "trials", "seed", "output", "workers"]
    ))
    result = ExperimentRunner(cfg).run_scaling()
    emit(threshold_csv(result.thresholds), cfg.output)
    fit_text = format_fit(result.fit)
    # keep stdout pure CSV when the table goes there
    (sys.stdout if cfg.output else sys.stderr).write(fit_text)
    return EXIT_OK


def cmd_fit(args: argparse.Namespace) -> int:
    header = csv_header(args.input)
    if header == THRESHOLD_HEADER:
        points = [(p.n, p.threshold_budget) for p in read_threshold_csv(args.input)]
    elif header == SWEEP_HEADER:
        points = thresholds_from_sweep(read_sweep_csv(args.input), args.bias)
    else:
        raise InputReadError(args.input, f"unrecognised header {list(header)}")
    emit(format_fit(fit_exponent(points)))
    return EXIT_OK


def cmd_verify_claims(args: argparse.Namespace) -> int:
    report = verify_claims(args.n, args.trials, args.seed)
    payload = report.model_dump()
    payload["passed"] = report.passed
    emit(json.dumps(payload, indent=2, sort_keys=True) + "\n", args.output)
    return EXIT_OK if report.passed else EXIT_CLAIMS_FAILED


def _int_list(text: str) -> List[int]:
    return [int(part) for part in text.split(",") if part.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rprf-sim",
        description="Query-model simulation of random permutation vs random function distinguishers."
    )
    parser.add_argument("--version", action="version", version=f"{settings.app_name} {settings.app_version}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample-function", help="Print a uniform function or permutation table")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--dist", choices=["rf", "rp"], required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--output", default=None)
    p.set_defaults(handler=cmd_sample_function)

    p = sub.add_parser("profile", help="Collision profile, maxload and goodness of a table")
    p.add_argument("--in", dest="input", required=True)
    p.set_defaults(handler=cmd_profile)

    p = sub.add_parser("hybrids", help="Hybrid sequence of a profile")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--d", type=float, default=None)
    p.add_argument("--output", default=None)
    p.set_defaults(handler=cmd_hybrids)

    p = sub.add_parser("run", help="Measure one (n, budget) point as a CSV row")
    p.add_argument("--distinguisher", choices=["birthday", "bht"], required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--budget", type=int, default=None, help="Total query budget")
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(handler=cmd_run)

    for name, handler, help_text in (
        ("sweep", cmd_sweep, "Run a configured sweep and write CSV"),
        ("scaling", cmd_scaling, "Find threshold budgets per n and fit the exponent"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", default=None)
        p.add_argument("--n-values", dest="n_values", type=_int_list, default=None)
        p.add_argument("--distinguisher", choices=["birthday", "bht"], default=None)
        if name == "sweep":
            p.add_argument("--budgets", type=_int_list, default=None)
        p.add_argument("--k", type=int, default=None)
        p.add_argument("--trials", type=int, default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--output", default=None)
        p.add_argument("--workers", type=int, default=None)
        p.set_defaults(handler=handler)

    p = sub.add_parser("fit", help="Fit the threshold exponent from a sweep or scaling CSV")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--bias", type=float, default=None, help="Bias defining the threshold in a sweep CSV")
    p.set_defaults(handler=cmd_fit)

    p = sub.add_parser("verify-claims", help="Run the structural claim checks")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--output", default=None)
    p.set_defaults(handler=cmd_verify_claims)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    configure_logging()
    args = build_parser().parse_args(argv)
    handler: Callable[[argparse.Namespace], int] = args.handler
    try:
        return handler(args)
    except QuerySimError as err:
        logger.error(f"{err.__class__.__name__}: {err.message}")
        if err.details:
            logger.debug(f"Details: {err.details}")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
