"""``birthday-moments`` command line front end.

Subcommands
-----------
estimate   estimate Σₓ p(x)^d and H_d from a token stream
plan       sample plan for an entropy upper bound
regime     bracket p by early-stopping threshold tests
bench      seeded coverage benchmark on a synthetic distribution

Every subcommand prints a :class:`~birthday_moments.report.RunReport` (YAML by
default).  Exit codes:

====  ===========================================================
0     success
2     insufficient data (the report carries the required n)
3     regime search ran out of samples mid-test
64    invalid flags or usage error
70    internal error
====  ===========================================================

Flag defaults may come from ``--config FILE.yaml`` (keys are option names
with ``_``); explicit flags win.  ``BIRTHDAY_MOMENTS_SEED`` sets the default
seed.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import time
from dataclasses import replace
from typing import Any, Callable, Optional, Sequence

import yaml

from . import bench as _bench
from .collision import COUNTING_METHODS, estimate_moment
from .core import (
    EstimatorConfig,
    InsufficientDataError,
    RegimeIncompleteError,
    TOKEN_MASK,
    UsageError,
)
from .factory import build_distribution
from .ingest import iter_tokens, open_input, read_token_array
from .planner import closed_form_sample_bound, plan_samples
from .regime import learn_regime, plan_after_regime
from .report import RunReport

_log = logging.getLogger("birthday_moments")

EXIT_OK = 0
EXIT_INSUFFICIENT_DATA = 2
EXIT_REGIME_INCOMPLETE = 3
EXIT_USAGE = 64
EXIT_INTERNAL = 70

SEED_ENV = "BIRTHDAY_MOMENTS_SEED"

# Namespace entries that are plumbing rather than run configuration.
_NOT_ECHOED = frozenset({"handler", "config", "log_level", "format", "query", "timing"})


class _Parser(argparse.ArgumentParser):
    """Argument parser whose usage errors exit with :data:`EXIT_USAGE`."""

    subcommands: dict[str, argparse.ArgumentParser]

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ─────────────────────────────────────────────────────────────────────────────
# Subcommands
# ─────────────────────────────────────────────────────────────────────────────


def _estimator_config(args: argparse.Namespace) -> EstimatorConfig:
    return EstimatorConfig(
        d=args.d,
        epsilon=args.eps,
        delta=args.delta,
        batch_size=getattr(args, "batch_size", None),
        seed=getattr(args, "seed", 0),
        workers=getattr(args, "workers", 1),
    )


def _echo(args: argparse.Namespace) -> dict[str, Any]:
    return {k: v for k, v in sorted(vars(args).items()) if k not in _NOT_ECHOED}


def _timing_stats(args: argparse.Namespace, started: float, tokens: int) -> dict[str, Any]:
    if not args.timing:
        return {}
    elapsed = time.perf_counter() - started
    return {
        "wall_clock_s": elapsed,
        "tokens_per_s": tokens / elapsed if elapsed > 0 else None,
    }


def cmd_estimate(args: argparse.Namespace) -> RunReport:
    """Estimate the moment from the input stream (planned when an entropy bound is given)."""
    config = _estimator_config(args)
    plan = None
    if args.entropy_bound is not None:
        if config.batch_size is not None:
            raise UsageError("--batch-size and --entropy-bound are mutually exclusive")
        plan = plan_samples(config, args.entropy_bound)
        config = replace(config, batch_size=plan.batch_size)

    started = time.perf_counter()
    with open_input(args.input) as fh:
        if config.batch_size is None:
            tokens = read_token_array(fh, binary=args.binary)
            tokens_read: Optional[int] = len(tokens)
            estimate = estimate_moment(tokens, config, method=args.method)
        else:
            estimate = estimate_moment(iter_tokens(fh, binary=args.binary), config,
                                       method=args.method)
            tokens_read = None

    stats = {
        "tokens_read": estimate.n_used if tokens_read is None else tokens_read,
        "peak_distinct_symbols": estimate.peak_distinct,
    }
    stats.update(_timing_stats(args, started, estimate.n_used))
    return RunReport(
        command="estimate",
        config=_echo(args),
        result={"estimate": estimate.as_dict(),
                "plan": None if plan is None else plan.as_dict()},
        stats=stats,
    )


def cmd_plan(args: argparse.Namespace) -> RunReport:
    config = _estimator_config(args)
    plan = plan_samples(config, args.entropy_bound)
    return RunReport(
        command="plan",
        config=_echo(args),
        result={
            "plan": plan.as_dict(),
            "closed_form_sample_bound": closed_form_sample_bound(
                config.d, config.epsilon, config.delta, args.entropy_bound),
        },
    )


def cmd_regime(args: argparse.Namespace) -> RunReport:
    """Run the threshold search; a resolved bracket also yields the follow-up plan."""
    config = _estimator_config(args)
    started = time.perf_counter()
    with open_input(args.input) as fh:
        result = learn_regime(iter_tokens(fh, binary=args.binary), config.d,
                              config.delta, args.lambda_max, workers=config.workers)
    followup = plan_after_regime(result, config) if result.resolved else None
    stats: dict[str, Any] = {"tokens_read": result.samples_used}
    stats.update(_timing_stats(args, started, result.samples_used))
    return RunReport(
        command="regime",
        config=_echo(args),
        result={"regime": result.as_dict(),
                "followup_plan": None if followup is None else followup.as_dict()},
        stats=stats,
    )


def cmd_bench(args: argparse.Namespace) -> RunReport:
    """Write the per-run CSV and return the coverage summary."""
    dist = build_distribution(args.dist)
    config = _estimator_config(args)
    started = time.perf_counter()
    rows, summary = _bench.run_bench(dist, config, args.runs,
                                     estimator=args.estimator, groups=args.groups)
    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            _bench.write_csv(rows, fh)
    else:
        _bench.write_csv(rows, sys.stdout)
    stats = _timing_stats(args, started, summary.n_total * summary.runs)
    return RunReport(
        command="bench",
        config=_echo(args),
        result={"distribution": dist.spec, "summary": summary.as_dict()},
        stats=stats,
    )


# ─────────────────────────────────────────────────────────────────────────────
# Parser
# ─────────────────────────────────────────────────────────────────────────────


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None or not raw.strip():
        return 0
    try:
        seed = int(raw, 0)
    except ValueError as exc:
        raise UsageError(f"{SEED_ENV}={raw!r} is not an integer") from exc
    if not 0 <= seed <= TOKEN_MASK:
        raise UsageError(f"{SEED_ENV}={raw!r} is not a 64-bit unsigned integer")
    return seed


def _common_parent() -> argparse.ArgumentParser:
    p = _Parser(add_help=False)
    p.add_argument("--log-level", default="WARNING",
                   choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    p.add_argument("--config", metavar="FILE", help="YAML file of flag defaults")
    p.add_argument("--format", default="yaml", choices=["yaml", "json"])
    p.add_argument("--query", metavar="JMESPATH", help="project the report before printing")
    p.add_argument("--timing", action="store_true",
                   help="add wall-clock stats (makes the report non-reproducible)")
    return p


def _input_parent() -> argparse.ArgumentParser:
    p = _Parser(add_help=False)
    p.add_argument("--input", default="-", metavar="PATH", help="token file (default stdin)")
    p.add_argument("--binary", action="store_true",
                   help="8-byte little-endian uint64 records instead of text lines")
    return p


def _accuracy_parent(eps: bool = True) -> argparse.ArgumentParser:
    p = _Parser(add_help=False)
    p.add_argument("--d", type=int, default=2, help="moment order (≥ 2)")
    if eps:
        p.add_argument("--eps", type=float, default=0.25, help="relative error target")
    p.add_argument("--delta", type=float, default=0.1, help="failure probability")
    return p


def build_parser() -> _Parser:
    common = _common_parent()
    inp = _input_parent()
    acc = _accuracy_parent()
    seed = _default_seed()

    parser = _Parser(prog="birthday-moments",
                     description="Birthday-paradox estimator of frequency moments and Rényi entropy.")
    sub = parser.add_subparsers(dest="command", required=True)

    est = sub.add_parser("estimate", parents=[common, inp, acc], help="estimate from a stream")
    est.add_argument("--batch-size", type=int, default=None)
    est.add_argument("--entropy-bound", type=float, default=None, metavar="BITS",
                     help="upper bound on H_d; plans n from it")
    est.add_argument("--workers", type=int, default=1)
    est.add_argument("--method", default="table", choices=sorted(COUNTING_METHODS))
    est.add_argument("--seed", type=int, default=seed)
    est.set_defaults(handler=cmd_estimate)

    pl = sub.add_parser("plan", parents=[common, acc], help="sample plan for an entropy bound")
    pl.add_argument("--entropy-bound", type=float, required=True, metavar="BITS")
    pl.set_defaults(handler=cmd_plan)

    rg = sub.add_parser("regime", parents=[common, inp, acc], help="bracket p by early stopping")
    rg.add_argument("--lambda-max", type=int, required=True)
    rg.add_argument("--workers", type=int, default=1)
    rg.add_argument("--seed", type=int, default=seed)
    rg.set_defaults(handler=cmd_regime)

    bn = sub.add_parser("bench", parents=[common, acc], help="seeded coverage benchmark")
    bn.add_argument("--dist", required=True, help='e.g. "uniform:m=64" or "zipf:m=256,s=1.0"')
    bn.add_argument("--runs", type=int, default=200)
    bn.add_argument("--seed", type=int, default=seed)
    bn.add_argument("--estimator", default="mean", choices=list(_bench.ESTIMATORS))
    bn.add_argument("--groups", type=int, default=_bench.DEFAULT_GROUPS)
    bn.add_argument("--csv", metavar="PATH", help="per-run CSV (default stdout)")
    bn.add_argument("--report", metavar="PATH", help="write the YAML summary here")
    bn.set_defaults(handler=cmd_bench)

    parser.subcommands = {"estimate": est, "plan": pl, "regime": rg, "bench": bn}
    return parser


def _load_config(path: str) -> dict[str, Any]:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = yaml.safe_load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read config {path!r}: {exc.strerror}") from exc
    except yaml.YAMLError as exc:
        raise UsageError(f"config {path!r} is not valid YAML: {exc}") from exc
    if doc is None:
        return {}
    if not isinstance(doc, dict):
        raise UsageError(f"config {path!r} must be a mapping of flag names to values")
    return {str(k).replace("-", "_"): v for k, v in doc.items()}


def _apply_config(parser: _Parser, defaults: dict[str, Any]) -> None:
    """Install file defaults on every subcommand that has the option."""
    known: set[str] = set()
    for sub in parser.subcommands.values():
        dests = {a.dest for a in sub._actions}
        known |= dests
        sub.set_defaults(**{k: v for k, v in defaults.items() if k in dests})
    unknown = sorted(set(defaults) - known - _NOT_ECHOED)
    if unknown:
        raise UsageError(f"unknown option(s) in config: {', '.join(unknown)}")


def parse_args(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    pre, _ = _common_parent().parse_known_args(argv)
    if pre.config:
        _apply_config(parser, _load_config(pre.config))
    return parser.parse_args(argv)


# ─────────────────────────────────────────────────────────────────────────────
# Entry point
# ─────────────────────────────────────────────────────────────────────────────


def _write_report(report: RunReport, args: argparse.Namespace) -> None:
    text = report.dumps(args.format, args.query)
    target = getattr(args, "report", None)
    if target:
        with open(target, "w", encoding="utf-8") as fh:
            fh.write(text)
    elif args.command == "bench" and not args.csv:
        # stdout already carries the CSV table
        return
    else:
        sys.stdout.write(text)


def _failure(args: argparse.Namespace, status: str, result: dict[str, Any]) -> RunReport:
    return RunReport(command=args.command, config=_echo(args), result=result, status=status)


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    except UsageError as exc:
        print(f"birthday-moments: error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    logging.basicConfig(level=getattr(logging, args.log_level), stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    handler: Callable[[argparse.Namespace], RunReport] = args.handler

    try:
        report = handler(args)
        _write_report(report, args)
        return EXIT_OK
    except InsufficientDataError as exc:
        _log.error("%s", exc)
        _write_report(_failure(args, "insufficient-data", {
            "required": exc.required, "available": exc.available}), args)
        return EXIT_INSUFFICIENT_DATA
    except RegimeIncompleteError as exc:
        _log.error("%s", exc)
        _write_report(_failure(args, "incomplete", {
            "last_completed_lambda": exc.last_completed_lambda,
            "tests_run": exc.tests_run,
            "samples_used": exc.samples_used,
            "required": exc.required}), args)
        return EXIT_REGIME_INCOMPLETE
    except (UsageError, ValueError) as exc:
        _log.error("%s", exc)
        print(f"birthday-moments: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception:
        _log.exception("internal error")
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
