"""Seeded Monte Carlo harness comparing the batch-mean estimator with median-of-means.

Every run draws a fresh sample of the size the planner asks for (given the
distribution's exact entropy), estimates the moment and records whether the
relative error stayed within ε.  Run ``r`` uses seed ``(seed + r) mod 2⁶⁴``, so
a bench is reproducible run by run.
"""

from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass, replace
from typing import Sequence, TextIO

from .collision import estimate_moment, median_of_means_estimate
from .core import EstimatorConfig, TOKEN_MASK, UsageError
from .distributions import DiscreteDistribution, exact_entropy, exact_moment, sample
from .planner import plan_samples

_log = logging.getLogger("birthday_moments")

ESTIMATORS = ("mean", "median-of-means")
CSV_COLUMNS = ("run", "estimator", "p_true", "p_hat", "rel_err", "covered")

#: Group count of the median-of-means comparator.
DEFAULT_GROUPS = 9


@dataclass(frozen=True)
class BenchRow:
    run: int
    estimator: str
    p_true: float
    p_hat: float
    rel_err: float
    covered: bool

    def as_csv(self) -> list[str]:
        return [str(self.run), self.estimator, repr(self.p_true), repr(self.p_hat),
                repr(self.rel_err), "1" if self.covered else "0"]


@dataclass(frozen=True)
class BenchSummary:
    """Empirical coverage against the 1 − δ target with a 3σ binomial slack."""

    runs: int
    failures: int
    delta: float
    n_total: int
    batch_size: int
    n_batches: int

    @property
    def coverage(self) -> float:
        return 1.0 - self.failures / self.runs

    @property
    def failure_rate(self) -> float:
        return self.failures / self.runs

    @property
    def slack(self) -> float:
        return 3.0 * math.sqrt(self.delta * (1.0 - self.delta) / self.runs)

    @property
    def within_target(self) -> bool:
        return self.failure_rate <= self.delta + self.slack

    def as_dict(self) -> dict:
        return {
            "runs": self.runs,
            "failures": self.failures,
            "coverage": self.coverage,
            "failure_rate": self.failure_rate,
            "allowed_failure_rate": self.delta + self.slack,
            "within_target": self.within_target,
            "n_total": self.n_total,
            "batch_size": self.batch_size,
            "n_batches": self.n_batches,
        }


def run_seed(seed: int, run: int) -> int:
    return (seed + run) & TOKEN_MASK


def run_bench(dist: DiscreteDistribution, config: EstimatorConfig, runs: int,
              estimator: str = "mean", groups: int = DEFAULT_GROUPS,
              ) -> tuple[list[BenchRow], BenchSummary]:
    """Run *runs* seeded estimates of ``Σ p(x)^d`` for *dist* at the planned size."""
    if estimator not in ESTIMATORS:
        raise UsageError(f"unknown estimator {estimator!r}. Supported: {', '.join(ESTIMATORS)}")
    if runs < 1:
        raise UsageError(f"runs must be ≥ 1, got {runs}")

    p_true = exact_moment(dist, config.d)
    plan = plan_samples(config, exact_entropy(dist, config.d))
    planned = replace(config, batch_size=plan.batch_size)
    _log.info("bench %s d=%d: %d runs of n=%d (n0=%d, m=%d)", dist.spec, config.d,
              runs, plan.n_total, plan.batch_size, plan.n_batches)

    rows: list[BenchRow] = []
    for run in range(runs):
        tokens = sample(dist, plan.n_total, seed=run_seed(config.seed, run))
        if estimator == "mean":
            est = estimate_moment(tokens, planned)
        else:
            est = median_of_means_estimate(tokens, planned, groups)
        rel_err = abs(est.p_hat - p_true) / p_true
        rows.append(BenchRow(run, estimator, p_true, est.p_hat, rel_err,
                             rel_err <= config.epsilon))

    summary = BenchSummary(
        runs=runs,
        failures=sum(1 for r in rows if not r.covered),
        delta=config.delta,
        n_total=plan.n_total,
        batch_size=plan.batch_size,
        n_batches=plan.n_batches,
    )
    if not summary.within_target:
        _log.warning("bench failure rate %.4f exceeds δ + 3σ = %.4f",
                     summary.failure_rate, config.delta + summary.slack)
    return rows, summary


def write_csv(rows: Sequence[BenchRow], fh: TextIO) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow(row.as_csv())
