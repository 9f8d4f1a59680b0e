"""Early-stopping search that brackets the unknown moment p before a full run.

For λ = 1, 2, … the estimator is run with ε = 1 under the assumption
p ≥ p₀ = 2^(−λ).  A test *fires* when p̂ > 2·p₀; a distribution with
p ≤ p₀/2 fires only with probability ≤ the per-test δ, so the first firing λ
pins p to a constant factor.  Tests are cheap while λ is small: the batch
size grows like 2^(λ/d).

The confidence budget is split evenly, ``δ_test = δ_total / λ_max``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable

from .collision import estimate_moment
from .core import (
    EstimatorConfig,
    InsufficientDataError,
    PreconditionError,
    RegimeIncompleteError,
)
from .planner import SamplePlan, batch_size_for_norm, required_batches

_log = logging.getLogger("birthday_moments")


@dataclass(frozen=True)
class RegimeResult:
    """Outcome of :func:`learn_regime`.

    ``lam`` is the final threshold index.  When ``resolved`` is false no test
    fired and the bracket is ``[0, 2·2^(−λ_max)]``.
    """

    lam: int
    p_bracket_low: float
    p_bracket_high: float
    tests_run: int
    samples_used: int
    per_test_delta: float
    resolved: bool = True
    estimates: tuple[float, ...] = ()

    def contains(self, p: float) -> bool:
        return self.p_bracket_low <= p <= self.p_bracket_high

    def as_dict(self) -> dict:
        return {
            "lambda": self.lam,
            "p_bracket_low": self.p_bracket_low,
            "p_bracket_high": self.p_bracket_high,
            "resolved": self.resolved,
            "tests_run": self.tests_run,
            "samples_used": self.samples_used,
            "per_test_delta": self.per_test_delta,
            "estimates": list(self.estimates),
        }


def regime_test_plan(d: int, lam: int, per_test_delta: float) -> SamplePlan:
    """Plan of the single test at threshold p₀ = 2^(−λ)."""
    if lam < 1:
        raise PreconditionError(f"λ must be ≥ 1, got {lam}")
    norm_lower = (2.0 ** -lam) ** (1.0 / d)
    n0 = batch_size_for_norm(d, norm_lower)
    m = required_batches(1.0, per_test_delta)
    return SamplePlan(n_total=n0 * m, n_batches=m, batch_size=n0,
                      assumed_norm_lower=norm_lower, B=1.0)


def regime_sample_budget(d: int, delta_total: float, lambda_max: int) -> int:
    """Samples consumed if every test up to *lambda_max* runs."""
    per = delta_total / lambda_max
    return sum(regime_test_plan(d, lam, per).n_total for lam in range(1, lambda_max + 1))


def learn_regime(samples: Iterable[int], d: int, delta_total: float, lambda_max: int,
                 workers: int = 1) -> RegimeResult:
    """Bracket p = Σₓ p(x)^d within a factor ≤ 8 at confidence 1 − δ_total.

    Raises:
        RegimeIncompleteError: the stream ended inside a test.
    """
    if lambda_max < 1:
        raise PreconditionError(f"lambda_max must be ≥ 1, got {lambda_max}")
    if not 0.0 < delta_total < 1.0:
        raise PreconditionError(f"delta_total must lie in (0, 1), got {delta_total!r}")
    per = delta_total / lambda_max
    it = iter(samples)
    used = 0
    history: list[float] = []
    for lam in range(1, lambda_max + 1):
        plan = regime_test_plan(d, lam, per)
        config = EstimatorConfig(d=d, epsilon=1.0, delta=per,
                                 batch_size=plan.batch_size, workers=workers)
        try:
            p_hat = estimate_moment(it, config).p_hat
        except InsufficientDataError as exc:
            raise RegimeIncompleteError(lam - 1, used, lam - 1,
                                        required=used + plan.n_total) from exc
        used += plan.n_total
        history.append(p_hat)
        p0 = 2.0 ** -lam
        _log.debug("regime λ=%d p0=%.6g n0=%d m=%d p_hat=%.6g",
                   lam, p0, plan.batch_size, plan.n_batches, p_hat)
        if p_hat > 2.0 * p0:
            return _resolved(lam, p_hat / 2.0, min(1.0, 2.0 * p_hat), used, per, history)
        if lam == 1 and p_hat > 0.5:
            return _resolved(lam, p_hat / 2.0, 1.0, used, per, history)

    _log.info("regime search did not fire up to λ=%d; p < %.6g", lambda_max,
              2.0 * 2.0 ** -lambda_max)
    return RegimeResult(
        lam=lambda_max,
        p_bracket_low=0.0,
        p_bracket_high=2.0 * 2.0 ** -lambda_max,
        tests_run=lambda_max,
        samples_used=used,
        per_test_delta=per,
        resolved=False,
        estimates=tuple(history),
    )


def _resolved(lam: int, low: float, high: float, used: int, per: float,
              history: list[float]) -> RegimeResult:
    _log.info("regime fired at λ=%d: p ∈ [%.6g, %.6g]", lam, low, high)
    return RegimeResult(lam=lam, p_bracket_low=low, p_bracket_high=high,
                        tests_run=lam, samples_used=used, per_test_delta=per,
                        resolved=True, estimates=tuple(history))


def plan_after_regime(result: RegimeResult, config: EstimatorConfig) -> SamplePlan:
    """Full-precision plan using ‖p‖_d ≥ p_bracket_low^(1/d)."""
    if not result.resolved:
        raise PreconditionError("cannot plan from an unresolved regime search")
    norm_lower = result.p_bracket_low ** (1.0 / config.d)
    n0 = batch_size_for_norm(config.d, norm_lower)
    m = required_batches(config.epsilon, config.delta)
    return SamplePlan(n_total=n0 * m, n_batches=m, batch_size=n0,
                      assumed_norm_lower=norm_lower, B=1.0)
