"""Tests for the early-stopping regime search."""

import math

import pytest

from birthday_moments import distributions as dist
from birthday_moments.core import EstimatorConfig, PreconditionError, RegimeIncompleteError
from birthday_moments.regime import (
    learn_regime,
    plan_after_regime,
    regime_sample_budget,
    regime_test_plan,
)


class TestTestPlan:
    """Sizing of one threshold test."""

    def test_first_threshold(self):
        """λ=1, d=2: n₀ clamps to 9; δ=0.01 needs 15 batches."""
        plan = regime_test_plan(2, 1, 0.01)
        assert (plan.batch_size, plan.n_batches, plan.n_total) == (9, 15, 135)

    def test_batch_size_grows(self):
        """Higher λ never shrinks the batch."""
        sizes = [regime_test_plan(2, lam, 0.01).batch_size for lam in range(1, 13)]
        assert sizes == sorted(sizes)
        assert sizes[-1] == 4 * 64 + 1

    def test_lambda_must_be_positive(self):
        """λ starts at 1."""
        with pytest.raises(PreconditionError):
            regime_test_plan(2, 0, 0.01)

    def test_budget_sums_tests(self):
        """The budget is the sum of every test's n."""
        per = 0.1 / 4
        assert regime_sample_budget(2, 0.1, 4) == sum(
            regime_test_plan(2, lam, per).n_total for lam in range(1, 5))


class TestLearnRegime:
    """Bracketing behaviour."""

    def test_point_mass_corner(self):
        """p = 1 resolves at λ = 1 with bracket [p̂/2, 1]."""
        result = learn_regime([0] * 10_000, d=2, delta_total=0.1, lambda_max=5)
        assert result.resolved
        assert result.lam == 1
        assert (result.p_bracket_low, result.p_bracket_high) == (0.5, 1.0)
        assert result.contains(1.0)
        assert result.tests_run == 1
        assert result.per_test_delta == pytest.approx(0.02)

    def test_uniform_256_brackets_p(self):
        """Most seeded runs on uniform(256) bracket p = 2⁻⁸ within a factor ≤ 8."""
        u = dist.uniform(256)
        budget = regime_sample_budget(2, 0.1, 12)
        hits = 0
        for seed in range(20):
            result = learn_regime(dist.sample(u, budget, seed=seed), 2, 0.1, 12)
            assert result.resolved
            assert result.p_bracket_high <= 8 * result.p_bracket_low
            hits += result.contains(2.0 ** -8)
        assert hits >= 17

    def test_near_threshold_boundary(self):
        """p = 0.9·2⁻⁶ is bracketed, firing at the next one or two thresholds."""
        target = 0.9 * 2.0 ** -6
        k = 100
        # one heavy symbol plus k equal ones: h² + (1 − h)²/k = target
        a, b, c = 1.0 + 1.0 / k, -2.0 / k, 1.0 / k - target
        heavy = (-b + math.sqrt(b * b - 4 * a * c)) / (2 * a)
        p = dist.from_weights([heavy] + [(1.0 - heavy) / k] * k)
        assert dist.exact_moment(p, 2) == pytest.approx(target)

        runs, delta_total = 100, 0.1
        budget = regime_sample_budget(2, delta_total, 10)
        contained = next_two = 0
        for seed in range(runs):
            result = learn_regime(dist.sample(p, budget, seed=500 + seed), 2, delta_total, 10)
            contained += result.contains(target)
            next_two += result.lam in (7, 8)
        slack = 3 * math.sqrt(runs * delta_total * (1 - delta_total))
        assert contained >= (1 - delta_total) * runs - slack
        assert next_two >= (1 - delta_total) * runs - slack

    def test_unresolved(self):
        """No collisions at all leaves the search unresolved."""
        budget = regime_sample_budget(2, 0.1, 3)
        result = learn_regime(range(budget), 2, 0.1, 3)
        assert not result.resolved
        assert result.lam == 3
        assert (result.p_bracket_low, result.p_bracket_high) == (0.0, 0.25)
        assert result.samples_used == budget
        assert len(result.estimates) == 3

    def test_incomplete(self):
        """A stream shorter than the first test raises with the partial state."""
        with pytest.raises(RegimeIncompleteError) as info:
            learn_regime(range(20), 2, 0.1, 5)
        assert info.value.last_completed_lambda == 0
        assert info.value.samples_used == 0

    def test_incomplete_after_some_tests(self):
        """Completed tests are reported when a later one runs dry."""
        first = regime_test_plan(2, 1, 0.1 / 6).n_total
        with pytest.raises(RegimeIncompleteError) as info:
            learn_regime(range(first + 5), 2, 0.1, 6)
        assert info.value.last_completed_lambda == 1
        assert info.value.samples_used == first

    @pytest.mark.parametrize("delta,lmax", [(0.0, 4), (1.0, 4), (0.1, 0)])
    def test_bad_arguments(self, delta, lmax):
        """δ_total ∈ (0, 1) and λ_max ≥ 1."""
        with pytest.raises(PreconditionError):
            learn_regime([0] * 100, 2, delta, lmax)

    def test_as_dict(self):
        """The report document names the threshold index 'lambda'."""
        doc = learn_regime([0] * 1000, 2, 0.1, 3).as_dict()
        assert doc["lambda"] == 1
        assert doc["resolved"] is True


class TestPlanAfterRegime:
    """Re-planning from the bracket."""

    def test_resolved(self):
        """norm bound is p_low^(1/d)."""
        result = learn_regime([0] * 1000, 2, 0.1, 3)
        plan = plan_after_regime(result, EstimatorConfig(d=2, epsilon=1.0, delta=0.1))
        assert plan.assumed_norm_lower == pytest.approx(0.5 ** 0.5)
        assert (plan.batch_size, plan.n_batches) == (9, 8)

    def test_unresolved(self):
        """No bracket, no plan."""
        budget = regime_sample_budget(2, 0.1, 2)
        result = learn_regime(range(budget), 2, 0.1, 2)
        with pytest.raises(PreconditionError):
            plan_after_regime(result, EstimatorConfig())
