"""Tests for core value types, errors and exact arithmetic."""

import dataclasses
import math

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from birthday_moments.core import (
    BatchResult,
    ConsistencyError,
    DomainError,
    EnvelopeError,
    EstimatorConfig,
    EstimatorError,
    FrequencyTable,
    InsufficientDataError,
    MomentEstimate,
    RegimeIncompleteError,
    UsageError,
    binomial,
    moment_to_entropy,
)


class TestBinomial:
    """Exact C(n, k) inside the declared envelope."""

    def test_small_values(self):
        """Matches the textbook values."""
        assert binomial(5, 2) == 10
        assert binomial(33, 2) == 528
        assert binomial(10, 0) == 1

    def test_k_greater_than_n_is_zero(self):
        """No k-subsets of a smaller set."""
        assert binomial(3, 5) == 0

    def test_envelope_edges_accepted(self):
        """n = 10⁶ and k = 16 are still inside."""
        assert binomial(10 ** 6, 2) == 10 ** 6 * (10 ** 6 - 1) // 2
        assert binomial(16, 16) == 1

    @settings(max_examples=500, deadline=None)
    @given(n=st.integers(1, 10 ** 6), k=st.integers(1, 16))
    def test_pascal_rule(self, n, k):
        """C(n, k) = C(n − 1, k − 1) + C(n − 1, k) across the envelope."""
        assert binomial(n, k) == binomial(n - 1, k - 1) + binomial(n - 1, k)

    def test_pascal_triangle_cross_check(self):
        """C(1000, 8) agrees with the additive Pascal triangle."""
        row = [1] + [0] * 8
        for _ in range(1000):
            row = [1] + [row[k - 1] + row[k] for k in range(1, 9)]
        assert binomial(1000, 8) == row[8]

    def test_vandermonde(self):
        """Σₖ C(d, k)·C(n − d, d − k) = C(n, d) for n ≤ 200, d ≤ 8."""
        for d in range(1, 9):
            for n in range(d, 201):
                total = sum(binomial(d, k) * binomial(n - d, d - k) for k in range(d + 1))
                assert total == binomial(n, d), (n, d)

    @pytest.mark.parametrize("n,k", [(-1, 2), (4, -1), (10 ** 6 + 1, 2), (20, 17)])
    def test_outside_envelope_raises(self, n, k):
        """Negative arguments and out-of-range inputs raise EnvelopeError."""
        with pytest.raises(EnvelopeError):
            binomial(n, k)


class TestMomentToEntropy:
    """Rényi entropy in bits from the d-th moment."""

    def test_uniform_64(self):
        """Σp² = 1/64 gives 6 bits."""
        assert moment_to_entropy(1 / 64, 2) == 6.0

    def test_third_order(self):
        """Σp³ = 1/16² for uniform(16) gives 4 bits."""
        assert moment_to_entropy(16.0 ** -2, 3) == pytest.approx(4.0)

    def test_point_mass_is_positive_zero(self):
        """p = 1 yields +0.0, never −0.0."""
        h = moment_to_entropy(1.0, 3)
        assert h == 0.0
        assert math.copysign(1.0, h) == 1.0

    @pytest.mark.parametrize("p", [0.0, -0.1, 1.5])
    def test_out_of_range_moment(self, p):
        """The moment must lie in (0, 1]."""
        with pytest.raises(DomainError):
            moment_to_entropy(p, 2)

    def test_order_one_rejected(self):
        """d = 1 is not a Rényi order here."""
        with pytest.raises(DomainError):
            moment_to_entropy(0.5, 1)

    @settings(max_examples=500)
    @given(a=st.floats(1e-300, 1.0), b=st.floats(1e-300, 1.0), d=st.integers(2, 16))
    def test_strictly_decreasing(self, a, b, d):
        """A larger moment means a smaller entropy."""
        assume(b > a * (1 + 1e-9))
        assert moment_to_entropy(a, d) > moment_to_entropy(b, d)


class TestEstimatorConfig:
    """Validated, frozen run configuration."""

    def test_defaults(self):
        """Default knobs are d=2, ε=0.25, δ=0.1, one worker."""
        cfg = EstimatorConfig()
        assert (cfg.d, cfg.epsilon, cfg.delta, cfg.batch_size, cfg.workers) == \
            (2, 0.25, 0.1, None, 1)

    @pytest.mark.parametrize("kwargs", [
        {"d": 1},
        {"epsilon": 0.0},
        {"epsilon": 1.5},
        {"delta": 0.0},
        {"delta": 1.0},
        {"d": 3, "batch_size": 2},
        {"workers": 0},
        {"seed": -1},
        {"seed": 1 << 64},
    ])
    def test_invalid_fields(self, kwargs):
        """Each bad field raises ValueError naming it."""
        with pytest.raises(ValueError):
            EstimatorConfig(**kwargs)

    def test_frozen(self):
        """Fields cannot be reassigned."""
        cfg = EstimatorConfig()
        with pytest.raises(dataclasses.FrozenInstanceError):
            cfg.d = 3  # type: ignore[misc]

    def test_as_dict_echo(self):
        """as_dict carries every field."""
        assert EstimatorConfig(d=3, seed=9).as_dict() == {
            "d": 3, "epsilon": 0.25, "delta": 0.1,
            "batch_size": None, "seed": 9, "workers": 1,
        }


class TestBatchResult:
    """Normalization of per-batch collision counts."""

    def test_from_count(self):
        """3 collisions among C(4, 2) = 6 pairs → 0.5."""
        r = BatchResult.from_count(3, 4, 2, distinct=2)
        assert r.normalized == 0.5
        assert r.distinct == 2

    def test_more_collisions_than_tuples(self):
        """A count above C(n₀, d) is an internal inconsistency."""
        with pytest.raises(ConsistencyError):
            BatchResult.from_count(7, 4, 2)

    def test_negative_count_rejected(self):
        """Counts are non-negative."""
        with pytest.raises(ValueError):
            BatchResult(-1, 4, 0.0)


class TestFrequencyTable:
    """Symbol counts and collision sums."""

    def test_from_symbols(self):
        """Counts, total and distinct reflect the input."""
        t = FrequencyTable.from_symbols([1, 1, 2, 1])
        assert dict(t.counts) == {1: 3, 2: 1}
        assert t.total == 4
        assert t.distinct == 2

    def test_collision_sums(self):
        """Σ C(nₓ, d) for each order."""
        t = FrequencyTable.from_symbols([1, 1, 2, 1, 2])
        assert t.collision_sum(2) == 3 + 1
        assert t.collision_sum(3) == 1
        assert t.collision_sum(4) == 0

    def test_counts_are_read_only(self):
        """The mapping cannot be mutated in place."""
        t = FrequencyTable.from_symbols([1])
        with pytest.raises(TypeError):
            t.counts[1] = 5  # type: ignore[index]

    def test_total_must_match(self):
        """A table whose total disagrees with its counts is rejected."""
        with pytest.raises(ValueError):
            FrequencyTable({1: 2}, 3)

    def test_merge_adds_counts(self):
        """Merging tables of disjoint sub-streams adds counts pointwise."""
        a = FrequencyTable.from_symbols([1, 1, 2])
        b = FrequencyTable.from_symbols([2, 3])
        m = a.merge(b)
        assert dict(m.counts) == {1: 2, 2: 2, 3: 1}
        assert m.total == 5

    def test_merge_never_loses_collisions(self):
        """Collisions of the merged table cover those of each part."""
        a = FrequencyTable.from_symbols([1, 1, 2, 2, 2])
        b = FrequencyTable.from_symbols([2, 1, 4, 4])
        for d in (2, 3):
            assert a.merge(b).collision_sum(d) >= a.collision_sum(d) + b.collision_sum(d)


class TestMomentEstimate:
    """Result record."""

    def test_zero_collisions_flag(self):
        """p_hat = 0 marks the no-collision outcome."""
        est = MomentEstimate(p_hat=0.0, renyi_entropy_bits=None, d=2,
                             n_used=16, n_batches=8, batch_size=2,
                             entropy_lower_bound_bits=3.0)
        assert est.zero_collisions
        assert est.as_dict()["renyi_entropy_bits"] is None


class TestErrors:
    """Error hierarchy contract."""

    def test_insufficient_data_attributes(self):
        """required / available survive on the exception."""
        exc = InsufficientDataError(required=16, available=3)
        assert (exc.required, exc.available) == (16, 3)
        assert isinstance(exc, EstimatorError)
        assert "16" in str(exc)

    def test_regime_incomplete_attributes(self):
        """The partial search is described on the exception."""
        exc = RegimeIncompleteError(2, 300, 2, required=500)
        assert exc.last_completed_lambda == 2
        assert exc.samples_used == 300
        assert exc.tests_run == 2
        assert exc.required == 500

    @pytest.mark.parametrize("cls", [EnvelopeError, DomainError, UsageError])
    def test_value_error_family(self, cls):
        """Input-shaped errors are also ValueErrors."""
        assert issubclass(cls, ValueError)
        assert issubclass(cls, EstimatorError)
