"""Tests for build_distribution and the compact spec grammar."""

import pytest

from birthday_moments import distributions as dist
from birthday_moments.core import UsageError
from birthday_moments.factory import DEFAULT_FAMILIES, FamilySpec, build_distribution, parse_spec


class TestParseSpec:
    """Splitting ``family:key=value,…``."""

    def test_family_only(self):
        """A bare family has no parameters."""
        assert parse_spec("point") == ("point", {})

    def test_parameters(self):
        """Whitespace around keys and values is ignored."""
        assert parse_spec(" Zipf: m=256 , s=1.5 ") == ("zipf", {"m": "256", "s": "1.5"})

    @pytest.mark.parametrize("spec", ["", "9lives", "zipf:m", "zipf:m=1,,s=2", "zipf:m=1,m=2"])
    def test_malformed(self, spec):
        """Malformed specs are usage errors."""
        with pytest.raises(UsageError):
            parse_spec(spec)


class TestBuildDistribution:
    """Spec → DiscreteDistribution."""

    def test_uniform(self):
        """uniform:m=64 builds the 64-symbol uniform distribution."""
        assert build_distribution("uniform:m=64") == dist.uniform(64)

    def test_power_of_two_caster(self):
        """Integers accept 2^k and digit separators."""
        assert build_distribution("uniform:m=2^10").support_size == 1024
        assert build_distribution("uniform:m=1_000").support_size == 1000

    def test_defaults_apply(self):
        """Omitted parameters take the family defaults."""
        assert build_distribution("zipf:m=8") == dist.zipf(8, 1.0)

    def test_every_default_family_builds(self):
        """Each registered family builds with typical parameters."""
        specs = {
            "uniform": "uniform:m=4",
            "zipf": "zipf:m=4,s=2",
            "geometric": "geometric:m=4,q=0.3",
            "two_spike": "two_spike:m=4,heavy=0.4",
            "two_point": "two_point:p=0.2",
            "point": "point",
        }
        assert set(specs) == set(DEFAULT_FAMILIES)
        for name, spec in specs.items():
            assert build_distribution(spec).family == name

    @pytest.mark.parametrize("spec", [
        "gaussian:m=3",
        "uniform:k=3",
        "uniform:m=three",
        "uniform:m=0",
        "two_point:p=1.5",
    ])
    def test_usage_errors(self, spec):
        """Unknown families, parameters and rejected values are usage errors."""
        with pytest.raises(UsageError):
            build_distribution(spec)

    def test_custom_family_table(self):
        """Callers may supply their own registry."""
        families = {"coin": FamilySpec(dist.two_point, {"p": "float"})}
        assert build_distribution("coin:p=0.25", families=families).probabilities == (0.25, 0.75)
        with pytest.raises(UsageError):
            build_distribution("uniform:m=3", families=families)
