"""pytest configuration and shared fixtures."""

import numpy as np
import pytest

from birthday_moments import EstimatorConfig
from birthday_moments import distributions as dist


@pytest.fixture
def uniform64():
    """Uniform distribution over 64 symbols (p₂ = 1/64, H₂ = 6 bits)."""
    return dist.uniform(64)


@pytest.fixture
def zipf256():
    """Zipf(256, s=1) — the skewed acceptance distribution."""
    return dist.zipf(256, 1.0)


@pytest.fixture
def rng():
    """Seeded generator for tests that build their own random inputs."""
    return np.random.Generator(np.random.PCG64(20240501))


@pytest.fixture
def coarse_config():
    """ε = 1, δ = 0.1 → 8 batches; cheap end-to-end runs."""
    return EstimatorConfig(d=2, epsilon=1.0, delta=0.1)


@pytest.fixture
def constant_tokens():
    """256 copies of a single token."""
    return [7] * 256
