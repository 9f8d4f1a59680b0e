"""Core value types, the error hierarchy, and exact combinatorial arithmetic.

This module owns every shared *type* in the system.  Nothing here depends on a
concrete estimator — counting, planning and regime search live in their own
modules and import from here.

Data flow of one estimate::

    tokens (opaque 64-bit ints)
      │
      ▼
    SampleBatch ── FrequencyTable ── Σₓ C(nₓ, d) ──► BatchResult
      │                                                 │
      └──────────── n_batches disjoint batches ─────────┘
                                                        ▼
                                        mean (fsum) ──► MomentEstimate
                                                        └─ moment_to_entropy
"""

from __future__ import annotations

import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping, Optional

_log = logging.getLogger("birthday_moments")

#: Exact-arithmetic envelope declared for :func:`binomial`.
BINOMIAL_MAX_N = 10 ** 6
BINOMIAL_MAX_K = 16

#: Unsigned 64-bit token range.
TOKEN_MASK = (1 << 64) - 1


# ─────────────────────────────────────────────────────────────────────────────
# Errors
# ─────────────────────────────────────────────────────────────────────────────


class EstimatorError(Exception):
    """Base class for every error raised on purpose by this package."""


class EnvelopeError(EstimatorError, ValueError):
    """Input lies outside an exact-arithmetic or enumeration budget."""


class DomainError(EstimatorError, ValueError):
    """Argument outside the mathematical domain of the operation."""


class PreconditionError(EstimatorError, ValueError):
    """Caller violated a documented precondition (short batch, bad grouping, …)."""


class ApplicabilityError(EstimatorError, ValueError):
    """A bound was requested outside the regime where it is stated."""


class UsageError(EstimatorError, ValueError):
    """Malformed user-facing input (distribution spec, CLI flags)."""


class ConsistencyError(EstimatorError, RuntimeError):
    """An internal identity that must always hold did not."""


class InsufficientDataError(EstimatorError):
    """The stream ended before the estimator had the samples it needs.

    Attributes:
        required:  number of samples the run needs.
        available: number of samples actually seen.
    """

    def __init__(self, required: int, available: int, message: Optional[str] = None) -> None:
        self.required = required
        self.available = available
        super().__init__(
            message or f"insufficient data: need {required} samples, got {available}"
        )


class RegimeIncompleteError(EstimatorError):
    """The regime search ran out of samples in the middle of a test.

    Attributes:
        last_completed_lambda: highest λ whose test finished (0 if none did).
        samples_used:          samples consumed by the completed tests.
        tests_run:             number of completed tests.
    """

    def __init__(self, last_completed_lambda: int, samples_used: int, tests_run: int,
                 required: int) -> None:
        self.last_completed_lambda = last_completed_lambda
        self.samples_used = samples_used
        self.tests_run = tests_run
        self.required = required
        super().__init__(
            f"stream exhausted during regime test λ={last_completed_lambda + 1} "
            f"(completed λ ≤ {last_completed_lambda}, {samples_used} samples used)"
        )


# ─────────────────────────────────────────────────────────────────────────────
# Exact arithmetic
# ─────────────────────────────────────────────────────────────────────────────


def binomial(n: int, k: int) -> int:
    """Exact ``C(n, k)``; ``0`` when ``k > n``.

    Raises:
        EnvelopeError: for negative arguments or outside ``n ≤ 10⁶, k ≤ 16``.
    """
    if n < 0 or k < 0:
        raise EnvelopeError(f"binomial needs n, k ≥ 0, got ({n}, {k})")
    if n > BINOMIAL_MAX_N or k > BINOMIAL_MAX_K:
        raise EnvelopeError(
            f"binomial({n}, {k}) outside envelope n ≤ {BINOMIAL_MAX_N}, k ≤ {BINOMIAL_MAX_K}"
        )
    return math.comb(n, k)


def moment_to_entropy(p: float, d: int) -> float:
    """Rényi entropy in bits from the d-th moment: ``log₂(p) / (1 − d)``."""
    if d < 2:
        raise DomainError(f"order d must be ≥ 2, got {d}")
    if not 0.0 < p <= 1.0:
        raise DomainError(f"moment must lie in (0, 1], got {p!r}")
    h = math.log2(p) / (1 - d)
    # log2(1.0) is +0.0 and 0.0 / -1 gives -0.0
    return h + 0.0


# ─────────────────────────────────────────────────────────────────────────────
# Configuration
# ─────────────────────────────────────────────────────────────────────────────


@dataclass(frozen=True)
class EstimatorConfig:
    """Immutable knobs of one estimation run.

    Attributes:
        d:          integer order, ``d ≥ 2``.
        epsilon:    relative error target in ``(0, 1]``.
        delta:      failure probability in ``(0, 1)``.
        batch_size: optional override of n₀ (``≥ d``); ``None`` splits the
                    available samples evenly over the planned batches.
        seed:       64-bit seed for anything randomized downstream.
        workers:    thread-pool size for batch counting (``1`` = inline).
    """

    d: int = 2
    epsilon: float = 0.25
    delta: float = 0.1
    batch_size: Optional[int] = None
    seed: int = 0
    workers: int = 1

    def __post_init__(self) -> None:
        if not isinstance(self.d, int) or self.d < 2:
            raise ValueError(f"d must be an integer ≥ 2, got {self.d!r}")
        if not 0.0 < self.epsilon <= 1.0:
            raise ValueError(f"epsilon must lie in (0, 1], got {self.epsilon!r}")
        if not 0.0 < self.delta < 1.0:
            raise ValueError(f"delta must lie in (0, 1), got {self.delta!r}")
        if self.batch_size is not None and self.batch_size < self.d:
            raise ValueError(
                f"batch_size must be ≥ d={self.d}, got {self.batch_size!r}"
            )
        if not 0 <= self.seed <= TOKEN_MASK:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed!r}")
        if self.workers < 1:
            raise ValueError(f"workers must be ≥ 1, got {self.workers!r}")

    def as_dict(self) -> dict:
        return {
            "d": self.d,
            "epsilon": self.epsilon,
            "delta": self.delta,
            "batch_size": self.batch_size,
            "seed": self.seed,
            "workers": self.workers,
        }


# ─────────────────────────────────────────────────────────────────────────────
# Results
# ─────────────────────────────────────────────────────────────────────────────


@dataclass(frozen=True)
class BatchResult:
    """Collision count of one batch and its normalized moment estimate p̃_b."""

    collision_count: int
    batch_size: int
    normalized: float
    distinct: int = 0

    def __post_init__(self) -> None:
        if self.batch_size < 1:
            raise ValueError(f"batch_size must be positive, got {self.batch_size}")
        if self.collision_count < 0:
            raise ValueError(f"collision_count must be ≥ 0, got {self.collision_count}")
        if not 0.0 <= self.normalized <= 1.0:
            raise ValueError(f"normalized must lie in [0, 1], got {self.normalized!r}")

    @classmethod
    def from_count(cls, collision_count: int, batch_size: int, d: int,
                   distinct: int = 0) -> BatchResult:
        """Normalize *collision_count* by ``C(batch_size, d)`` (correctly rounded)."""
        total = math.comb(batch_size, d)
        if collision_count > total:
            raise ConsistencyError(
                f"{collision_count} collisions exceed C({batch_size}, {d}) = {total}"
            )
        return cls(collision_count, batch_size, collision_count / total, distinct)


@dataclass(frozen=True)
class MomentEstimate:
    """Final estimate of Σₓ p(x)^d with the derived Rényi entropy.

    ``renyi_entropy_bits`` is ``None`` when no batch saw a collision; the
    estimator then reports ``entropy_lower_bound_bits`` instead of inventing an
    infinite entropy.
    """

    p_hat: float
    renyi_entropy_bits: Optional[float]
    d: int
    n_used: int
    n_batches: int
    batch_size: int
    n_dropped: int = 0
    peak_distinct: int = 0
    entropy_lower_bound_bits: Optional[float] = None
    relative_error: Optional[float] = None
    entropy_error_bits: Optional[float] = None

    @property
    def zero_collisions(self) -> bool:
        return self.p_hat == 0.0

    def as_dict(self) -> dict:
        return {
            "p_hat": self.p_hat,
            "renyi_entropy_bits": self.renyi_entropy_bits,
            "entropy_lower_bound_bits": self.entropy_lower_bound_bits,
            "d": self.d,
            "n_used": self.n_used,
            "n_batches": self.n_batches,
            "batch_size": self.batch_size,
            "n_dropped": self.n_dropped,
            "peak_distinct": self.peak_distinct,
            "relative_error": self.relative_error,
            "entropy_error_bits": self.entropy_error_bits,
        }


@dataclass(frozen=True)
class FrequencyTable:
    """Symbol → occurrence count for one batch (the nₓ of the collision sum).

    Build with :meth:`from_symbols`; tables from disjoint sub-streams combine
    with :meth:`merge`.
    """

    counts: Mapping[int, int] = field(default_factory=dict)
    total: int = 0

    def __post_init__(self) -> None:
        if any(c < 1 for c in self.counts.values()):
            raise ValueError("FrequencyTable counts must be ≥ 1 for present symbols")
        if sum(self.counts.values()) != self.total:
            raise ValueError(
                f"FrequencyTable total {self.total} != sum of counts {sum(self.counts.values())}"
            )
        if not isinstance(self.counts, MappingProxyType):
            object.__setattr__(self, "counts", MappingProxyType(dict(self.counts)))

    @classmethod
    def from_symbols(cls, symbols: Iterable[int]) -> FrequencyTable:
        counts = Counter(symbols)
        return cls(counts, sum(counts.values()))

    def merge(self, other: FrequencyTable) -> FrequencyTable:
        """Pointwise count addition."""
        merged = Counter(self.counts)
        merged.update(other.counts)
        return FrequencyTable(merged, self.total + other.total)

    @property
    def distinct(self) -> int:
        return len(self.counts)

    def collision_sum(self, d: int) -> int:
        """Σₓ C(nₓ, d) — the number of monochromatic d-combinations."""
        return sum(math.comb(c, d) for c in self.counts.values() if c >= d)
