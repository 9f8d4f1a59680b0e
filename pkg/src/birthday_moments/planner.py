"""Sample-size planning and the variance / confidence machinery.

Exports
-------
bernstein_tail / bernstein_bounds
    Two-sided tail of the batch mean, tight and loose forms.
required_batches
    Number of batches m so that the loose tail is at most δ.
batch_size_for_norm
    n₀ from a lower bound on ‖p‖_d, clamped to the variance-bound regime.
plan_samples
    Compose both into a :class:`SamplePlan` from an entropy upper bound.
variance_bound_*
    Bounds on Var(p̃) of one batch: the collision-pattern sum (``exact``),
    its norm-only relaxation (``norm``), the closed form (``simple``) and the
    second-moment specialization (``pairwise``).

Logarithms inside ``exp`` are natural; entropies are in bits.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence, Union

from .core import (
    ApplicabilityError,
    DomainError,
    EstimatorConfig,
    PreconditionError,
    binomial,
)

_log = logging.getLogger("birthday_moments")

Moments = Union[Mapping[int, float], Sequence[float]]


def _ceil(x: float) -> int:
    """Ceiling that ignores float noise of a few ulps above an integer."""
    r = round(x)
    if math.isclose(x, r, rel_tol=1e-12, abs_tol=0.0):
        return int(r)
    return math.ceil(x)


# ─────────────────────────────────────────────────────────────────────────────
# Bernstein tails
# ─────────────────────────────────────────────────────────────────────────────


@dataclass(frozen=True)
class BernsteinTail:
    """Both forms of the tail bound.

    ``loose`` is ``None`` and ``loose_valid`` is ``False`` when ε > 1, where the
    loose form no longer bounds the tight one.
    """

    tight: float
    loose: Optional[float]
    loose_valid: bool


def _check_tail_args(m: int, epsilon: float, B: float) -> None:
    if m < 1:
        raise DomainError(f"m must be ≥ 1, got {m}")
    if epsilon <= 0.0:
        raise DomainError(f"epsilon must be > 0, got {epsilon!r}")
    if B <= 0.0:
        raise DomainError(f"B must be > 0, got {B!r}")


def bernstein_bounds(m: int, epsilon: float, B: float = 1.0) -> BernsteinTail:
    """Tail of the mean of *m* IID estimates with relative variance at most *B*.

    ``tight = min(1, 2·exp(−mε² / (2B + 2Bε/3)))`` and, for ε ≤ 1,
    ``loose = min(1, 2·exp(−3mε² / (8B)))``.  Tiny tails underflow to ``0.0``.
    """
    _check_tail_args(m, epsilon, B)
    tight = min(1.0, 2.0 * math.exp(-m * epsilon ** 2 / (2.0 * B + 2.0 * B * epsilon / 3.0)))
    if epsilon > 1.0:
        return BernsteinTail(tight=tight, loose=None, loose_valid=False)
    loose = min(1.0, 2.0 * math.exp(-3.0 * m * epsilon ** 2 / (8.0 * B)))
    return BernsteinTail(tight=tight, loose=loose, loose_valid=True)


def bernstein_tail(m: int, epsilon: float, B: float = 1.0) -> float:
    """Tight Bernstein tail; see :func:`bernstein_bounds` for the loose form."""
    return bernstein_bounds(m, epsilon, B).tight


def required_batches(epsilon: float, delta: float, B: float = 1.0) -> int:
    """``ceil(8·B·ln(2/δ) / (3ε²))`` — batches needed for (ε, δ)."""
    if not 0.0 < epsilon <= 1.0:
        raise DomainError(f"epsilon must lie in (0, 1], got {epsilon!r}")
    if not 0.0 < delta < 1.0:
        raise DomainError(f"delta must lie in (0, 1), got {delta!r}")
    if B <= 0.0:
        raise DomainError(f"B must be > 0, got {B!r}")
    return _ceil(8.0 * B * math.log(2.0 / delta) / (3.0 * epsilon ** 2))


def achieved_epsilon(m: int, delta: float, B: float = 1.0) -> float:
    """Smallest ε whose tight tail over *m* batches equals δ.

    Solves ``m ε² = L(2B + 2Bε/3)`` with ``L = ln(2/δ)`` for the positive root.
    """
    if m < 1:
        raise DomainError(f"m must be ≥ 1, got {m}")
    if not 0.0 < delta < 1.0:
        raise DomainError(f"delta must lie in (0, 1), got {delta!r}")
    L = math.log(2.0 / delta)
    b = 2.0 * B * L / 3.0
    return (b + math.sqrt(b * b + 8.0 * m * B * L)) / (2.0 * m)


# ─────────────────────────────────────────────────────────────────────────────
# Plans
# ─────────────────────────────────────────────────────────────────────────────


@dataclass(frozen=True)
class SamplePlan:
    """How many samples to draw and how to cut them into batches."""

    n_total: int
    n_batches: int
    batch_size: int
    assumed_norm_lower: float
    B: float = 1.0

    def __post_init__(self) -> None:
        if self.n_total != self.n_batches * self.batch_size:
            raise ValueError(
                f"n_total {self.n_total} != n_batches·batch_size "
                f"{self.n_batches}·{self.batch_size}"
            )

    def as_dict(self) -> dict:
        return {
            "n_total": self.n_total,
            "n_batches": self.n_batches,
            "batch_size": self.batch_size,
            "assumed_norm_lower": self.assumed_norm_lower,
            "B": self.B,
        }


def batch_size_for_norm(d: int, norm_lower: float) -> int:
    """``floor(2d / norm_lower) + 1``, raised to at least ``2d² + 1``."""
    if d < 2:
        raise DomainError(f"d must be ≥ 2, got {d}")
    if not 0.0 < norm_lower <= 1.0:
        raise DomainError(f"norm_lower must lie in (0, 1], got {norm_lower!r}")
    return max(math.floor(2 * d / norm_lower) + 1, 2 * d * d + 1)


def entropy_to_norm(entropy_bits: float, d: int) -> float:
    """‖p‖_d from H_d: ``2^(−(1 − 1/d)·H_d)``."""
    return 2.0 ** (-(1.0 - 1.0 / d) * entropy_bits)


def plan_samples(config: EstimatorConfig, entropy_upper_bits: float) -> SamplePlan:
    """Plan from an upper bound on H_d (bits)."""
    if entropy_upper_bits < 0.0:
        raise DomainError(f"entropy bound must be ≥ 0, got {entropy_upper_bits!r}")
    norm_lower = entropy_to_norm(entropy_upper_bits, config.d)
    n0 = batch_size_for_norm(config.d, norm_lower)
    m = required_batches(config.epsilon, config.delta, 1.0)
    plan = SamplePlan(n_total=n0 * m, n_batches=m, batch_size=n0,
                      assumed_norm_lower=norm_lower, B=1.0)
    _log.info("plan d=%d H≤%.4g bits: n0=%d m=%d n=%d",
              config.d, entropy_upper_bits, n0, m, plan.n_total)
    return plan


def closed_form_sample_bound(d: int, epsilon: float, delta: float, entropy_bits: float) -> float:
    """``(16d·ln(2/δ) / (3ε²)) · 2^((1 − 1/d)·H_d)`` — the sample requirement."""
    return (16.0 * d * math.log(2.0 / delta) / (3.0 * epsilon ** 2)) \
        * 2.0 ** ((1.0 - 1.0 / d) * entropy_bits)


# ─────────────────────────────────────────────────────────────────────────────
# Variance bounds
# ─────────────────────────────────────────────────────────────────────────────


def pattern_weights(n: int, d: int) -> tuple[int, ...]:
    """``Q_k = C(d, k)·C(n − d, d − k)`` for ``k = 0..d``; they sum to ``C(n, d)``."""
    if n < d:
        raise PreconditionError(f"need n ≥ d, got n={n}, d={d}")
    return tuple(binomial(d, k) * binomial(n - d, d - k) for k in range(d + 1))


def _moment(moments: Moments, j: int, d: int) -> float:
    try:
        if isinstance(moments, Mapping):
            return float(moments[j])
        return float(moments[j - d])
    except (KeyError, IndexError) as exc:
        raise PreconditionError(f"missing moment Σp^{j}") from exc


def variance_bound_exact(n: int, d: int, moments: Moments) -> float:
    """``Σ_{k=1..d} Q_k · M_{2d−k} / C(n, d)`` bounding Var(p̃) of one batch.

    *moments* is either a mapping ``j → Σₓ p(x)^j`` or a sequence whose entry
    ``i`` holds ``Σₓ p(x)^(d+i)``; entries ``j = d..2d`` must be present.
    The ``k = 0`` term is left out: disjoint index tuples are independent.
    """
    if n < 2 * d:
        raise PreconditionError(f"need n ≥ 2d, got n={n}, d={d}")
    m = {j: _moment(moments, j, d) for j in range(d, 2 * d + 1)}
    q = pattern_weights(n, d)
    total = math.fsum(q[k] * m[2 * d - k] for k in range(1, d + 1))
    return total / binomial(n, d)


def variance_bound_norm(n: int, d: int, norm_d: float) -> float:
    """``‖p‖^{2d} · Σ_{k=1..d} Q_k ‖p‖^{−k} / C(n, d)``.

    Follows from :func:`variance_bound_exact` by ``M_{2d−k} ≤ ‖p‖_d^{2d−k}``.
    """
    if not 0.0 < norm_d <= 1.0:
        raise DomainError(f"norm_d must lie in (0, 1], got {norm_d!r}")
    q = pattern_weights(n, d)
    total = math.fsum(q[k] * norm_d ** (2 * d - k) for k in range(1, d + 1))
    return total / binomial(n, d)


def variance_ratio(n: int, d: int, norm_d: float) -> float:
    """Relative variance bound B = variance_bound_norm / ‖p‖_d^{2d}."""
    return variance_bound_norm(n, d, norm_d) / norm_d ** (2 * d)


def variance_bound_simple(n: int, d: int, norm_d: float) -> float:
    """``2·‖p‖_d^d / C(n, d)``, stated for ``n > 2d²``."""
    if n <= 2 * d * d:
        raise ApplicabilityError(f"simple variance bound needs n > 2d² = {2 * d * d}, got {n}")
    if not 0.0 < norm_d <= 1.0:
        raise DomainError(f"norm_d must lie in (0, 1], got {norm_d!r}")
    return 2.0 * norm_d ** d / binomial(n, d)


def simple_bound_applies(n: int, d: int, norm_d: float) -> bool:
    """Whether ``Σ_{k<d} Q_k ‖p‖^{d−k} ≤ 1``.

    Under this condition the simple bound dominates :func:`variance_bound_norm`
    and therefore :func:`variance_bound_exact`.
    """
    q = pattern_weights(n, d)
    return math.fsum(q[k] * norm_d ** (d - k) for k in range(1, d)) <= 1.0


def variance_bound_pairwise(n: int, m2: float, m3: float, m4: float) -> float:
    """Second-moment form ``[M₂ + 2(n−2)M₃ + C(n−2, 2)M₄] / C(n, 2)``."""
    if n < 2:
        raise PreconditionError(f"need n ≥ 2, got {n}")
    return (m2 + 2 * (n - 2) * m3 + binomial(n - 2, 2) * m4) / binomial(n, 2)
