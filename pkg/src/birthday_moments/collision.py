"""Birthday-paradox moment estimator: per-batch collision counts and their mean.

Execution flow (``estimate_moment`` entry point)::

    samples ──► batches of n₀ (disjoint, consecutive)
                  │
                  ▼  map: count_batches (inline or thread pool, ordered by index)
                BatchResult(collisions / C(n₀, d))
                  │
                  ▼  reduce: mean_of_batches (math.fsum, exactly rounded)
                MomentEstimate

The number of batches comes from the confidence target,
``m = ceil(8·ln(2/δ) / (3ε²))``.  Without a ``batch_size`` override the
available samples are split evenly, ``n₀ = floor(n / m)``, and the remainder is
dropped.  With an override the stream is consumed lazily, exactly ``m·n₀``
tokens, so a caller can keep reading the same iterator afterwards.
"""

from __future__ import annotations

import itertools
import logging
import math
import statistics
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, List, Optional, Sequence, Union

from .core import (
    BatchResult,
    EnvelopeError,
    EstimatorConfig,
    FrequencyTable,
    InsufficientDataError,
    MomentEstimate,
    PreconditionError,
    moment_to_entropy,
)
from .planner import achieved_epsilon, required_batches
from .streaming.power_sums import PowerSums, collision_sum_from_power_sums

_log = logging.getLogger("birthday_moments")
_log_batches = logging.getLogger("birthday_moments.batches")

#: Largest C(len, d) the tuple-enumeration oracle accepts.
BRUTEFORCE_BUDGET = 10 ** 6


@dataclass(frozen=True)
class SampleBatch:
    """One disjoint block of n₀ consecutive samples."""

    symbols: Sequence[int]

    def __len__(self) -> int:
        return len(self.symbols)


BatchLike = Union[SampleBatch, Sequence[int]]


def _symbols(batch: BatchLike) -> Sequence[int]:
    symbols = batch.symbols if isinstance(batch, SampleBatch) else batch
    tolist = getattr(symbols, "tolist", None)
    return tolist() if tolist is not None else symbols


def _check_order(symbols: Sequence[int], d: int) -> None:
    if d < 2:
        raise PreconditionError(f"order d must be ≥ 2, got {d}")
    if len(symbols) < d:
        raise PreconditionError(f"batch of length {len(symbols)} is shorter than d={d}")


# ─────────────────────────────────────────────────────────────────────────────
# Counting methods
# ─────────────────────────────────────────────────────────────────────────────


def _count_table(symbols: Sequence[int], d: int) -> tuple[int, int]:
    table = FrequencyTable.from_symbols(symbols)
    return table.collision_sum(d), table.distinct


def _count_power_sums(symbols: Sequence[int], d: int) -> tuple[int, int]:
    sums = PowerSums.from_symbols(symbols, d)
    return collision_sum_from_power_sums(sums, d), sums.distinct


#: name → ``(symbols, d) -> (collision_count, distinct)``; both are exact.
COUNTING_METHODS: dict[str, Callable[[Sequence[int], int], tuple[int, int]]] = {
    "table": _count_table,
    "power_sums": _count_power_sums,
}


def _counter(method: str) -> Callable[[Sequence[int], int], tuple[int, int]]:
    try:
        return COUNTING_METHODS[method]
    except KeyError:
        raise PreconditionError(
            f"unknown counting method {method!r}. Supported: {', '.join(sorted(COUNTING_METHODS))}"
        ) from None


def count_collisions(batch: BatchLike, d: int, method: str = "table") -> int:
    """Number of monochromatic d-combinations, Σₓ C(nₓ, d).

    Linear in the batch length plus the number of distinct symbols.
    """
    symbols = _symbols(batch)
    _check_order(symbols, d)
    return _counter(method)(symbols, d)[0]


def count_collisions_bruteforce(batch: BatchLike, d: int) -> int:
    """Literal enumeration of every d-combination of indices (test oracle).

    Raises:
        EnvelopeError: when ``C(len, d)`` exceeds :data:`BRUTEFORCE_BUDGET`.
    """
    symbols = _symbols(batch)
    _check_order(symbols, d)
    if math.comb(len(symbols), d) > BRUTEFORCE_BUDGET:
        raise EnvelopeError(
            f"C({len(symbols)}, {d}) exceeds the enumeration budget {BRUTEFORCE_BUDGET}"
        )
    return sum(
        1
        for combo in itertools.combinations(symbols, d)
        if all(s == combo[0] for s in combo[1:])
    )


def pairwise_estimate(batch: BatchLike) -> float:
    """Second-moment estimator ``C(n, 2)⁻¹ Σ_{i<j} [X_i = X_j]``."""
    symbols = _symbols(batch)
    return count_collisions(symbols, 2) / math.comb(len(symbols), 2)


# ─────────────────────────────────────────────────────────────────────────────
# Map / reduce over batches
# ─────────────────────────────────────────────────────────────────────────────


def count_batch(batch: BatchLike, d: int, method: str = "table") -> BatchResult:
    symbols = _symbols(batch)
    _check_order(symbols, d)
    count, distinct = _counter(method)(symbols, d)
    result = BatchResult.from_count(count, len(symbols), d, distinct)
    _log_batches.debug("batch n0=%d distinct=%d collisions=%d p~=%.6g",
                       result.batch_size, distinct, count, result.normalized)
    return result


def count_batches(batches: Iterable[BatchLike], d: int, workers: int = 1,
                  method: str = "table") -> List[BatchResult]:
    """Count every batch; results are ordered by batch index.

    With ``workers > 1`` batches are counted on a thread pool in windows of
    ``2·workers`` so a lazy batch source is never read far ahead.
    """
    if workers <= 1:
        return [count_batch(b, d, method) for b in batches]
    results: List[BatchResult] = []
    it = iter(batches)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        while True:
            window = list(itertools.islice(it, 2 * workers))
            if not window:
                break
            results.extend(pool.map(lambda b: count_batch(b, d, method), window))
    return results


def mean_of_batches(results: Sequence[BatchResult]) -> float:
    """Exactly rounded mean of the normalized batch values."""
    if not results:
        raise PreconditionError("no batches to average")
    return math.fsum(r.normalized for r in results) / len(results)


# ─────────────────────────────────────────────────────────────────────────────
# Batching
# ─────────────────────────────────────────────────────────────────────────────


def _materialize(samples: Iterable[int]) -> Sequence[int]:
    if hasattr(samples, "__len__") and hasattr(samples, "__getitem__"):
        return samples  # type: ignore[return-value]
    return list(samples)


def _lazy_batches(it: Iterator[int], n0: int, m: int) -> Iterator[List[int]]:
    for b in range(m):
        batch = list(itertools.islice(it, n0))
        if len(batch) < n0:
            raise InsufficientDataError(required=m * n0, available=b * n0 + len(batch))
        yield batch


@dataclass(frozen=True)
class _Layout:
    batches: Iterable[BatchLike]
    n_batches: int
    batch_size: int
    n_dropped: int


def _layout(samples: Iterable[int], config: EstimatorConfig) -> _Layout:
    m = required_batches(config.epsilon, config.delta)
    if config.batch_size is not None:
        n0 = config.batch_size
        if hasattr(samples, "__len__"):
            n = len(samples)  # type: ignore[arg-type]
            if n < m * n0:
                raise InsufficientDataError(required=m * n0, available=n)
            seq = _materialize(samples)
            batches = (seq[b * n0:(b + 1) * n0] for b in range(m))
            return _Layout(batches, m, n0, n - m * n0)
        return _Layout(_lazy_batches(iter(samples), n0, m), m, n0, 0)

    seq = _materialize(samples)
    n = len(seq)
    n0 = n // m
    if n0 < config.d:
        raise InsufficientDataError(required=m * config.d, available=n)
    batches = (seq[b * n0:(b + 1) * n0] for b in range(m))
    return _Layout(batches, m, n0, n - m * n0)


def _entropy_fields(p_hat: float, d: int, n0: int, m: int) -> dict:
    if p_hat > 0.0:
        return {"renyi_entropy_bits": moment_to_entropy(p_hat, d),
                "entropy_lower_bound_bits": None}
    floor_p = 1.0 / (math.comb(n0, d) * m)
    return {"renyi_entropy_bits": None,
            "entropy_lower_bound_bits": moment_to_entropy(floor_p, d)}


def _entropy_error(epsilon: float, d: int) -> Optional[float]:
    if epsilon >= 1.0:
        return None
    return -math.log2(1.0 - epsilon) / (d - 1)


def _finish(results: Sequence[BatchResult], p_hat: float, layout: _Layout, n_batches: int,
            config: EstimatorConfig, relative_error: Optional[float],
            extra_dropped: int = 0) -> MomentEstimate:
    n0 = layout.batch_size
    fields = _entropy_fields(p_hat, config.d, n0, n_batches)
    dropped = layout.n_dropped + extra_dropped
    if dropped:
        _log.warning("dropped %d samples beyond the last full batch", dropped)
    if p_hat == 0.0:
        _log.warning("no collisions in %d batches; entropy ≥ %.4g bits",
                     n_batches, fields["entropy_lower_bound_bits"])
    estimate = MomentEstimate(
        p_hat=p_hat,
        d=config.d,
        n_used=n_batches * n0,
        n_batches=n_batches,
        batch_size=n0,
        n_dropped=dropped,
        peak_distinct=max((r.distinct for r in results), default=0),
        relative_error=relative_error,
        entropy_error_bits=None if relative_error is None
        else _entropy_error(relative_error, config.d),
        **fields,
    )
    _log.info("estimate d=%d p_hat=%.6g (m=%d, n0=%d)", config.d, p_hat, n_batches, n0)
    return estimate


# ─────────────────────────────────────────────────────────────────────────────
# Estimators
# ─────────────────────────────────────────────────────────────────────────────


def estimate_moment(samples: Iterable[int], config: EstimatorConfig,
                    method: str = "table") -> MomentEstimate:
    """Mean of normalized per-batch collision counts (deterministic).

    Raises:
        InsufficientDataError: fewer samples than one full plan needs.
    """
    layout = _layout(samples, config)
    results = count_batches(layout.batches, config.d, config.workers, method)
    p_hat = mean_of_batches(results)
    eps = achieved_epsilon(layout.n_batches, config.delta)
    return _finish(results, p_hat, layout, layout.n_batches, config, eps)


def median_of_means_estimate(samples: Iterable[int], config: EstimatorConfig,
                             groups: int, method: str = "table") -> MomentEstimate:
    """Median over *groups* equal groups of per-group batch means.

    Batches beyond ``groups·floor(m / groups)`` are not used.
    """
    if groups < 1:
        raise PreconditionError(f"groups must be ≥ 1, got {groups}")
    m = required_batches(config.epsilon, config.delta)
    if groups > m:
        raise PreconditionError(f"groups={groups} exceeds the batch count {m}")
    layout = _layout(samples, config)
    results = count_batches(layout.batches, config.d, config.workers, method)
    per = len(results) // groups
    used = results[:groups * per]
    means = [mean_of_batches(used[g * per:(g + 1) * per]) for g in range(groups)]
    p_hat = float(statistics.median(means))
    extra = (len(results) - len(used)) * layout.batch_size
    # one group is the plain mean
    eps = achieved_epsilon(len(used), config.delta) if groups == 1 else None
    return _finish(used, p_hat, layout, len(used), config, eps, extra)
