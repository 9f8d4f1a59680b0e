"""Sampling estimator of the empirical frequency moment F_k = Σₓ nₓ^k.

Each elementary estimator samples a stream position i uniformly, counts the
occurrences r of ``stream[i]`` from i to the end, and outputs
``n·(r^k − (r−1)^k)`` — unbiased for F_k because the differences telescope per
symbol.  ``reps × groups`` estimators are combined by median of group means.

Memory is one counter per estimator plus an index from tracked symbol to its
estimators; the stream itself is only read forward.
"""

from __future__ import annotations

import logging
import statistics
from collections import Counter, defaultdict
from typing import Sequence

import numpy as np

from ..core import DomainError, PreconditionError

_log = logging.getLogger("birthday_moments")


def _elementary(n: int, r: int, k: int) -> int:
    return n * (r ** k - (r - 1) ** k)


def suffix_counts(stream: Sequence[int], positions: Sequence[int]) -> list[int]:
    """For each position i, occurrences of ``stream[i]`` in ``stream[i:]``.

    One forward pass; memory is proportional to ``len(positions)``.
    """
    order = sorted(range(len(positions)), key=lambda e: positions[e])
    counts = [0] * len(positions)
    watchers: dict[int, list[int]] = defaultdict(list)
    nxt = 0
    for j, symbol in enumerate(stream):
        while nxt < len(order) and positions[order[nxt]] == j:
            watchers[symbol].append(order[nxt])
            nxt += 1
        for e in watchers.get(symbol, ()):
            counts[e] += 1
    return counts


def ams_fk_estimate(stream: Sequence[int], k: int, reps: int, groups: int,
                    seed: int = 0) -> float:
    """Median over *groups* of the mean of *reps* elementary F_k estimates.

    Positions are drawn with ``numpy.random.Generator(PCG64(seed))``.

    Raises:
        DomainError: on an empty stream.
    """
    if k < 2:
        raise PreconditionError(f"k must be ≥ 2, got {k}")
    if reps < 1 or groups < 1:
        raise PreconditionError(f"reps and groups must be ≥ 1, got ({reps}, {groups})")
    n = len(stream)
    if n == 0:
        raise DomainError("F_k of an empty stream is undefined for sampling")
    rng = np.random.Generator(np.random.PCG64(seed))
    positions = rng.integers(0, n, size=reps * groups).tolist()
    r = suffix_counts(stream, positions)
    estimates = [_elementary(n, ri, k) for ri in r]
    means = [
        statistics.fmean(estimates[g * reps:(g + 1) * reps]) for g in range(groups)
    ]
    result = float(statistics.median(means))
    _log.debug("ams F_%d: n=%d reps=%d groups=%d → %.6g", k, n, reps, groups, result)
    return result


def ams_full_sweep(stream: Sequence[int], k: int) -> int:
    """Derandomized estimator: Σ over every position of ``r^k − (r−1)^k``.

    Telescopes per symbol to exactly ``F_k``.
    """
    if k < 1:
        raise PreconditionError(f"k must be ≥ 1, got {k}")
    seen: Counter = Counter()
    total = 0
    for symbol in reversed(stream):
        seen[symbol] += 1
        r = seen[symbol]
        total += r ** k - (r - 1) ** k
    return total
