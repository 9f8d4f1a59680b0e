"""Explicit finite distributions: closed-form moments, seeded samplers, oracles.

Families
--------
uniform(m)            p(x) = 1/m
zipf(m, s)            p(x) ∝ x^(−s),          x = 1..m
geometric(m, q)       p(x) ∝ q^(x−1),         truncated at m
two_spike(m, heavy)   one symbol with mass *heavy*, uniform tail over m − 1
two_point(p)          (p, 1 − p)
point_mass()          a single symbol

Sampling is inverse-CDF over ``numpy.random.Generator(PCG64(seed))``:
``u = rng.random(n)`` (doubles in [0, 1)), symbol =
``searchsorted(cumsum(p), u, side="right")`` clipped to the support.  Tokens are
the symbol indices as ``uint64``.  Same (distribution, n, seed) ⇒ same tokens.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .core import EnvelopeError, PreconditionError, binomial, moment_to_entropy

#: Largest number of outcome sequences the exhaustive oracle enumerates.
ORACLE_BUDGET = 10 ** 6

_SUM_TOLERANCE = 1e-12


@dataclass(frozen=True)
class DiscreteDistribution:
    """Finite distribution over symbols ``0..support_size−1``.

    ``family`` and ``params`` record how it was built so closed forms can be
    used where they are exact and the compact text spec can be echoed back.
    """

    probabilities: tuple[float, ...]
    family: str = "custom"
    params: tuple[tuple[str, float], ...] = ()

    def __post_init__(self) -> None:
        if not self.probabilities:
            raise PreconditionError("a distribution needs at least one symbol")
        if any(not p > 0.0 for p in self.probabilities):
            raise PreconditionError("all probabilities must be > 0")
        total = math.fsum(self.probabilities)
        if abs(total - 1.0) > _SUM_TOLERANCE:
            raise PreconditionError(f"probabilities sum to {total!r}, not 1")

    @property
    def support_size(self) -> int:
        return len(self.probabilities)

    @property
    def spec(self) -> str:
        """Compact text form, e.g. ``zipf:m=1024,s=1.0``."""
        if not self.params:
            return self.family
        body = ",".join(f"{k}={v}" for k, v in self.params)
        return f"{self.family}:{body}"


# ─────────────────────────────────────────────────────────────────────────────
# Families
# ─────────────────────────────────────────────────────────────────────────────


def from_weights(weights: Iterable[float], family: str = "custom",
                 params: tuple[tuple[str, float], ...] = ()) -> DiscreteDistribution:
    """Renormalize nonnegative *weights* (compensated sum) into a distribution."""
    w = [float(x) for x in weights]
    if any(x <= 0.0 for x in w):
        raise PreconditionError("weights must be > 0")
    total = math.fsum(w)
    return DiscreteDistribution(tuple(x / total for x in w), family, params)


def uniform(m: int) -> DiscreteDistribution:
    if m < 1:
        raise PreconditionError(f"uniform needs m ≥ 1, got {m}")
    return DiscreteDistribution((1.0 / m,) * m, "uniform", (("m", m),))


def zipf(m: int, s: float = 1.0) -> DiscreteDistribution:
    if m < 1:
        raise PreconditionError(f"zipf needs m ≥ 1, got {m}")
    return from_weights((x ** -s for x in range(1, m + 1)), "zipf", (("m", m), ("s", s)))


def geometric(m: int, q: float = 0.5) -> DiscreteDistribution:
    if m < 1 or not 0.0 < q < 1.0:
        raise PreconditionError(f"geometric needs m ≥ 1 and 0 < q < 1, got ({m}, {q})")
    return from_weights((q ** x for x in range(m)), "geometric", (("m", m), ("q", q)))


def two_spike(m: int, heavy: float = 0.5) -> DiscreteDistribution:
    """One heavy symbol plus a uniform tail."""
    if m < 2 or not 0.0 < heavy < 1.0:
        raise PreconditionError(f"two_spike needs m ≥ 2 and 0 < heavy < 1, got ({m}, {heavy})")
    tail = (1.0 - heavy) / (m - 1)
    return from_weights([heavy] + [tail] * (m - 1), "two_spike", (("m", m), ("heavy", heavy)))


def two_point(p: float = 0.5) -> DiscreteDistribution:
    if not 0.0 < p < 1.0:
        raise PreconditionError(f"two_point needs 0 < p < 1, got {p}")
    return DiscreteDistribution((p, 1.0 - p), "two_point", (("p", p),))


def point_mass() -> DiscreteDistribution:
    return DiscreteDistribution((1.0,), "point")


# ─────────────────────────────────────────────────────────────────────────────
# Closed forms
# ─────────────────────────────────────────────────────────────────────────────


def power_sum(dist: DiscreteDistribution, alpha: float) -> float:
    """Σₓ p(x)^α by compensated summation (α need not be an integer)."""
    return math.fsum(p ** alpha for p in dist.probabilities)


def exact_moment(dist: DiscreteDistribution, d: int) -> float:
    """Σₓ p(x)^d, closed form for uniform / two-point / point mass."""
    if d < 1:
        raise PreconditionError(f"order must be ≥ 1, got {d}")
    params = dict(dist.params)
    if dist.family == "point":
        return 1.0
    if dist.family == "uniform":
        return float(params["m"]) ** (1 - d)
    if dist.family == "two_point":
        p = params["p"]
        return p ** d + (1.0 - p) ** d
    return power_sum(dist, d)


def norm(dist: DiscreteDistribution, d: int) -> float:
    """‖p‖_d = (Σₓ p(x)^d)^(1/d)."""
    return exact_moment(dist, d) ** (1.0 / d)


def moments(dist: DiscreteDistribution, lo: int, hi: int) -> dict[int, float]:
    """``{j: Σₓ p(x)^j}`` for ``j = lo..hi`` — the input of the variance bounds."""
    return {j: exact_moment(dist, j) for j in range(lo, hi + 1)}


def exact_entropy(dist: DiscreteDistribution, d: int) -> float:
    """H_d in bits."""
    return moment_to_entropy(exact_moment(dist, d), d)


# ─────────────────────────────────────────────────────────────────────────────
# Sampling and oracles
# ─────────────────────────────────────────────────────────────────────────────


def sample(dist: DiscreteDistribution, n: int, seed: int = 0) -> np.ndarray:
    """*n* IID tokens (``uint64`` symbol indices); see module docstring for the PRNG."""
    if n < 0:
        raise PreconditionError(f"n must be ≥ 0, got {n}")
    rng = np.random.Generator(np.random.PCG64(seed))
    cdf = np.cumsum(np.asarray(dist.probabilities, dtype=np.float64))
    cdf[-1] = 1.0
    idx = np.searchsorted(cdf, rng.random(n), side="right")
    np.minimum(idx, dist.support_size - 1, out=idx)
    return idx.astype(np.uint64)


def exhaustive_expectation_oracle(dist: DiscreteDistribution, n0: int, d: int) -> float:
    """Exact E[p̃] of one batch by enumerating every length-*n0* outcome.

    Raises:
        EnvelopeError: when ``support^n0`` exceeds :data:`ORACLE_BUDGET`.
    """
    if n0 < d:
        raise PreconditionError(f"need n0 ≥ d, got n0={n0}, d={d}")
    m = dist.support_size
    if m ** n0 > ORACLE_BUDGET:
        raise EnvelopeError(f"{m}^{n0} outcomes exceed the oracle budget {ORACLE_BUDGET}")
    total = binomial(n0, d)
    probs = dist.probabilities
    terms = []
    for outcome in itertools.product(range(m), repeat=n0):
        weight = math.prod(probs[x] for x in outcome)
        counts: dict[int, int] = {}
        for x in outcome:
            counts[x] = counts.get(x, 0) + 1
        hits = sum(math.comb(c, d) for c in counts.values())
        if hits:
            terms.append(weight * hits / total)
    return math.fsum(terms)


def empirical_frequencies(tokens: Sequence[int], support_size: int) -> np.ndarray:
    """Relative frequency of each symbol among *tokens*."""
    counts = np.bincount(np.asarray(tokens, dtype=np.int64), minlength=support_size)
    return counts / max(len(tokens), 1)

