"""Exact empirical power sums F[j] = Σₓ nₓ^j and their conversion to collision sums.

:class:`PowerSums` is the single-writer exact path: it keeps per-symbol counts
(memory ∝ distinct symbols) and maintains F[1..K] incrementally.  Two
``PowerSums`` cannot be merged; merge at :class:`~birthday_moments.core.FrequencyTable`
level instead.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

from ..core import ConsistencyError, FrequencyTable, PreconditionError
from .stirling import StirlingTable, stirling_table


class PowerSums:
    """F[j] = Σₓ nₓ^j for ``j = 1..order`` over a growing stream.

    ``F`` is exposed 1-indexed through :meth:`__getitem__`; ``n`` is the total
    number of symbols seen.
    """

    __slots__ = ("order", "n", "_F", "_counts")

    def __init__(self, order: int) -> None:
        if order < 1:
            raise PreconditionError(f"order must be ≥ 1, got {order}")
        self.order = order
        self.n = 0
        self._F = [0] * (order + 1)
        self._counts: dict[int, int] = {}

    @classmethod
    def from_symbols(cls, symbols: Iterable[int], order: int) -> PowerSums:
        sums = cls(order)
        for s in symbols:
            update_power_sums(sums, s)
        return sums

    @classmethod
    def from_table(cls, table: FrequencyTable, order: int) -> PowerSums:
        """Batch recompute from a frequency table."""
        sums = cls(order)
        for j in range(1, order + 1):
            sums._F[j] = sum(c ** j for c in table.counts.values())
        sums.n = table.total
        sums._counts = dict(table.counts)
        return sums

    def __getitem__(self, j: int) -> int:
        if not 1 <= j <= self.order:
            raise IndexError(f"F[{j}] outside 1..{self.order}")
        return self._F[j]

    @property
    def F(self) -> tuple[int, ...]:
        """``(F[1], …, F[order])``."""
        return tuple(self._F[1:])

    @property
    def max_count(self) -> int:
        return max(self._counts.values(), default=0)

    @property
    def distinct(self) -> int:
        return len(self._counts)

    def __repr__(self) -> str:
        return f"PowerSums(n={self.n}, F={self.F})"


def update_power_sums(F: PowerSums, symbol: int) -> PowerSums:
    """Append *symbol*: on count ``c → c+1``, ``F[j] += (c+1)^j − c^j``."""
    c = F._counts.get(symbol, 0)
    F._counts[symbol] = c + 1
    lo, hi = 1, 1
    for j in range(1, F.order + 1):
        lo *= c
        hi *= c + 1
        F._F[j] += hi - lo
    F.n += 1
    return F


def collision_sum_from_power_sums(F: PowerSums | Sequence[int], d: int,
                                  table: StirlingTable | None = None) -> int:
    """Σₓ C(nₓ, d) = (1/d!)·Σ_{j=1..d} s(d, j)·F[j].

    *F* may be a :class:`PowerSums` or a plain sequence ``(F[1], …, F[d])``.

    Raises:
        ConsistencyError: if the division by d! is not exact.
    """
    if d < 1:
        raise PreconditionError(f"d must be ≥ 1, got {d}")
    values = F.F if isinstance(F, PowerSums) else tuple(F)
    if len(values) < d:
        raise PreconditionError(f"need F[1..{d}], got {len(values)} power sums")
    t = table or stirling_table(max(d, 16))
    falling = sum(t.first_signed(d, j) * values[j - 1] for j in range(1, d + 1))
    q, r = divmod(falling, math.factorial(d))
    if r != 0:
        raise ConsistencyError(f"falling-factorial sum {falling} not divisible by {d}!")
    return q


def power_from_collision_sums(binomial_sums: Sequence[int], k: int,
                              table: StirlingTable | None = None) -> int:
    """F[k] = Σ_{j=1..k} S(k, j)·j!·B[j] with ``B[j] = Σₓ C(nₓ, j)``.

    *binomial_sums* holds ``(B[1], …, B[k])``.
    """
    if len(binomial_sums) < k:
        raise PreconditionError(f"need Σ C(nₓ, j) for j = 1..{k}")
    t = table or stirling_table(max(k, 16))
    return sum(
        t.second(k, j) * math.factorial(j) * binomial_sums[j - 1] for j in range(1, k + 1)
    )
