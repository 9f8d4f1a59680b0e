"""Stirling numbers and the basis change between powers and binomials.

``x^k = Σ_j S(k, j)·j!·C(x, j)`` (second kind) and its inverse
``j!·C(x, j) = x^{\\underline{j}} = Σ_i s(j, i)·x^i`` (signed first kind) connect
empirical power sums Σₓ nₓ^k with collision sums Σₓ C(nₓ, d).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from ..core import EnvelopeError

#: Default table size: variance formulas need moments up to 2d with d ≤ 8.
DEFAULT_K_MAX = 16


@dataclass(frozen=True)
class StirlingTable:
    """Triangular tables ``S(k, j)`` and ``s(k, j)`` for ``0 ≤ j ≤ k ≤ K_max``."""

    second_kind: tuple[tuple[int, ...], ...]
    first_kind_signed: tuple[tuple[int, ...], ...]
    K_max: int

    @classmethod
    def build(cls, K_max: int = DEFAULT_K_MAX) -> StirlingTable:
        if K_max < 0:
            raise EnvelopeError(f"K_max must be ≥ 0, got {K_max}")
        second = [[1]]
        first = [[1]]
        for k in range(1, K_max + 1):
            prev_s, prev_f = second[-1], first[-1]
            row_s = [0] * (k + 1)
            row_f = [0] * (k + 1)
            for j in range(1, k + 1):
                up_s = prev_s[j] if j < k else 0
                up_f = prev_f[j] if j < k else 0
                row_s[j] = j * up_s + prev_s[j - 1]
                row_f[j] = prev_f[j - 1] - (k - 1) * up_f
            second.append(row_s)
            first.append(row_f)
        return cls(
            second_kind=tuple(tuple(r) for r in second),
            first_kind_signed=tuple(tuple(r) for r in first),
            K_max=K_max,
        )

    def _check(self, k: int, j: int) -> None:
        if not 0 <= j <= k <= self.K_max:
            raise EnvelopeError(f"Stirling index ({k}, {j}) outside 0 ≤ j ≤ k ≤ {self.K_max}")

    def second(self, k: int, j: int) -> int:
        self._check(k, j)
        return self.second_kind[k][j]

    def first_signed(self, k: int, j: int) -> int:
        self._check(k, j)
        return self.first_kind_signed[k][j]


@lru_cache(maxsize=8)
def stirling_table(K_max: int = DEFAULT_K_MAX) -> StirlingTable:
    """Shared immutable table for *K_max*."""
    return StirlingTable.build(K_max)


def stirling_second(k: int, j: int, table: StirlingTable | None = None) -> int:
    """S(k, j) from ``S(k, j) = j·S(k−1, j) + S(k−1, j−1)``."""
    return (table or stirling_table()).second(k, j)


def power_from_binomials(x: int, k: int, table: StirlingTable | None = None) -> int:
    """``Σ_{j=0..k} S(k, j)·j!·C(x, j)`` — equals ``x^k``."""
    t = table or stirling_table()
    return sum(t.second(k, j) * math.factorial(j) * math.comb(x, j) for j in range(k + 1))


def basis_identity_check(x: int, k: int, table: StirlingTable | None = None) -> bool:
    """Exact check of ``x^k = Σ_j S(k, j)·j!·C(x, j)``."""
    if x < 0 or x > 1000:
        raise EnvelopeError(f"x must lie in [0, 1000], got {x}")
    if k < 1:
        raise EnvelopeError(f"k must be ≥ 1, got {k}")
    return x ** k == power_from_binomials(x, k, table)
