"""Memory-efficient layer: power sums, Stirling basis change, sampling F_k."""

from .ams import ams_fk_estimate, ams_full_sweep, suffix_counts
from .power_sums import (
    PowerSums,
    collision_sum_from_power_sums,
    power_from_collision_sums,
    update_power_sums,
)
from .stirling import (
    DEFAULT_K_MAX,
    StirlingTable,
    basis_identity_check,
    power_from_binomials,
    stirling_second,
    stirling_table,
)

__all__ = [
    "DEFAULT_K_MAX",
    "PowerSums",
    "StirlingTable",
    "ams_fk_estimate",
    "ams_full_sweep",
    "basis_identity_check",
    "collision_sum_from_power_sums",
    "power_from_binomials",
    "power_from_collision_sums",
    "stirling_second",
    "stirling_table",
    "suffix_counts",
    "update_power_sums",
]
