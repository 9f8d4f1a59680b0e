"""birthday_moments: frequency moments and Rényi entropy from collision counts.

Package layout
--------------
core.py           – value types, error hierarchy, exact binomials, moment → entropy
collision.py      – batched collision estimator (map: count per batch, reduce: fsum mean)
planner.py        – Bernstein tails, batch count / size, variance bounds
regime.py         – early-stopping threshold search bracketing the moment
streaming/        – memory-efficient layer
                      stirling    – Stirling tables, power ↔ binomial basis change
                      power_sums  – incremental F[1..K], collision sums from them
                      ams         – sampled / derandomized F_k estimators
distributions.py  – synthetic families, exact moments, seeded sampling, oracles
casters.py        – parameter casters for compact distribution specs
factory.py        – ``build_distribution("zipf:m=256,s=1.0")``
ingest.py         – text / binary token readers (mmh3 64-bit hashing)
report.py         – versioned YAML / JSON run reports
bench.py          – seeded coverage benchmark
cli.py            – ``birthday-moments`` console script
"""

# -- core ----------------------------------------------------------
from .core import (
    ApplicabilityError,
    BatchResult,
    ConsistencyError,
    DomainError,
    EnvelopeError,
    EstimatorConfig,
    EstimatorError,
    FrequencyTable,
    InsufficientDataError,
    MomentEstimate,
    PreconditionError,
    RegimeIncompleteError,
    UsageError,
    binomial,
    moment_to_entropy,
)
# -- estimator -----------------------------------------------------
from .collision import (
    SampleBatch,
    count_batch,
    count_batches,
    count_collisions,
    count_collisions_bruteforce,
    estimate_moment,
    mean_of_batches,
    median_of_means_estimate,
    pairwise_estimate,
)
# -- planning ------------------------------------------------------
from .planner import (
    BernsteinTail,
    SamplePlan,
    achieved_epsilon,
    batch_size_for_norm,
    bernstein_bounds,
    bernstein_tail,
    pattern_weights,
    plan_samples,
    required_batches,
    simple_bound_applies,
    closed_form_sample_bound,
    variance_bound_exact,
    variance_bound_norm,
    variance_bound_pairwise,
    variance_bound_simple,
    variance_ratio,
)
from .regime import RegimeResult, learn_regime, plan_after_regime, regime_sample_budget
# -- distributions -------------------------------------------------
from .distributions import DiscreteDistribution, exact_entropy, exact_moment, sample
from .factory import build_distribution
from .report import RunReport

__all__ = [
    # core
    "ApplicabilityError",
    "BatchResult",
    "ConsistencyError",
    "DomainError",
    "EnvelopeError",
    "EstimatorConfig",
    "EstimatorError",
    "FrequencyTable",
    "InsufficientDataError",
    "MomentEstimate",
    "PreconditionError",
    "RegimeIncompleteError",
    "UsageError",
    "binomial",
    "moment_to_entropy",
    # estimator
    "SampleBatch",
    "count_batch",
    "count_batches",
    "count_collisions",
    "count_collisions_bruteforce",
    "estimate_moment",
    "mean_of_batches",
    "median_of_means_estimate",
    "pairwise_estimate",
    # planning
    "BernsteinTail",
    "SamplePlan",
    "achieved_epsilon",
    "batch_size_for_norm",
    "bernstein_bounds",
    "bernstein_tail",
    "pattern_weights",
    "plan_samples",
    "required_batches",
    "simple_bound_applies",
    "closed_form_sample_bound",
    "variance_bound_exact",
    "variance_bound_norm",
    "variance_bound_pairwise",
    "variance_bound_simple",
    "variance_ratio",
    "RegimeResult",
    "learn_regime",
    "plan_after_regime",
    "regime_sample_budget",
    # distributions
    "DiscreteDistribution",
    "build_distribution",
    "exact_entropy",
    "exact_moment",
    "sample",
    # reports
    "RunReport",
]
