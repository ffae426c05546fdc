"""Seedable Monte Carlo laboratory for random pseudo s-th power sequences.

Exact kernels for s-fold sumsets (bit-parallel, unrestricted and
distinct-parts), weighted composition sums, and Monte Carlo scans of
basis-order and additive-complement behaviour, all reproducible from a
(seed, trial) pair.
"""

__version__ = "0.1.0"

from .constants import ThresholdTable, basis_threshold, gamma, lambda_s, sumset_density
from .errors import ConfigError, DomainError, FormatError, GuardExceededError
from .model import (
    ComplementSequence,
    ComplementTarget,
    SequenceSample,
    build_complement,
    inclusion_probability,
    index_uniforms,
    sample_sequence,
)
from .sumset import (
    GapStats,
    RepConstraints,
    SumsetBitmap,
    count_representations,
    density,
    gap_stats,
    naive_sumset,
    s_fold_sumset,
)
from .weights import (
    WeightArray,
    correlation_bruteforce,
    distinct_ordered_sum,
    expected_basis_weight,
    expected_complement_weight,
    inverse_tail_sum,
    janson_product_bound,
    normalized_weight_scan,
    refined_limit_error,
    weight_convolution,
)
from .experiments import (
    ExperimentConfig,
    ScenarioResult,
    TrialReport,
    WindowReport,
    basis_eps_scan,
    basis_order_scan,
    complement_scan,
    dyadic_windows,
    exceptional_statistic,
    good_mask,
    is_good_integer,
    proof_m_cutoff,
    run_monte_carlo,
    run_trial,
    threshold_target,
)

__all__ = [
    "__version__",
    "ThresholdTable",
    "basis_threshold",
    "gamma",
    "lambda_s",
    "sumset_density",
    "ConfigError",
    "DomainError",
    "FormatError",
    "GuardExceededError",
    "ComplementSequence",
    "ComplementTarget",
    "SequenceSample",
    "build_complement",
    "inclusion_probability",
    "index_uniforms",
    "sample_sequence",
    "GapStats",
    "RepConstraints",
    "SumsetBitmap",
    "count_representations",
    "density",
    "gap_stats",
    "naive_sumset",
    "s_fold_sumset",
    "WeightArray",
    "correlation_bruteforce",
    "distinct_ordered_sum",
    "expected_basis_weight",
    "expected_complement_weight",
    "inverse_tail_sum",
    "janson_product_bound",
    "normalized_weight_scan",
    "refined_limit_error",
    "weight_convolution",
    "ExperimentConfig",
    "ScenarioResult",
    "TrialReport",
    "WindowReport",
    "basis_eps_scan",
    "basis_order_scan",
    "complement_scan",
    "dyadic_windows",
    "exceptional_statistic",
    "good_mask",
    "is_good_integer",
    "proof_m_cutoff",
    "run_monte_carlo",
    "run_trial",
    "threshold_target",
]
