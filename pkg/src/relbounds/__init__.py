"""Relative deviation bounds, unbounded-loss bounds and their numerical verification."""

from .binomial import BinomialSpec, ScanResult, certify_lemma, pmf, tail_geq_mean, tail_leq_mean
from .bounds import (
    BOUNDS,
    Bound,
    BoundParams,
    CapacityDescriptor,
    evaluate,
    fast_rate_rhs,
    gamma,
    interpolated_rhs,
    kappa,
    lambda_const,
    psi,
    relative_deviation_radius,
    relative_deviation_rhs,
    sauer_growth_upper,
    solved_bound,
    unbounded_bound_alpha2,
    unbounded_bound_large_alpha,
)
from .capacity import (
    HypothesisTable,
    LossTable,
    growth_function,
    pseudo_dimension,
    shatter_count,
    threshold_class,
    vc_dimension,
)
from .errors import (
    BudgetError,
    ConfigError,
    DenominatorZeroError,
    DivergenceError,
    DomainError,
    PreconditionWarning,
)
from .montecarlo import ExperimentConfig, TrialReport, run_experiment, symmetrization_ratio_check
from .stats import frequency_upper

__version__ = "0.1.0"
