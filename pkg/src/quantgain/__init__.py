"""Gain estimation for floor-quantized count data.

Observations are modeled as floor(gain * N) for latent integer counts N.
The package recovers the gain exactly (interval plus point estimate) from
the divisibility structure of the observed values, offers likelihood,
spectral, and regression baselines for comparison, and ships a seeded
simulation harness plus figure builders.
"""

from .errors import EstimationError
from .lattice import (
    EmpiricalLattice,
    RationalInterval,
    build_empirical_lattice,
    is_compatible,
    lattice_contains,
    lattice_prefix,
    recover_count_distribution,
    recover_indices,
    to_gain,
)
from .bounds import (
    BoundReport,
    bound_report,
    density_bound,
    interval_bound,
    pairwise_bound,
)
from .compat import (
    CompatEstimate,
    CompatibleSet,
    constraint_interval,
    enumerate_compatible_set,
    largest_compatible_interval,
    scan_step_budget,
    scan_step_budget_approx,
)
from .estimators import (
    DoublePoissonFit,
    FourierFit,
    RegressionFit,
    double_poisson_mle,
    fourier_estimate,
    kl_divergence_term,
    regression_estimate,
)
from .simulate import (
    Estimate,
    ExperimentResult,
    ExplicitLaw,
    KdeCurve,
    MethodSummary,
    PoissonLaw,
    RangeLaw,
    SimConfig,
    experiment_to_csv,
    fraction_str,
    generate_dataset,
    kde,
    precision_sweep,
    rng_for_repeat,
    run_experiment,
    sample_poisson,
)

__version__ = "0.1.0"

__all__ = [
    "EstimationError",
    "EmpiricalLattice", "RationalInterval", "build_empirical_lattice",
    "is_compatible", "lattice_contains", "lattice_prefix",
    "recover_count_distribution", "recover_indices", "to_gain",
    "BoundReport", "bound_report", "density_bound", "interval_bound",
    "pairwise_bound",
    "CompatEstimate", "CompatibleSet", "constraint_interval",
    "enumerate_compatible_set", "largest_compatible_interval",
    "scan_step_budget", "scan_step_budget_approx",
    "DoublePoissonFit", "FourierFit", "RegressionFit",
    "double_poisson_mle", "fourier_estimate", "kl_divergence_term",
    "regression_estimate",
    "Estimate", "ExperimentResult", "ExplicitLaw", "KdeCurve",
    "MethodSummary", "PoissonLaw", "RangeLaw", "SimConfig",
    "experiment_to_csv", "fraction_str", "generate_dataset", "kde",
    "precision_sweep", "rng_for_repeat", "run_experiment", "sample_poisson",
    "__version__",
]
