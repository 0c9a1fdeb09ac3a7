"""Consensus over Erdos-Renyi random communication graphs: seeded simulation
of the time-sampled dynamics, closed-form spectral rate constants, and the
two convergence-rate bounds, with CSV/SVG-emitting experiment harnesses."""

from ._backend import backend_name
from .bounds import (
    BoundReport,
    bound_report,
    decrease_coefficient,
    expected_decrease_bound,
    tail_probability_bound,
)
from .consensus import (
    RunConfig,
    Trace,
    init_circle,
    init_gaussian,
    lyapunov,
    run,
    step,
)
from .experiments import (
    MomentValidationReport,
    ProbResult,
    VdiffResult,
    moment_validation,
    prob_experiment,
    vdiff_experiment,
)
from .graphs import (
    Graph,
    is_connected,
    laplacian,
    sample_er,
    to_edgelist,
    write_edgelist,
)
from .moments import (
    ExpectedExponentialEstimate,
    MomentSet,
    exhaustive_expected_exponential,
    exhaustive_expected_power,
    expected_exp_approx,
    expected_laplacian_power,
    kappa_coefficients,
    lambda_second_largest,
    mc_expected_exponential,
    moment_set,
    mu,
)
from .rng import DEFAULT_SEED, RandomSource
from .spectral import (
    SpectrumResult,
    as_symmetric,
    dist_to_agreement,
    expm_scaled,
    project_disagreement,
    structured_eigs,
    sym_eigen,
)

__version__ = "0.1.0"

__all__ = [
    "BoundReport",
    "DEFAULT_SEED",
    "ExpectedExponentialEstimate",
    "Graph",
    "MomentSet",
    "MomentValidationReport",
    "ProbResult",
    "RandomSource",
    "RunConfig",
    "SpectrumResult",
    "Trace",
    "VdiffResult",
    "as_symmetric",
    "backend_name",
    "bound_report",
    "decrease_coefficient",
    "dist_to_agreement",
    "exhaustive_expected_exponential",
    "exhaustive_expected_power",
    "expected_decrease_bound",
    "expected_exp_approx",
    "expected_laplacian_power",
    "expm_scaled",
    "init_circle",
    "init_gaussian",
    "is_connected",
    "kappa_coefficients",
    "lambda_second_largest",
    "laplacian",
    "lyapunov",
    "mc_expected_exponential",
    "moment_set",
    "moment_validation",
    "mu",
    "prob_experiment",
    "project_disagreement",
    "run",
    "sample_er",
    "step",
    "structured_eigs",
    "sym_eigen",
    "tail_probability_bound",
    "to_edgelist",
    "vdiff_experiment",
    "write_edgelist",
]
