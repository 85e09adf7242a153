"""Solver and stability certificates for implicit fractional boundary-value
problems with the Hilfer-Hadamard derivative on [1, b].

The library discretizes the equivalent mixed-type integral equation on a
log-uniform grid, solves it by successive approximation with a pointwise
inner fixed point for the implicit right-hand side, computes the
existence/uniqueness/stability constants in closed form, and validates the
Ulam-type stability bounds by perturbation experiments.
"""

from .certificates import (
    Certificate,
    build_certificate,
    existence_constant_paper_arithmetic,
    existence_constants,
    gronwall_bound,
    rassias_constant,
    ulam_hyers_constant,
    uniqueness_constant,
)
from .errors import (
    CertificateRejected,
    ConvergenceError,
    DomainError,
    GridMismatchError,
    MLOverflowError,
)
from .grids import GridFunction, LogGrid, Order, log_power, weighted_norm
from .hadamard import (
    hadamard_derivative,
    hadamard_integral,
    hilfer_hadamard_derivative,
)
from .problems import (
    ProblemSpec,
    RhsSpec,
    SolveReport,
    affine_rhs,
    manufactured_problem,
    manufactured_rhs,
    manufactured_solution,
    paper_example_problem,
    paper_example_rhs,
    table_rhs,
)
from .solver import (
    apply_Q,
    compute_Z,
    picard_solve,
    residual_fide,
    solve_implicit_pointwise,
    solve_ivp,
    solve_with_fixed_constant,
)
from .specfun import MLSeriesResult, beta, gamma, mittag_leffler
from .stability import (
    PerturbationSpec,
    StabilityVerdict,
    run_uh_experiment,
    run_uhr_experiment,
)

__version__ = "0.1.0"

__all__ = [
    "Certificate",
    "CertificateRejected",
    "ConvergenceError",
    "DomainError",
    "GridFunction",
    "GridMismatchError",
    "LogGrid",
    "MLOverflowError",
    "MLSeriesResult",
    "Order",
    "PerturbationSpec",
    "ProblemSpec",
    "RhsSpec",
    "SolveReport",
    "StabilityVerdict",
    "affine_rhs",
    "apply_Q",
    "beta",
    "build_certificate",
    "compute_Z",
    "existence_constant_paper_arithmetic",
    "existence_constants",
    "gamma",
    "gronwall_bound",
    "hadamard_derivative",
    "hadamard_integral",
    "hilfer_hadamard_derivative",
    "log_power",
    "manufactured_problem",
    "manufactured_rhs",
    "manufactured_solution",
    "mittag_leffler",
    "paper_example_problem",
    "paper_example_rhs",
    "picard_solve",
    "rassias_constant",
    "residual_fide",
    "run_uh_experiment",
    "run_uhr_experiment",
    "solve_implicit_pointwise",
    "solve_ivp",
    "solve_with_fixed_constant",
    "table_rhs",
    "ulam_hyers_constant",
    "uniqueness_constant",
    "weighted_norm",
]
