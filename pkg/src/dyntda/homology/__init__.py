"""Chain operators, exact Betti numbers and the normalized-Betti estimator."""
from .betti import (
    BettiEntry,
    BettiReport,
    betti_exact,
    euler_characteristic,
    laplacian_kernel_dim,
    numerical_rank,
    rank_exact,
)
from .chains import BoundaryOperator, DiracOperator, Laplacian, assemble_dirac, boundary_matrix, laplacian
from .estimate import (
    NormalizedBettiEstimate,
    PrecisionConversion,
    attach_estimates,
    betti_normalized_estimate,
    design_step_filter,
    multiplicative_precision,
    probe_count,
)

__all__ = [
    "BettiEntry", "BettiReport", "BoundaryOperator", "DiracOperator", "Laplacian",
    "NormalizedBettiEstimate", "PrecisionConversion", "assemble_dirac", "attach_estimates",
    "betti_exact", "betti_normalized_estimate", "boundary_matrix", "design_step_filter",
    "euler_characteristic", "laplacian", "laplacian_kernel_dim", "multiplicative_precision",
    "numerical_rank", "probe_count", "rank_exact",
]
