"""Deterministic particle method for the spatially homogeneous multispecies Landau equation."""

from ._core import (
    BetaMismatch,
    NonConvergence,
    ParseError,
    ValidationError,
    bkw_density,
    bkw_K,
    check_config,
    constrained_half_width,
    convergence,
    epsilon_from_h,
    eval_kernel,
    log_blob_density,
    maxwellian_density,
    num_threads,
    run,
    set_num_threads,
    validate_bkw,
)

__all__ = [
    "BetaMismatch",
    "NonConvergence",
    "ParseError",
    "ValidationError",
    "bkw_density",
    "bkw_K",
    "check_config",
    "constrained_half_width",
    "convergence",
    "epsilon_from_h",
    "eval_kernel",
    "log_blob_density",
    "maxwellian_density",
    "num_threads",
    "run",
    "set_num_threads",
    "validate_bkw",
]
