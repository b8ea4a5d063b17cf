"""Weighted nuclear norm: prox, descent-cone statistical dimension and phase transitions."""

from .cone import ProblemShape, SubdiffDescriptor, dist_sq_scaled_subdiff, hw_check, partition_blocks
from .errors import NumericalFailure, UsageError
from .linalg import (
    ProxParams,
    WeightProfile,
    dual_witness,
    norms,
    svd,
    weighted_nuclear_norm,
    wsvt_prox,
)
from .phase import (
    SolverConfig,
    crossing_and_window,
    make_instance,
    solve_wnnm,
    sweep_phase,
)
from .sdim import (
    TrialPlan,
    jtau_head_closed,
    jtau_mc,
    minimize_jtau,
    tail_expectation_quadrature,
    wishart_eig_logdensity,
)

__version__ = "0.1.0"

__all__ = [
    "NumericalFailure",
    "ProblemShape",
    "ProxParams",
    "SolverConfig",
    "SubdiffDescriptor",
    "TrialPlan",
    "UsageError",
    "WeightProfile",
    "crossing_and_window",
    "dist_sq_scaled_subdiff",
    "dual_witness",
    "hw_check",
    "jtau_head_closed",
    "jtau_mc",
    "make_instance",
    "minimize_jtau",
    "norms",
    "partition_blocks",
    "solve_wnnm",
    "svd",
    "sweep_phase",
    "tail_expectation_quadrature",
    "weighted_nuclear_norm",
    "wishart_eig_logdensity",
    "wsvt_prox",
]
