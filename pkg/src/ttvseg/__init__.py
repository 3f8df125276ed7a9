"""Fuzzy multiphase image segmentation with a transformed-L1 TV regularizer."""

from .cli import RunConfig, SegmentationReport, run, sweep
from .diffops import divergence, gradient, laplacian_spectrum, solve_screened_poisson
from .fcm import FcmConfig, fcm_objective, fuzzy_cmeans
from .image import (
    NoiseSpec,
    add_gaussian_noise,
    ground_truth_to_membership,
    normalize,
    to_label_mask,
    validate_membership,
)
from .metrics import RegionScore, ScoreReport, dice, jaccard, score_all
from .prox import (
    TL1Params,
    l21_prox_field,
    project_membership,
    project_simplex,
    rho_a,
    tl1_prox_field,
    tl1_prox_scalar,
    tl1_threshold,
)
from .solver import (
    SolveResult,
    SolverConfig,
    SolverState,
    energy,
    init_state,
    solve,
    step,
    update_c,
    update_d,
    update_multipliers,
    update_u,
    update_v,
)

__version__ = "0.1.0"

__all__ = [
    "FcmConfig",
    "NoiseSpec",
    "RegionScore",
    "RunConfig",
    "ScoreReport",
    "SegmentationReport",
    "SolveResult",
    "SolverConfig",
    "SolverState",
    "TL1Params",
    "add_gaussian_noise",
    "dice",
    "divergence",
    "energy",
    "fcm_objective",
    "fuzzy_cmeans",
    "gradient",
    "ground_truth_to_membership",
    "init_state",
    "jaccard",
    "l21_prox_field",
    "laplacian_spectrum",
    "normalize",
    "project_membership",
    "project_simplex",
    "rho_a",
    "run",
    "score_all",
    "solve",
    "solve_screened_poisson",
    "step",
    "sweep",
    "tl1_prox_field",
    "tl1_prox_scalar",
    "tl1_threshold",
    "to_label_mask",
    "update_c",
    "update_d",
    "update_multipliers",
    "update_u",
    "update_v",
    "validate_membership",
]
