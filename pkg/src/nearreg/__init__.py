"""Tikhonov, TSVD and SVD-based modified regularization for discrete ill-posed problems."""

from .analysis import frob_norm_reg, kappa_normal, relative_error, verify_propositions
from .bench import ExperimentConfig, ExperimentReport, emit_report, run_experiment
from .filters import (
    RegMethod,
    SpectralProblem,
    build_modification,
    filter_factors,
    solve_spectral,
    to_spectral,
)
from .linalg import svd
from .noise import NoiseSpec, RngStream, colored_noise, white_noise
from .problems import deriv2, heat, make_problem, phillips, shaw
from .select import DiscrepancySpec, discrepancy_k, discrepancy_mu, optimal_params, shared_mu_pipeline

__version__ = "0.1.0"

__all__ = [
    "DiscrepancySpec",
    "ExperimentConfig",
    "ExperimentReport",
    "NoiseSpec",
    "RegMethod",
    "RngStream",
    "SpectralProblem",
    "build_modification",
    "colored_noise",
    "deriv2",
    "discrepancy_k",
    "discrepancy_mu",
    "emit_report",
    "filter_factors",
    "frob_norm_reg",
    "heat",
    "kappa_normal",
    "make_problem",
    "optimal_params",
    "phillips",
    "relative_error",
    "run_experiment",
    "shared_mu_pipeline",
    "shaw",
    "solve_spectral",
    "svd",
    "to_spectral",
    "verify_propositions",
    "white_noise",
]
