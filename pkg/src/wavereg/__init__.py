"""Adaptive wavelet regression with noisy covariates.

Estimates a regression function from samples whose design points are
observed through additive measurement error with known density. The
estimator projects onto a tensor wavelet basis through a deconvolution
operator and picks the resolution index by a Goldenshluger-Lepski rule.
"""

from .density import DensityConfig, EstimateReport, estimate_m, f_hat, gl_bandwidth
from .deconv import (DeconvKernel, DeconvTable, NoiseComponent, NoiseModel,
                     eval_Dj_phi, eval_Tj, sup_norm_Tj, tabulate_dj)
from .errors import (ConfigurationError, MonteCarloError, PairingError,
                     QuadratureError, TableRangeError)
from .estimator import (Dataset, EstimatorConfig, IndexDiagnostics, enumerate_J,
                        p_hat, select_j_hat, sigma_hat_sq, sigma_tilde_sq,
                        u_values)
from .simlab import (GammaScanResult, ResultsTable, Scenario, doppler,
                     gamma_scan, generate_dataset, mae, oracle_index,
                     paper_scenario, reliability_ratio, run_monte_carlo,
                     true_projection)
from .wavelet import (ResolutionIndex, ScalingTable, WaveletBasis,
                      active_indices, eval_phi_jk, fourier_phi, load_wavelet,
                      tabulate)

__version__ = "0.1.0"

__all__ = [
    "ConfigurationError",
    "Dataset",
    "DeconvKernel",
    "DeconvTable",
    "DensityConfig",
    "EstimateReport",
    "EstimatorConfig",
    "GammaScanResult",
    "IndexDiagnostics",
    "MonteCarloError",
    "NoiseComponent",
    "NoiseModel",
    "PairingError",
    "QuadratureError",
    "ResolutionIndex",
    "ResultsTable",
    "ScalingTable",
    "Scenario",
    "TableRangeError",
    "WaveletBasis",
    "active_indices",
    "doppler",
    "enumerate_J",
    "estimate_m",
    "eval_Dj_phi",
    "eval_Tj",
    "eval_phi_jk",
    "f_hat",
    "fourier_phi",
    "gamma_scan",
    "generate_dataset",
    "gl_bandwidth",
    "load_wavelet",
    "mae",
    "oracle_index",
    "p_hat",
    "paper_scenario",
    "reliability_ratio",
    "run_monte_carlo",
    "select_j_hat",
    "sigma_hat_sq",
    "sigma_tilde_sq",
    "sup_norm_Tj",
    "tabulate",
    "tabulate_dj",
    "true_projection",
    "u_values",
]
