"""
quantmimo: joint automatic gain control and low-resolution-aware MMSE
receiver design for the coarsely quantized multi-user MIMO uplink.
"""

__version__ = "0.1.0"

from .agc import AgcState, clip_factor, joint_optimize, mse_cost, optimal_gain
from .channel import alphabet, gen_channel, gen_noise, gen_symbols, propagate
from .config import Modulation, SystemConfig, make_config
from .correlations import (CorrelationSet, agc_correlations, base_correlations,
                           build_correlation_set, quant_correlations)
from .errors import (ConfigError, DimensionError, NotPositiveDefiniteError,
                     NumericalInconsistencyError, SingularMatrixError)
from .quantizer import (Quantizer, build_quantizer, calibrate_rho,
                        design_input_std, gaussian_rho, quantize)
from .rate import RateReport, achievable_rate, error_covariance, rate_report
from .receivers import (ReceiverFilter, ReceiverKind, detect,
                        lra_mmse_agc_filter, lra_mmse_filter, mmse_filter,
                        zf_filter)
from .sim import (SimResult, SkipBudgetExceeded, SweepSpec, run_packet,
                  run_rate_sweep, run_sweep)

__all__ = [
    "AgcState", "clip_factor", "joint_optimize", "mse_cost", "optimal_gain",
    "alphabet", "gen_channel", "gen_noise", "gen_symbols", "propagate",
    "Modulation", "SystemConfig", "make_config",
    "CorrelationSet", "agc_correlations", "base_correlations",
    "build_correlation_set", "quant_correlations",
    "ConfigError", "DimensionError", "NotPositiveDefiniteError",
    "NumericalInconsistencyError", "SingularMatrixError",
    "Quantizer", "build_quantizer", "calibrate_rho", "design_input_std",
    "gaussian_rho", "quantize",
    "RateReport", "achievable_rate", "error_covariance", "rate_report",
    "ReceiverFilter", "ReceiverKind", "detect", "lra_mmse_agc_filter",
    "lra_mmse_filter", "mmse_filter", "zf_filter",
    "SimResult", "SkipBudgetExceeded", "SweepSpec", "run_packet",
    "run_rate_sweep", "run_sweep",
    "__version__",
]
