"""
Closed-form correlation matrices of the quantized system.

All matrices are computed symbolically from the channel H (perfect
receiver CSI); sample-based estimation only appears in test oracles.
Hermitian results are symmetrized as (A + A^H)/2 after assembly to
suppress floating-point drift before inversion.
"""

from dataclasses import dataclass

import numpy as np

from .config import SystemConfig
from .errors import ConfigError, DimensionError


def nondiag(A: np.ndarray) -> np.ndarray:
    """A minus its diagonal."""
    return A - np.diag(np.diag(A))


def hermitize(A: np.ndarray) -> np.ndarray:
    return (A + A.conj().T) / 2.0


def _as_gain_vector(G: np.ndarray) -> np.ndarray:
    """Accept a real gain vector or a real diagonal matrix; return the vector."""
    G = np.asarray(G)
    if np.iscomplexobj(G):
        if np.abs(G.imag).max() > 0:
            raise ConfigError("AGC gain matrix must be real")
        G = G.real
    if G.ndim == 1:
        return G.astype(float)
    if G.ndim == 2:
        if np.any(nondiag(G) != 0):
            raise ConfigError("AGC gain matrix must be diagonal")
        return np.diag(G).astype(float)
    raise ConfigError("AGC gain must be a vector or a diagonal matrix")


@dataclass(frozen=True)
class CorrelationSet:
    """The family of correlation matrices for one channel realization."""
    R_xx: np.ndarray   # streams x streams, sigma_x^2 * I
    R_yy: np.ndarray   # N_R x N_R
    R_xy: np.ndarray   # streams x N_R
    R_yq: np.ndarray
    R_qq: np.ndarray
    R_xq: np.ndarray
    R_xr: np.ndarray
    R_rr: np.ndarray
    rho_q: float


def base_correlations(H: np.ndarray, cfg: SystemConfig):
    """R_yy = H R_xx H^H + sigma_n^2 I and R_xy = R_xx H^H."""
    if H.shape != (cfg.rx_antennas, cfg.streams):
        raise DimensionError(f"channel shape {H.shape} does not match config "
                             f"({cfg.rx_antennas}, {cfg.streams})")
    sx2 = cfg.symbol_energy
    R_yy = hermitize(sx2 * (H @ H.conj().T) + cfg.noise_variance * np.eye(cfg.rx_antennas))
    R_xy = sx2 * H.conj().T
    return R_yy, R_xy


def quant_correlations(R_yy: np.ndarray, R_xy: np.ndarray, rho_q: float):
    """
    Linearized quantization-error correlations:

        R_yq = -rho * R_yy
        R_qq =  rho * R_yy - (1 - rho) * rho * nondiag(R_yy)
        R_xq = -rho * R_xy
        R_xr = (1 - rho) * R_xy
        R_rr = (1 - rho) * (R_yy - rho * nondiag(R_yy))
    """
    if not 0.0 <= rho_q < 1.0:
        raise ConfigError(f"rho_q must be in [0, 1), got {rho_q}")
    R_yq = -rho_q * R_yy
    R_qq = hermitize(rho_q * R_yy - (1.0 - rho_q) * rho_q * nondiag(R_yy))
    R_xq = -rho_q * R_xy
    R_xr = (1.0 - rho_q) * R_xy
    R_rr = hermitize((1.0 - rho_q) * (R_yy - rho_q * nondiag(R_yy)))
    return R_yq, R_qq, R_xq, R_xr, R_rr


def agc_correlations(R_yy, R_yq, R_qq, R_xy, R_xq, G):
    """
    Post-AGC correlations for the model z = G y + q:

        R_zz = G R_yy G + G R_yq + R_yq^H G + R_qq
        R_xz = R_xy G + R_xq
    """
    g = _as_gain_vector(G)
    if not np.all(np.isfinite(g)):
        raise ConfigError("AGC gains must be finite")
    gcol = g[:, None]
    R_zz = hermitize(gcol * R_yy * g + gcol * R_yq + R_yq.conj().T * g + R_qq)
    R_xz = R_xy * g + R_xq
    return R_zz, R_xz


def build_correlation_set(H: np.ndarray, cfg: SystemConfig, rho_q: float) -> CorrelationSet:
    """Assemble the full correlation family for one channel realization."""
    R_yy, R_xy = base_correlations(H, cfg)
    R_yq, R_qq, R_xq, R_xr, R_rr = quant_correlations(R_yy, R_xy, rho_q)
    R_xx = cfg.symbol_energy * np.eye(cfg.streams)
    return CorrelationSet(R_xx=R_xx, R_yy=R_yy, R_xy=R_xy, R_yq=R_yq,
                          R_qq=R_qq, R_xq=R_xq, R_xr=R_xr, R_rr=R_rr,
                          rho_q=rho_q)
