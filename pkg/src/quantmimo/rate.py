"""Achievable-rate lower bound via the estimation-error covariance."""

import warnings
from dataclasses import dataclass

import numpy as np

from .correlations import CorrelationSet, hermitize
from .errors import DimensionError
from .receivers import ReceiverFilter

EIG_FLOOR = 1e-12
PSD_TOL = -1e-10


@dataclass(frozen=True)
class RateReport:
    sum_rate: float          # bits per transmission, summed over all streams
    error_cov: np.ndarray    # streams x streams Hermitian
    det_ratio: float         # det(R_xx)/det(R_ee)


def error_covariance(W: ReceiverFilter | np.ndarray, G: np.ndarray,
                     C: CorrelationSet) -> np.ndarray:
    """
    Error covariance R_ee = E[(x - xhat)(x - xhat)^H] for xhat = W(Gy + q),
    expanded over the model correlations:

        R_ee = R_xx - R_xy G W^H - R_xq W^H - W G R_xy^H
               + W G R_yy G W^H + W G R_yq W^H - W R_xq^H
               + W R_yq^H G W^H + W R_qq W^H
    """
    W = W.matrix if isinstance(W, ReceiverFilter) else W
    g = np.diag(G) if np.asarray(G).ndim == 2 else np.asarray(G, dtype=float)
    if W.shape != (C.R_xx.shape[0], C.R_yy.shape[0]):
        raise DimensionError(f"filter shape {W.shape} inconsistent with correlations")
    Wh = W.conj().T
    WG = W * g                              # W diag(g)
    R_ee = (C.R_xx
            - (C.R_xy * g) @ Wh
            - C.R_xq @ Wh
            - WG @ C.R_xy.conj().T
            + WG @ C.R_yy @ (g[:, None] * Wh)
            + WG @ C.R_yq @ Wh
            - W @ C.R_xq.conj().T
            + W @ C.R_yq.conj().T @ (g[:, None] * Wh)
            + W @ C.R_qq @ Wh)
    R_ee = hermitize(R_ee)
    min_eig = float(np.linalg.eigvalsh(R_ee).min())
    if min_eig < PSD_TOL:
        warnings.warn(f"error_covariance: smallest eigenvalue {min_eig:.3e} below "
                      f"tolerance; linearized quantization model breaking down")
    return R_ee


def achievable_rate(R_xx: np.ndarray, R_ee: np.ndarray) -> float:
    """
    Mutual-information lower bound log2(det(R_xx)/det(R_ee)), computed
    through log-determinant factorizations. Slightly indefinite R_ee
    (an artifact of the linearized model) has its eigenvalues clamped at
    a small floor before the log-det.
    """
    if R_xx.shape != R_ee.shape:
        raise DimensionError("R_xx and R_ee must have matching shapes")
    sign_x, logdet_x = np.linalg.slogdet(R_xx)
    if sign_x <= 0 or not np.isfinite(logdet_x):
        raise ValueError("R_xx must be positive definite")

    eigs = np.linalg.eigvalsh(hermitize(R_ee))
    n_clamped = int(np.sum(eigs < EIG_FLOOR))
    if n_clamped:
        warnings.warn(f"achievable_rate: clamped {n_clamped} eigenvalue(s) of R_ee "
                      f"at {EIG_FLOOR:.1e}")
        eigs = np.maximum(eigs, EIG_FLOOR)
    logdet_e = float(np.sum(np.log(eigs)))
    if not np.isfinite(logdet_e):
        raise ValueError("non-finite log-determinant of R_ee")

    rate = float((logdet_x - logdet_e) / np.log(2.0))
    if rate < 0:
        warnings.warn(f"achievable_rate: negative bound {rate:.3e}; clamping to 0 "
                      f"(estimator no better than the prior)")
        rate = 0.0
    return rate


def rate_report(W, G, C: CorrelationSet) -> RateReport:
    """Convenience wrapper: error covariance plus the resulting sum rate."""
    R_ee = error_covariance(W, G, C)
    rate = achievable_rate(C.R_xx, R_ee)
    return RateReport(sum_rate=rate, error_cov=R_ee, det_ratio=float(2.0 ** rate))
