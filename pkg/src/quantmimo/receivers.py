"""Linear receive filters (ZF, MMSE, LRA-MMSE, AGC-aware LRA-MMSE) and detection."""

from dataclasses import dataclass
from enum import Enum

import numpy as np
import scipy.linalg

from .config import Modulation
from .correlations import nondiag
from .errors import NotPositiveDefiniteError, SingularMatrixError

COND_LIMIT = 1e12


class ReceiverKind(str, Enum):
    ZF = "zf"
    MMSE = "mmse"
    LRA_MMSE = "lra_mmse"
    LRA_MMSE_AGC = "lra_mmse_agc"


@dataclass(frozen=True)
class ReceiverFilter:
    matrix: np.ndarray       # streams x N_R
    kind: ReceiverKind


def _wiener_solve(R_xv: np.ndarray, R_vv: np.ndarray, label: str) -> np.ndarray:
    """W = R_xv R_vv^{-1} via Cholesky factorization of the Hermitian R_vv."""
    try:
        cf = scipy.linalg.cho_factor(R_vv, lower=True)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefiniteError(f"{label}: covariance not positive definite "
                                       f"({exc})") from exc
    return scipy.linalg.cho_solve(cf, R_xv.conj().T).conj().T


def zf_filter(H: np.ndarray) -> ReceiverFilter:
    """Zero-forcing pseudo-inverse W = (H^H H)^{-1} H^H."""
    cond = np.linalg.cond(H)
    if not np.isfinite(cond) or cond > COND_LIMIT:
        raise SingularMatrixError("zf_filter: H^H H effectively singular", cond=cond)
    W = np.linalg.pinv(H)
    return ReceiverFilter(matrix=W, kind=ReceiverKind.ZF)


def mmse_filter(R_xy: np.ndarray, R_yy: np.ndarray) -> ReceiverFilter:
    """Wiener-Hopf solution W = R_xy R_yy^{-1}."""
    W = _wiener_solve(R_xy, R_yy, "mmse_filter")
    return ReceiverFilter(matrix=W, kind=ReceiverKind.MMSE)


def lra_mmse_filter(R_xy: np.ndarray, R_yy: np.ndarray, rho_q: float) -> ReceiverFilter:
    """
    Low-resolution-aware MMSE filter

        W = R_xy (R_yy - rho_q * nondiag(R_yy))^{-1}

    which reduces to mmse_filter at rho_q = 0.
    """
    M = R_yy - rho_q * nondiag(R_yy)
    cond = np.linalg.cond(M)
    if not np.isfinite(cond) or cond > COND_LIMIT:
        raise SingularMatrixError(
            f"lra_mmse_filter: modified covariance singular at rho_q={rho_q}", cond=cond)
    W = _wiener_solve(R_xy, M, "lra_mmse_filter")
    return ReceiverFilter(matrix=W, kind=ReceiverKind.LRA_MMSE)


def lra_mmse_agc_filter(R_xz: np.ndarray, R_zz: np.ndarray) -> ReceiverFilter:
    """AGC-aware Wiener filter L = R_xz R_zz^{-1}."""
    L = _wiener_solve(R_xz, R_zz, "lra_mmse_agc_filter")
    return ReceiverFilter(matrix=L, kind=ReceiverKind.LRA_MMSE_AGC)


def detect(y_filtered: np.ndarray, modulation: Modulation,
           symbol_energy: float = 1.0) -> np.ndarray:
    """Per-entry hard decision onto the modulation alphabet."""
    v = np.asarray(y_filtered)
    if modulation is Modulation.BPSK:
        a = np.sqrt(symbol_energy)
        return np.where(v.real >= 0, a, -a).astype(complex)
    a = np.sqrt(symbol_energy / 2.0)
    return a * (np.where(v.real >= 0, 1.0, -1.0) + 1j * np.where(v.imag >= 0, 1.0, -1.0))
