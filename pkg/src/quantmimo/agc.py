"""
MSE-optimal automatic gain control and the joint alternating design with
the low-resolution-aware receive filter.

The per-antenna gain vector g minimizes

    eps(g) = E || x - W (alpha * diag(g) * y + q) ||^2

for a fixed filter W and clip factor alpha. Setting the gradient to zero
and using the trace/diag derivative identity

    d tr[A diag(g) B] / dg = (A^T (.) B) 1        ((.) = Hadamard product)

yields the closed form

    g = [(W^T W*) (.) R_yy + (W^H W) (.) R_yy^T]^{-1}
        * (2/alpha) * ( Re[(R_xy^T (.) W^H) 1] - Re[(W^T (.) (R_yq W^H)) 1] )

The clip factor alpha = beta * sqrt(tr(R_rr)/N_R) scales the stationary
point so that the physical per-antenna gains g present the ADC with its
design loading; the default beta = 1/(sqrt(2) * design_input_std(b))
targets the distortion-minimizing loading of the b-bit converter.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from .config import SystemConfig
from .correlations import CorrelationSet, agc_correlations, build_correlation_set
from .errors import NumericalInconsistencyError, SingularMatrixError
from .quantizer import Quantizer, design_input_std
from .receivers import ReceiverFilter, lra_mmse_agc_filter, lra_mmse_filter

IMAG_TOL = 1e-10
COND_LIMIT = 1e12


@dataclass(frozen=True)
class AgcState:
    g: np.ndarray        # real per-antenna gains, length N_R
    alpha: float         # clip factor
    beta: float          # calibration factor (default sqrt(b))


def trace_diag_gradient(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Gradient of tr[A diag(g) B] with respect to g: (A^T (.) B) 1."""
    return (A.T * B) @ np.ones(A.shape[0])


def clip_factor(R_yy, R_yq, R_qq, n_rx: int, beta: float) -> float:
    """alpha = beta * sqrt(tr(R_yy + R_yq + R_yq^H + R_qq) / N_R)."""
    tr = np.trace(R_yy + R_yq + R_yq.conj().T + R_qq)
    if abs(tr.imag) > IMAG_TOL * (1.0 + abs(tr.real)):
        raise NumericalInconsistencyError(f"clip_factor: complex trace {tr}")
    if tr.real <= 0:
        raise NumericalInconsistencyError(f"clip_factor: non-positive trace {tr.real}")
    return float(beta * np.sqrt(tr.real / n_rx))


def _real_trace(t: complex) -> float:
    if abs(t.imag) > IMAG_TOL * (1.0 + abs(t.real)):
        raise NumericalInconsistencyError(f"trace has imaginary residue {t.imag}")
    return float(t.real)


def mse_cost(g: np.ndarray, alpha: float, W: ReceiverFilter | np.ndarray,
             C: CorrelationSet) -> float:
    """Full trace expansion of E||x - W(alpha*diag(g)*y + q)||^2."""
    W = W.matrix if isinstance(W, ReceiverFilter) else W
    Wh = W.conj().T
    gcol = np.asarray(g, dtype=float)[:, None]
    Dg_Wh = gcol * Wh                      # diag(g) W^H
    t = np.trace(
        C.R_xx
        - alpha * C.R_xy @ Dg_Wh
        - C.R_xq @ Wh
        - alpha * (W * g) @ C.R_xy.conj().T
        + alpha ** 2 * (W * g) @ C.R_yy @ Dg_Wh
        + alpha * (W * g) @ C.R_yq @ Wh
        - W @ C.R_xq.conj().T
        + alpha * W @ C.R_yq.conj().T @ Dg_Wh
        + W @ C.R_qq @ Wh)
    return _real_trace(t)


def optimal_gain(W: ReceiverFilter | np.ndarray, C: CorrelationSet,
                 alpha: float) -> np.ndarray:
    """Real gain vector solving the MSE stationarity condition."""
    W = W.matrix if isinstance(W, ReceiverFilter) else W
    n_rx = W.shape[1]
    Wh = W.conj().T

    M = (W.T @ W.conj()) * C.R_yy + (Wh @ W) * C.R_yy.T
    if np.abs(M.imag).max() > IMAG_TOL * max(np.abs(M.real).max(), 1.0):
        raise NumericalInconsistencyError("optimal_gain: Hadamard-sum matrix not real")
    M = M.real

    one = np.ones(C.R_xx.shape[0])
    rhs = (2.0 / alpha) * ((C.R_xy.T * Wh) @ one - (W.T * (C.R_yq @ Wh)) @ one).real

    cond = np.linalg.cond(M)
    if not np.isfinite(cond):
        raise SingularMatrixError("optimal_gain: Hadamard-sum matrix singular", cond=cond)
    if cond > COND_LIMIT:
        ridge = 1e-10 * np.trace(M) / n_rx
        warnings.warn(f"optimal_gain: ill-conditioned Hadamard-sum matrix "
                      f"(cond {cond:.3e}); adding ridge {ridge:.3e}")
        M = M + ridge * np.eye(n_rx)
    return np.linalg.solve(M, rhs)


def joint_optimize(H: np.ndarray, cfg: SystemConfig, q: Quantizer,
                   rounds: int = 1, beta: float | None = None
                   ) -> tuple[AgcState, ReceiverFilter]:
    """
    Alternating AGC / receive-filter design:

      1. W from the no-AGC low-resolution-aware filter,
      2. alpha from the clip rule,
      3. g from optimal_gain given W,
      4. L as the Wiener filter matched to the effective model gain
         alpha * diag(g); steps 3-4 repeat for additional rounds.

    Returns the final (AgcState, L). The physical front-end applies the
    per-antenna gains g before the ADC; alpha enters only through the
    stationarity condition, where it sets the quantizer loading.
    """
    if rounds < 1:
        raise ValueError("rounds must be >= 1")
    if beta is None:
        beta = 1.0 / (np.sqrt(2.0) * design_input_std(q.bits))
    C = build_correlation_set(H, cfg, q.rho_q)
    W = lra_mmse_filter(C.R_xy, C.R_yy, q.rho_q).matrix
    alpha = clip_factor(C.R_yy, C.R_yq, C.R_qq, cfg.rx_antennas, beta)
    g = None
    L = None
    for rnd in range(rounds):
        try:
            g = optimal_gain(W, C, alpha)
            R_zz, R_xz = agc_correlations(C.R_yy, C.R_yq, C.R_qq, C.R_xy, C.R_xq,
                                          alpha * g)
            L = lra_mmse_agc_filter(R_xz, R_zz)
        except (SingularMatrixError, NumericalInconsistencyError) as exc:
            raise type(exc)(f"joint_optimize failed in round {rnd}: {exc}") from exc
        W = L.matrix
    if np.abs(np.asarray(g, dtype=complex).imag).max() > IMAG_TOL:
        raise NumericalInconsistencyError("joint_optimize: complex gain vector")
    return AgcState(g=np.asarray(g, dtype=float), alpha=alpha, beta=beta), L
