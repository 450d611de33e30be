"""
Monte Carlo experiment driver: BER sweeps and achievable-rate sweeps.

Packet chain (BER): a fresh channel per packet, y = Hx + n, per-antenna
front-end gains, the real saturating ADC, linear filtering, hard
detection. The linearized correlation model appears only in filter
design, never in the signal path.

Front-end gains: the joint AGC receiver applies its optimized g; the
full-resolution baseline bypasses the ADC; the remaining quantized
baselines have no gain control and feed y to the ADC directly.

Reproducibility: one master seed expands into per-(point, packet)
substreams, so results are independent of execution order and of any
packet-level parallelism.
"""

import json
import time
from dataclasses import asdict, dataclass, replace

import numpy as np

from . import __version__
from .agc import AgcState, joint_optimize
from .channel import gen_channel, gen_noise, gen_symbols
from .config import Modulation, SystemConfig
from .correlations import build_correlation_set
from .errors import (ConfigError, NotPositiveDefiniteError,
                     NumericalInconsistencyError, SingularMatrixError)
from .quantizer import (Quantizer, build_quantizer, design_input_std,
                        quantize)
from .rate import rate_report
from .receivers import (ReceiverFilter, detect, lra_mmse_filter, mmse_filter,
                        zf_filter)

RECEIVER_NAMES = ("zf", "mmse", "lra", "lra-agc", "fr-mmse")
CSV_COLUMNS = ("receiver", "b", "snr_db", "ber", "ber_ci95", "sum_rate",
               "bits_simulated", "errors", "packets", "wall_time_s")
SNR_CONVENTION = "snr_db = 10*log10(symbol_energy/noise_variance) per tx antenna"

_SOLVER_ERRORS = (SingularMatrixError, NotPositiveDefiniteError,
                  NumericalInconsistencyError, np.linalg.LinAlgError)


class SkipBudgetExceeded(RuntimeError):
    """Too many per-packet solver failures at one sweep point."""


@dataclass
class SweepSpec:
    snr_points: list
    bits_list: list
    receivers: list
    base_config: SystemConfig
    output_path: str | None = None
    n_channels: int = 100          # rate sweep only
    rounds: int = 1
    beta: float | None = None      # None -> sqrt(b)
    early_stop_errors: int = 500
    early_stop_min_packets: int = 1000
    skip_budget: float = 0.05


@dataclass
class SimResult:
    receiver: str
    b: int | None
    snr_db: float
    ber: float | None
    ber_ci95: float | None
    sum_rate: float | None
    n_bits_simulated: int | None
    errors: int | None
    packets: int | None
    wall_time_s: float


def _validate_spec(spec: SweepSpec):
    if not spec.receivers:
        raise ConfigError("receivers list must be non-empty")
    for r in spec.receivers:
        if r not in RECEIVER_NAMES:
            raise ConfigError(f"unknown receiver {r!r}; expected one of {RECEIVER_NAMES}")
    if not spec.snr_points:
        raise ConfigError("snr_points must be non-empty")
    if np.any(np.diff(spec.snr_points) <= 0):
        raise ConfigError("snr_points must be strictly increasing")
    if not spec.bits_list and any(r != "fr-mmse" for r in spec.receivers):
        raise ConfigError("bits_list must be non-empty for quantized receivers")


def count_bit_errors(x: np.ndarray, x_hat: np.ndarray, modulation: Modulation) -> int:
    """Bit errors between transmitted and detected symbol blocks."""
    if modulation is Modulation.BPSK:
        return int(np.sum(np.sign(x.real) != np.sign(x_hat.real)))
    return int(np.sum(np.sign(x.real) != np.sign(x_hat.real))
               + np.sum(np.sign(x.imag) != np.sign(x_hat.imag)))


def run_packet(H: np.ndarray, cfg: SystemConfig, q: Quantizer | None,
               agc: AgcState | None, filt: ReceiverFilter,
               rng: np.random.Generator) -> int:
    """
    Simulate one packet through the real signal chain and return the
    number of bit errors. q=None bypasses the ADC (full resolution);
    agc=None means unit front-end gains.
    """
    x = gen_symbols(cfg, rng, cfg.packet_len)
    y = H @ x + gen_noise(cfg, rng, cfg.packet_len)
    v = y if agc is None else agc.g[:, None] * y
    r = v if q is None else quantize(v, q)
    x_hat = detect(filt.matrix @ r, cfg.modulation, cfg.symbol_energy)
    return count_bit_errors(x, x_hat, cfg.modulation)


@dataclass
class _PointAcc:
    errors: int = 0
    bits: int = 0
    packets: int = 0
    skips: int = 0
    wall: float = 0.0


def _ci95(errors: int, bits: int) -> float:
    if bits == 0:
        return 0.0
    p = errors / bits
    return float(1.96 * np.sqrt(p * (1.0 - p) / bits))


def _design_point(name: str, b: int | None, H, cfg: SystemConfig,
                  quantizers: dict, spec: SweepSpec):
    """Build (quantizer, agc_state, filter) for one (receiver, b) point."""
    if name == "fr-mmse":
        C = build_correlation_set(H, cfg, 0.0)
        return None, None, mmse_filter(C.R_xy, C.R_yy)
    q = quantizers[b]
    if name == "zf":
        return q, None, zf_filter(H)
    if name == "mmse":
        C = build_correlation_set(H, cfg, 0.0)
        return q, None, mmse_filter(C.R_xy, C.R_yy)
    if name == "lra":
        C = build_correlation_set(H, cfg, q.rho_q)
        return q, None, lra_mmse_filter(C.R_xy, C.R_yy, q.rho_q)
    # lra-agc
    agc, L = joint_optimize(H, cfg, q, rounds=spec.rounds, beta=spec.beta)
    return q, agc, L


def _points_for(spec: SweepSpec):
    points = []
    for name in spec.receivers:
        if name == "fr-mmse":
            points.append((name, None))
        else:
            points.extend((name, b) for b in spec.bits_list)
    return points


def run_sweep(spec: SweepSpec) -> list[SimResult]:
    """BER sweep over (receiver, b, snr); optionally writes CSV + metadata."""
    _validate_spec(spec)
    cfg0 = spec.base_config
    quantizers = {b: build_quantizer(b) for b in spec.bits_list}
    points = _points_for(spec)
    results: list[SimResult] = []
    skip_log: dict[str, int] = {}
    alpha_acc: dict[int, list] = {}
    writer = _CsvWriter(spec.output_path)

    for i_snr, snr in enumerate(spec.snr_points):
        cfg = replace(cfg0, snr_db=float(snr))
        acc = {pt: _PointAcc() for pt in points}
        active = set(points)
        max_skips = max(10, int(spec.skip_budget * cfg.n_packets))

        for pkt in range(cfg.n_packets):
            if not active:
                break
            chan_rng = np.random.default_rng(
                np.random.SeedSequence([cfg.seed, 101, i_snr, pkt]))
            H = gen_channel(cfg, chan_rng)
            data_ss = np.random.SeedSequence([cfg.seed, 202, i_snr, pkt])
            for pt in sorted(active):
                name, b = pt
                a = acc[pt]
                t0 = time.perf_counter()
                try:
                    q, agc, filt = _design_point(name, b, H, cfg, quantizers, spec)
                    errs = run_packet(H, cfg, q, agc, filt,
                                      np.random.default_rng(data_ss))
                except _SOLVER_ERRORS as exc:
                    a.skips += 1
                    key = f"{name}/b={b}/snr={snr}"
                    skip_log[key] = skip_log.get(key, 0) + 1
                    if a.skips > max_skips:
                        raise SkipBudgetExceeded(
                            f"{key}: {a.skips} solver failures (last: {exc})") from exc
                    continue
                finally:
                    a.wall += time.perf_counter() - t0
                if agc is not None:
                    alpha_acc.setdefault(b, []).append(agc.alpha)
                a.errors += errs
                a.bits += cfg.streams * cfg.packet_len * cfg.bits_per_symbol
                a.packets += 1
                if (a.errors >= spec.early_stop_errors
                        and a.packets >= spec.early_stop_min_packets):
                    active.discard(pt)

        for pt in points:
            name, b = pt
            a = acc[pt]
            res = SimResult(receiver=name, b=b, snr_db=float(snr),
                            ber=a.errors / a.bits if a.bits else None,
                            ber_ci95=_ci95(a.errors, a.bits) if a.bits else None,
                            sum_rate=None, n_bits_simulated=a.bits,
                            errors=a.errors, packets=a.packets,
                            wall_time_s=a.wall)
            results.append(res)
            writer.write(res)

    writer.close(spec, quantizers, results, skip_log,
                 alpha_stats=_alpha_stats(alpha_acc))
    return results


def _alpha_stats(alpha_acc: dict) -> dict:
    """Summary of observed clip factors per ADC resolution."""
    return {str(b): {"mean": float(np.mean(v)), "min": float(np.min(v)),
                     "max": float(np.max(v))}
            for b, v in sorted(alpha_acc.items())}


def run_rate_sweep(spec: SweepSpec) -> list[SimResult]:
    """
    Achievable-rate sweep: averages the model rate bound over
    spec.n_channels random channel draws per (receiver, b, snr).
    """
    _validate_spec(spec)
    cfg0 = spec.base_config
    quantizers = {b: build_quantizer(b) for b in spec.bits_list}
    points = _points_for(spec)
    results: list[SimResult] = []
    writer = _CsvWriter(spec.output_path)

    for i_snr, snr in enumerate(spec.snr_points):
        cfg = replace(cfg0, snr_db=float(snr))
        sums = {pt: 0.0 for pt in points}
        t0 = time.perf_counter()
        for ch in range(spec.n_channels):
            rng = np.random.default_rng(
                np.random.SeedSequence([cfg.seed, 303, i_snr, ch]))
            H = gen_channel(cfg, rng)
            for name, b in points:
                sums[(name, b)] += _model_rate(name, b, H, cfg, quantizers, spec)
        wall = time.perf_counter() - t0
        for pt in points:
            name, b = pt
            res = SimResult(receiver=name, b=b, snr_db=float(snr),
                            ber=None, ber_ci95=None,
                            sum_rate=sums[pt] / spec.n_channels,
                            n_bits_simulated=None, errors=None, packets=None,
                            wall_time_s=wall / len(points))
            results.append(res)
            writer.write(res)

    writer.close(spec, quantizers, results, skip_log={}, alpha_stats=None)
    return results


def _model_rate(name: str, b: int | None, H, cfg: SystemConfig,
                quantizers: dict, spec: SweepSpec) -> float:
    ones = np.ones(cfg.rx_antennas)
    if name == "fr-mmse":
        C = build_correlation_set(H, cfg, 0.0)
        W = mmse_filter(C.R_xy, C.R_yy)
        return rate_report(W, ones, C).sum_rate
    q = quantizers[b]
    C = build_correlation_set(H, cfg, q.rho_q)
    if name == "lra-agc":
        agc, L = joint_optimize(H, cfg, q, rounds=spec.rounds, beta=spec.beta)
        return rate_report(L, agc.alpha * agc.g, C).sum_rate
    if name == "zf":
        W = zf_filter(H)
    elif name == "mmse":
        W = mmse_filter(C.R_xy, C.R_yy)
    else:
        W = lra_mmse_filter(C.R_xy, C.R_yy, q.rho_q)
    return rate_report(W, ones, C).sum_rate


class _CsvWriter:
    """Incremental CSV writer plus the metadata sidecar."""

    def __init__(self, path: str | None):
        self.path = path
        self.fh = None
        if path is not None:
            self.fh = open(path, "w", encoding="utf-8")
            self.fh.write(",".join(CSV_COLUMNS) + "\n")
            self.fh.flush()

    @staticmethod
    def _fmt(v):
        if v is None:
            return ""
        if isinstance(v, (float, np.floating)):
            return repr(float(v))
        return str(v)

    def write(self, r: SimResult):
        if self.fh is None:
            return
        row = (r.receiver, r.b, r.snr_db, r.ber, r.ber_ci95, r.sum_rate,
               r.n_bits_simulated, r.errors, r.packets, round(r.wall_time_s, 4))
        self.fh.write(",".join(self._fmt(v) for v in row) + "\n")
        self.fh.flush()

    def close(self, spec: SweepSpec, quantizers, results, skip_log, alpha_stats):
        if self.fh is None:
            return
        self.fh.close()
        meta = {
            "seed": spec.base_config.seed,
            "rho_q": {str(b): q.rho_q for b, q in quantizers.items()},
            "beta": spec.beta if spec.beta is not None
                    else {str(b): 1.0 / (np.sqrt(2.0) * design_input_std(b))
                          for b in quantizers},
            "rounds": spec.rounds,
            "snr_convention": SNR_CONVENTION,
            "early_stop": {"min_errors": spec.early_stop_errors,
                           "min_packets": spec.early_stop_min_packets},
            "skipped_packets": skip_log,
            "alpha_stats": alpha_stats or {},
            "config": {**asdict(spec.base_config),
                       "modulation": spec.base_config.modulation.value},
            "receivers": list(spec.receivers),
            "bits_list": [int(b) for b in spec.bits_list],
            "snr_points": [float(s) for s in spec.snr_points],
            "n_channels": spec.n_channels,
            "version": __version__,
        }
        meta_path = self.path[:-4] + ".meta.json" if self.path.endswith(".csv") \
            else self.path + ".meta.json"
        with open(meta_path, "w", encoding="utf-8") as fh:
            json.dump(meta, fh, indent=2)
