"""
End-to-end acceptance suite. Each test exercises one headline requirement
and emits a single PASS/FAIL line on the real stdout so the verdicts are
visible even under output capture.
"""

import sys

import conftest
import numpy as np
from oracles import bussgang_cross_error

from quantmimo import (SweepSpec, build_correlation_set, build_quantizer,
                       gen_channel, joint_optimize, lra_mmse_filter,
                       make_config, mmse_filter, mse_cost, optimal_gain,
                       rate_report, run_rate_sweep, run_sweep)
from quantmimo.agc import clip_factor, trace_diag_gradient


def verdict(name: str, ok: bool, detail: str):
    line = f"{'PASS' if ok else 'FAIL'}: {name} -- {detail}"
    print(line, file=sys.__stdout__, flush=True)
    conftest.VERDICTS.append(line)
    assert ok, line


def desk_config(**kw):
    base = dict(users=4, tx_antennas_per_user=2, rx_antennas=16, bits=3,
                snr_db=10.0, packet_len=100, seed=0)
    base.update(kw)
    return make_config(**base)


def test_reduction_identity_without_quantization():
    """rho_q=0: resolution-aware filter equals the Wiener filter and the
    joint pipeline reaches the classical Wiener MMSE."""
    worst_filter = 0.0
    worst_mse = 0.0
    for seed in range(10):
        cfg = desk_config()
        H = gen_channel(cfg, np.random.default_rng(seed))
        C = build_correlation_set(H, cfg, 0.0)
        W_mmse = mmse_filter(C.R_xy, C.R_yy).matrix
        W_lra = lra_mmse_filter(C.R_xy, C.R_yy, 0.0).matrix
        worst_filter = max(worst_filter, np.abs(W_lra - W_mmse).max())

        q5 = build_quantizer(5)
        q0 = type(q5)(bits=5, step=q5.step, half_range=q5.half_range,
                      levels=q5.levels, rho_q=0.0)
        beta = float(np.sqrt(cfg.rx_antennas / np.real(np.trace(C.R_yy))))
        agc, L = joint_optimize(H, cfg, q0, rounds=2, beta=beta)
        eps = mse_cost(agc.g, agc.alpha, L, C)
        ref = np.real(np.trace(
            C.R_xx - C.R_xy @ np.linalg.inv(C.R_yy) @ C.R_xy.conj().T))
        worst_mse = max(worst_mse, abs(eps - ref))
    ok = worst_filter <= 1e-9 and worst_mse <= 1e-9
    verdict("reduction identity (rho_q=0)", ok,
            f"max filter diff {worst_filter:.2e}, max MSE diff {worst_mse:.2e} "
            f"(tol 1e-9)")


def test_agc_stationarity_keystone():
    """Finite-difference gradient of the MSE cost vanishes at the
    closed-form optimal gain on >=100 random scenarios."""
    quantizers = {b: build_quantizer(b) for b in (2, 3, 4, 5)}
    n_scen = 0
    worst = 0.0
    for n_rx in (4, 8, 16):
        for streams in (2, 4, 8):
            if streams > n_rx:
                continue
            for b in (2, 3, 4, 5):
                for seed in (0, 1, 2, 3):
                    cfg = make_config(users=streams, tx_antennas_per_user=1,
                                      rx_antennas=n_rx, bits=b, snr_db=10.0)
                    H = gen_channel(cfg, np.random.default_rng(
                        seed + 13 * n_rx + 101 * streams + 997 * b))
                    q = quantizers[b]
                    C = build_correlation_set(H, cfg, q.rho_q)
                    W = lra_mmse_filter(C.R_xy, C.R_yy, q.rho_q).matrix
                    alpha = clip_factor(C.R_yy, C.R_yq, C.R_qq, n_rx,
                                        np.sqrt(b))
                    g = optimal_gain(W, C, alpha)
                    eps = mse_cost(g, alpha, W, C)
                    h = 1e-5
                    for j in range(n_rx):
                        e = np.zeros(n_rx)
                        e[j] = h
                        fd = (mse_cost(g + e, alpha, W, C)
                              - mse_cost(g - e, alpha, W, C)) / (2 * h)
                        worst = max(worst, abs(fd) / (1.0 + abs(eps)))
                    n_scen += 1
    ok = n_scen >= 100 and worst < 1e-6
    verdict("AGC stationarity (keystone)", ok,
            f"{n_scen} scenarios, worst normalized |gradient| {worst:.2e} "
            f"(tol 1e-6)")


def test_trace_derivative_identity():
    """Numerical gradient of tr[A diag(g) B] matches (A^T (.) B) 1."""
    rng = np.random.default_rng(42)
    worst = 0.0
    for _ in range(1000):
        n = int(rng.integers(2, 7))
        A = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        B = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        g = rng.uniform(-2.0, 2.0, n)
        grad = trace_diag_gradient(A, B)
        h = 1e-6
        j = int(rng.integers(0, n))
        e = np.zeros(n)
        e[j] = h
        fd = (np.trace(A @ np.diag(g + e) @ B)
              - np.trace(A @ np.diag(g - e) @ B)) / (2 * h)
        worst = max(worst, abs(grad[j] - fd))
    ok = worst < 1e-8
    verdict("trace-derivative identity", ok,
            f"1000 triples, worst deviation {worst:.2e} (tol 1e-8)")


def test_bussgang_cross_correlation():
    """Simulated E[v q^H] matches -rho_q R_vv within 5% Frobenius."""
    cfg = make_config(users=2, tx_antennas_per_user=2, rx_antennas=8, bits=3,
                      snr_db=10.0)
    H = gen_channel(cfg, np.random.default_rng(7))
    err = bussgang_cross_error(H, cfg, build_quantizer(3), 1_000_000)
    ok = err < 0.05
    verdict("Bussgang linearization", ok,
            f"relative Frobenius error {err:.3f} at 1e6 samples, b=3, N_R=8 "
            f"(tol 0.05)")


def _ber_point(results, receiver, b):
    (r,) = [x for x in results if x.receiver == receiver and x.b == b]
    return r


def test_ber_ordering_desk_scale():
    """At b=3, 10 dB desk scale: joint AGC receiver beats quantization-blind
    MMSE beats ZF, with non-overlapping 95% CIs at >=200 errors each; the
    b=5 joint receiver tracks the full-resolution MMSE within a factor 2."""
    # the mmse/zf gap at this operating point is ~5%, so those points need
    # ~2e4 errors for non-overlapping CIs; the joint receiver's BER is ~3e-6
    # and its error count is capped by the packet budget instead
    cfg = desk_config(n_packets=110_000)
    spec = SweepSpec(snr_points=[10.0], bits_list=[3],
                     receivers=["zf", "mmse", "lra-agc"], base_config=cfg,
                     early_stop_errors=20_000, early_stop_min_packets=50)
    res = run_sweep(spec)
    agc = _ber_point(res, "lra-agc", 3)
    mmse = _ber_point(res, "mmse", 3)
    zf = _ber_point(res, "zf", 3)
    enough = all(r.errors >= 200 for r in (agc, mmse, zf))
    ordered = (agc.ber + agc.ber_ci95 < mmse.ber - mmse.ber_ci95
               and mmse.ber + mmse.ber_ci95 < zf.ber - zf.ber_ci95)

    # factor-of-2 tracking of the full-resolution baseline with b=5: checked
    # at 0 dB where both BERs are measurable, plus a statistical-consistency
    # check at 10 dB where error counts may be zero over the budget
    cfg0 = desk_config(snr_db=0.0, n_packets=6000)
    spec0 = SweepSpec(snr_points=[0.0], bits_list=[5],
                      receivers=["lra-agc", "fr-mmse"], base_config=cfg0,
                      early_stop_errors=400, early_stop_min_packets=200)
    res0 = run_sweep(spec0)
    agc5 = _ber_point(res0, "lra-agc", 5)
    fr0 = _ber_point(res0, "fr-mmse", None)
    factor0 = agc5.ber / fr0.ber
    cfg10 = desk_config(n_packets=2500)
    spec10 = SweepSpec(snr_points=[10.0], bits_list=[5],
                       receivers=["lra-agc", "fr-mmse"], base_config=cfg10,
                       early_stop_errors=10 ** 9,
                       early_stop_min_packets=10 ** 9)
    res10 = run_sweep(spec10)
    agc5_10 = _ber_point(res10, "lra-agc", 5)
    fr10 = _ber_point(res10, "fr-mmse", None)
    # consistent with a factor <= 2 given binomial counting noise
    limit_10 = 2.0 * fr10.errors + 3.0 * np.sqrt(2.0 * fr10.errors + 1.0)
    consistent_10 = agc5_10.errors <= max(limit_10, 10)

    ok = enough and ordered and factor0 <= 2.0 and consistent_10
    verdict("BER ordering at desk scale", ok,
            f"b=3/10dB: agc {agc.ber:.2e} < mmse {mmse.ber:.2e} < zf "
            f"{zf.ber:.2e} (errors {agc.errors}/{mmse.errors}/{zf.errors}); "
            f"b=5 vs FR factor {factor0:.2f} at 0 dB (<=2), 10 dB counts "
            f"{agc5_10.errors} vs {fr10.errors} consistent={consistent_10}")


def test_rate_behavior_desk_scale():
    """Sum rate strictly increasing in b at 0 and 10 dB, never above the
    full-resolution rate, and b=5 within 10% of it at 0 dB."""
    cfg = desk_config()
    spec = SweepSpec(snr_points=[0.0, 10.0], bits_list=[2, 3, 4, 5],
                     receivers=["lra-agc", "fr-mmse"], base_config=cfg,
                     n_channels=50)
    res = run_rate_sweep(spec)
    rates = {(r.receiver, r.b, r.snr_db): r.sum_rate for r in res}
    ok = True
    details = []
    for snr in (0.0, 10.0):
        fr = rates[("fr-mmse", None, snr)]
        seq = [rates[("lra-agc", b, snr)] for b in (2, 3, 4, 5)]
        ok &= all(lo < hi for lo, hi in zip(seq, seq[1:]))
        ok &= all(r <= fr + 1e-9 for r in seq)
        details.append(f"{snr:g}dB: " + "/".join(f"{r:.2f}" for r in seq)
                       + f" vs FR {fr:.2f}")
    ratio = rates[("lra-agc", 5, 0.0)] / rates[("fr-mmse", None, 0.0)]
    ok &= ratio >= 0.90
    verdict("rate behavior at desk scale", ok,
            "; ".join(details) + f"; b=5/FR at 0 dB = {ratio:.3f} (>=0.90)")


def test_full_scale_smoke(tmp_path):
    """Large-system point (32 streams, 64 antennas) completes with the
    distortion table logged and no numerical failures."""
    cfg = make_config(users=16, tx_antennas_per_user=2, rx_antennas=64,
                      bits=3, snr_db=10.0, packet_len=100, n_packets=200,
                      seed=0)
    out = tmp_path / "full.csv"
    spec = SweepSpec(snr_points=[10.0], bits_list=[3],
                     receivers=["lra-agc"], base_config=cfg,
                     output_path=str(out),
                     early_stop_errors=10 ** 9, early_stop_min_packets=10 ** 9)
    res = run_sweep(spec)
    import json
    meta = json.loads((tmp_path / "full.meta.json").read_text())
    (point,) = res
    ok = (point.packets == 200 and np.isfinite(point.ber)
          and "3" in meta["rho_q"] and meta["skipped_packets"] == {})
    verdict("full-scale smoke", ok,
            f"200 packets, ber {point.ber:.2e}, rho_q(3)="
            f"{meta['rho_q'].get('3', float('nan')):.4f}, skips "
            f"{meta['skipped_packets']}")
