"""Command-line entry point: BER and achievable-rate sweeps to CSV."""

import argparse
import sys

import numpy as np

from .config import make_config
from .errors import (ConfigError, NotPositiveDefiniteError,
                     NumericalInconsistencyError, SingularMatrixError)
from .sim import (RECEIVER_NAMES, SimResult, SkipBudgetExceeded, SweepSpec,
                  run_rate_sweep, run_sweep)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def parse_snr(text: str) -> list:
    """Parse 'start:step:stop' (inclusive) or a comma-separated list of dB values."""
    try:
        if ":" in text:
            start, step, stop = (float(p) for p in text.split(":"))
            if step <= 0:
                raise ValueError("step must be positive")
            pts = np.arange(start, stop + step / 2.0, step)
            return [float(p) for p in pts]
        return [float(p) for p in text.split(",")]
    except ValueError as exc:
        raise ConfigError(f"bad --snr specification {text!r}: {exc}") from exc


def parse_int_list(text: str, name: str) -> list:
    try:
        return [int(p) for p in text.split(",") if p != ""]
    except ValueError as exc:
        raise ConfigError(f"bad --{name} specification {text!r}") from exc


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--users", type=int, default=4, help="number of users K")
    p.add_argument("--tx-ant", type=int, default=1,
                   help="transmit antennas per user N_T")
    p.add_argument("--rx-ant", type=int, default=16, help="receive antennas N_R")
    p.add_argument("--bits", default="2,3,4,5",
                   help="comma-separated ADC resolutions, e.g. 2,3,4,5")
    p.add_argument("--snr", default="-10:2:14",
                   help="SNR grid in dB: start:step:stop or comma list")
    p.add_argument("--mod", choices=["bpsk", "qpsk"], default="bpsk")
    p.add_argument("--receivers", default="zf,mmse,lra,lra-agc,fr-mmse",
                   help=f"comma list from {{{','.join(RECEIVER_NAMES)}}}")
    p.add_argument("--rounds", type=int, default=1,
                   help="alternating AGC/filter design rounds")
    p.add_argument("--beta", default="auto",
                   help="clip calibration factor, or 'auto' for sqrt(b)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output CSV path")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quantmimo",
        description="Monte Carlo BER and rate sweeps for the coarsely "
                    "quantized MU-MIMO uplink with joint AGC/receiver design.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_ber = sub.add_parser("ber", help="bit-error-rate sweep")
    _add_common(p_ber)
    p_ber.add_argument("--packets", type=int, default=10000,
                       help="max packets per sweep point")
    p_ber.add_argument("--packet-len", type=int, default=100,
                       help="symbols per antenna per packet")

    p_rate = sub.add_parser("rate", help="achievable-rate sweep")
    _add_common(p_rate)
    p_rate.add_argument("--channels", type=int, default=100,
                        help="channel draws averaged per sweep point")
    return parser


def _build_spec(args) -> SweepSpec:
    bits_list = parse_int_list(args.bits, "bits")
    receivers = [r.strip() for r in args.receivers.split(",") if r.strip()]
    snr_points = parse_snr(args.snr)
    if args.beta == "auto":
        beta = None
    else:
        try:
            beta = float(args.beta)
        except ValueError:
            raise ConfigError(f"bad --beta value {args.beta!r}; expect a number or 'auto'")
        if beta <= 0:
            raise ConfigError("--beta must be positive")

    cfg = make_config(
        users=args.users,
        tx_antennas_per_user=args.tx_ant,
        rx_antennas=args.rx_ant,
        bits=bits_list[0] if bits_list else 1,
        snr_db=snr_points[0],
        packet_len=getattr(args, "packet_len", 100),
        n_packets=getattr(args, "packets", 10000),
        seed=args.seed,
        modulation=args.mod,
    )
    for b in bits_list:
        if not 1 <= b <= 16:
            raise ConfigError(f"bits values must be in [1, 16], got {b}")
    return SweepSpec(snr_points=snr_points, bits_list=bits_list,
                     receivers=receivers, base_config=cfg,
                     output_path=args.out,
                     n_channels=getattr(args, "channels", 100),
                     rounds=args.rounds, beta=beta)


def _print_summary(results: list, kind: str):
    for r in results:
        b = "fr" if r.b is None else r.b
        if kind == "ber":
            print(f"{r.receiver:8s} b={b!s:3s} snr={r.snr_db:6.1f} dB  "
                  f"ber={r.ber:.3e}  errors={r.errors}  packets={r.packets}")
        else:
            print(f"{r.receiver:8s} b={b!s:3s} snr={r.snr_db:6.1f} dB  "
                  f"rate={r.sum_rate:.3f} bits")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        spec = _build_spec(args)
        if args.command == "ber":
            results = run_sweep(spec)
        else:
            results = run_rate_sweep(spec)
        _print_summary(results, args.command)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SkipBudgetExceeded, SingularMatrixError, NotPositiveDefiniteError,
            NumericalInconsistencyError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    print(f"wrote {args.out}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
