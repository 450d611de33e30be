"""Plot rendering: semilog BER curves and linear sum-rate curves."""

from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .schema import load_metadata, load_results  # noqa: E402

# fixed style table: marker per receiver, color per ADC resolution
RECEIVER_MARKERS = {
    "zf": "s",
    "mmse": "o",
    "lra": "^",
    "lra-agc": "d",
    "fr-mmse": "*",
}
BIT_COLORS = {2: "tab:red", 3: "tab:orange", 4: "tab:green", 5: "tab:blue"}
FR_STYLE = dict(color="black", linestyle="--")
FALLBACK_COLOR = "tab:gray"

KINDS = ("ber", "rate")


class NoSeriesError(ValueError):
    """Filters removed every series from the plot."""


@dataclass(frozen=True)
class PlotSpec:
    input_csv: str
    kind: str                       # "ber" or "rate"
    output: str
    receivers: tuple = ()           # empty tuple means all
    bits: tuple = ()
    title: str | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")


def _series_label(receiver: str, b) -> str:
    return receiver if b is None else f"{receiver} (b={b})"


def _select(rows, spec: PlotSpec):
    keep = []
    for r in rows:
        if spec.receivers and r.receiver not in spec.receivers:
            continue
        if spec.bits and r.b is not None and r.b not in spec.bits:
            continue
        keep.append(r)
    return keep


def _group_series(rows):
    series: dict[tuple, list] = {}
    for r in rows:
        series.setdefault(r.series_key, []).append(r)
    for pts in series.values():
        pts.sort(key=lambda r: r.snr_db)
    # full-resolution baselines last so the reference line sits on top
    return dict(sorted(series.items(),
                       key=lambda kv: (kv[0][0] == "fr-mmse", kv[0])))


def render(spec: PlotSpec) -> str:
    """Render the plot described by spec; returns the output path."""
    rows = _select(load_results(spec.input_csv), spec)
    value = (lambda r: r.ber) if spec.kind == "ber" else (lambda r: r.sum_rate)
    rows = [r for r in rows if value(r) is not None]
    series = _group_series(rows)
    if not series:
        raise NoSeriesError(
            "no series selected: check --receivers/--bits filters against the "
            "CSV contents and that the file carries "
            f"{'ber' if spec.kind == 'ber' else 'sum_rate'} values")

    meta = load_metadata(spec.input_csv)
    fig, ax = plt.subplots(figsize=(7.0, 5.0))
    for (receiver, b), pts in series.items():
        x = [p.snr_db for p in pts]
        y = [value(p) for p in pts]
        style = dict(marker=RECEIVER_MARKERS.get(receiver, "x"), markersize=5)
        if receiver == "fr-mmse":
            style.update(FR_STYLE)
        else:
            style["color"] = BIT_COLORS.get(b, FALLBACK_COLOR)
        label = _series_label(receiver, b)
        if spec.kind == "ber":
            yerr = [p.ber_ci95 or 0.0 for p in pts]
            if any(yerr):
                ax.errorbar(x, y, yerr=yerr, capsize=2, label=label, **style)
            else:
                ax.plot(x, y, label=label, **style)
        else:
            ax.plot(x, y, label=label, **style)

    if spec.kind == "ber":
        ax.set_yscale("log")
        ax.set_ylabel("BER")
    else:
        ax.set_ylabel("Achievable sum rate (bits)")
    ax.set_xlabel("SNR (dB)")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=8)
    title = spec.title
    if title is None:
        cfg = meta.get("config", {})
        if cfg:
            title = (f"K={cfg.get('users')}, N_T={cfg.get('tx_antennas_per_user')}, "
                     f"N_R={cfg.get('rx_antennas')}, "
                     f"{str(cfg.get('modulation', '')).upper()}")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    out = Path(spec.output)
    fig.savefig(out, metadata=_stable_metadata(out.suffix))
    plt.close(fig)
    return str(out)


def _stable_metadata(suffix: str):
    """Pin volatile embedded metadata so repeated renders are byte-stable."""
    if suffix == ".png":
        return {"Software": "figkit"}
    if suffix == ".pdf":
        return {"Creator": "figkit", "Producer": "figkit",
                "CreationDate": None}
    if suffix == ".svg":
        return {"Date": None}
    return None
