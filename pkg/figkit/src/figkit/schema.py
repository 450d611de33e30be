"""CSV contract validation and typed loading of sweep results."""

import csv
import json
from dataclasses import dataclass
from pathlib import Path

CSV_COLUMNS = ("receiver", "b", "snr_db", "ber", "ber_ci95", "sum_rate",
               "bits_simulated", "errors", "packets", "wall_time_s")


class SchemaError(ValueError):
    """Input file does not match the sweep CSV contract."""


@dataclass(frozen=True)
class ResultRow:
    receiver: str
    b: int | None
    snr_db: float
    ber: float | None
    ber_ci95: float | None
    sum_rate: float | None

    @property
    def series_key(self) -> tuple:
        return (self.receiver, self.b)


def _column_diff(found) -> str:
    missing = [c for c in CSV_COLUMNS if c not in found]
    extra = [c for c in found if c not in CSV_COLUMNS]
    parts = []
    if missing:
        parts.append("missing: " + ", ".join(missing))
    if extra:
        parts.append("unexpected: " + ", ".join(extra))
    if not parts:
        parts.append(f"wrong order: got {list(found)}")
    return "; ".join(parts)


def _opt_float(text: str):
    return None if text == "" else float(text)


def load_results(path: str | Path) -> list[ResultRow]:
    """Parse a sweep CSV, enforcing the exact column contract."""
    path = Path(path)
    if not path.exists():
        raise SchemaError(f"input file not found: {path}")
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        found = tuple(reader.fieldnames or ())
        if found != CSV_COLUMNS:
            raise SchemaError(f"CSV columns do not match contract "
                              f"({_column_diff(found)})")
        rows = []
        for i, raw in enumerate(reader, start=2):
            try:
                rows.append(ResultRow(
                    receiver=raw["receiver"],
                    b=int(raw["b"]) if raw["b"] != "" else None,
                    snr_db=float(raw["snr_db"]),
                    ber=_opt_float(raw["ber"]),
                    ber_ci95=_opt_float(raw["ber_ci95"]),
                    sum_rate=_opt_float(raw["sum_rate"]),
                ))
            except (KeyError, TypeError, ValueError) as exc:
                raise SchemaError(f"{path}:{i}: malformed row ({exc})") from exc
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    return rows


def load_metadata(csv_path: str | Path) -> dict:
    """Read the FILE.meta.json sidecar if present; empty dict otherwise."""
    p = str(csv_path)
    meta_path = Path(p[:-4] + ".meta.json" if p.endswith(".csv")
                     else p + ".meta.json")
    if not meta_path.exists():
        return {}
    with open(meta_path, encoding="utf-8") as fh:
        return json.load(fh)
