"""quantmimo-plot: render BER / sum-rate figures from sweep CSV files."""

import argparse
import sys

from .render import KINDS, NoSeriesError, PlotSpec, render
from .schema import SchemaError

EXIT_OK = 0
EXIT_INPUT = 2

STYLE_HELP = """\
style table (fixed):
  markers per receiver: zf=square, mmse=circle, lra=triangle,
                        lra-agc=diamond, fr-mmse=star
  colors per ADC bits:  2=red, 3=orange, 4=green, 5=blue, other=gray
  fr-mmse is drawn as a black dashed reference line
"""


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quantmimo-plot",
        description="Render BER-vs-SNR (semilog) or sum-rate-vs-SNR (linear) "
                    "figures from a quantmimo sweep CSV.",
        epilog=STYLE_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--kind", choices=KINDS, required=True)
    parser.add_argument("--in", dest="input_csv", required=True,
                        help="sweep CSV produced by the quantmimo CLI")
    parser.add_argument("--out", required=True,
                        help="output image path (.png/.pdf/.svg)")
    parser.add_argument("--receivers", default="",
                        help="comma list to keep (default: all)")
    parser.add_argument("--bits", default="",
                        help="comma list of ADC resolutions to keep "
                             "(full-resolution series are always kept)")
    parser.add_argument("--title", default=None)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        bits = tuple(int(b) for b in args.bits.split(",") if b != "")
    except ValueError:
        print(f"error: bad --bits value {args.bits!r}", file=sys.stderr)
        return EXIT_INPUT
    receivers = tuple(r.strip() for r in args.receivers.split(",") if r.strip())
    try:
        spec = PlotSpec(input_csv=args.input_csv, kind=args.kind,
                        output=args.out, receivers=receivers, bits=bits,
                        title=args.title)
        out = render(spec)
    except (SchemaError, NoSeriesError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    print(f"wrote {out}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
