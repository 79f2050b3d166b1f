"""plot: single-command front end for the figure renderer."""

from __future__ import annotations

import argparse

from .render import KINDS, FigureRequest, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plot", description="render modedrift run artifacts into figures")
    parser.add_argument("--kind", choices=KINDS, required=True)
    parser.add_argument("--csv", required=True, help="monitor CSV from a run")
    parser.add_argument("--report", required=True, help="report JSON from the same run")
    parser.add_argument("--out", required=True, help="output image path")
    parser.add_argument("--log-y", action="store_true")
    parser.add_argument("--modes", type=int, nargs="*", default=None,
                        help="subset of action modes to draw")
    parser.add_argument("--dpi", type=int, default=130)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    request = FigureRequest(
        csv_path=args.csv,
        report_path=args.report,
        kind=args.kind,
        out_path=args.out,
        log_y=args.log_y,
        modes=tuple(args.modes) if args.modes else None,
        dpi=args.dpi,
    )
    render(request)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
