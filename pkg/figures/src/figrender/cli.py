"""figrender <figure-id> <resultset-dir> <output.svg>"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .render import FIGURES, FigureJob, RenderError, render


def main(argv=None) -> None:
    parser = argparse.ArgumentParser(prog="figrender",
                                     description="Render an eventreg result set")
    parser.add_argument("figure", choices=sorted(FIGURES))
    parser.add_argument("in_dir", type=Path)
    parser.add_argument("out_path", type=Path)
    parser.add_argument("--linewidth", type=float, default=None)
    args = parser.parse_args(argv)
    style = {}
    if args.linewidth is not None:
        style["linewidth"] = args.linewidth
    try:
        report = render(FigureJob(args.figure, args.in_dir, args.out_path, style))
    except RenderError as err:
        print(f"render error: {err}", file=sys.stderr)
        sys.exit(1)
    print(f"{report['figure']}: wrote {report['out_path']} "
          f"({report['panels']} panels)")


if __name__ == "__main__":
    main()
