"""Command-line entry point: render figure specs to image files."""

from __future__ import annotations

import argparse
import dataclasses
import sys

from .render import render
from .spec import FigureSpecError, load_spec

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INVALID = 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mpd-plots",
        description="Render mpdsim result CSVs into figures",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("render")
    p.add_argument("--spec", required=True, action="append",
                   help="JSON figure specification (repeatable)")
    p.add_argument("--out", default=None,
                   help="override the output path (single spec only)")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.out and len(args.spec) > 1:
        print("--out can only override a single spec", file=sys.stderr)
        return EXIT_INVALID
    try:
        for path in args.spec:
            spec = load_spec(path)
            if args.out:
                spec = dataclasses.replace(spec, out=args.out)
            footer = render(spec)
            print(f"wrote {spec.out} ({footer})")
        return EXIT_OK
    except FigureSpecError as exc:
        print(f"invalid figure spec: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
