"""figs <kind> --in <file> --out <png> [--threshold 0.55]"""

import argparse
import sys

from .io import FigsError
from .render import KINDS, FigureSpec, render


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise FigsError(message)


def _build_parser():
    parser = _Parser(prog="figs", description=__doc__)
    parser.add_argument("kind", choices=KINDS)
    parser.add_argument("--in", dest="source", required=True,
                        help="sweep or param CSV; detail JSON for invasion-panel")
    parser.add_argument("--out", required=True, help="output PNG path")
    parser.add_argument("--threshold", type=float, default=0.55,
                        help="horizontal reference line on the norm scatter")
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        render(FigureSpec(args.kind, args.source, args.out, args.threshold))
    except FigsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
