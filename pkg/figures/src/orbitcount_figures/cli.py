"""Command line front end: orbitcount-figures KIND --csv IN --out IMAGE."""

from __future__ import annotations

import argparse
import sys

from .plots import KINDS, SchemaError, plot

EXIT_OK = 0
EXIT_SCHEMA = 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="orbitcount-figures",
        description="Render figures from orbitcount CSV results.",
    )
    parser.add_argument("kind", choices=sorted(KINDS))
    parser.add_argument("--csv", required=True, help="input CSV path")
    parser.add_argument("--out", required=True, help="output image path")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        plot(args.kind, args.csv, args.out)
    except (SchemaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
