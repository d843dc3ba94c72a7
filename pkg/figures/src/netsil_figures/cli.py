"""render-figs: render every standard figure for a results directory."""

from __future__ import annotations

import argparse
import os
import sys

from .render import KINDS, SchemaError, discover_specs, render


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="render-figs",
        description="Render SVG+PNG figures from netsil result files.",
    )
    parser.add_argument("--in", dest="in_dir", required=True, help="results directory")
    parser.add_argument("--out", dest="out_dir", required=True, help="figure output directory")
    parser.add_argument(
        "--kinds",
        default=",".join(KINDS),
        help=f"comma-separated subset of: {', '.join(KINDS)}",
    )
    args = parser.parse_args(argv)

    if not os.path.isdir(args.in_dir):
        print(f"error: no such directory: {args.in_dir}", file=sys.stderr)
        return 2
    kinds = tuple(k.strip() for k in args.kinds.split(",") if k.strip())
    unknown = [k for k in kinds if k not in KINDS]
    if unknown:
        print(f"error: unknown kind(s): {', '.join(unknown)}", file=sys.stderr)
        return 2

    os.makedirs(args.out_dir, exist_ok=True)
    try:
        specs = discover_specs(args.in_dir, args.out_dir, kinds)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if not specs:
        print(f"error: nothing to render in {args.in_dir}", file=sys.stderr)
        return 1

    failures = 0
    for spec in specs:
        try:
            result = render(spec)
        except SchemaError as exc:
            failures += 1
            print(f"FAIL {spec.kind}: {exc}", file=sys.stderr)
            continue
        print(f"wrote {result.svg_path} and {result.png_path}")
    if failures:
        print(f"{failures} figure(s) failed schema validation", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
