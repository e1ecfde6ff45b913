"""Shared flag handling for the one-figure-per-script entry points."""

from __future__ import annotations

import argparse
import sys

from .render import FigureSpec, render
from .tables import SchemaError


def run_script(kind: str, description: str, argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=description)
    parser.add_argument("--in", dest="source", required=True, help="input CSV")
    parser.add_argument("--out", required=True, help="output image path")
    parser.add_argument("--title", default=None)
    args = parser.parse_args(argv)
    try:
        stats = render(FigureSpec(kind=kind, source=args.source, out=args.out, title=args.title))
    except (SchemaError, ValueError, OSError) as exc:
        print(f"plot-{kind}: {exc}", file=sys.stderr)
        return 1
    notes = []
    if stats.mu is not None:
        notes.append(f"mu = {stats.mu:.1f}")
    if stats.mu_basic is not None:
        notes.append(f"basic mu = {stats.mu_basic:.1f}, waiting mu = {stats.mu_waiting:.1f}")
    suffix = f" ({'; '.join(notes)})" if notes else ""
    print(f"wrote {args.out} from {stats.rows} rows{suffix}")
    return 0
