"""Histogram of per-trial convergence times from a trials CSV."""

from ._cli import run_script


def main(argv=None) -> int:
    return run_script("histogram", __doc__, argv)


if __name__ == "__main__":
    raise SystemExit(main())
