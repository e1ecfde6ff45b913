"""Overlaid basic/waiting runtime histograms from a comparison CSV."""

from ._cli import run_script


def main(argv=None) -> int:
    return run_script("comparison", __doc__, argv)


if __name__ == "__main__":
    raise SystemExit(main())
