"""Zeros and collisions vs big step from a trajectory CSV."""

from ._cli import run_script


def main(argv=None) -> int:
    return run_script("trajectory", __doc__, argv)


if __name__ == "__main__":
    raise SystemExit(main())
