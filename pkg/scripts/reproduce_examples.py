"""Recompute every worked example and print computed vs reference values.

    python3 scripts/reproduce_examples.py [--n-steps 4096]
"""

import argparse
import sys

from qslb.cli import cmd_reproduce
from qslb.reproduce import TARGETS


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--n-steps", type=int, default=4096)
    args = ap.parse_args()
    worst = 0
    for target in TARGETS:
        worst = max(worst, cmd_reproduce(target, args.n_steps, sys.stdout))
        print()
    return worst


if __name__ == "__main__":
    sys.exit(main())
