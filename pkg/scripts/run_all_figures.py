#!/usr/bin/env python3
"""Run every figure bundle and write results/fig{1..6}.{csv,json}.

Thin wrapper over the CLI so the outputs are exactly what
``ofdm-feedback figure N`` would produce. At the default 3000 trials the
whole set takes a few minutes on one core; pass --trials 100 for a quick
smoke run.
"""

import argparse
import sys

from ofdm_feedback.cli import main as cli_main


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="results", help="output directory")
    parser.add_argument("--trials", type=int, default=None)
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--force", action="store_true")
    parser.add_argument(
        "--figures", default="1,2,3,4,5,6",
        help="comma-separated subset, e.g. 2,3",
    )
    args = parser.parse_args()

    for fig in args.figures.split(","):
        argv = ["figure", fig.strip(), "--out", args.out]
        if args.trials is not None:
            argv += ["--trials", str(args.trials)]
        if args.seed is not None:
            argv += ["--seed", str(args.seed)]
        if args.force:
            argv.append("--force")
        code = cli_main(argv)
        if code != 0:
            return code
    return 0


if __name__ == "__main__":
    sys.exit(main())
