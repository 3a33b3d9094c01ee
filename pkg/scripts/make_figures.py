#!/usr/bin/env python3
"""Build every figure bundle (CSV plus SVG) into one directory.

The randomized figures (sampling distributions) take their seed from the
required --seed flag; everything else is fully deterministic.
"""

import argparse
from pathlib import Path

from quantgain.figures import FIGURES, make_figures


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--outdir", default="figures")
    parser.add_argument("--seed", type=int, required=True)
    parser.add_argument("--tags", nargs="*", default=list(FIGURES),
                        help="subset of figures to build (default: all)")
    args = parser.parse_args()
    for path in make_figures(args.tags, Path(args.outdir), seed=args.seed):
        print(path)


if __name__ == "__main__":
    main()
