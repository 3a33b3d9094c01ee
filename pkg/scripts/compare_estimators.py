#!/usr/bin/env python3
"""Run all four estimators on the floored-count model and print a summary table.

Example:
    python scripts/compare_estimators.py --seed 2026
    python scripts/compare_estimators.py --seed 1 --tau 5/2 --mean 20 --size 100
"""

import argparse
from pathlib import Path

from quantgain.lattice import to_gain
from quantgain.simulate import (
    METHODS,
    PoissonLaw,
    SimConfig,
    experiment_to_csv,
    run_experiment,
)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--tau", default="1.32", help="true gain, p/q or decimal")
    parser.add_argument("--mean", type=float, default=5.5, help="Poisson count mean")
    parser.add_argument("--size", type=int, default=15, help="samples per repeat")
    parser.add_argument("--repeats", type=int, default=200)
    parser.add_argument("--seed", type=int, required=True)
    parser.add_argument("--csv", help="also write the per-repeat CSV here")
    args = parser.parse_args()

    cfg = SimConfig(gain=to_gain(args.tau), law=PoissonLaw(args.mean),
                    sample_size=args.size, repeats=args.repeats, seed=args.seed)
    result = run_experiment(cfg, METHODS)

    print(f"gain {cfg.gain} ({float(cfg.gain):g}), Poisson mean {args.mean}, "
          f"{args.size} samples x {args.repeats} repeats, seed {args.seed}")
    header = f"{'method':<16}{'mean':>9}{'stddev':>9}{'bias':>9}{'compat':>8}{'fail':>6}"
    print(header)
    print("-" * len(header))
    for method in METHODS:
        s = result.summary(method)
        print(f"{method:<16}{s.mean:>9.4f}{s.stddev:>9.4f}{s.bias:>+9.4f}"
              f"{s.compatible_rate:>8.2f}{s.failures:>6d}")

    if args.csv:
        Path(args.csv).write_text(experiment_to_csv(result))
        print(f"\nwrote {args.csv}")


if __name__ == "__main__":
    main()
