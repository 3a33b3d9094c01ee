"""Command-line interface.

Exit codes: 0 on success, 2 for unusable input (bad flags, unparseable
observations, missing seed), 3 when the input parsed fine but no estimate
exists for it.  Exact rationals cross the boundary as "p/q" strings next to
float renderings, never as floats alone.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from .bounds import bound_report
from .compat import enumerate_compatible_set, largest_compatible_interval, scan_step_budget
from .errors import EstimationError
from .estimators import double_poisson_mle, fourier_estimate, regression_estimate
from .figures import FIGURES, make_figures
from .lattice import build_empirical_lattice, recover_count_distribution
from .simulate import (
    ExplicitLaw,
    PoissonLaw,
    RangeLaw,
    SimConfig,
    experiment_to_csv,
    fraction_str,
    run_experiment,
)

CLI_METHODS = {
    "compat": "compat",
    "double-poisson": "double_poisson",
    "fourier": "fourier",
    "regression": "regression",
}


class CliInputError(ValueError):
    """Input that cannot be used: reported on stderr, exit code 2."""


def parse_gain(text: str) -> Fraction:
    """Parse "p/q" or a decimal string as an exact positive rational."""
    try:
        gain = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise CliInputError(f"cannot parse gain {text!r}: {exc}") from None
    if gain <= 0:
        raise CliInputError(f"gain must be positive, got {text}")
    return gain


def read_samples(source: str) -> list[int]:
    """Read whitespace/comma separated non-negative integers; "-" is stdin.

    A single leading non-numeric line is treated as a header and skipped;
    anything unparseable after that is an error naming the line.
    """
    if source == "-":
        name = "<stdin>"
        text = sys.stdin.read()
    else:
        name = source
        try:
            text = Path(source).read_text()
        except OSError as exc:
            raise CliInputError(f"cannot read {source}: {exc}") from None
    values: list[int] = []
    header_allowed = True
    for line_no, line in enumerate(text.splitlines(), start=1):
        tokens = line.replace(",", " ").split()
        if not tokens:
            continue
        try:
            row = [int(t) for t in tokens]
        except ValueError:
            if header_allowed:
                header_allowed = False
                continue
            raise CliInputError(
                f"{name}:{line_no}: not an integer observation: {line.strip()!r}"
            ) from None
        header_allowed = False
        for v in row:
            if v < 0:
                raise CliInputError(f"{name}:{line_no}: negative observation {v}")
        values.extend(row)
    if not values:
        raise CliInputError(f"{name}: no observations found")
    return values


def _interval_json(iv) -> tuple[Optional[list], Optional[list]]:
    if iv is None:
        return None, None
    return ([fraction_str(iv.lo), fraction_str(iv.hi)],
            [float(iv.lo), float(iv.hi)])


def cmd_estimate(args: argparse.Namespace) -> int:
    samples = read_samples(args.input)
    lattice = build_empirical_lattice(samples)
    method = args.method
    warnings: list[str] = []

    if method == "compat":
        fit = largest_compatible_interval(lattice)
        interval, interval_float = _interval_json(fit.interval)
        payload = {
            "method": method,
            "estimate": fraction_str(fit.point),
            "estimate_float": float(fit.point),
            "interval": interval,
            "interval_float": interval_float,
            "precision": fraction_str(fit.precision),
            "precision_float": float(fit.precision),
            "steps": fit.scan_steps,
            "diagnostics": {
                "indices": [list(p) for p in fit.indices],
                "scan_step_budget": scan_step_budget(lattice),
            },
            "warnings": warnings,
        }
    elif method == "double-poisson":
        dp = double_poisson_mle(samples)
        payload = {
            "method": method,
            "estimate": dp.gain,
            "estimate_float": dp.gain,
            "interval": None,
            "interval_float": None,
            "precision": None,
            "precision_float": None,
            "steps": None,
            "diagnostics": {
                "mean": dp.mean,
                "dispersion": dp.dispersion,
                "count_mean": dp.count_mean,
                "gain_stddev": dp.gain_stddev,
            },
            "warnings": warnings,
        }
    elif method == "fourier":
        ff = fourier_estimate(lattice)
        payload = {
            "method": method,
            "estimate": fraction_str(ff.gain),
            "estimate_float": float(ff.gain),
            "interval": None,
            "interval_float": None,
            "precision": None,
            "precision_float": None,
            "steps": None,
            "diagnostics": {
                "peak_bin": ff.peak_bin,
                "length": ff.length,
                "peak_frequency": ff.peak_frequency,
            },
            "warnings": warnings,
        }
    else:  # regression
        rf = regression_estimate(lattice)
        payload = {
            "method": method,
            "estimate": rf.slope,
            "estimate_float": rf.slope,
            "interval": None,
            "interval_float": None,
            "precision": None,
            "precision_float": None,
            "steps": None,
            "diagnostics": {
                "indices": list(rf.indices),
                "max_abs_residual": rf.max_abs_residual,
            },
            "warnings": warnings,
        }
    print(json.dumps(payload, indent=2))
    return 0


def cmd_bounds(args: argparse.Namespace) -> int:
    samples = read_samples(args.input)
    report = bound_report(build_empirical_lattice(samples))
    interval_part = None
    if report.interval is not None:
        interval_part = {
            "bound": fraction_str(report.interval),
            "bound_float": float(report.interval),
            "witness_run": list(report.best_run),
        }
    payload = {
        "pairwise": {
            "bound": fraction_str(report.pairwise),
            "bound_float": float(report.pairwise),
            "witness_pair": list(report.closest_pair),
        },
        "interval": interval_part,
        "density": {
            "bound": fraction_str(report.density),
            "bound_float": float(report.density),
            "max_value": report.density_stats[0],
            "nonzero_count": report.density_stats[1],
        },
        "best": fraction_str(report.best),
        "best_float": float(report.best),
    }
    print(json.dumps(payload, indent=2))
    return 0


def cmd_compat_set(args: argparse.Namespace) -> int:
    samples = read_samples(args.input)
    cs = enumerate_compatible_set(build_empirical_lattice(samples))
    payload = {
        "includes_unit": cs.includes_unit,
        "interval_count": len(cs.intervals),
        "intervals": [
            {
                "lo": fraction_str(iv.lo),
                "hi": fraction_str(iv.hi),
                "lo_float": float(iv.lo),
                "hi_float": float(iv.hi),
            }
            for iv in cs.intervals
        ],
    }
    print(json.dumps(payload, indent=2))
    return 0


def cmd_recover(args: argparse.Namespace) -> int:
    gain = parse_gain(args.tau)
    samples = read_samples(args.input)
    counts = recover_count_distribution(gain, samples)
    print("count,frequency")
    for k in sorted(counts):
        print(f"{k},{counts[k]}")
    return 0


def cmd_simulate(args: argparse.Namespace) -> int:
    gain = parse_gain(args.tau)
    if args.law == "poisson":
        if args.mean is None:
            raise CliInputError("--law poisson needs --mean")
        law = PoissonLaw(args.mean)
    elif args.law == "range":
        law = RangeLaw(start=args.start)
    else:  # explicit
        if not args.counts:
            raise CliInputError("--law explicit needs --counts")
        law = ExplicitLaw(tuple(args.counts))
    methods = [CLI_METHODS[m] for m in (args.estimators or ["compat"])]
    try:
        cfg = SimConfig(gain=gain, law=law, sample_size=args.size,
                        repeats=args.repeats, seed=args.seed)
    except ValueError as exc:
        raise CliInputError(str(exc)) from None
    text = experiment_to_csv(run_experiment(cfg, methods))
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_figures(args: argparse.Namespace) -> int:
    tags = list(FIGURES) if "all" in args.tags else args.tags
    try:
        written = make_figures(tags, Path(args.outdir), seed=args.seed)
    except ValueError as exc:
        raise CliInputError(str(exc)) from None
    for path in written:
        print(path)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quantgain",
        description="Estimate a detector gain from floor-quantized counts.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("estimate", help="point/interval estimate from observations")
    p.add_argument("input", nargs="?", default="-",
                   help="file of integers, or - for stdin (default)")
    p.add_argument("--method", choices=sorted(CLI_METHODS), default="compat")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("bounds", help="closed-form upper bounds on the gain")
    p.add_argument("input", nargs="?", default="-")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("compat-set", help="every compatible gain interval, exactly")
    p.add_argument("input", nargs="?", default="-")
    p.set_defaults(func=cmd_compat_set)

    p = sub.add_parser("recover", help="latent count frequencies for a known gain")
    p.add_argument("input", nargs="?", default="-")
    p.add_argument("--tau", required=True, metavar="GAIN",
                   help='gain as p/q or decimal string, e.g. "33/25" or "1.32"')
    p.set_defaults(func=cmd_recover)

    p = sub.add_parser("simulate", help="run seeded estimator comparisons, CSV out")
    p.add_argument("--tau", required=True, metavar="GAIN")
    p.add_argument("--law", choices=["poisson", "range", "explicit"],
                   default="poisson")
    p.add_argument("--mean", type=float, help="count mean for --law poisson")
    p.add_argument("--start", type=int, default=1, help="first index for --law range")
    p.add_argument("--counts", type=int, nargs="+", help="counts for --law explicit")
    p.add_argument("--size", type=int, required=True, help="samples per repeat")
    p.add_argument("--repeats", type=int, default=1)
    p.add_argument("--seed", type=int, help="required for random laws")
    p.add_argument("--estimators", nargs="+", choices=sorted(CLI_METHODS),
                   metavar="METHOD", help="default: compat")
    p.add_argument("--out", help="write CSV here instead of stdout")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("figures", help="write figure CSV+SVG bundles")
    p.add_argument("tags", nargs="+",
                   help=f"figure names ({', '.join(FIGURES)}) or 'all'")
    p.add_argument("--outdir", default="figures")
    p.add_argument("--seed", type=int, help="required for randomized figures")
    p.set_defaults(func=cmd_figures)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except EstimationError as exc:
        print(f"estimation failed: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
