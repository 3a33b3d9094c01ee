"""Figure builders: each one writes its underlying data as CSV plus an SVG.

Every builder takes an output directory and (where randomness is involved)
a seed, and returns the list of files it wrote.  The CSVs are the real
product; the SVGs are quick matplotlib renderings of the same arrays.
"""

from __future__ import annotations

import csv
from fractions import Fraction
from pathlib import Path
from typing import Callable, Optional, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .bounds import density_bound
from .compat import enumerate_compatible_set, largest_compatible_interval
from .estimators import double_poisson_mle, fourier_estimate, regression_estimate
from .lattice import build_empirical_lattice, lattice_prefix
from .simulate import (
    PoissonLaw,
    SimConfig,
    fraction_str,
    kde,
    precision_sweep,
    rng_for_repeat,
    run_experiment,
    sample_poisson,
)

# A small dataset used across the expository figures: 15 draws from the
# gain-1.32 / Poisson(5.5) model, kept literal so the figures are stable.
EXAMPLE_SAMPLE = (6, 6, 11, 5, 3, 5, 2, 6, 5, 13, 2, 7, 7, 7, 6)
EXAMPLE_SET = tuple(sorted(set(EXAMPLE_SAMPLE)))
EXAMPLE_GAIN = Fraction(33, 25)
EXAMPLE_COUNT_MEAN = 5.5


def _write_csv(path: Path, header: Sequence[str], rows: Sequence[Sequence]) -> Path:
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([repr(v) if isinstance(v, float) else str(v) for v in row])
    return path


def _complete_reference_interval(index_count: int = 13):
    """Scan estimate from the gap-free dataset floor(1.32 * 1..index_count)."""
    data = [(EXAMPLE_GAIN.numerator * k) // EXAMPLE_GAIN.denominator
            for k in range(1, index_count + 1)]
    return largest_compatible_interval(build_empirical_lattice(data))


def fig1(outdir: Path, seed: Optional[int] = None) -> list[Path]:
    """Observed set against the lattices of every compatible gain interval."""
    lat = build_empirical_lattice(EXAMPLE_SET)
    cs = enumerate_compatible_set(lat)
    written = []

    rows = [[i, fraction_str(iv.lo), fraction_str(iv.hi), float(iv.lo), float(iv.hi)]
            for i, iv in enumerate(cs.intervals)]
    written.append(_write_csv(outdir / "fig1_intervals.csv",
                              ["interval", "lo", "hi", "lo_float", "hi_float"], rows))

    lattice_rows = []
    for i, iv in enumerate(cs.intervals):
        t = iv.midpoint
        for x in lattice_prefix(t, lat.max_value):
            lattice_rows.append([i, fraction_str(t), x])
    written.append(_write_csv(outdir / "fig1_lattices.csv",
                              ["interval", "gain", "value"], lattice_rows))

    fig, ax = plt.subplots(figsize=(7, 4))
    for iv in cs.intervals:
        ax.axhspan(float(iv.lo), float(iv.hi), color="0.9", zorder=0)
        t = iv.midpoint
        pts = list(lattice_prefix(t, lat.max_value))
        ax.plot(pts, [float(t)] * len(pts), "o", ms=4, color="C0")
    ax.plot(lat.values, [0.97] * len(lat), "ks", ms=5, label="observed")
    ax.set_xlabel("value")
    ax.set_ylabel("gain")
    ax.set_title("lattices of compatible gains vs the observed set")
    ax.legend(loc="upper left")
    svg = outdir / "fig1.svg"
    fig.savefig(svg)
    plt.close(fig)
    written.append(svg)
    return written


def fig2(outdir: Path, seed: Optional[int] = None) -> list[Path]:
    """Same observed set against a few incompatible gains, missing points marked."""
    lat = build_empirical_lattice(EXAMPLE_SET)
    gains = (Fraction(6, 5), Fraction(29, 20), Fraction(3, 2))
    written = []

    rows = []
    for t in gains:
        members = set(lattice_prefix(t, lat.max_value))
        for x in lat.values:
            rows.append([fraction_str(t), x, "true" if x in members else "false"])
    written.append(_write_csv(outdir / "fig2_membership.csv",
                              ["gain", "value", "on_lattice"], rows))

    fig, ax = plt.subplots(figsize=(7, 4))
    for t in gains:
        y = float(t)
        pts = list(lattice_prefix(t, lat.max_value))
        ax.plot(pts, [y] * len(pts), "o", ms=4, color="C0")
        missing = [x for x in lat.values if x not in set(pts)]
        ax.plot(missing, [y] * len(missing), "rx", ms=8)
    ax.plot(lat.values, [1.05] * len(lat), "ks", ms=5, label="observed")
    ax.set_xlabel("value")
    ax.set_ylabel("gain")
    ax.set_title("incompatible gains: observations falling off the lattice")
    ax.legend(loc="upper left")
    svg = outdir / "fig2.svg"
    fig.savefig(svg)
    plt.close(fig)
    written.append(svg)
    return written


def fig3(outdir: Path, seed: Optional[int] = None) -> list[Path]:
    """Interval length of the scan estimate across gains in (1, 2], fixed indices."""
    gains = [Fraction(j, 100) for j in range(101, 201)]
    sweep = precision_sweep(gains, index_count=10)
    written = []
    rows = [[fraction_str(g), float(g), fraction_str(est.interval.lo),
             fraction_str(est.interval.hi), float(est.interval.length)]
            for g, est in sweep]
    written.append(_write_csv(outdir / "fig3_sweep.csv",
                              ["gain", "gain_float", "lo", "hi", "length"], rows))

    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot([float(g) for g, _ in sweep],
            [float(e.interval.length) for _, e in sweep], ".-", ms=3, lw=0.7)
    ax.set_xlabel("true gain")
    ax.set_ylabel("interval length")
    ax.set_title("scan precision across gains, indices 1..10")
    svg = outdir / "fig3.svg"
    fig.savefig(svg)
    plt.close(fig)
    written.append(svg)
    return written


def _estimate_kde_figure(outdir: Path, tag: str, method: str, seed: int,
                         repeats: int, sample_size: int, title: str) -> list[Path]:
    """Shared body for fig4/fig9: repeat the small-sample model, smooth estimates."""
    cfg = SimConfig(gain=EXAMPLE_GAIN, law=PoissonLaw(EXAMPLE_COUNT_MEAN),
                    sample_size=sample_size, repeats=repeats, seed=seed)
    result = run_experiment(cfg, [method])
    pts = [e.point_float for e in result.estimates if e.ok]
    if not pts:
        raise RuntimeError(f"every repeat failed for method {method}")
    curve = kde(pts)
    ref = _complete_reference_interval()
    written = []

    written.append(_write_csv(
        outdir / f"{tag}_estimates.csv", ["repeat_index", "estimate"],
        [[e.repeat_index, e.point_float] for e in result.estimates if e.ok]))
    written.append(_write_csv(
        outdir / f"{tag}_kde.csv", ["grid", "density"],
        [[float(g), float(d)] for g, d in zip(curve.grid, curve.density)]))

    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot(curve.grid, curve.density, lw=1.5)
    ax.plot(pts, np.zeros(len(pts)), "|", color="0.4", ms=12)
    ax.axvspan(float(ref.interval.lo), float(ref.interval.hi), color="C2",
               alpha=0.25, label="interval from complete data")
    ax.axvline(float(EXAMPLE_GAIN), color="k", lw=0.8, ls="--", label="true gain")
    ax.set_xlabel("estimated gain")
    ax.set_ylabel("density")
    ax.set_title(title)
    ax.legend()
    svg = outdir / f"{tag}.svg"
    fig.savefig(svg)
    plt.close(fig)
    written.append(svg)
    return written


def fig4(outdir: Path, seed: int, repeats: int = 200,
         sample_size: int = 15) -> list[Path]:
    """Distribution of scan estimates over small samples."""
    return _estimate_kde_figure(outdir, "fig4", "compat", seed, repeats,
                                sample_size,
                                "scan estimates, small samples")


def _dispersion_comparison(outdir: Path, tag: str, gain: Fraction,
                           count_mean: float, seed: int, repeats: int,
                           sample_size: int, title: str,
                           mark_interval: bool) -> list[Path]:
    """Dispersion-MLE gain estimates with and without the floor step."""
    num, den = gain.numerator, gain.denominator
    floored = []
    unfloored = []
    for rep in range(repeats):
        rng = rng_for_repeat(seed, rep)
        counts = sample_poisson(count_mean, sample_size, rng)
        x = (counts * num) // den
        y = counts * (num / den)
        floored.append(double_poisson_mle(x).gain)
        unfloored.append(double_poisson_mle(y).gain)

    written = []
    written.append(_write_csv(
        outdir / f"{tag}_estimates.csv",
        ["repeat_index", "gain_floored", "gain_no_floor"],
        [[i, a, b] for i, (a, b) in enumerate(zip(floored, unfloored))]))

    kf = kde(floored)
    ku = kde(unfloored)
    written.append(_write_csv(
        outdir / f"{tag}_kde.csv", ["series", "grid", "density"],
        [["floored", float(g), float(d)] for g, d in zip(kf.grid, kf.density)]
        + [["no_floor", float(g), float(d)] for g, d in zip(ku.grid, ku.density)]))

    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot(kf.grid, kf.density, lw=1.5, label="floored")
    ax.plot(ku.grid, ku.density, lw=1.5, ls=":", label="no floor")
    ax.axvline(float(gain), color="k", lw=0.8, ls="--", label="true gain")
    if mark_interval:
        ref = _complete_reference_interval()
        ax.axvspan(float(ref.interval.lo), float(ref.interval.hi), color="C2",
                   alpha=0.25, label="interval from complete data")
    ax.set_xlabel("estimated gain")
    ax.set_ylabel("density")
    ax.set_title(title)
    ax.legend()
    svg = outdir / f"{tag}.svg"
    fig.savefig(svg)
    plt.close(fig)
    written.append(svg)
    return written


def fig5(outdir: Path, seed: int, repeats: int = 2000,
         sample_size: int = 500) -> list[Path]:
    """Dispersion MLE at a large count mean: flooring changes nothing."""
    return _dispersion_comparison(outdir, "fig5", Fraction(3), 100.0, seed,
                                  repeats, sample_size,
                                  "dispersion MLE, gain 3, count mean 100",
                                  mark_interval=False)


def fig6(outdir: Path, seed: int, repeats: int = 2000,
         sample_size: int = 500) -> list[Path]:
    """Dispersion MLE at a small count mean: flooring biases the gain upward."""
    return _dispersion_comparison(outdir, "fig6", EXAMPLE_GAIN,
                                  EXAMPLE_COUNT_MEAN, seed, repeats, sample_size,
                                  "dispersion MLE, gain 1.32, count mean 5.5",
                                  mark_interval=False)


def fig7(outdir: Path, seed: int, repeats: int = 2000,
         sample_size: int = 500) -> list[Path]:
    """fig6 with the exact interval from complete data overlaid for contrast."""
    return _dispersion_comparison(outdir, "fig7", EXAMPLE_GAIN,
                                  EXAMPLE_COUNT_MEAN, seed, repeats, sample_size,
                                  "dispersion MLE vs the exact interval",
                                  mark_interval=True)


def fig8(outdir: Path, seed: Optional[int] = None) -> list[Path]:
    """Magnitude spectrum of a complete observed set, in frequency and period."""
    data = [(EXAMPLE_GAIN.numerator * k) // EXAMPLE_GAIN.denominator
            for k in range(1, 11)]
    lat = build_empirical_lattice(data)
    fit = fourier_estimate(lat)
    bound = density_bound(lat)
    written = []

    rows = [[j, float(f), float(m)]
            for j, (f, m) in enumerate(zip(fit.frequencies, fit.magnitudes))]
    written.append(_write_csv(outdir / "fig8_spectrum.csv",
                              ["bin", "frequency", "magnitude"], rows))

    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 4))
    ax1.stem(fit.frequencies, fit.magnitudes, basefmt=" ")
    ax1.axvline(1.0 / float(bound), color="r", lw=0.8, ls="--",
                label="density-bound frequency")
    ax1.set_xlabel("frequency")
    ax1.set_ylabel("|DFT|")
    ax1.legend(fontsize=8)

    periods = [fit.length / j for j in range(1, fit.length)]
    ax2.stem(periods, fit.magnitudes[1:], basefmt=" ")
    ax2.axvline(float(bound), color="r", lw=0.8, ls="--", label="density bound")
    ax2.axvline(float(fit.gain), color="C2", lw=0.8, label="peak period")
    ax2.set_xlim(0, 4)
    ax2.set_xlabel("period")
    ax2.legend(fontsize=8)
    fig.suptitle("spectrum of the observed-value indicator")
    svg = outdir / "fig8.svg"
    fig.savefig(svg)
    plt.close(fig)
    written.append(svg)
    return written


def fig9(outdir: Path, seed: int, repeats: int = 200,
         sample_size: int = 15) -> list[Path]:
    """Distribution of spectral estimates over small samples."""
    return _estimate_kde_figure(outdir, "fig9", "fourier", seed, repeats,
                                sample_size,
                                "spectral estimates, small samples")


def fig10(outdir: Path, seed: Optional[int] = None) -> list[Path]:
    """Rank regression with one lattice point unobserved, vs recovered indices."""
    full = [(EXAMPLE_GAIN.numerator * k) // EXAMPLE_GAIN.denominator
            for k in range(1, 11)]
    missing_index = 4
    data = [x for k, x in enumerate(full, start=1) if k != missing_index]
    lat = build_empirical_lattice(data)

    naive = regression_estimate(lat)
    scan = largest_compatible_interval(lat)
    recovered = dict(scan.indices)
    values = lat.nonzero_values
    rec_ranks = np.array([recovered[x] for x in values], dtype=float)
    mids = np.asarray(values, dtype=float) + 0.5
    rec_slope = float((rec_ranks * mids).sum() / (rec_ranks * rec_ranks).sum())

    written = []
    rows = [[x, r, int(recovered[x])]
            for x, r in zip(values, naive.indices)]
    written.append(_write_csv(outdir / "fig10_points.csv",
                              ["value", "naive_rank", "recovered_index"], rows))
    written.append(_write_csv(outdir / "fig10_slopes.csv",
                              ["fit", "slope"],
                              [["naive_rank", naive.slope],
                               ["recovered_index", rec_slope],
                               ["true_gain", float(EXAMPLE_GAIN)]]))

    fig, ax = plt.subplots(figsize=(7, 4))
    ax.errorbar(naive.indices, mids, yerr=0.5, fmt="o", ms=4, capsize=2,
                label="naive rank")
    ax.errorbar(rec_ranks, mids, yerr=0.5, fmt="s", ms=4, capsize=2,
                label="recovered index")
    ks = np.array([0, max(naive.indices[-1], rec_ranks[-1]) + 1])
    ax.plot(ks, naive.slope * ks, lw=1, color="C0")
    ax.plot(ks, rec_slope * ks, lw=1, color="C1")
    ax.plot(ks, float(EXAMPLE_GAIN) * ks, lw=0.8, ls="--", color="k",
            label="true gain")
    ax.set_xlabel("index")
    ax.set_ylabel("value + 1/2")
    ax.set_title("regression through the origin with one value unobserved")
    ax.legend()
    svg = outdir / "fig10.svg"
    fig.savefig(svg)
    plt.close(fig)
    written.append(svg)
    return written


FIGURES: dict[str, Callable[..., list[Path]]] = {
    "fig1": fig1, "fig2": fig2, "fig3": fig3, "fig4": fig4, "fig5": fig5,
    "fig6": fig6, "fig7": fig7, "fig8": fig8, "fig9": fig9, "fig10": fig10,
}

RANDOM_FIGURES = frozenset({"fig4", "fig5", "fig6", "fig7", "fig9"})


def make_figures(tags: Sequence[str], outdir: Path,
                 seed: Optional[int] = None, **overrides) -> list[Path]:
    """Build the named figures into outdir; seed is required for the random ones."""
    unknown = [t for t in tags if t not in FIGURES]
    if unknown:
        raise ValueError(f"unknown figure tags: {', '.join(unknown)}")
    outdir.mkdir(parents=True, exist_ok=True)
    written = []
    for tag in tags:
        if tag in RANDOM_FIGURES:
            if seed is None:
                raise ValueError(f"{tag} is randomized and needs a seed")
            written.extend(FIGURES[tag](outdir, seed, **overrides))
        else:
            written.extend(FIGURES[tag](outdir))
    return written
