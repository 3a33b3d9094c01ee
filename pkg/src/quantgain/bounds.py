"""Closed-form upper bounds on the gain, read directly off the observed set.

Each bound exploits a different feature of the data: a single small gap
between observations, a run of consecutive integers, or the overall density
of distinct values below the maximum.  None of them requires a search; all
are exact rationals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import EstimationError
from .lattice import EmpiricalLattice


def pairwise_bound(lattice: EmpiricalLattice) -> Fraction:
    """1 + (smallest gap between distinct observations).

    Two lattice points less than the gain apart force the gain below their
    distance plus one.  Needs at least two distinct values.
    """
    if len(lattice) < 2:
        raise EstimationError("pairwise bound needs at least two distinct values")
    gap = min(b - a for a, b in zip(lattice.values, lattice.values[1:]))
    return Fraction(1 + gap)


def _consecutive_runs(values: tuple[int, ...]) -> list[tuple[int, int]]:
    """Maximal runs of consecutive integers, as (start, end) pairs with end > start."""
    runs = []
    start = values[0]
    prev = values[0]
    for v in values[1:]:
        if v == prev + 1:
            prev = v
            continue
        if prev > start:
            runs.append((start, prev))
        start = prev = v
    if prev > start:
        runs.append((start, prev))
    return runs


def interval_bound(lattice: EmpiricalLattice) -> Optional[Fraction]:
    """1 + 1/(y - x) minimized over maximal runs x..y of consecutive observations.

    A run of consecutive integers on the lattice pins the gain down hard:
    the longer the run, the closer the bound gets to 1.  Returns None when
    no two observations are consecutive.
    """
    runs = _consecutive_runs(lattice.values)
    if not runs:
        return None
    return min(1 + Fraction(1, y - x) for x, y in runs)


def density_bound(lattice: EmpiricalLattice) -> Fraction:
    """(max value + 1) / (number of distinct nonzero values).

    A gain g puts roughly (x+1)/g lattice points in [1, x], so observing n
    distinct nonzero values at or below x forces g < (x+1)/n.  This is the
    bound the scanning estimator starts from: no compatible gain sits at or
    above it.  Always exceeds 1.
    """
    n = lattice.count_nonzero
    if n == 0:
        raise EstimationError("density bound needs at least one nonzero value")
    return Fraction(lattice.max_value + 1, n)


@dataclass(frozen=True)
class BoundReport:
    """All three bounds plus the data features that produced them."""

    pairwise: Fraction
    interval: Optional[Fraction]
    density: Fraction
    # witnesses
    closest_pair: tuple[int, int]
    best_run: Optional[tuple[int, int]]
    density_stats: tuple[int, int]  # (max value, count of distinct nonzero values)

    @property
    def best(self) -> Fraction:
        candidates = [self.pairwise, self.density]
        if self.interval is not None:
            candidates.append(self.interval)
        return min(candidates)


def bound_report(lattice: EmpiricalLattice) -> BoundReport:
    """Compute every bound together with a witness for each."""
    if len(lattice) < 2:
        raise EstimationError("bound report needs at least two distinct values")

    pair = min(
        zip(lattice.values, lattice.values[1:]),
        key=lambda ab: ab[1] - ab[0],
    )
    pairwise = Fraction(1 + pair[1] - pair[0])

    runs = _consecutive_runs(lattice.values)
    if runs:
        run = min(runs, key=lambda xy: Fraction(1, xy[1] - xy[0]))
        interval = 1 + Fraction(1, run[1] - run[0])
    else:
        run = None
        interval = None

    density = density_bound(lattice)
    return BoundReport(
        pairwise=pairwise,
        interval=interval,
        density=density,
        closest_pair=pair,
        best_run=run,
        density_stats=(lattice.max_value, lattice.count_nonzero),
    )
