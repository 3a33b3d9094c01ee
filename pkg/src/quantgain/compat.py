"""Gain estimation by scanning for compatible values.

A gain t is compatible with an observed set when every observation lies on
the lattice of t.  The set of compatible gains above 1 is a finite union of
half-open intervals whose endpoints are ratios of observations and indices.
The estimator here finds the topmost interval by scanning down from the
density bound in steps fine enough that no interval can be skipped, then
closes the interval in one exact step from the recovered indices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import EstimationError
from .lattice import (
    EmpiricalLattice,
    GainLike,
    RationalInterval,
    _member,
    to_gain,
)
from .bounds import density_bound


@dataclass(frozen=True)
class CompatEstimate:
    """Result of the scanning estimator.

    point is the midpoint of the constraint interval, precision its
    half-length, so the true gain (when the data really came from a single
    gain with no missing values) lies within +-precision of point.
    """

    point: Fraction
    interval: RationalInterval
    precision: Fraction
    indices: tuple[tuple[int, int], ...]
    scan_steps: int


@dataclass(frozen=True)
class CompatibleSet:
    """Every compatible gain in [1, density bound), as disjoint sorted intervals.

    Gains at or below 1 are all compatible with any data (the lattice of
    such a gain is every integer, or with zero gaps all of them eventually);
    includes_unit records that convention rather than storing an infinite
    set.
    """

    intervals: tuple[RationalInterval, ...]
    includes_unit: bool = True

    @property
    def top_interval(self) -> RationalInterval:
        if not self.intervals:
            raise EstimationError("compatible set has no intervals above 1")
        return self.intervals[-1]

    def contains(self, gain: GainLike) -> bool:
        g = to_gain(gain)
        if g <= 1:
            return self.includes_unit
        return any(g in iv for iv in self.intervals)


def constraint_interval(indices: Iterable[tuple[int, int]]) -> RationalInterval:
    """Exact set of gains mapping each index k to its observed value x.

    floor(t*k) = x pins t to [x/k, (x+1)/k); intersecting over all pairs
    gives a half-open interval (possibly empty if the pairing was wrong).
    Pairs with k = 0 are only consistent for x = 0 and constrain nothing.
    """
    lo = Fraction(1)
    hi = None
    for x, k in indices:
        if k == 0:
            if x != 0:
                raise EstimationError(f"index 0 cannot produce the value {x}")
            continue
        if x < 0 or k < 0:
            raise EstimationError("indices and values must be non-negative")
        lo = max(lo, Fraction(x, k))
        edge = Fraction(x + 1, k)
        hi = edge if hi is None else min(hi, edge)
    if hi is None:
        raise EstimationError("no nonzero index pairs to constrain the gain")
    return RationalInterval(lo, hi)


def largest_compatible_interval(lattice: EmpiricalLattice) -> CompatEstimate:
    """Find the topmost compatible gain interval above 1 by downward scan.

    Starting just below the density bound B = (max+1)/n, candidate gains
    B - k/max^2 are tested in order.  Every compatible interval above 1 has
    length at least 1/max^2, so the first compatible candidate lands in the
    topmost interval; the interval itself is then recovered exactly from
    the indices at that candidate.  Needs at least two distinct nonzero
    values, otherwise the search space is the degenerate [1, B) itself.
    """
    if lattice.count_nonzero < 2:
        raise EstimationError(
            "scanning estimator needs at least two distinct nonzero values"
        )
    bound = density_bound(lattice)
    xhat = lattice.max_value
    x2 = xhat * xhat
    values = lattice.nonzero_values
    n = lattice.count_nonzero

    # Candidate gains are (num0 - k*n) / den for k = 1, 2, ...; all share
    # the denominator n * max^2, so compatibility runs on plain integers.
    num0 = (xhat + 1) * x2
    den = n * x2
    step = n

    k = 1
    num = num0 - step
    while num > den:  # candidate still above 1
        for x in values:
            if -(-(x * den) // num) * num >= (x + 1) * den:
                break
        else:
            t = Fraction(num, den)
            interval = _close_interval(t, lattice, bound)
            return CompatEstimate(
                point=interval.midpoint,
                interval=interval,
                precision=interval.length / 2,
                indices=_pairs_at(t, lattice),
                scan_steps=k,
            )
        k += 1
        num -= step
    raise EstimationError(
        "no compatible gain above 1; observations do not share a coarse lattice"
    )


def _pairs_at(gain: Fraction, lattice: EmpiricalLattice) -> tuple[tuple[int, int], ...]:
    num, den = gain.numerator, gain.denominator
    pairs = []
    for x in lattice.values:
        pairs.append((x, 0 if x == 0 else -(-(x * den) // num)))
    return tuple(pairs)


def _close_interval(
    gain: Fraction, lattice: EmpiricalLattice, bound: Fraction
) -> RationalInterval:
    interval = constraint_interval(_pairs_at(gain, lattice))
    # The density bound can cut the top constraint open when the largest
    # index is 1-off; never report gains at or above it.
    return RationalInterval(interval.lo, min(interval.hi, bound))


def enumerate_compatible_set(lattice: EmpiricalLattice) -> CompatibleSet:
    """All compatible gain intervals in [1, density bound), exactly.

    Compatibility of t can only flip where some x/k or (x+1)/k crosses t,
    so testing one point per gap between consecutive such breakpoints
    classifies the whole range.  Quadratic in the largest observation;
    meant as a reference and for small data, while the scan above stays
    fast on big values.
    """
    if lattice.count_nonzero < 1:
        raise EstimationError("enumeration needs at least one nonzero value")
    bound = density_bound(lattice)
    values = lattice.nonzero_values

    points = {Fraction(1), bound}
    for x in values:
        for k in range(1, x + 1):
            for num in (x, x + 1):
                cand = Fraction(num, k)
                if 1 <= cand <= bound:
                    points.add(cand)
    cuts = sorted(points)

    intervals: list[RationalInterval] = []
    for lo, hi in zip(cuts, cuts[1:]):
        num, den = lo.numerator, lo.denominator
        if all(_member(num, den, x) for x in values):
            if intervals and intervals[-1].hi == lo:
                intervals[-1] = RationalInterval(intervals[-1].lo, hi)
            else:
                intervals.append(RationalInterval(lo, hi))
    return CompatibleSet(intervals=tuple(intervals), includes_unit=True)


def scan_step_budget(lattice: EmpiricalLattice, k_missing: int = 0) -> int:
    """Upper bound on scan steps before the search hits a compatible gain.

    With no missing values the scan stops by the time candidates reach
    max/n, which is max^2 * (B - max/n) steps away from the density bound
    B.  Allowing k_missing unobserved lattice points below the maximum
    pushes the stopping line down to max/(n + k_missing).
    """
    if k_missing < 0:
        raise ValueError("k_missing must be non-negative")
    n = lattice.count_nonzero
    if n == 0:
        raise EstimationError("step budget needs at least one nonzero value")
    xhat = lattice.max_value
    gap = density_bound(lattice) - Fraction(xhat, n + k_missing)
    return math.ceil(xhat * xhat * gap)


def scan_step_budget_approx(lattice: EmpiricalLattice, k_missing: int = 0) -> float:
    """Float shortcut for scan_step_budget: gain^2 * max * (k_missing + 1/gain)
    evaluated at the density-style guess gain = max/n.  For sizing only.
    """
    if k_missing < 0:
        raise ValueError("k_missing must be non-negative")
    n = lattice.count_nonzero
    if n == 0:
        raise EstimationError("step budget needs at least one nonzero value")
    xhat = lattice.max_value
    tau = xhat / n
    return tau * tau * xhat * (k_missing + 1.0 / tau)
