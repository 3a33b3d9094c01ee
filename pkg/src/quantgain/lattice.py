"""Exact arithmetic for integer lattices of the form {floor(g*k) : k = 0, 1, 2, ...}.

Membership questions are decided with arbitrary-precision rationals.  The
constraint endpoints that matter downstream are ratios of small integers
(x/k and (x+1)/k), and float rounding at exactly those points is the failure
mode this module is built to avoid.
"""

from __future__ import annotations

from bisect import bisect_left
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence, Union

from .errors import EstimationError

GainLike = Union[Fraction, int, str]


def to_gain(value: GainLike) -> Fraction:
    """Convert a gain given as Fraction, int, or string to an exact Fraction.

    Decimal strings parse exactly: to_gain("1.32") == Fraction(33, 25).
    Floats are rejected on purpose; a binary float is almost never the
    rational the caller had in mind, so ask for a string instead.
    """
    if isinstance(value, float):
        raise TypeError("float gains are ambiguous; pass a Fraction or a decimal string")
    gain = Fraction(value)
    if gain <= 0:
        raise ValueError(f"gain must be positive, got {gain}")
    return gain


@dataclass(frozen=True)
class RationalInterval:
    """Half-open interval [lo, hi) with exact rational endpoints."""

    lo: Fraction
    hi: Fraction

    @property
    def is_empty(self) -> bool:
        return self.lo >= self.hi

    @property
    def length(self) -> Fraction:
        return self.hi - self.lo if self.hi > self.lo else Fraction(0)

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __contains__(self, value: object) -> bool:
        return self.lo <= value < self.hi  # type: ignore[operator]

    def intersect(self, other: "RationalInterval") -> "RationalInterval":
        return RationalInterval(max(self.lo, other.lo), min(self.hi, other.hi))

    def __str__(self) -> str:
        return f"[{self.lo}, {self.hi})"


@dataclass(frozen=True)
class EmpiricalLattice:
    """Sorted distinct observed values; the part of a sample the gain depends on.

    Repetitions carry no information about which gains can produce a sample,
    so estimators work from this set.  values must be strictly increasing
    non-negative integers.
    """

    values: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.values:
            raise EstimationError("cannot build an empirical lattice from no observations")
        if self.values[0] < 0:
            raise ValueError("observations must be non-negative integers")
        if any(b <= a for a, b in zip(self.values, self.values[1:])):
            raise ValueError("values must be strictly increasing")

    @property
    def max_value(self) -> int:
        return self.values[-1]

    @property
    def count_nonzero(self) -> int:
        """Number of distinct nonzero values (zero is reachable for every gain)."""
        return len(self.values) - (1 if self.values[0] == 0 else 0)

    @property
    def nonzero_values(self) -> tuple[int, ...]:
        return self.values[1:] if self.values[0] == 0 else self.values

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self) -> Iterator[int]:
        return iter(self.values)

    def __contains__(self, x: object) -> bool:
        if not isinstance(x, int):
            return False
        i = bisect_left(self.values, x)
        return i < len(self.values) and self.values[i] == x


def build_empirical_lattice(samples: Iterable[int]) -> EmpiricalLattice:
    """Sort and deduplicate raw observations into an EmpiricalLattice."""
    seen = set()
    for x in samples:
        if not isinstance(x, int) or isinstance(x, bool):
            raise TypeError(f"observations must be integers, got {x!r}")
        if x < 0:
            raise ValueError(f"observations must be non-negative, got {x}")
        seen.add(x)
    if not seen:
        raise EstimationError("cannot build an empirical lattice from no observations")
    return EmpiricalLattice(tuple(sorted(seen)))


def _member(num: int, den: int, x: int) -> bool:
    # x is in the lattice of num/den iff ceil(x*den/num) * (num/den) < x + 1,
    # i.e. the smallest index mapping at or above x actually floors to x.
    # Pure integer arithmetic; -(-a // b) is ceil(a / b) for positive b.
    if x == 0:
        return True
    return -(-(x * den) // num) * num < (x + 1) * den


def lattice_contains(gain: GainLike, x: int) -> bool:
    """Exact test of whether x = floor(gain * k) has a solution k >= 0."""
    g = to_gain(gain)
    if x < 0:
        raise ValueError("lattice values are non-negative")
    return _member(g.numerator, g.denominator, x)


def lattice_prefix(gain: GainLike, max_value: int) -> EmpiricalLattice:
    """All lattice members of the given gain that are <= max_value."""
    g = to_gain(gain)
    if max_value < 0:
        raise ValueError("max_value must be non-negative")
    num, den = g.numerator, g.denominator
    out = [0]
    k = 1
    while True:
        x = (num * k) // den
        if x > max_value:
            break
        if x != out[-1]:
            out.append(x)
        k += 1
    return EmpiricalLattice(tuple(out))


def is_compatible(gain: GainLike, lattice: EmpiricalLattice) -> bool:
    """True iff every observed value lies on the lattice of this gain."""
    g = to_gain(gain)
    num, den = g.numerator, g.denominator
    for x in lattice.values:
        if x and not _member(num, den, x):
            return False
    return True


def recover_indices(gain: GainLike, lattice: EmpiricalLattice) -> tuple[tuple[int, int], ...]:
    """Invert the observation map: pair each observed x with its index k.

    Only gains >= 1 are invertible (below 1 distinct indices can share a
    floor value, so there is nothing unique to recover).  For such gains the
    index of x is ceil(x / gain); x = 0 always maps back to k = 0.  Raises
    EstimationError if the gain is below 1 or some value is off-lattice.
    """
    g = to_gain(gain)
    if g < 1:
        raise EstimationError(f"indices are only identifiable for gains >= 1, got {g}")
    num, den = g.numerator, g.denominator
    pairs = []
    for x in lattice.values:
        if x == 0:
            pairs.append((0, 0))
            continue
        k = -(-(x * den) // num)
        if k * num >= (x + 1) * den:
            raise EstimationError(f"value {x} is not on the lattice of gain {g}")
        pairs.append((x, k))
    return tuple(pairs)


def recover_count_distribution(gain: GainLike, samples: Sequence[int]) -> Counter:
    """Map a raw sample back to latent indices and tally their frequencies.

    Returns a Counter {index: multiplicity}.  Unlike the estimators this
    keeps repetitions: the whole point is the empirical distribution of the
    latent counts, which the gain makes recoverable.
    """
    lattice = build_empirical_lattice(samples)
    lookup = dict(recover_indices(gain, lattice))
    return Counter(lookup[x] for x in samples)
