import math
from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quantgain.errors import EstimationError
from quantgain.lattice import (
    EmpiricalLattice,
    RationalInterval,
    build_empirical_lattice,
    is_compatible,
    lattice_contains,
    lattice_prefix,
    recover_count_distribution,
    recover_indices,
    to_gain,
)

EXAMPLE2 = (1, 2, 3, 5, 6, 7, 9, 10, 11, 13)  # floor(1.32 * k) for k = 1..10


def brute_lattice(gain: Fraction, max_value: int) -> set[int]:
    """Reference enumeration by walking indices; independent of the fast path."""
    out = set()
    k = 0
    while True:
        x = math.floor(gain * k)
        if x > max_value:
            return out
        out.add(x)
        k += 1


gains = st.fractions(min_value=Fraction(1, 4), max_value=4, max_denominator=40)
gains_above_one = st.fractions(min_value=1, max_value=4, max_denominator=40)


def test_to_gain_parses_exact_decimals():
    assert to_gain("1.32") == Fraction(33, 25)
    assert to_gain("33/25") == Fraction(33, 25)
    assert to_gain(2) == Fraction(2)
    assert to_gain(Fraction(7, 5)) == Fraction(7, 5)


def test_to_gain_rejects_floats_and_nonpositive():
    with pytest.raises(TypeError):
        to_gain(1.32)
    with pytest.raises(ValueError):
        to_gain("0")
    with pytest.raises(ValueError):
        to_gain("-2/3")


def test_build_sorts_and_dedupes():
    lat = build_empirical_lattice([3, 1, 1, 0, 2, 3])
    assert lat.values == (0, 1, 2, 3)
    assert lat.max_value == 3
    assert lat.count_nonzero == 3
    assert lat.nonzero_values == (1, 2, 3)
    assert 2 in lat and 5 not in lat
    assert len(lat) == 4


def test_build_all_zero_sample():
    lat = build_empirical_lattice([0, 0, 0])
    assert lat.values == (0,)
    assert lat.count_nonzero == 0
    assert lat.nonzero_values == ()


def test_build_rejects_bad_input():
    with pytest.raises(EstimationError):
        build_empirical_lattice([])
    with pytest.raises(ValueError):
        build_empirical_lattice([1, -2])
    with pytest.raises(TypeError):
        build_empirical_lattice([1, 2.5])
    with pytest.raises(TypeError):
        build_empirical_lattice([True, 2])


def test_lattice_dataclass_validates():
    with pytest.raises(ValueError):
        EmpiricalLattice((3, 1))
    with pytest.raises(ValueError):
        EmpiricalLattice((1, 1, 2))


def test_interval_basics():
    iv = RationalInterval(Fraction(13, 10), Fraction(4, 3))
    assert not iv.is_empty
    assert iv.length == Fraction(1, 30)
    assert iv.midpoint == Fraction(79, 60)
    assert Fraction(13, 10) in iv
    assert Fraction(4, 3) not in iv
    empty = RationalInterval(Fraction(2), Fraction(1))
    assert empty.is_empty and empty.length == 0


def test_contains_examples():
    # 4/3 reaches every even number up to 8 ...
    for x in (0, 2, 4, 6, 8):
        assert lattice_contains("4/3", x)
    # ... while 1.2 misses 5 and 1.32 misses 4
    assert not lattice_contains("1.2", 5)
    assert not lattice_contains("1.32", 4)
    assert lattice_contains("1.32", 13)
    assert lattice_contains(1, 7)  # gain 1 reaches everything
    assert lattice_contains("7/2", 0)  # zero is always reachable


def test_compatibility_examples():
    ex2 = build_empirical_lattice(EXAMPLE2)
    assert is_compatible("132/100", ex2)
    assert not is_compatible("12/10", ex2)
    assert is_compatible("4/3", build_empirical_lattice([0, 2, 4, 6, 8]))


def test_prefix_examples():
    assert lattice_prefix("1.32", 13).values == (0,) + EXAMPLE2
    assert lattice_prefix(1, 4).values == (0, 1, 2, 3, 4)
    assert lattice_prefix(2, 8).values == (0, 2, 4, 6, 8)
    # below 1 the lattice is every integer
    assert lattice_prefix("1/2", 5).values == (0, 1, 2, 3, 4, 5)


@given(gain=gains, max_value=st.integers(min_value=0, max_value=60))
def test_prefix_matches_brute_force(gain, max_value):
    assert set(lattice_prefix(gain, max_value)) == brute_lattice(gain, max_value)


@given(gain=gains, x=st.integers(min_value=0, max_value=200))
def test_contains_matches_brute_force(gain, x):
    assert lattice_contains(gain, x) == (x in brute_lattice(gain, x))


@given(
    gain=gains_above_one,
    k2=st.integers(min_value=1, max_value=10_000),
    offset=st.integers(min_value=1, max_value=50),
)
def test_floor_map_injective_at_or_above_one(gain, k2, offset):
    k1 = max(0, k2 - offset)
    if k1 != k2:
        assert math.floor(gain * k1) != math.floor(gain * k2)


@given(gain=st.fractions(min_value=Fraction(1, 100), max_value=Fraction(99, 100),
                         max_denominator=100))
def test_floor_map_collides_below_one(gain):
    # k = 0 and k = 1 both land on 0
    assert math.floor(gain * 0) == math.floor(gain * 1) == 0


@settings(max_examples=60)
@given(gain=gains_above_one, max_value=st.integers(min_value=1, max_value=80))
def test_recover_round_trip(gain, max_value):
    lat = lattice_prefix(gain, max_value)
    for x, k in recover_indices(gain, lat):
        assert math.floor(gain * k) == x


def test_recover_identity_at_gain_one():
    lat = build_empirical_lattice([0, 3, 9])
    assert recover_indices(1, lat) == ((0, 0), (3, 3), (9, 9))


def test_recover_halving_at_gain_two():
    lat = build_empirical_lattice([0, 2, 4, 6, 8])
    assert recover_indices(2, lat) == ((0, 0), (2, 1), (4, 2), (6, 3), (8, 4))


def test_recover_examples():
    lat = build_empirical_lattice(EXAMPLE2)
    pairs = recover_indices("1.32", lat)
    assert pairs == tuple(zip(EXAMPLE2, range(1, 11)))


def test_recover_rejects_small_gain_and_off_lattice():
    lat = build_empirical_lattice([1, 2])
    with pytest.raises(EstimationError):
        recover_indices("1/2", lat)
    with pytest.raises(EstimationError, match="5"):
        recover_indices("1.2", build_empirical_lattice([1, 5]))


def test_count_distribution_examples():
    sample = (6, 6, 11, 5, 3, 5, 2, 6, 5, 13, 2, 7, 7, 7, 6)
    dist = recover_count_distribution("132/100", sample)
    assert dist == Counter({2: 2, 3: 1, 4: 3, 5: 4, 6: 3, 9: 1, 10: 1})
    assert sum(dist.values()) == len(sample)

    assert recover_count_distribution(2, [0, 0, 4]) == Counter({0: 2, 2: 1})

    uniform = recover_count_distribution("132/100", EXAMPLE2)
    assert uniform == Counter({k: 1 for k in range(1, 11)})


@settings(max_examples=60)
@given(gain=gains_above_one, max_value=st.integers(min_value=0, max_value=60))
def test_compatibility_is_subset_relation(gain, max_value):
    members = brute_lattice(gain, max_value)
    lat = EmpiricalLattice(tuple(sorted(members)))
    assert is_compatible(gain, lat)
    # adding any non-member breaks compatibility
    outsiders = sorted(set(range(max_value + 1)) - members)
    if outsiders:
        broken = EmpiricalLattice(tuple(sorted(members | {outsiders[0]})))
        assert not is_compatible(gain, broken)
