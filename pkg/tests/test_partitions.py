import pytest
from hypothesis import given, strategies as st

from qairy.partitions import (
    Partition,
    find_partition_with_profile,
    lambda_good_set,
    lambda_of,
    lambda_profile,
    partitions_of,
)

# number of partitions of r, r = 1..12
PARTITION_COUNTS = [1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77]


def test_lambda_examples():
    assert lambda_of(Partition((2, 1)), 1) == 1
    assert lambda_of(Partition((2, 1)), 3) == 2
    assert lambda_of(Partition((3, 2, 2)), 5) == 2
    with pytest.raises(ValueError):
        lambda_of(Partition((2, 1)), 4)


def test_lambda_good_examples():
    assert lambda_good_set(Partition((1, 1))).bounds == {1: 0, 2: 0}
    assert lambda_good_set(Partition((2, 1))).bounds == {1: 0, 2: 1, 3: 1}
    assert lambda_good_set(Partition((3,))).bounds == {1: 0, 2: 1, 3: 2}
    lg = lambda_good_set(Partition((2, 1)))
    assert (2, 1) in lg and (2, 0) not in lg and (4, 9) not in lg


def test_partition_validation():
    with pytest.raises(ValueError):
        Partition((1, 2))
    with pytest.raises(ValueError):
        Partition((2, 0))
    assert Partition((3, 1)).r == 4


def test_partition_counts():
    assert [len(list(partitions_of(r))) for r in range(1, 13)] == PARTITION_COUNTS
    parts = [p.parts for p in partitions_of(6)]
    assert parts == sorted(parts, reverse=True)


@pytest.mark.parametrize("n", [2, 3, 4, 6])
def test_profile_search_two_then_ones(n):
    profile = {1: 1}
    profile.update({1 + l: l for l in range(1, n)})
    assert find_partition_with_profile(n, profile) == Partition((2,) + (1,) * (n - 2))


@pytest.mark.parametrize("rho", [3, 5, 7])
def test_profile_search_four_parts(rho):
    a, b = (rho + 1) // 2, (rho - 1) // 2
    target = Partition((a, a, b, b))
    assert find_partition_with_profile(2 * rho, dict(enumerate(lambda_profile(target), 1))) == target


def test_profile_search_not_found():
    assert find_partition_with_profile(3, {1: 1, 2: 2, 3: 1}) is None
    assert find_partition_with_profile(3, {1: 2, 2: 2, 3: 2}) is None


def test_good_set_against_direct_definition():
    for r in range(1, 13):
        for p in partitions_of(r):
            prefix = [sum(p.parts[:k]) for k in range(1, len(p) + 1)]
            direct = {i: i - min(k for k, t in enumerate(prefix, 1) if t >= i) for i in range(1, r + 1)}
            assert lambda_good_set(p).bounds == direct


@given(st.integers(min_value=1, max_value=12), st.data())
def test_profile_roundtrip(r, data):
    p = data.draw(st.sampled_from(list(partitions_of(r))))
    prof = lambda_profile(p)
    assert list(prof) == sorted(prof)
    assert prof[-1] == len(p)
    found = find_partition_with_profile(r, dict(enumerate(prof, 1)))
    assert lambda_profile(found) == prof
