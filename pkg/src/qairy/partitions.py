"""Integer partitions, the lambda(i) function and lambda-good index sets."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping

__all__ = [
    "Partition",
    "LambdaIndexSet",
    "partitions_of",
    "lambda_of",
    "lambda_profile",
    "lambda_good_set",
    "find_partition_with_profile",
]


@dataclass(frozen=True)
class Partition:
    parts: tuple[int, ...]

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        if not parts:
            raise ValueError("a partition needs at least one part")
        if any(p < 1 for p in parts):
            raise ValueError(f"parts must be positive: {parts}")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError(f"parts must be weakly decreasing: {parts}")
        object.__setattr__(self, "parts", parts)

    @property
    def r(self) -> int:
        return sum(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def to_json(self) -> list[int]:
        return list(self.parts)

    def __str__(self) -> str:
        return "+".join(map(str, self.parts))


@dataclass(frozen=True)
class LambdaIndexSet:
    """Mode indices (i, m) with 1 <= i <= r and m >= bounds[i]."""

    r: int
    bounds: Mapping[int, int]

    def __contains__(self, key) -> bool:
        i, m = key
        return 1 <= i <= self.r and m >= self.bounds[i]

    def as_tuple(self) -> tuple[int, ...]:
        return tuple(self.bounds[i] for i in range(1, self.r + 1))


def partitions_of(r: int, max_part: int | None = None) -> Iterator[Partition]:
    """All partitions of r in decreasing lexicographic order."""
    if r < 1:
        return
    max_part = r if max_part is None else min(max_part, r)

    def rec(rest, cap):
        if rest == 0:
            yield ()
            return
        for first in range(min(rest, cap), 0, -1):
            for tail in rec(rest - first, first):
                yield (first,) + tail

    for parts in rec(r, max_part):
        yield Partition(parts)


def lambda_of(p: Partition, i: int) -> int:
    """Smallest s with lambda_1 + ... + lambda_s >= i."""
    if not 1 <= i <= p.r:
        raise ValueError(f"index {i} outside 1..{p.r}")
    total = 0
    for s, part in enumerate(p.parts, start=1):
        total += part
        if total >= i:
            return s
    raise AssertionError("unreachable")


def lambda_profile(p: Partition) -> tuple[int, ...]:
    return tuple(lambda_of(p, i) for i in range(1, p.r + 1))


def lambda_good_set(p: Partition) -> LambdaIndexSet:
    return LambdaIndexSet(p.r, {i: i - lambda_of(p, i) for i in range(1, p.r + 1)})


def find_partition_with_profile(r: int, profile: Mapping[int, int]) -> Partition | None:
    """Exhaustive search for a partition of r whose lambda-profile is ``profile``.

    Returns None when no partition matches; among several matches the
    lexicographically largest is returned (partitions are scanned in
    decreasing order).
    """
    target = tuple(profile[i] for i in range(1, r + 1))
    if any(b < a for a, b in zip(target, target[1:])):
        return None
    if any(v < 1 or v > i for i, v in enumerate(target, start=1)):
        return None
    for p in partitions_of(r):
        if lambda_profile(p) == target:
            return p
    return None
