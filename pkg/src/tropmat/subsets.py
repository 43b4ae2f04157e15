"""Bitmask helpers for subsets of a 0-based ground set.

Subsets are passed around as ``frozenset[int]`` at the API boundary and as
``int`` bitmasks internally.
"""
from __future__ import annotations

from itertools import combinations
from typing import Iterable, Iterator, Sequence

from .errors import IndexOutOfRange


def to_mask(A: Iterable[int] | int, n: int | None = None) -> int:
    if isinstance(A, int):
        m = A
        if m < 0 or (n is not None and m >> n):
            raise IndexOutOfRange(f"mask {m:#x} outside ground set of size {n}")
        return m
    m = 0
    for a in A:
        a = int(a)
        if a < 0 or (n is not None and a >= n):
            raise IndexOutOfRange(f"index {a} outside ground set of size {n}")
        m |= 1 << a
    return m


def members(mask: int) -> tuple[int, ...]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def to_set(mask: int) -> frozenset[int]:
    return frozenset(members(mask))


def popcount(mask: int) -> int:
    return mask.bit_count()


def full(n: int) -> int:
    return (1 << n) - 1


def lex_key(mask: int) -> tuple[int, ...]:
    """Sort key giving lexicographic order on sorted member tuples."""
    return members(mask)


def k_subsets(n: int, k: int) -> Iterator[int]:
    for c in combinations(range(n), k):
        m = 0
        for a in c:
            m |= 1 << a
        yield m


def all_subsets(n: int) -> range:
    return range(1 << n)


def indicator(A: Iterable[int] | int, n: int) -> tuple[int, ...]:
    """0/1 indicator vector 1^A of length n."""
    m = to_mask(A, n)
    return tuple((m >> i) & 1 for i in range(n))


def from_indicator(v: Sequence[int]) -> int:
    m = 0
    for i, x in enumerate(v):
        if x not in (0, 1):
            raise ValueError(f"not a 0/1 vector: {tuple(v)}")
        if x:
            m |= 1 << i
    return m


def weight(x: Sequence, A: Iterable[int] | int):
    """x(A) = sum of x_i over i in A."""
    m = to_mask(A, len(x))
    return sum(x[i] for i in members(m))


def relabel(mask: int, positions: Sequence[int]) -> int:
    """Map bit ``positions[j]`` of ``mask`` to bit j (order-preserving restriction)."""
    out = 0
    for j, p in enumerate(positions):
        if (mask >> p) & 1:
            out |= 1 << j
    return out


def embed(mask: int, positions: Sequence[int]) -> int:
    """Inverse of :func:`relabel`: bit j goes to bit ``positions[j]``."""
    out = 0
    j = 0
    while mask:
        if mask & 1:
            out |= 1 << positions[j]
        mask >>= 1
        j += 1
    return out
