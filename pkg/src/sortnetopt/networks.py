"""Comparator networks on binary vectors.

A comparator is a pair of distinct channel indices ``(i, j)``; applying it
swaps the values on channels ``i`` and ``j`` exactly when the value on ``i``
exceeds the value on ``j``.  A network is a sequence of comparators, and it
sorts when every 0/1 input comes out sorted (by the zero-one principle that
is enough for arbitrary ordered values).

Encoding: a binary vector on ``n`` channels is an unsigned int with channel 0
at the least significant bit.  A set of vectors is a ``2**n``-bit int whose
bit ``v`` says whether vector ``v`` is in the set.  This makes image
computation and subset tests word-parallel, which is what the whole search
lives on.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

Comparator = tuple[int, int]
Network = tuple[Comparator, ...]

# Hard cap so a single output set fits in 8 KiB (2**16 bits).
MAX_CHANNELS = 16


class CapacityError(ValueError):
    """Channel count exceeds the configured bitset capacity."""


def check_channel_count(n: int) -> None:
    if not 0 <= n <= MAX_CHANNELS:
        raise CapacityError(f"channel count {n} outside [0, {MAX_CHANNELS}]")


def validate_comparator(n: int, c: Comparator, standard: bool = False) -> None:
    """Reject out-of-range or degenerate comparators at construction time."""
    i, j = c
    if not (0 <= i < n and 0 <= j < n):
        raise ValueError(f"comparator {c} out of range for {n} channels")
    if i == j:
        raise ValueError(f"comparator {c} connects a channel to itself")
    if standard and i > j:
        raise ValueError(f"comparator {c} is not standard (needs i < j)")


def validate_network(n: int, net: Sequence[Comparator], standard: bool = False) -> None:
    check_channel_count(n)
    for c in net:
        validate_comparator(n, c, standard=standard)


def is_standard(net: Sequence[Comparator]) -> bool:
    return all(i < j for i, j in net)


def apply_comparator(c: Comparator, x: int) -> int:
    """Swap channels ``c=(i, j)`` of vector ``x`` iff bit i exceeds bit j."""
    i, j = c
    if (x >> i) & 1 and not (x >> j) & 1:
        return x ^ ((1 << i) | (1 << j))
    return x


def run_network(n: int, net: Sequence[Comparator], x: int) -> int:
    """Propagate vector ``x`` through ``net`` (left to right)."""
    validate_network(n, net)
    if not 0 <= x < (1 << n):
        raise ValueError(f"vector {x} is not a {n}-bit value")
    for c in net:
        x = apply_comparator(c, x)
    return x


@lru_cache(maxsize=None)
def _channel_mask(n: int, i: int) -> int:
    # Bitset of all n-bit vectors whose channel i is 1.
    period = 1 << (i + 1)
    block = ((1 << (1 << i)) - 1) << (1 << i)
    repeat = ((1 << (1 << n)) - 1) // ((1 << period) - 1)
    return block * repeat


@lru_cache(maxsize=None)
def _swap_selector(n: int, i: int, j: int) -> tuple[int, int]:
    # Vectors moved by comparator (i, j): channel i is 1, channel j is 0.
    # Swapping sends vector v to v - 2**i + 2**j, a constant distance.
    sel = _channel_mask(n, i) & ~_channel_mask(n, j)
    return sel, (1 << j) - (1 << i)


def apply_comparator_to_set(n: int, c: Comparator, members: int) -> int:
    """Image of a vector-set bitset under one comparator, word-parallel."""
    i, j = c
    sel, dist = _swap_selector(n, i, j)
    moved = members & sel
    if not moved:
        return members
    members ^= moved
    return members | (moved << dist if dist > 0 else moved >> -dist)


@lru_cache(maxsize=1 << 17)
def _output_mask_cached(n: int, net: Network) -> int:
    if not net:
        return (1 << (1 << n)) - 1
    return apply_comparator_to_set(n, net[-1], _output_mask_cached(n, net[:-1]))


def output_mask(n: int, net: Sequence[Comparator]) -> int:
    """Bitset of all vectors reachable from the 2**n inputs (unchecked).

    Memoized per prefix: the search extends known prefixes one comparator at
    a time, so nearly every call is one set operation on a cached parent.
    """
    return _output_mask_cached(n, tuple(net))


def never_swaps(n: int, c: Comparator, members: int) -> bool:
    """True iff comparator ``c`` leaves every vector in ``members`` alone."""
    return not members & _swap_selector(n, *c)[0]


@dataclass(frozen=True)
class OutputSet:
    """The set of vectors a network can emit, as a 2**n-bit bitset."""

    n: int
    mask: int

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __contains__(self, x: int) -> bool:
        return bool((self.mask >> x) & 1)

    def members(self) -> Iterator[int]:
        mask = self.mask
        while mask:
            low = mask & -mask
            yield low.bit_length() - 1
            mask ^= low

    def is_subset_of(self, other: "OutputSet") -> bool:
        return self.n == other.n and not self.mask & ~other.mask


def outputs(n: int, net: Sequence[Comparator]) -> OutputSet:
    """Set of outputs of ``net`` over all 2**n binary inputs."""
    validate_network(n, net)
    return OutputSet(n, output_mask(n, net))


@lru_cache(maxsize=None)
def sorted_vector(n: int, ones: int) -> int:
    """The sorted vector with the given number of 1s (1s on top channels)."""
    return ((1 << ones) - 1) << (n - ones)


@lru_cache(maxsize=None)
def sorted_mask(n: int) -> int:
    """Bitset of the n+1 sorted vectors."""
    mask = 0
    for w in range(n + 1):
        mask |= 1 << sorted_vector(n, w)
    return mask


def is_sorted(n: int, x: int) -> bool:
    """True iff no 1 precedes a 0 (channel 0 first)."""
    return bool((sorted_mask(n) >> x) & 1)


def is_sorting_network(n: int, net: Sequence[Comparator]) -> bool:
    """True iff every reachable output is sorted."""
    validate_network(n, net)
    return not output_mask(n, net) & ~sorted_mask(n)


def sort_integers(n: int, net: Sequence[Comparator], values: Sequence[int]) -> tuple[int, ...]:
    """Comparator semantics lifted to integers (property-testing aid only)."""
    validate_network(n, net)
    if len(values) != n:
        raise ValueError(f"expected {n} values, got {len(values)}")
    out = list(values)
    for i, j in net:
        if out[i] > out[j]:
            out[i], out[j] = out[j], out[i]
    return tuple(out)


def all_standard_comparators(n: int) -> tuple[Comparator, ...]:
    """All n(n-1)/2 standard comparators in lexicographic order."""
    check_channel_count(n)
    return tuple((i, j) for i in range(n) for j in range(i + 1, n))


# Textual literals (used by witness logs and the CLI) ------------------------

def format_vector(n: int, x: int) -> str:
    """Render a vector as a 0/1 string, channel 0 leftmost."""
    return "".join("1" if (x >> i) & 1 else "0" for i in range(n))


def parse_vector(s: str) -> tuple[int, int]:
    """Parse a 0/1 string into (n, vector)."""
    if not all(ch in "01" for ch in s):
        raise ValueError(f"not a binary vector: {s!r}")
    x = 0
    for i, ch in enumerate(s):
        if ch == "1":
            x |= 1 << i
    return len(s), x


def format_network(net: Sequence[Comparator]) -> str:
    """Bracketed comparator list, e.g. ``[0-1,2-3]``; empty net is ``[]``."""
    return "[" + ",".join(f"{i}-{j}" for i, j in net) + "]"


def _parse_nat(token: str) -> int:
    # No sign, no leading zeros (except "0" itself).
    if not token.isdigit() or not token.isascii():
        raise ValueError(f"not a natural number: {token!r}")
    if len(token) > 1 and token[0] == "0":
        raise ValueError(f"leading zero in: {token!r}")
    return int(token)


def parse_network(s: str) -> Network:
    """Strict inverse of :func:`format_network`; raises ValueError."""
    if len(s) < 2 or s[0] != "[" or s[-1] != "]":
        raise ValueError(f"not a network literal: {s!r}")
    body = s[1:-1]
    if not body:
        return ()
    comps = []
    for item in body.split(","):
        left, sep, right = item.partition("-")
        if not sep:
            raise ValueError(f"bad comparator {item!r} in {s!r}")
        comps.append((_parse_nat(left), _parse_nat(right)))
    return tuple(comps)
