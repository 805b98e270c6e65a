"""Permutations of channel labels and network standardization.

A permutation is stored densely as its image tuple (``image[i]`` is where
channel ``i``'s value goes).  Oracle-supplied image lists are untrusted, so
validation returns a verdict instead of raising.

The action on vectors is the push-forward: the value on channel ``i`` moves
to channel ``image[i]``.  Under this convention relabeling commutes with
evaluation: the outputs of a relabeled network are the relabeled outputs
(covered by tests, including the round trip with the inverse).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .networks import Comparator, Network, OutputSet

ImageList = tuple[int, ...]


@dataclass(frozen=True)
class Permutation:
    n: int
    image: ImageList

    def __call__(self, i: int) -> int:
        return self.image[i]


@dataclass(frozen=True)
class InvalidImageList:
    """Verdict for an image list that is not a permutation."""

    reason: str  # "length" | "range" | "duplicate"


def validate_image_list(n: int, raw: Sequence[int]) -> Permutation | InvalidImageList:
    """Decide whether an untrusted image list is a permutation of {0..n-1}."""
    if len(raw) != n:
        return InvalidImageList("length")
    seen = 0
    for v in raw:
        if not isinstance(v, int) or not 0 <= v < n:
            return InvalidImageList("range")
        bit = 1 << v
        if seen & bit:
            return InvalidImageList("duplicate")
        seen |= bit
    return Permutation(n, tuple(raw))


def identity(n: int) -> Permutation:
    return Permutation(n, tuple(range(n)))


def inverse(p: Permutation) -> Permutation:
    inv = [0] * p.n
    for i, v in enumerate(p.image):
        inv[v] = i
    return Permutation(p.n, tuple(inv))


def transposition(n: int, i: int, j: int) -> Permutation:
    """The permutation exchanging ``i`` and ``j``; requires i != j."""
    if i == j:
        raise ValueError("transposition needs two distinct channels")
    if not (0 <= i < n and 0 <= j < n):
        raise ValueError(f"transposition ({i},{j}) out of range for n={n}")
    image = list(range(n))
    image[i], image[j] = j, i
    return Permutation(n, tuple(image))


def apply_to_vector(p: Permutation, x: int) -> int:
    """Relabel a vector: the bit on channel i lands on channel image[i]."""
    y = 0
    for i, v in enumerate(p.image):
        y |= ((x >> i) & 1) << v
    return y


def apply_to_output_set(p: Permutation, s: OutputSet) -> OutputSet:
    if s.n != p.n:
        raise ValueError(f"permutation on {p.n} channels applied to {s.n}-channel set")
    mask = 0
    for x in s.members():
        mask |= 1 << apply_to_vector(p, x)
    return OutputSet(s.n, mask)


def apply_to_network(p: Permutation, net: Sequence[Comparator]) -> Network:
    """Comparator-wise relabeling; the result is generally generalized."""
    image = p.image
    return tuple((image[i], image[j]) for i, j in net)


def standardize(net: Sequence[Comparator]) -> Network:
    """Rewrite a generalized network into a standard one of the same size.

    Scans left to right; each comparator ``(i, j)`` with ``i > j`` is flipped
    to ``(j, i)`` and the labels ``i`` and ``j`` are exchanged in the entire
    remaining suffix.  The prefix already emitted stays standard, so the
    procedure terminates after one pass.
    """
    rest = list(net)
    result: list[Comparator] = []
    for pos, (i, j) in enumerate(rest):
        if i == j:
            raise ValueError(f"comparator ({i},{j}) connects a channel to itself")
        if i < j:
            result.append((i, j))
            continue
        result.append((j, i))
        for t in range(pos + 1, len(rest)):
            a, b = rest[t]
            rest[t] = (_swap_label(a, i, j), _swap_label(b, i, j))
    return tuple(result)


def _swap_label(c: int, i: int, j: int) -> int:
    if c == i:
        return j
    if c == j:
        return i
    return c


def format_image_list(image: Sequence[int]) -> str:
    """Bracketed image list, e.g. ``[2,1,0,3]``."""
    return "[" + ",".join(str(v) for v in image) + "]"


def parse_image_list(s: str) -> ImageList:
    """Strict inverse of :func:`format_image_list`; raises ValueError."""
    if len(s) < 2 or s[0] != "[" or s[-1] != "]":
        raise ValueError(f"not an image list literal: {s!r}")
    body = s[1:-1]
    if not body:
        return ()
    values = []
    for token in body.split(","):
        if not token.isdigit() or not token.isascii():
            raise ValueError(f"not a natural number: {token!r}")
        if len(token) > 1 and token[0] == "0":
            raise ValueError(f"leading zero in: {token!r}")
        values.append(int(token))
    return tuple(values)
