"""Shared fixtures: the two classic 4-channel sorting networks, known-good
sorting network constructions, random generators, and a list-based reference
evaluator kept deliberately independent of the bitset production code."""

from __future__ import annotations

import itertools
import random

import pytest

# The two 6-comparator sorting networks on 4 channels used throughout the
# tests (0-based, converted once from their usual 1-based picture form).
NET_A = ((0, 1), (2, 3), (0, 3), (0, 2), (1, 3), (1, 2))
NET_B = ((0, 1), (2, 3), (1, 2), (0, 1), (2, 3), (1, 2))

# Relabeling that makes NET_A and NET_B equivalent: (0 2)(1 3) as an image list.
EQUIV_IMAGE = (2, 3, 0, 1)


def bubble_network(n: int) -> tuple[tuple[int, int], ...]:
    """Adjacent-swap sorting network with n(n-1)/2 comparators."""
    comps = []
    for sweep in range(n - 1):
        for q in range(n - 1 - sweep):
            comps.append((q, q + 1))
    return tuple(comps)


# Reference evaluator (independent oracle): plain list simulation -------------

def ref_apply(c, bits):
    i, j = c
    out = list(bits)
    if out[i] > out[j]:
        out[i], out[j] = out[j], out[i]
    return out


def ref_run(net, bits):
    out = list(bits)
    for c in net:
        out = ref_apply(c, out)
    return out


def ref_outputs(n, net):
    """Set of output bit-tuples over all 2**n inputs."""
    return {tuple(ref_run(net, bits)) for bits in itertools.product((0, 1), repeat=n)}


def ref_is_sorted(bits):
    return all(bits[t] <= bits[t + 1] for t in range(len(bits) - 1))


def bits_to_int(bits) -> int:
    x = 0
    for i, b in enumerate(bits):
        if b:
            x |= 1 << i
    return x


def int_to_bits(n: int, x: int) -> tuple[int, ...]:
    return tuple((x >> i) & 1 for i in range(n))


def ref_output_ints(n, net) -> set[int]:
    return {bits_to_int(bits) for bits in ref_outputs(n, net)}


# Random generators ------------------------------------------------------------

def random_standard_network(rng: random.Random, n: int, k: int):
    comps = [(i, j) for i in range(n) for j in range(i + 1, n)]
    if not comps:
        return ()
    return tuple(rng.choice(comps) for _ in range(k))


def random_generalized_network(rng: random.Random, n: int, k: int):
    out = []
    for _ in range(k):
        i = rng.randrange(n)
        j = rng.randrange(n - 1)
        if j >= i:
            j += 1
        out.append((i, j))
    return tuple(out)


def random_image(rng: random.Random, n: int):
    image = list(range(n))
    rng.shuffle(image)
    return tuple(image)


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)


def sorting_network_corpus(max_n: int = 6):
    """Known sorting networks, one list of (n, net) pairs."""
    corpus = [(4, NET_A), (4, NET_B)]
    for n in range(1, max_n + 1):
        corpus.append((n, bubble_network(n)))
    return corpus
