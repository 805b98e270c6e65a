import io
import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_image, random_standard_network
from sortnetopt.search import SubsumptionWitness
from sortnetopt import witnesslog as wl


def random_witness(rng: random.Random, n: int, k: int) -> SubsumptionWitness:
    return SubsumptionWitness(
        k,
        random_standard_network(rng, n, k),
        random_standard_network(rng, n, k),
        random_image(rng, n),
    )


def random_log(rng: random.Random) -> wl.WitnessLog:
    n = rng.randint(2, 6)
    blocks = []
    for k in range(1, rng.randint(1, 6)):
        blocks.append(tuple(random_witness(rng, n, k) for _ in range(rng.randint(0, 5))))
    return wl.WitnessLog(n, tuple(blocks))


def test_serialize_empty_log():
    assert wl.serialize_log(4, []) == b"sortnet-witness v1 n=4\n"


def test_serialize_single_witness_exact_bytes():
    w = SubsumptionWitness(1, ((0, 1),), ((2, 3),), (2, 3, 0, 1))
    data = wl.serialize_log(4, [[w]])
    assert data == b"sortnet-witness v1 n=4\nK 1\nS [0-1] [2-3] [2,3,0,1]\n"


def test_serialize_rejects_misplaced_witness():
    w = SubsumptionWitness(2, ((0, 1),), ((2, 3),), (0, 1, 2, 3))
    with pytest.raises(ValueError):
        wl.serialize_log(4, [[w]])


def test_round_trip_random_logs():
    rng = random.Random(5)
    for _ in range(300):
        log = random_log(rng)
        parsed = wl.parse_log(wl.serialize_log(log.n, log.blocks))
        assert parsed.skips == ()
        assert parsed.to_witness_log() == log


def test_writer_matches_serializer():
    rng = random.Random(6)
    log = random_log(rng)
    buf = io.BytesIO()
    writer = wl.LogWriter(buf, log.n)
    for b, block in enumerate(log.blocks):
        writer.block(b + 1, block)
    assert buf.getvalue() == wl.serialize_log(log.n, log.blocks)


def test_collector_round_trip():
    rng = random.Random(7)
    log = random_log(rng)
    coll = wl.LogCollector(log.n)
    for b, block in enumerate(log.blocks):
        coll.block(b + 1, block)
    assert coll.log() == log


def test_parse_skips_garbage_line_and_recovers():
    data = (
        b"sortnet-witness v1 n=2\n"
        b"K 1\n"
        b"hello\n"
        b"S [0-1] [0-1] [1,0]\n"
    )
    parsed = wl.parse_log(data)
    assert parsed.n == 2
    assert [s.reason for s in parsed.skips] == ["unrecognized line"]
    assert len(parsed.blocks[1]) == 1


def test_parse_wrong_length_perm_is_structural():
    # Length mismatches are the checker's business, not the parser's.
    data = b"sortnet-witness v1 n=4\nK 1\nS [0-1] [2-3] [1,0]\n"
    parsed = wl.parse_log(data)
    assert parsed.blocks[1][0].perm == (1, 0)


def test_parse_witness_outside_block_is_skipped():
    data = b"sortnet-witness v1 n=2\nS [0-1] [0-1] [1,0]\nK 1\n"
    parsed = wl.parse_log(data)
    assert parsed.blocks.get(1) == ()
    assert [s.reason for s in parsed.skips] == ["witness outside block"]


@pytest.mark.parametrize(
    "line",
    [
        b"S [0-1] [0-1]",  # missing field
        b"S [0-1] [0-1] [1,0] extra",
        b"S  [0-1] [0-1] [1,0]",  # double space
        b"S [0-1] [0-1] [1,0] ",
        b"s [0-1] [0-1] [1,0]",
        b"S [0-1] [0-1] [01]",  # leading zero
        b"S [0-1] [0-1] (1,0)",
        b"K",
        b"K 01",
        b"K 1 2",
        b"K -1",
        b"\xff\xfe",
        b"",
    ],
)
def test_malformed_lines_become_skips(line):
    data = b"sortnet-witness v1 n=2\nK 1\n" + line + b"\n"
    parsed = wl.parse_log(data)
    total_witnesses = sum(len(b) for b in parsed.blocks.values())
    has_k = line.startswith(b"K ") and line[2:].isdigit() and not line[2:].startswith(b"0")
    if not has_k:
        assert total_witnesses == 0
        assert len(parsed.skips) == 1


def test_prefix_safety():
    rng = random.Random(8)
    log = random_log(rng)
    data = wl.serialize_log(log.n, log.blocks)
    full = [w for block in log.blocks for w in block]
    for cut in range(len(data) + 1):
        parsed = wl.parse_log(data[:cut])
        got = [w for _, block in sorted(parsed.blocks.items()) for w in block]
        assert got == full[: len(got)]


def test_parser_totality_on_random_bytes():
    rng = random.Random(9)
    for _ in range(500):
        blob = bytes(rng.randrange(256) for _ in range(rng.randint(0, 300)))
        wl.parse_log(blob)  # must not raise
        reader = wl.LogReader(io.BytesIO(blob))
        k = 1
        while reader.fetch_block(k) is not None and k < 30:
            k += 1


@settings(max_examples=200, deadline=None)
@given(st.binary(max_size=400))
def test_parser_totality_property(blob):
    wl.parse_log(blob)


# Streaming reader -------------------------------------------------------------

def test_reader_reads_blocks_in_order():
    rng = random.Random(10)
    log = random_log(rng)
    reader = wl.LogReader(io.BytesIO(wl.serialize_log(log.n, log.blocks)))
    assert reader.n == log.n
    for b, block in enumerate(log.blocks):
        witnesses, discarded = reader.fetch_block(b + 1)
        assert tuple(witnesses) == block
        assert discarded == 0
    assert reader.fetch_block(len(log.blocks) + 1) is None


def test_reader_missing_block_reads_empty():
    data = b"sortnet-witness v1 n=2\nK 1\nK 3\nS [0-1] [0-1] [0,1]\n"
    reader = wl.LogReader(io.BytesIO(data))
    assert reader.fetch_block(1) == ([], 0)
    assert reader.fetch_block(2) == ([], 0)
    witnesses, discarded = reader.fetch_block(3)
    assert len(witnesses) == 1 and discarded == 0
    assert reader.fetch_block(4) is None


def test_reader_discards_stale_blocks():
    data = (
        b"sortnet-witness v1 n=2\n"
        b"K 2\nS [0-1] [0-1] [0,1]\n"
        b"K 1\nS [0-1] [0-1] [0,1]\n"
        b"K 3\n"
    )
    reader = wl.LogReader(io.BytesIO(data))
    witnesses, discarded = reader.fetch_block(2)
    assert len(witnesses) == 1 and discarded == 0
    # Block 3 request steps over the stale "K 1" block and its witness.
    witnesses, discarded = reader.fetch_block(3)
    assert witnesses == [] and discarded == 2
    assert reader.fetch_block(4) is None


def test_reader_counts_garbage_before_block():
    data = b"sortnet-witness v1 n=2\nnoise\nK 1\nS [0-1] [0-1] [0,1]\n"
    reader = wl.LogReader(io.BytesIO(data))
    witnesses, discarded = reader.fetch_block(1)
    assert len(witnesses) == 1
    assert discarded == 1


def test_reader_bad_header():
    reader = wl.LogReader(io.BytesIO(b"K 1\nS [0-1] [0-1] [0,1]\n"))
    assert reader.n is None
    reader = wl.LogReader(io.BytesIO(b""))
    assert reader.n is None
    assert reader.fetch_block(1) is None


def test_reader_accepts_unterminated_final_line():
    data = b"sortnet-witness v1 n=2\nK 1\nS [0-1] [0-1] [0,1]"
    reader = wl.LogReader(io.BytesIO(data))
    witnesses, discarded = reader.fetch_block(1)
    assert len(witnesses) == 1 and discarded == 0
