"""Witness log format: the untrusted oracle boundary.

A log is a line-oriented ASCII byte stream with LF line endings:

    sortnet-witness v1 n=<nat>        header, first line
    K <nat>                           start of the block for size step k
    S <network> <network> <perm>      one witness: subsumer, subsumed, image
                                      list, separated by single spaces

Network literals look like ``[0-1,2-3]`` (empty: ``[]``), image lists like
``[2,1,0,3]``; naturals carry no sign and no leading zeros.  Any line that
is not bit-exact under this grammar is a skip-marker: it is counted and
ignored, never fatal.  Witness order within a block is significant (the
checker removes networks in replay order), so serialization preserves it.

Blocks are consumed in ascending k.  A gap in the numbering reads as an
empty block ("no pruning information"); the end of the stream, reached
before the requested block, means the oracle is exhausted.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import IO, Iterable, Iterator, Sequence

from .networks import format_network, parse_network
from .perms import format_image_list, parse_image_list
from .search import SubsumptionWitness

HEADER_PREFIX = "sortnet-witness v1 n="

# Blocks a single in-memory log may densify to; purely an anti-DoS guard.
MAX_BLOCKS = 100_000


@dataclass(frozen=True)
class SkipMarker:
    line_no: int
    reason: str


@dataclass(frozen=True)
class WitnessLog:
    """In-memory log: ``blocks[b]`` holds the witnesses for size step b+1."""

    n: int
    blocks: tuple[tuple[SubsumptionWitness, ...], ...]

    def fetch_block(self, k: int) -> tuple[list[SubsumptionWitness], int] | None:
        if 1 <= k <= len(self.blocks):
            return list(self.blocks[k - 1]), 0
        return None


def _format_witness(w: SubsumptionWitness) -> str:
    return (
        f"S {format_network(w.subsumer)} {format_network(w.subsumed)} "
        f"{format_image_list(w.perm)}"
    )


def serialize_log(n: int, blocks: Sequence[Sequence[SubsumptionWitness]]) -> bytes:
    """Deterministic byte rendering of an in-memory log."""
    lines = [f"{HEADER_PREFIX}{n}"]
    for b, block in enumerate(blocks):
        lines.append(f"K {b + 1}")
        for w in block:
            if w.k != b + 1:
                raise ValueError(f"witness for step {w.k} placed in block {b + 1}")
            lines.append(_format_witness(w))
    return ("\n".join(lines) + "\n").encode("ascii")


class LogWriter:
    """Streams a log to a binary file, block by block."""

    def __init__(self, fp: IO[bytes], n: int):
        self._fp = fp
        fp.write(f"{HEADER_PREFIX}{n}\n".encode("ascii"))

    def block(self, k: int, witnesses: Iterable[SubsumptionWitness]) -> None:
        out = [f"K {k}"]
        out.extend(_format_witness(w) for w in witnesses)
        self._fp.write(("\n".join(out) + "\n").encode("ascii"))
        self._fp.flush()


class LogCollector:
    """Drop-in sink that accumulates an in-memory :class:`WitnessLog`."""

    def __init__(self, n: int):
        self.n = n
        self._blocks: list[tuple[SubsumptionWitness, ...]] = []

    def block(self, k: int, witnesses: Iterable[SubsumptionWitness]) -> None:
        if k != len(self._blocks) + 1:
            raise ValueError(f"expected block {len(self._blocks) + 1}, got {k}")
        self._blocks.append(tuple(witnesses))

    def log(self) -> WitnessLog:
        return WitnessLog(self.n, tuple(self._blocks))


# Parsing --------------------------------------------------------------------

def _parse_nat(token: str) -> int | None:
    if not token.isdigit() or not token.isascii():
        return None
    if len(token) > 1 and token[0] == "0":
        return None
    return int(token)


def _classify(raw: bytes):
    """Classify one line: ('K', k) | ('S', (a, b, img)) | ('skip', reason)."""
    try:
        line = raw.decode("ascii")
    except UnicodeDecodeError:
        return ("skip", "not ascii")
    if line.startswith("K "):
        k = _parse_nat(line[2:])
        if k is None:
            return ("skip", "bad block header")
        return ("K", k)
    if line.startswith("S "):
        parts = line.split(" ")
        if len(parts) != 4:
            return ("skip", "bad witness shape")
        try:
            a = parse_network(parts[1])
            b = parse_network(parts[2])
            img = parse_image_list(parts[3])
        except ValueError:
            return ("skip", "bad witness literal")
        return ("S", (a, b, img))
    if line.startswith(HEADER_PREFIX):
        return ("skip", "unexpected header")
    return ("skip", "unrecognized line")


def _iter_raw_lines(data: bytes) -> Iterator[bytes]:
    start = 0
    while start < len(data):
        end = data.find(b"\n", start)
        if end < 0:
            yield data[start:]
            return
        yield data[start:end]
        start = end + 1


def _line_source(source) -> Iterator[bytes]:
    if isinstance(source, (bytes, bytearray)):
        return _iter_raw_lines(bytes(source))
    return (line[:-1] if line.endswith(b"\n") else line for line in source)


@dataclass(frozen=True)
class ParsedLog:
    """Eager parse result; ``blocks`` is sparse (block k may be absent)."""

    n: int | None
    blocks: dict[int, tuple[SubsumptionWitness, ...]]
    skips: tuple[SkipMarker, ...]

    def to_witness_log(self) -> WitnessLog:
        if self.n is None:
            raise ValueError("log has no valid header")
        top = max(self.blocks, default=0)
        if top > MAX_BLOCKS:
            raise ValueError(f"log claims {top} blocks (cap {MAX_BLOCKS})")
        dense = tuple(self.blocks.get(k, ()) for k in range(1, top + 1))
        return WitnessLog(self.n, dense)


def parse_log(source) -> ParsedLog:
    """Parse a whole log eagerly; malformed content degrades, never raises."""
    lines = _line_source(source)
    skips: list[SkipMarker] = []
    blocks: dict[int, list[SubsumptionWitness]] = {}
    n = None
    current: int | None = None
    for line_no, raw in enumerate(lines, start=1):
        if line_no == 1:
            n = _parse_header(raw)
            if n is None:
                skips.append(SkipMarker(1, "bad header"))
            continue
        kind, val = _classify(raw)
        if kind == "K":
            current = val
            blocks.setdefault(current, [])
        elif kind == "S":
            if current is None:
                skips.append(SkipMarker(line_no, "witness outside block"))
            else:
                a, b, img = val
                blocks[current].append(SubsumptionWitness(current, a, b, img))
        else:
            skips.append(SkipMarker(line_no, val))
    return ParsedLog(
        n, {k: tuple(v) for k, v in blocks.items()}, tuple(skips)
    )


def _parse_header(raw: bytes) -> int | None:
    try:
        line = raw.decode("ascii")
    except UnicodeDecodeError:
        return None
    if not line.startswith(HEADER_PREFIX):
        return None
    return _parse_nat(line[len(HEADER_PREFIX):])


class LogReader:
    """Streaming reader handing out blocks in ascending-k request order.

    ``fetch_block(k)`` scans forward: the matching block's witnesses are
    returned together with the number of lines discarded on the way there
    (skip-markers and stale out-of-order blocks).  A block that never
    appears before the next higher block header reads as empty; ``None``
    means the stream ended before block k.
    """

    def __init__(self, source):
        self._lines = _line_source(source)
        self._line_no = 0
        self._pending: int | None = None
        self._eof = False
        self.skip_count = 0
        self.skips: list[SkipMarker] = []
        first = self._read()
        self.n = None if first is None else _parse_header(first)
        if first is not None and self.n is None:
            self._skip(1, "bad header")

    def _read(self) -> bytes | None:
        if self._eof:
            return None
        try:
            raw = next(self._lines)
        except StopIteration:
            self._eof = True
            return None
        self._line_no += 1
        return raw

    def _skip(self, line_no: int, reason: str) -> None:
        self.skip_count += 1
        if len(self.skips) < 100:
            self.skips.append(SkipMarker(line_no, reason))

    def fetch_block(self, k: int) -> tuple[list[SubsumptionWitness], int] | None:
        discarded = 0
        while True:
            if self._pending is not None:
                pending, self._pending = self._pending, None
                if pending == k:
                    witnesses, d = self._drain(k)
                    return witnesses, discarded + d
                if pending > k:
                    self._pending = pending
                    return [], discarded
                # Stale (out-of-order) block: discard its whole body.
                discarded += 1
                self._skip(self._line_no, f"stale block {pending}")
                _, d = self._drain(None)
                discarded += d
                continue
            raw = self._read()
            if raw is None:
                return None
            kind, val = _classify(raw)
            if kind == "K":
                self._pending = val
            else:
                discarded += 1
                self._skip(self._line_no, "stray line" if kind == "S" else val)

    def _drain(self, k: int | None) -> tuple[list[SubsumptionWitness], int]:
        witnesses: list[SubsumptionWitness] = []
        discarded = 0
        while True:
            raw = self._read()
            if raw is None:
                return witnesses, discarded
            kind, val = _classify(raw)
            if kind == "K":
                self._pending = val
                return witnesses, discarded
            if kind == "S" and k is not None:
                a, b, img = val
                witnesses.append(SubsumptionWitness(k, a, b, img))
            else:
                discarded += 1
                if kind != "S":
                    self._skip(self._line_no, val)
