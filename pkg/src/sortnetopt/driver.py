"""Top-level search loop and the independent brute-force cross-check.

The loop starts from the singleton set holding the empty network and
alternates expansion (``generate_irredundant``) with pruning, either by
search (prover, which emits the witness log) or by skeptical replay of an
untrusted log (checker).  It stops with ``yes`` as soon as a surviving
network sorts, with ``no`` when the size budget runs out, and with
``maybe`` only when a checker's oracle ends before the run is resolved.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable

from .networks import Network, check_channel_count, is_sorting_network
from .search import (
    CandidateSet,
    generate_irredundant,
    prune_search,
    prune_with_oracle,
)
from .witnesslog import LogCollector, WitnessLog

# Best known sorting-network sizes, indexed by channel count (0..16).  Used
# as the default size budget (plus one) so a correct run always resolves.
SIZE_UPPER_BOUND = (0, 0, 1, 3, 5, 9, 12, 16, 19, 25, 29, 35, 39, 45, 51, 56, 60)


def default_size_budget(n: int) -> int:
    check_channel_count(n)
    return SIZE_UPPER_BOUND[n] + 1


class BudgetExceededError(ValueError):
    """The requested enumeration is larger than the configured budget."""


@dataclass(frozen=True)
class Answer:
    """Outcome of a run: yes (minimal size k), no (all sizes <= k fail), maybe."""

    kind: str  # "yes" | "no" | "maybe"
    n: int
    k: int | None = None
    network: Network | None = None
    survivors: CandidateSet | None = None

    @classmethod
    def yes(cls, n: int, k: int, network: Network) -> "Answer":
        if not is_sorting_network(n, network):
            raise AssertionError(f"claimed witness {network} does not sort")
        if len(network) != k:
            raise AssertionError(f"witness size {len(network)} != {k}")
        return cls("yes", n, k, network=network)

    @classmethod
    def no(cls, n: int, k: int, survivors: CandidateSet) -> "Answer":
        return cls("no", n, k, survivors=survivors)

    @classmethod
    def maybe(cls, n: int) -> "Answer":
        return cls("maybe", n)


@dataclass(frozen=True)
class IterationStats:
    k: int
    candidates: int  # |N| after the irredundant expansion
    survivors: int  # |R| after pruning
    witnesses_used: int
    witnesses_skipped: int
    generate_seconds: float
    prune_seconds: float


@dataclass
class RunReport:
    iterations: list[IterationStats] = field(default_factory=list)

    def total_seconds(self) -> float:
        return sum(s.generate_seconds + s.prune_seconds for s in self.iterations)


@dataclass(frozen=True)
class RunOutcome:
    answer: Answer
    report: RunReport
    log: WitnessLog | None


def find_sorting_network(n: int, rset: CandidateSet) -> Network | None:
    """First member (in set order) that sorts, if any."""
    for net in rset.members:
        if is_sorting_network(n, net):
            return net
    return None


def generate_and_prune(
    n: int,
    max_size: int,
    mode: str = "prover",
    *,
    oracle=None,
    witness_sink=None,
    collect_log: bool = False,
    threads: int = 1,
    progress: Callable[[IterationStats], None] | None = None,
) -> RunOutcome:
    """Run the full loop up to networks of ``max_size`` comparators.

    In prover mode every pruning step emits its witnesses (to
    ``witness_sink`` and, with ``collect_log``, into the returned log).  In
    checker mode ``oracle`` supplies one untrusted witness block per size
    step; a stream that ends early yields ``maybe``, and nothing in the
    stream can make the yes/no answer wrong.
    """
    check_channel_count(n)
    if max_size < 0:
        raise ValueError("max_size must be non-negative")
    if mode not in ("prover", "checker"):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "checker":
        if oracle is None:
            raise ValueError("checker mode needs an oracle")
        oracle_usable = oracle.n == n
    else:
        if oracle is not None:
            raise ValueError("prover mode does not take an oracle")
        oracle_usable = False

    collector = LogCollector(n) if collect_log and mode == "prover" else None
    report = RunReport()
    rset = CandidateSet.initial(n)

    witness = find_sorting_network(n, rset)
    if witness is not None:
        final_log = collector.log() if collector else None
        return RunOutcome(Answer.yes(n, 0, witness), report, final_log)

    answer: Answer | None = None
    for k in range(1, max_size + 1):
        if mode == "checker":
            fetch = oracle.fetch_block(k) if oracle_usable else None
            if fetch is None:
                answer = Answer.maybe(n)
                break
            block, discarded = fetch

        t0 = time.perf_counter()
        cands = generate_irredundant(n, rset)
        t1 = time.perf_counter()
        if mode == "prover":
            rset, witnesses = prune_search(n, cands, threads=threads)
            used, skipped = len(witnesses), 0
            if witness_sink is not None:
                witness_sink.block(k, witnesses)
            if collector is not None:
                collector.block(k, witnesses)
        else:
            outcome = prune_with_oracle(n, cands, block)
            rset = outcome.survivors
            used, skipped = outcome.used, outcome.skipped + discarded
        t2 = time.perf_counter()

        stats = IterationStats(k, len(cands), len(rset), used, skipped, t1 - t0, t2 - t1)
        report.iterations.append(stats)
        if progress is not None:
            progress(stats)

        witness = find_sorting_network(n, rset)
        if witness is not None:
            answer = Answer.yes(n, k, witness)
            break

    if answer is None:
        answer = Answer.no(n, max_size, rset)
    final_log = collector.log() if collector else None
    return RunOutcome(answer, report, final_log)


# Independent oracle: plain exhaustive enumeration -----------------------------

DEFAULT_ENUMERATION_BUDGET = 20_000_000


def brute_force_min_size(
    n: int, k_max: int, budget: int = DEFAULT_ENUMERATION_BUDGET
) -> int | None:
    """Smallest k <= k_max for which some size-k network sorts, by listing
    every comparator sequence one by one.

    Deliberately naive and fully independent of the pruning machinery: it
    simulates on lists, not bitsets.  Refuses (rather than silently
    truncating) when the enumeration would exceed ``budget`` networks.
    """
    check_channel_count(n)
    if k_max < 0:
        raise ValueError("k_max must be non-negative")
    comps = [(i, j) for i in range(n) for j in range(i + 1, n)]
    total = sum(len(comps) ** k for k in range(k_max + 1))
    if total > budget:
        raise BudgetExceededError(
            f"{total} networks to enumerate exceeds budget {budget}"
        )
    import itertools

    inputs = list(itertools.product((0, 1), repeat=n))
    for k in range(k_max + 1):
        for seq in itertools.product(comps, repeat=k):
            if _sorts_all(seq, inputs):
                return k
    return None


def _sorts_all(seq, inputs) -> bool:
    for bits in inputs:
        v = list(bits)
        for i, j in seq:
            if v[i] > v[j]:
                v[i], v[j] = v[j], v[i]
        if any(v[t] > v[t + 1] for t in range(len(v) - 1)):
            return False
    return True
