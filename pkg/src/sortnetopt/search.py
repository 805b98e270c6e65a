"""Generate-and-prune machinery.

``generate_irredundant`` expands every candidate prefix by one standard
comparator, dropping extensions whose new comparator can never swap.
``prune_search`` (the prover) reduces a candidate set, keeping only networks
not subsumed by an earlier survivor, and emits one witness triple per
removal.  ``prune_with_oracle`` (the checker) replays such triples
skeptically: a witness only causes a removal after every claim in it has
been re-verified, so a corrupt oracle can slow the run down but never make
it wrong.

Subsumption of ``a`` by ``b`` under a channel relabeling pi means
``pi(outputs(a))`` is contained in ``outputs(b)``.  The search for pi
backtracks over channel images, constrained by invariants any relabeling
must respect: output-set size, per-weight output counts, and per-channel
0/1 occurrence profiles.  The constraints are necessary conditions only, so
the search is exact; they just cut the n! space down to almost nothing.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .networks import (
    Network,
    all_standard_comparators,
    never_swaps,
    output_mask,
    validate_network,
)
from .perms import ImageList, Permutation, validate_image_list


@dataclass(frozen=True)
class CandidateSet:
    """Ordered, duplicate-free set of same-size standard networks."""

    n: int
    k: int
    members: tuple[Network, ...]

    @classmethod
    def initial(cls, n: int) -> "CandidateSet":
        return cls(n, 0, ((),))

    @classmethod
    def checked(cls, n: int, k: int, members: tuple[Network, ...]) -> "CandidateSet":
        seen = set()
        for net in members:
            validate_network(n, net, standard=True)
            if len(net) != k:
                raise ValueError(f"member {net} has size {len(net)}, expected {k}")
            if net in seen:
                raise ValueError(f"duplicate member {net}")
            seen.add(net)
        return cls(n, k, members)

    def __len__(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class SubsumptionWitness:
    """Untrusted claim that ``subsumer`` subsumes ``subsumed`` under ``perm``."""

    k: int
    subsumer: Network
    subsumed: Network
    perm: ImageList


def generate(n: int, rset: CandidateSet) -> tuple[Network, ...]:
    """Every member extended by every standard comparator, in fixed order."""
    comps = all_standard_comparators(n)
    return tuple(net + (c,) for net in rset.members for c in comps)


def last_comparator_redundant(n: int, net: Network) -> bool:
    """True iff the final comparator never swaps on any prefix output."""
    if not net:
        raise ValueError("network has no last comparator")
    validate_network(n, net)
    return never_swaps(n, net[-1], output_mask(n, net[:-1]))


def generate_irredundant(n: int, rset: CandidateSet) -> CandidateSet:
    """Expand by one comparator, dropping extensions with a redundant tail.

    The completeness guarantee assumes no member already sorts; the driver
    stops before that happens.  A sorting network contributes nothing here
    anyway: every comparator is redundant after it.
    """
    comps = all_standard_comparators(n)
    out: list[Network] = []
    for net in rset.members:
        parent = output_mask(n, net)
        for c in comps:
            if not never_swaps(n, c, parent):
                out.append(net + (c,))
    return CandidateSet(n, rset.k + 1, tuple(out))


# Cached per-network data for the subsumption tests -------------------------

def _bitset_members(mask: int) -> list[int]:
    members = []
    while mask:
        low = mask & -mask
        members.append(low.bit_length() - 1)
        mask ^= low
    return members


class _Entry:
    __slots__ = ("net", "out", "size", "wcounts", "members", "ones")

    def __init__(self, n: int, net: Network, out: int | None = None):
        self.net = net
        self.out = output_mask(n, net) if out is None else out
        self.members = _bitset_members(self.out)
        self.size = len(self.members)
        wcounts = [0] * (n + 1)
        for v in self.members:
            wcounts[v.bit_count()] += 1
        self.wcounts = tuple(wcounts)
        self.ones: tuple[tuple[int, ...], ...] | None = None


def _profile(n: int, e: _Entry) -> tuple[tuple[int, ...], ...]:
    # ones[c][w]: weight-w outputs with a 1 on channel c.
    if e.ones is None:
        ones = [[0] * (n + 1) for _ in range(n)]
        for x in e.members:
            w = x.bit_count()
            while x:
                low = x & -x
                ones[low.bit_length() - 1][w] += 1
                x ^= low
        e.ones = tuple(tuple(row) for row in ones)
    return e.ones


def _dominates(a: tuple[int, ...], b: tuple[int, ...]) -> bool:
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def _image_fits(image: list[int] | ImageList, members: list[int], target: int) -> bool:
    # Does relabeling every member by ``image`` land inside ``target``?
    for x in members:
        y = 0
        while x:
            low = x & -x
            y |= 1 << image[low.bit_length() - 1]
            x ^= low
        if not (target >> y) & 1:
            return False
    return True


def _find_image(n: int, ea: _Entry, eb: _Entry) -> ImageList | None:
    """Deterministic search for pi with pi(outputs(a)) inside outputs(b)."""
    if not _dominates(ea.wcounts, eb.wcounts):
        return None
    if not ea.out & ~eb.out:
        return tuple(range(n))
    ones_a = _profile(n, ea)
    ones_b = _profile(n, eb)
    wa, wb = ea.wcounts, eb.wcounts
    allowed = []
    for c in range(n):
        pa = ones_a[c]
        mask = 0
        for d in range(n):
            pb = ones_b[d]
            for w in range(n + 1):
                # Channel c can only map to d if both the 1-counts and the
                # 0-counts fit, weight class by weight class.
                if pa[w] > pb[w] or wa[w] - pa[w] > wb[w] - pb[w]:
                    break
            else:
                mask |= 1 << d
        if not mask:
            return None
        allowed.append(mask)
    order = sorted(range(n), key=lambda c: (allowed[c].bit_count(), c))
    image = [0] * n
    members, target = ea.members, eb.out

    def assign(pos: int, used: int) -> bool:
        if pos == len(order):
            return _image_fits(image, members, target)
        c = order[pos]
        free = allowed[c] & ~used
        while free:
            low = free & -free
            image[c] = low.bit_length() - 1
            if assign(pos + 1, used | low):
                return True
            free ^= low
        return False

    if assign(0, 0):
        return tuple(image)
    return None


def check_subsumption(n: int, net_a: Network, net_b: Network, p: Permutation) -> bool:
    """Verify pi(outputs(a)) is contained in outputs(b) for a given pi."""
    validate_network(n, net_a)
    validate_network(n, net_b)
    if p.n != n:
        raise ValueError(f"permutation on {p.n} channels used at n={n}")
    ea = _Entry(n, net_a)
    return _image_fits(p.image, ea.members, output_mask(n, net_b))


def find_subsumption(n: int, net_a: Network, net_b: Network) -> Permutation | None:
    """Search for a relabeling under which ``net_a`` subsumes ``net_b``.

    Complete: returns None only when no permutation works at all.
    """
    validate_network(n, net_a)
    validate_network(n, net_b)
    image = _find_image(n, _Entry(n, net_a), _Entry(n, net_b))
    return None if image is None else Permutation(n, image)


# Prover-side pruning --------------------------------------------------------

_PARALLEL_MIN_CANDIDATES = 256


def prune_search(
    n: int, cands: CandidateSet, threads: int = 1
) -> tuple[CandidateSet, tuple[SubsumptionWitness, ...]]:
    """Reduce ``cands`` so every dropped network is subsumed by a survivor.

    Processes candidates in order: one subsumed by an earlier survivor is
    dropped; otherwise it is kept and evicts any earlier survivors it
    subsumes.  Every removal emits a ``(kept, removed, pi)`` witness, in the
    exact order the removals happen, so a replay reproduces the result.
    ``threads`` only parallelizes the subsumption queries; decisions are
    committed in candidate order and the outcome is identical for any value.
    """
    if threads > 1 and len(cands.members) >= _PARALLEL_MIN_CANDIDATES:
        return _prune_speculative(n, cands, threads)
    return _prune_sequential(n, cands)


class _PruneState:
    """Shared bookkeeping for both pruning drivers."""

    def __init__(self, n: int, cands: CandidateSet):
        self.n = n
        self.k = cands.k
        self.nets = cands.members
        self.entries = [_Entry(n, net) for net in self.nets]
        total = len(self.nets)
        self.wmat = np.array(
            [e.wcounts for e in self.entries], dtype=np.uint32
        ).reshape(total, n + 1)
        self.rmat = np.empty((total, n + 1), dtype=np.uint32)
        self.alive = np.zeros(total, dtype=bool)
        self.acc: list[_Entry] = []
        self.acc_index: list[int] = []
        self.witnesses: list[SubsumptionWitness] = []

    def witness(self, kept: _Entry, removed: _Entry, image: ImageList) -> None:
        self.witnesses.append(
            SubsumptionWitness(self.k, kept.net, removed.net, image)
        )

    def subsumer_among(self, ce: _Entry, positions) -> tuple[int, ImageList] | None:
        for pos in positions:
            image = _find_image(self.n, self.acc[pos], ce)
            if image is not None:
                return pos, image
        return None

    def accept(self, idx: int, ce: _Entry) -> None:
        r = len(self.acc)
        self.rmat[r] = self.wmat[idx]
        self.alive[r] = True
        self.acc.append(ce)
        self.acc_index.append(idx)

    def dominated_positions(self, idx: int):
        view = self.rmat[: len(self.acc)]
        mask = (view <= self.wmat[idx]).all(axis=1) & self.alive[: len(self.acc)]
        return np.nonzero(mask)[0]

    def dominating_positions(self, idx: int):
        view = self.rmat[: len(self.acc)]
        mask = (view >= self.wmat[idx]).all(axis=1) & self.alive[: len(self.acc)]
        return np.nonzero(mask)[0]

    def result(self) -> tuple[CandidateSet, tuple[SubsumptionWitness, ...]]:
        survivors = tuple(
            e.net for pos, e in enumerate(self.acc) if self.alive[pos]
        )
        return CandidateSet(self.n, self.k, survivors), tuple(self.witnesses)


def _prune_sequential(
    n: int, cands: CandidateSet
) -> tuple[CandidateSet, tuple[SubsumptionWitness, ...]]:
    st = _PruneState(n, cands)
    for idx, ce in enumerate(st.entries):
        if st.acc:
            hit = st.subsumer_among(ce, st.dominated_positions(idx))
            if hit is not None:
                st.witness(st.acc[hit[0]], ce, hit[1])
                continue
            for pos in st.dominating_positions(idx):
                image = _find_image(n, ce, st.acc[pos])
                if image is not None:
                    st.alive[pos] = False
                    st.witness(ce, st.acc[pos], image)
        st.accept(idx, ce)
    return st.result()


# Speculative parallel pruning: workers evaluate candidates against a frozen
# snapshot of the survivor list; the main process commits decisions in
# candidate order and re-runs exactly the queries the snapshot missed.

_WORKER: dict = {}


def _worker_init(n: int, nets: tuple[Network, ...]) -> None:
    _WORKER["n"] = n
    _WORKER["nets"] = nets
    _WORKER["entries"] = {}


def _worker_entry(idx: int) -> _Entry:
    e = _WORKER["entries"].get(idx)
    if e is None:
        e = _Entry(_WORKER["n"], _WORKER["nets"][idx])
        _WORKER["entries"][idx] = e
    return e


def _worker_eval(task: tuple[tuple[int, ...], tuple[int, ...]]):
    snapshot, batch = task
    n = _WORKER["n"]
    snap = [_worker_entry(i) for i in snapshot]
    results = []
    for ci in batch:
        ce = _worker_entry(ci)
        verdict = None
        for pos, se in enumerate(snap):
            if _dominates(se.wcounts, ce.wcounts):
                image = _find_image(n, se, ce)
                if image is not None:
                    verdict = ("sub", pos, image)
                    break
        if verdict is None:
            evictions = []
            for pos, se in enumerate(snap):
                if _dominates(ce.wcounts, se.wcounts):
                    image = _find_image(n, ce, se)
                    if image is not None:
                        evictions.append((pos, image))
            verdict = ("acc", tuple(evictions))
        results.append(verdict)
    return results


def _prune_speculative(
    n: int, cands: CandidateSet, threads: int
) -> tuple[CandidateSet, tuple[SubsumptionWitness, ...]]:
    st = _PruneState(n, cands)
    total = len(st.nets)
    batch_size = max(16, -(-total // (threads * 8)))
    batches = [
        tuple(range(lo, min(lo + batch_size, total)))
        for lo in range(0, total, batch_size)
    ]
    with ProcessPoolExecutor(
        max_workers=threads, initializer=_worker_init, initargs=(n, st.nets)
    ) as pool:
        for batch in batches:
            # Snapshot of the survivor list: candidate index per accepted slot.
            snap_positions = [
                pos for pos in range(len(st.acc)) if st.alive[pos]
            ]
            snapshot = tuple(st.acc_index[pos] for pos in snap_positions)
            boundary = len(st.acc)
            chunk = max(1, -(-len(batch) // threads))
            tasks = [
                (snapshot, batch[lo : lo + chunk])
                for lo in range(0, len(batch), chunk)
            ]
            verdicts: list = []
            for part in pool.map(_worker_eval, tasks):
                verdicts.extend(part)
            for idx, verdict in zip(batch, verdicts):
                _commit(st, idx, verdict, snap_positions, boundary)
    return st.result()


def _commit(st: _PruneState, idx: int, verdict, snap_positions, boundary) -> None:
    ce = st.entries[idx]
    n = st.n
    if verdict[0] == "sub":
        pos = snap_positions[verdict[1]]
        if st.alive[pos]:
            st.witness(st.acc[pos], ce, verdict[2])
            return
        # The speculative subsumer was evicted meanwhile: redo the part of
        # the scan the worker never reached (later snapshot slots plus any
        # survivor accepted after the snapshot).
        rescan = [
            p for p in snap_positions[verdict[1] + 1 :] if st.alive[p]
        ] + [p for p in range(boundary, len(st.acc)) if st.alive[p]]
        hit = st.subsumer_among(
            ce,
            (p for p in rescan if _dominates(st.acc[p].wcounts, ce.wcounts)),
        )
        if hit is not None:
            st.witness(st.acc[hit[0]], ce, hit[1])
            return
        evictions = []
        for p in range(len(st.acc)):
            if st.alive[p] and _dominates(ce.wcounts, st.acc[p].wcounts):
                image = _find_image(n, ce, st.acc[p])
                if image is not None:
                    evictions.append((p, image))
        _apply_acceptance(st, idx, ce, evictions)
        return
    # Speculatively accepted: check survivors the snapshot did not cover.
    fresh = [p for p in range(boundary, len(st.acc)) if st.alive[p]]
    hit = st.subsumer_among(
        ce, (p for p in fresh if _dominates(st.acc[p].wcounts, ce.wcounts))
    )
    if hit is not None:
        st.witness(st.acc[hit[0]], ce, hit[1])
        return
    evictions = [
        (snap_positions[spos], image)
        for spos, image in verdict[1]
        if st.alive[snap_positions[spos]]
    ]
    for p in fresh:
        if st.alive[p] and _dominates(ce.wcounts, st.acc[p].wcounts):
            image = _find_image(n, ce, st.acc[p])
            if image is not None:
                evictions.append((p, image))
    _apply_acceptance(st, idx, ce, evictions)


def _apply_acceptance(st: _PruneState, idx: int, ce: _Entry, evictions) -> None:
    for pos, image in evictions:
        st.alive[pos] = False
        st.witness(ce, st.acc[pos], image)
    st.accept(idx, ce)


# Checker-side pruning -------------------------------------------------------

@dataclass(frozen=True)
class OracleOutcome:
    """Result of replaying one block of untrusted witnesses."""

    survivors: CandidateSet
    used: int
    skipped: int


def prune_with_oracle(
    n: int, rset: CandidateSet, witnesses
) -> OracleOutcome:
    """Replay untrusted witness triples against ``rset``, skeptically.

    For each triple the checker re-verifies, in order: the two networks
    differ, the subsumer is currently in the set, the image list is a
    permutation, and the claimed subsumption actually holds.  Only then is
    the subsumed network removed.  A failed check skips the triple; nothing
    the oracle says can remove a network that is not genuinely subsumed, so
    the surviving set stays complete no matter what the log contains.
    """
    alive: dict[Network, None] = dict.fromkeys(rset.members)
    members_of: dict[Network, list[int]] = {}
    used = 0
    skipped = 0
    for w in witnesses:
        if w.subsumer == w.subsumed:
            skipped += 1
            continue
        if w.subsumer not in alive:
            skipped += 1
            continue
        if w.subsumed not in alive:
            # Removal would be a no-op anyway; skip before any heavy work.
            skipped += 1
            continue
        p = validate_image_list(n, w.perm)
        if not isinstance(p, Permutation):
            skipped += 1
            continue
        members = members_of.get(w.subsumer)
        if members is None:
            members = _bitset_members(output_mask(n, w.subsumer))
            members_of[w.subsumer] = members
        if _image_fits(p.image, members, output_mask(n, w.subsumed)):
            del alive[w.subsumed]
            used += 1
        else:
            skipped += 1
    survivors = CandidateSet(n, rset.k, tuple(alive))
    return OracleOutcome(survivors, used, skipped)
