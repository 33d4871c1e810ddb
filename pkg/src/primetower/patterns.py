"""Occurrence search for tree patterns, bounded kappa certificates, runs and milestones.

Every answer here is a statement about the slice [1, X] only.  Reports
carry ``search_limit`` so that a caller never reads "unique up to X" as
"unique".
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .arith import SieveTable, primorial
from .errors import InvalidArgument, OutOfRange, Undecided
from .parallel import map_partitions
from .tables import (
    DEFAULT_CHUNK,
    STATS,
    RangeTable,
    code_to_key,
    compute_range,
    iter_ranges,
    key_to_code,
    run_lengths,
)
from .trees import NONPLANAR, PLANAR, TreeCode, check_flavor, code_of_int

UNIQUE = "UNIQUE_UP_TO"
MULTIPLE = "MULTIPLE"
NOT_FOUND = "NOT_FOUND"

MILESTONE = "MILESTONE_UP_TO"
NOT_UNIQUE = "NOT_UNIQUE"
NOT_MINIMAL = "NOT_MINIMAL"


@dataclass(frozen=True)
class OffsetPattern:
    anchors: tuple[tuple[int, TreeCode], ...]
    flavor: str = PLANAR

    def __post_init__(self):
        check_flavor(self.flavor)
        if not self.anchors:
            raise InvalidArgument("a pattern needs at least one anchor")
        offsets = [o for o, _ in self.anchors]
        if offsets[0] != 0:
            raise InvalidArgument("the first anchor must sit at offset 0")
        if any(b <= a for a, b in zip(offsets, offsets[1:])):
            raise InvalidArgument(f"anchor offsets must strictly increase: {offsets}")
        if any(c.flavor != self.flavor for _, c in self.anchors):
            raise InvalidArgument("all anchor codes must share the pattern flavor")

    @property
    def span(self) -> int:
        return self.anchors[-1][0]

    def to_dict(self):
        return {
            "flavor": self.flavor,
            "anchors": [{"offset": o, "code": c.bits} for o, c in self.anchors],
        }

    def subpattern(self, idx) -> OffsetPattern:
        picked = [self.anchors[i] for i in idx]
        base = picked[0][0]
        return OffsetPattern(tuple((o - base, c) for o, c in picked), self.flavor)


@dataclass
class OccurrenceReport:
    pattern: OffsetPattern
    search_limit: int
    positions: list[int]

    @property
    def status(self) -> str:
        if not self.positions:
            return NOT_FOUND
        return UNIQUE if len(self.positions) == 1 else MULTIPLE

    @property
    def count(self) -> int:
        return len(self.positions)

    def to_dict(self, max_positions: int | None = None):
        pos = self.positions if max_positions is None else self.positions[:max_positions]
        return {
            "status": self.status,
            "search_limit": self.search_limit,
            "count": self.count,
            "positions": pos,
            "pattern": self.pattern.to_dict(),
        }


def pattern_from_integers(ns, flavor: str = PLANAR, sieve: SieveTable | None = None) -> OffsetPattern:
    ns = [int(n) for n in ns]
    if not ns:
        raise InvalidArgument("pattern needs at least one integer")
    if any(b <= a for a, b in zip(ns, ns[1:])):
        raise InvalidArgument(f"integers must strictly increase: {ns}")
    check_flavor(flavor)
    return OffsetPattern(tuple((n - ns[0], code_of_int(n, flavor, sieve)) for n in ns), flavor)


def table_for(sieve: SieveTable | None, X: int, table: RangeTable | None = None) -> RangeTable:
    """Reuse ``table`` when it starts at 1 and reaches X, else compute [1, X]."""
    if table is not None and table.lo == 1 and table.hi >= X:
        return table
    if sieve is None:
        raise InvalidArgument(f"need a sieve or a table covering [1, {X}]")
    if X > sieve.limit:
        raise OutOfRange(f"search limit {X} exceeds sieve limit {sieve.limit}")
    return compute_range(sieve, 1, X)


def _match(keys: np.ndarray, base: int, m_lo: int, m_hi: int, anchors) -> np.ndarray:
    """Positions m in [m_lo, m_hi] with keys[m + off - base] == key for every anchor."""
    if m_hi < m_lo:
        return np.zeros(0, dtype=np.int64)
    off0, k0 = anchors[0]
    seg = keys[m_lo + off0 - base:m_hi + off0 - base + 1]
    cand = np.flatnonzero(seg == k0) + m_lo
    for off, k in anchors[1:]:
        if not cand.size:
            break
        cand = cand[keys[cand + off - base] == k]
    return cand


def _anchor_keys(p: OffsetPattern):
    keys = [(o, code_to_key(c, p.flavor)) for o, c in p.anchors]
    if any(k is None for _, k in keys):
        return None
    return keys


def find_occurrences(
    p: OffsetPattern,
    X: int,
    sieve: SieveTable | None = None,
    *,
    table: RangeTable | None = None,
    partitions: int = 1,
    chunk: int = DEFAULT_CHUNK,
) -> OccurrenceReport:
    """All m >= 1 with m + span <= X whose trees match every anchor.

    With a ``table`` covering [1, X] the sieve is not consulted.
    """
    if X < p.span + 1:
        raise OutOfRange(f"search limit {X} leaves no room for a pattern of span {p.span}")
    have_table = table is not None and table.lo == 1 and table.hi >= X
    if not have_table:
        if sieve is None:
            raise InvalidArgument("find_occurrences needs a sieve or a table covering [1, X]")
        if X > sieve.limit:
            raise OutOfRange(f"search limit {X} exceeds sieve limit {sieve.limit}")
    anchors = _anchor_keys(p)
    if anchors is None:
        return OccurrenceReport(p, X, [])
    last_start = X - p.span
    if have_table:
        keys = table.values(p.flavor)
        return OccurrenceReport(p, X, _match(keys, 1, 1, last_start, anchors).tolist())

    def scan(lo, hi):
        found = []
        for start, stop, _ in iter_ranges(lo, hi, chunk):
            t = compute_range(sieve, start, stop + p.span)
            found.append(_match(t.values(p.flavor), start, start, stop, anchors))
        return np.concatenate(found) if found else np.zeros(0, dtype=np.int64)

    parts = map_partitions(scan, 1, last_start, partitions)
    pos = np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)
    return OccurrenceReport(p, X, pos.tolist())


def verify_positions(report: OccurrenceReport, sieve: SieveTable | None = None) -> bool:
    """Recheck every reported position anchor by anchor with the scalar tree code."""
    p = report.pattern
    for m in report.positions:
        for off, code in p.anchors:
            if code_of_int(m + off, p.flavor, sieve).bits != code.bits:
                return False
    return True


def kappa_from_values(values: np.ndarray, n: int, X: int) -> int:
    """Least k with (s(n), ..., s(n+k)) matched at no m != n, m + k <= X.

    ``values[i]`` holds s(i + 1) for i < X.
    """
    if n < 1:
        raise InvalidArgument(f"n must be >= 1, got {n}")
    if n > X:
        raise Undecided(f"n={n} lies beyond the search limit {X}", best_k=None, search_limit=X)
    vals = values[:X]
    cand = np.flatnonzero(vals == vals[n - 1]) + 1
    cand = cand[cand != n]
    k = 0
    while cand.size:
        k += 1
        if n + k > X:
            raise Undecided(
                f"window at n={n} still ambiguous at size {k} when reaching X={X}",
                best_k=k - 1,
                search_limit=X,
            )
        cand = cand[cand + k <= X]
        cand = cand[vals[cand + k - 1] == vals[n + k - 1]]
    return k


def kappa_bounded(
    n: int,
    X: int,
    statistic: str = PLANAR,
    sieve: SieveTable | None = None,
    *,
    table: RangeTable | None = None,
) -> int:
    """Lower-bound certificate for kappa: least k whose window at n is unique in [1, X]."""
    if statistic not in STATS:
        raise InvalidArgument(f"statistic must be one of {STATS}, got {statistic!r}")
    if X < n + 1:
        raise Undecided(f"no room to search: n={n}, X={X}", best_k=None, search_limit=X)
    table = table_for(sieve, X, table)
    return kappa_from_values(table.values(statistic), n, X)


@dataclass
class MilestoneResult:
    status: str
    search_limit: int
    witness: list[int] | None = None
    occurrences: int = 0

    def to_dict(self):
        return {
            "status": self.status,
            "search_limit": self.search_limit,
            "witness": self.witness,
            "occurrences": self.occurrences,
        }


def milestone_status(
    ns,
    X: int,
    flavor: str = PLANAR,
    sieve: SieveTable | None = None,
    *,
    table: RangeTable | None = None,
) -> MilestoneResult:
    """Unique up to X and no proper sub-pattern unique up to X.

    Subsets are tried smallest first, so a NOT_MINIMAL witness is a
    smallest unique sub-pattern.
    """
    ns = [int(n) for n in ns]
    p = pattern_from_integers(ns, flavor, sieve)
    tbl = table_for(sieve, X, table)
    full = find_occurrences(p, X, table=tbl)
    if full.status != UNIQUE:
        return MilestoneResult(NOT_UNIQUE, X, None, full.count)
    k = len(ns)
    for size in range(1, k):
        for idx in itertools.combinations(range(k), size):
            sub = find_occurrences(p.subpattern(idx), X, table=tbl)
            if sub.status == UNIQUE:
                return MilestoneResult(NOT_MINIMAL, X, [ns[i] for i in idx], full.count)
    return MilestoneResult(MILESTONE, X, None, full.count)


def run_length(n: int, flavor: str = NONPLANAR, sieve: SieveTable | None = None) -> int:
    """k(n): the largest k >= 1 with equal trees at n+1, ..., n+k."""
    check_flavor(flavor)
    if n < 0:
        raise InvalidArgument(f"n must be >= 0, got {n}")
    limit = sieve.limit if sieve is not None else None

    def code(m):
        if limit is not None and m > limit:
            raise OutOfRange(f"run starting after {n} reaches the sieve limit {limit}")
        return code_of_int(m, flavor, sieve).bits

    first = code(n + 1)
    k = 1
    while code(n + k + 1) == first:
        k += 1
    return k


def run_length_array(table: RangeTable, flavor: str) -> np.ndarray:
    """k(n) for n = table.lo - 1, ..., table.hi - 1, truncated where runs hit table.hi.

    Entry i is the run starting at table.lo + i, i.e. k(table.lo + i - 1).
    """
    return run_lengths(table.values(flavor))


def a_sequence(
    max_index: int,
    X: int,
    sieve: SieveTable,
    *,
    chunk: int = DEFAULT_CHUNK,
    partitions: int = 1,
) -> dict[int, int | None]:
    """Least m <= X starting i consecutive equal nonplanar trees, for i = 2..max_index."""
    if max_index < 2:
        raise InvalidArgument(f"max_index must be >= 2, got {max_index}")
    hi = X + max_index - 1
    if hi > sieve.limit:
        raise OutOfRange(f"a_sequence up to X={X} needs a sieve reaching {hi}, have {sieve.limit}")

    def scan(lo, top):
        best = {}
        for start, stop, ext in iter_ranges(lo, top, chunk, max_index - 1):
            t = compute_range(sieve, start, min(ext, hi))
            r = np.minimum(run_lengths(t.nonplanar), max_index)[: stop - start + 1]
            for i in range(2, max_index + 1):
                if i in best:
                    continue
                hit = np.flatnonzero(r >= i)
                if hit.size:
                    best[i] = int(hit[0]) + start
            if len(best) == max_index - 1:
                break
        return best

    found: dict[int, int | None] = {i: None for i in range(2, max_index + 1)}
    for part in map_partitions(scan, 1, X, partitions):
        for i, m in part.items():
            if found[i] is None or m < found[i]:
                found[i] = m
    return found


@dataclass
class PigeonholeResult:
    codes: tuple[str, ...]
    multiplicity: int
    starts: list[int] = field(repr=False, default_factory=list)

    def __iter__(self):
        yield self.codes
        yield self.multiplicity


def pigeonhole_experiment(
    x: int,
    k: int,
    flavor: str = PLANAR,
    sieve: SieveTable | None = None,
    *,
    table: RangeTable | None = None,
) -> PigeonholeResult:
    """Most frequent window of k+1 consecutive trees among windows inside [1, x].

    Ties go to the smallest key tuple, so the answer is deterministic.
    """
    check_flavor(flavor)
    if k < 0 or x < k + 1:
        raise InvalidArgument(f"need 0 <= k < x, got x={x}, k={k}")
    tbl = table_for(sieve, x, table)
    keys = tbl.values(flavor)[:x]
    count = x - k
    rows = np.stack([keys[j:j + count] for j in range(k + 1)], axis=1)
    uniq, inv, counts = np.unique(rows, axis=0, return_inverse=True, return_counts=True)
    best = int(np.argmax(counts))
    starts = (np.flatnonzero(inv.reshape(-1) == best) + 1).tolist()
    codes = tuple(key_to_code(v, flavor) for v in uniq[best])
    return PigeonholeResult(codes, int(counts[best]), starts)


def primorial_window_check(k: int, X: int, sieve: SieveTable, **kw) -> OccurrenceReport:
    """Search the planar window q_k, ..., 2q_k - 1 over [1, X]."""
    q = primorial(k)
    if 2 * q > X:
        raise OutOfRange(f"window of primorial({k}) = {q} needs X >= {2 * q}, got {X}")
    p = pattern_from_integers(range(q, 2 * q), PLANAR, sieve)
    return find_occurrences(p, X, sieve, **kw)
