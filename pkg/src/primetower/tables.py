"""Vectorized per-integer tables over a range, computed from the spf sieve.

Every tree of n above the root level only involves exponents, which are
at most 31 for n < 2**32.  Each exponent e gets a small class id for its
planar and nonplanar code, and the tree of n is then packed into one
int64 key:

* planar: bijective base-K numeral of the exponent class ids (plus one),
  taken in ascending prime order;
* nonplanar: sum of 16**class_id over the prime powers of n, i.e. a
  multiset of classes with one hex digit per class (omega(n) <= 9 keeps
  every digit below 16).

Both keys are injective on codes, so comparing keys is exact.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .arith import SieveTable
from .errors import InvalidArgument, OutOfRange
from .trees import (
    NONPLANAR,
    PLANAR,
    TreeCode,
    decode,
    nonplanar_code,
    planar_code,
    split_children,
    tree_of,
    edges,
    height,
)

MAX_EXPONENT = 31
STATS = ("planar", "nonplanar", "omega", "big_omega", "E", "H")
DEFAULT_CHUNK = 1 << 21


class _Classes:
    def __init__(self):
        es = range(1, MAX_EXPONENT + 1)
        pcodes = {e: planar_code(tree_of(e)).bits for e in es}
        ncodes = {e: nonplanar_code(tree_of(e)).bits for e in es}
        self.planar_codes = sorted(set(pcodes.values()), key=lambda s: (len(s), s))
        self.nonplanar_codes = sorted(set(ncodes.values()), key=lambda s: (len(s), s))
        if len(self.nonplanar_codes) > 15:
            raise AssertionError("nonplanar exponent classes do not fit one hex digit each")
        self.base = len(self.planar_codes) + 1
        p_index = {c: i for i, c in enumerate(self.planar_codes)}
        n_index = {c: i for i, c in enumerate(self.nonplanar_codes)}
        self.planar_index = p_index
        self.nonplanar_index = n_index
        self.planar_digit = np.zeros(MAX_EXPONENT + 1, dtype=np.int64)
        self.nonplanar_weight = np.zeros(MAX_EXPONENT + 1, dtype=np.int64)
        self.edge_inc = np.zeros(MAX_EXPONENT + 1, dtype=np.int8)
        self.height_inc = np.zeros(MAX_EXPONENT + 1, dtype=np.int8)
        for e in es:
            self.planar_digit[e] = p_index[pcodes[e]] + 1
            self.nonplanar_weight[e] = 16 ** n_index[ncodes[e]]
            self.edge_inc[e] = 1 + edges(e)
            self.height_inc[e] = 1 + height(e)


CLASSES = _Classes()


def key_to_code(key: int, flavor: str) -> str:
    key = int(key)
    if flavor == PLANAR:
        digits = []
        while key:
            key, d = divmod(key - 1, CLASSES.base)
            digits.append(d)
        return "".join("1" + CLASSES.planar_codes[d] + "0" for d in reversed(digits))
    if flavor == NONPLANAR:
        wrapped = []
        i = 0
        while key:
            key, c = divmod(key, 16)
            wrapped.extend(["1" + CLASSES.nonplanar_codes[i] + "0"] * c)
            i += 1
        return "".join(sorted(wrapped))
    raise InvalidArgument(f"unknown flavor {flavor!r}")


def code_to_key(code, flavor: str | None = None) -> int | None:
    """Key for a code, or None if no integer below 2**32 can have this tree."""
    if isinstance(code, TreeCode):
        flavor = flavor or code.flavor
        bits = code.bits
    else:
        bits = str(code)
    tree = decode(bits)
    if len(tree) > 9:
        return None
    if flavor == PLANAR:
        key = 0
        for child in split_children(bits):
            i = CLASSES.planar_index.get(child)
            if i is None:
                return None
            key = key * CLASSES.base + i + 1
        return key
    if flavor == NONPLANAR:
        canon = nonplanar_code(tree).bits
        key = 0
        for child in split_children(canon):
            i = CLASSES.nonplanar_index.get(child)
            if i is None:
                return None
            key += 16**i
        return key
    raise InvalidArgument(f"unknown flavor {flavor!r}")


@dataclass
class RangeTable:
    """Arithmetic and tree data for every n in [lo, hi]."""

    lo: int
    hi: int
    omega: np.ndarray
    big_omega: np.ndarray
    E: np.ndarray
    H: np.ndarray
    planar: np.ndarray
    nonplanar: np.ndarray

    def __len__(self):
        return self.hi - self.lo + 1

    @property
    def n(self) -> np.ndarray:
        return np.arange(self.lo, self.hi + 1, dtype=np.int64)

    def values(self, stat: str) -> np.ndarray:
        if stat not in STATS:
            raise InvalidArgument(f"statistic must be one of {STATS}, got {stat!r}")
        return getattr(self, stat)

    def at(self, n: int, stat: str):
        return self.values(stat)[n - self.lo]

    def code(self, n: int, flavor: str) -> str:
        return key_to_code(self.at(n, flavor), flavor)

    def codes(self, flavor: str) -> list[str]:
        keys = self.values(flavor)
        uniq, inv = np.unique(keys, return_inverse=True)
        names = np.array([key_to_code(k, flavor) for k in uniq], dtype=object)
        return list(names[inv])

    @cached_property
    def two_pow_omega(self) -> np.ndarray:
        return np.left_shift(np.int64(1), self.omega.astype(np.int64))


def compute_range(sieve: SieveTable, lo: int, hi: int) -> RangeTable:
    """Factor every n in [lo, hi] at once through repeated spf lookups."""
    if lo < 1:
        raise InvalidArgument(f"range must start at 1 or later, got {lo}")
    if hi > sieve.limit:
        raise OutOfRange(f"range end {hi} exceeds sieve limit {sieve.limit}")
    if hi < lo:
        raise InvalidArgument(f"empty range [{lo}, {hi}]")
    size = hi - lo + 1
    omega = np.zeros(size, dtype=np.int8)
    big = np.zeros(size, dtype=np.int8)
    E = np.zeros(size, dtype=np.int8)
    H = np.zeros(size, dtype=np.int8)
    pkey = np.zeros(size, dtype=np.int64)
    nkey = np.zeros(size, dtype=np.int64)

    spf = sieve.spf
    idx = np.arange(size, dtype=np.int64)
    rem = idx + lo
    active = rem > 1
    idx, rem = idx[active], rem[active]
    while idx.size:
        p = spf[rem].astype(np.int64)
        rem = rem // p
        e = np.ones(idx.size, dtype=np.int64)
        sub = np.flatnonzero(rem % p == 0)
        while sub.size:
            rem[sub] //= p[sub]
            e[sub] += 1
            sub = sub[rem[sub] % p[sub] == 0]
        omega[idx] += 1
        big[idx] += e.astype(np.int8)
        E[idx] += CLASSES.edge_inc[e]
        H[idx] = np.maximum(H[idx], CLASSES.height_inc[e])
        pkey[idx] = pkey[idx] * CLASSES.base + CLASSES.planar_digit[e]
        nkey[idx] += CLASSES.nonplanar_weight[e]
        keep = rem > 1
        idx, rem = idx[keep], rem[keep]
    return RangeTable(lo, hi, omega, big, E, H, pkey, nkey)


def iter_ranges(lo: int, hi: int, chunk: int = DEFAULT_CHUNK, overlap: int = 0):
    """Yield (start, stop, ext) blocks covering [lo, hi].

    ``ext = stop + overlap`` lets windows starting inside the block be read
    in full; it is not clipped, callers bound it by their own data limit.
    """
    start = lo
    while start <= hi:
        stop = min(start + chunk - 1, hi)
        yield start, stop, stop + overlap
        start = stop + 1


def run_lengths(keys: np.ndarray) -> np.ndarray:
    """r[i] = length of the run of equal values starting at i (truncated at the array end)."""
    size = keys.size
    if size == 0:
        return np.zeros(0, dtype=np.int64)
    ends = np.flatnonzero(keys[1:] != keys[:-1])
    ends = np.append(ends, size - 1)
    i = np.arange(size)
    return ends[np.searchsorted(ends, i)] - i + 1
