"""Smallest-prime-factor sieve, factorization and elementary arithmetic functions."""
from __future__ import annotations

import math
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import (
    ArithmeticOverflow,
    CacheCorrupt,
    InvalidArgument,
    OutOfRange,
    ResourceError,
)

SPF_DTYPE = np.uint32
MAX_LIMIT = 2**32 - 1
DEFAULT_CEILING = 32_000_000

CACHE_MAGIC = b"PTWR"
CACHE_VERSION = 1
_HEADER = struct.Struct("<4sBQ")  # 13 bytes

U64_MAX = 2**64 - 1
MAX_PRIMORIAL_K = 15
MAX_TETRATION_L = 4

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71)


@dataclass(frozen=True, eq=False)
class SieveTable:
    """Smallest prime factor of every n in [2, limit].

    ``spf`` has length ``limit + 1``; entries 0 and 1 are 0.
    """

    limit: int
    spf: np.ndarray

    def __post_init__(self):
        self.spf.flags.writeable = False

    def __len__(self):
        return self.limit + 1

    def is_prime(self, n: int) -> bool:
        self.check(n)
        return n >= 2 and int(self.spf[n]) == n

    def primes(self, upto: int | None = None) -> np.ndarray:
        upto = self.limit if upto is None else min(upto, self.limit)
        idx = np.arange(2, upto + 1)
        return idx[self.spf[2:upto + 1] == idx]

    def check(self, n: int):
        if n < 0:
            raise InvalidArgument(f"expected a positive integer, got {n}")
        if n == 0:
            raise InvalidArgument("0 has no prime tower factorization")
        if n > self.limit:
            raise OutOfRange(f"{n} exceeds sieve limit {self.limit}")


def build_sieve(limit: int) -> SieveTable:
    if limit < 2:
        raise InvalidArgument(f"sieve limit must be >= 2, got {limit}")
    if limit > MAX_LIMIT:
        raise InvalidArgument(f"sieve limit capped at {MAX_LIMIT}, got {limit}")
    try:
        spf = np.zeros(limit + 1, dtype=SPF_DTYPE)
    except MemoryError as exc:
        need = 4 * (limit + 1)
        raise ResourceError(f"sieve of limit {limit} needs {need} bytes") from exc
    r = math.isqrt(limit)
    for p in range(2, r + 1):
        if spf[p]:
            continue
        block = spf[p * p::p]
        block[block == 0] = p
    rest = np.flatnonzero(spf == 0)
    spf[rest] = rest.astype(SPF_DTYPE)
    spf[0] = spf[1] = 0
    return SieveTable(limit, spf)


def save_sieve(sieve: SieveTable, path) -> None:
    """Write ``sieve`` in the PTWR cache format (13-byte header + little-endian u32 body)."""
    path = Path(path)
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(CACHE_MAGIC, CACHE_VERSION, sieve.limit))
        sieve.spf[2:].astype("<u4", copy=False).tofile(fh)


def read_cache_limit(path) -> int:
    with open(path, "rb") as fh:
        head = fh.read(_HEADER.size)
    return _parse_header(head, path)


def _parse_header(head: bytes, path) -> int:
    if len(head) < _HEADER.size:
        raise CacheCorrupt(f"{path}: truncated header")
    magic, version, limit = _HEADER.unpack(head)
    if magic != CACHE_MAGIC:
        raise CacheCorrupt(f"{path}: bad magic {magic!r}")
    if version != CACHE_VERSION:
        raise CacheCorrupt(f"{path}: unsupported version {version}")
    if limit < 2 or limit > MAX_LIMIT:
        raise CacheCorrupt(f"{path}: implausible limit {limit}")
    return limit


def load_sieve(path) -> SieveTable:
    path = Path(path)
    with open(path, "rb") as fh:
        limit = _parse_header(fh.read(_HEADER.size), path)
        body = np.fromfile(fh, dtype="<u4")
    if body.size != limit - 1:
        raise CacheCorrupt(
            f"{path}: expected {limit - 1} entries for limit {limit}, found {body.size}"
        )
    spf = np.zeros(limit + 1, dtype=SPF_DTYPE)
    spf[2:] = body
    # cheap structural spot check; a full validation costs as much as a rebuild
    probe = np.unique(np.linspace(2, limit, num=min(limit - 1, 4096)).astype(np.int64))
    p = spf[probe].astype(np.int64)
    if np.any(p < 2) or np.any(probe % p) or spf[2] != 2:
        raise CacheCorrupt(f"{path}: spf entries do not divide their index")
    return SieveTable(limit, spf)


def factorize(n: int, sieve: SieveTable) -> list[tuple[int, int]]:
    """Return ``[(p, e), ...]`` with p strictly increasing; ``factorize(1) == []``."""
    sieve.check(n)
    spf = sieve.spf
    out = []
    while n > 1:
        p = int(spf[n])
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        out.append((p, e))
    return out


def factor_any(n: int, sieve: SieveTable | None = None) -> list[tuple[int, int]]:
    """Factor with the sieve when given, else by trial division."""
    if sieve is None:
        if n < 1:
            raise InvalidArgument(f"expected a positive integer, got {n}")
        return trial_factorize(n)
    return factorize(n, sieve)


def trial_factorize(n: int) -> list[tuple[int, int]]:
    """Factor by trial division; for values outside any sieve."""
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += 1 if d == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


def omega(n: int, sieve: SieveTable | None = None) -> int:
    return len(factor_any(n, sieve))


def big_omega(n: int, sieve: SieveTable | None = None) -> int:
    return sum(e for _, e in factor_any(n, sieve))


def nu_p(n: int, p: int) -> int:
    if n < 1:
        raise InvalidArgument(f"expected a positive integer, got {n}")
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


def first_primes(k: int) -> list[int]:
    out, c = [], 2
    while len(out) < k:
        if all(c % p for p in out if p * p <= c):
            out.append(c)
        c += 1
    return out


def primorial(k: int) -> int:
    """Product of the first ``k`` primes (fits 64 bits for k <= 15)."""
    if k < 1:
        raise InvalidArgument(f"primorial index must be >= 1, got {k}")
    if k > MAX_PRIMORIAL_K:
        raise ArithmeticOverflow(
            f"primorial({k}) exceeds 64 bits; max supported k is {MAX_PRIMORIAL_K}"
        )
    return math.prod(first_primes(k))


def rho(q: int) -> int:
    """Least prime not dividing q."""
    if q < 2:
        raise InvalidArgument(f"rho needs q >= 2, got {q}")
    for p in _SMALL_PRIMES:
        if q % p:
            return p
    # q would have to exceed the primorial of 20 primes; fall back to a slow walk
    p = _SMALL_PRIMES[-1]
    while True:
        p += 2
        if all(p % d for d in range(3, math.isqrt(p) + 1, 2)) and q % p:
            return p


def rho_array(qs: np.ndarray) -> np.ndarray:
    """Vectorized ``rho`` over an integer array (all entries >= 2)."""
    qs = np.asarray(qs, dtype=np.int64)
    out = np.zeros(qs.shape, dtype=np.int64)
    for p in _SMALL_PRIMES:
        todo = out == 0
        if not todo.any():
            break
        hit = todo & (qs % p != 0)
        out[hit] = p
    if (out == 0).any():
        raise OutOfRange("rho_array only handles q below the 20th primorial")
    return out


def tetration2(l: int) -> int:
    """2↑↑l: a tower of l twos (2↑↑0 = 1)."""
    if l < 0:
        raise InvalidArgument(f"tetration height must be >= 0, got {l}")
    if l > MAX_TETRATION_L:
        raise ArithmeticOverflow(f"2↑↑{l} exceeds 64 bits; max supported height is {MAX_TETRATION_L}")
    v = 1
    for _ in range(l):
        v = 2**v
    return v
