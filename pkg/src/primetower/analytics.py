"""Counting functions and empirical monitors for the inequalities about tree statistics.

All logarithms are natural.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .arith import SieveTable, rho_array, tetration2
from .errors import ArithmeticOverflow, InvalidArgument, OutOfRange
from .parallel import map_partitions
from .patterns import table_for
from .tables import DEFAULT_CHUNK, compute_range, iter_ranges, run_lengths
from .trees import NONPLANAR, check_flavor

C1 = 6 / math.pi**2
MU = 3 * math.log(2) - 1
_INT64_MAX = 2**63 - 1


@dataclass
class BoundReport:
    bound_id: str
    range: tuple[int, int]
    observed_max_ratio: float
    witness_n: int | None
    threshold: float

    @property
    def passed(self) -> bool:
        return self.observed_max_ratio <= self.threshold

    def to_dict(self):
        d = asdict(self)
        d["range"] = list(self.range)
        d["pass"] = self.passed
        return d


def _check_range(sieve: SieveTable, hi: int):
    if hi > sieve.limit:
        raise OutOfRange(f"needs values up to {hi}, sieve limit is {sieve.limit}")


def _chunked_sum(sieve, lo, hi, fn, partitions=1, chunk=DEFAULT_CHUNK):
    _check_range(sieve, hi)

    def part(a, b):
        total = 0
        for start, stop, _ in iter_ranges(a, b, chunk):
            total += int(fn(compute_range(sieve, start, stop)))
        return total

    return sum(map_partitions(part, lo, hi, partitions))


def F_sum(x: int, sieve: SieveTable, partitions: int = 1) -> int:
    """F(x) = sum of 2**omega(n) over n <= x."""
    if x < 1:
        return 0
    total = _chunked_sum(sieve, 1, x, lambda t: t.two_pow_omega.sum(dtype=np.int64), partitions)
    if total > _INT64_MAX:
        raise ArithmeticOverflow(f"F({x}) overflows the accumulator")
    return total


def F_sum_squarefree(x: int) -> int:
    """F(x) via 2**omega = sum over squarefree d | n, i.e. sum_{d<=x} mu(d)**2 * floor(x/d).

    Uses a square-divisor sieve only, no factorization.
    """
    if x < 1:
        return 0
    sqfree = np.ones(x + 1, dtype=bool)
    sqfree[0] = False
    for r in range(2, math.isqrt(x) + 1):
        sqfree[r * r::r * r] = False
    d = np.flatnonzero(sqfree)
    return int((x // d).sum())


def F_prefix(x: int, sieve: SieveTable) -> np.ndarray:
    """Array P with P[m] = F(m) for 0 <= m <= x."""
    t = table_for(sieve, x)
    out = np.zeros(x + 1, dtype=np.int64)
    np.cumsum(t.two_pow_omega[:x], out=out[1:])
    return out


def asymptotic_residual(x: int, c2_est: float, sieve: SieveTable, *, F: int | None = None) -> float:
    """(F(x) - c1 x log x - c2 x) / sqrt(x) with c1 = 6/pi^2."""
    if x < 1:
        raise InvalidArgument(f"x must be >= 1, got {x}")
    F = F_sum(x, sieve) if F is None else F
    return (F - C1 * x * math.log(x) - c2_est * x) / math.sqrt(x)


def estimate_c2(x: int, sieve: SieveTable, *, F: int | None = None) -> float:
    if x < 1:
        raise InvalidArgument(f"x must be >= 1, got {x}")
    F = F_sum(x, sieve) if F is None else F
    return (F - C1 * x * math.log(x)) / x


def edge_threshold(x: float) -> float:
    """3 log log x."""
    if x < 16:
        raise InvalidArgument(f"x must be >= 16 so that log log x is meaningful, got {x}")
    return 3 * math.log(math.log(x))


def _window_all(good: np.ndarray, count: int, width: int) -> np.ndarray:
    """ok[i] = good[i:i+width].all() for i < count."""
    bad = np.concatenate(([0], np.cumsum(~good, dtype=np.int64)))
    return (bad[width:width + count] - bad[:count]) == 0


def J_count(x: int, k: int, sieve: SieveTable) -> int:
    """#{n <= x : E(n), ..., E(n+k) <= 3 log log x}; windows may run past x."""
    thr = edge_threshold(x)
    if k < 0:
        raise InvalidArgument(f"k must be >= 0, got {k}")
    _check_range(sieve, x + k)
    t = compute_range(sieve, 1, x + k)
    return int(_window_all(t.E <= thr, x, k + 1).sum())


def edge_tail(x: int, sieve: SieveTable) -> int:
    """#{n <= x : E(n) >= 3 log log x}."""
    thr = edge_threshold(x)
    return _chunked_sum(sieve, 1, x, lambda t: np.count_nonzero(t.E >= thr))


def edge_tail_ratio(x: int, count: int) -> float:
    return count * math.log(x) ** MU / x


def height_tail(x: int, y: int, l: int, sieve: SieveTable) -> int:
    """S_l(x; y) = #{x < n <= x + y : H(n) >= l}."""
    if x < 0 or y < 0:
        raise InvalidArgument(f"x and y must be >= 0, got {x}, {y}")
    if y == 0:
        return 0
    return _chunked_sum(sieve, x + 1, x + y, lambda t: np.count_nonzero(t.H >= l))


def height_tail_global(x: int, k: int, sieve: SieveTable) -> int:
    """#{n <= x : H(n) >= k}."""
    return height_tail(0, x, k, sieve)


def height_tail_ratio(x: int, k: int, count: int) -> float:
    return count * tetration2(k) / x


def big_run_census(x: int, g: int, flavor: str, sieve: SieveTable) -> int:
    """K(x; g) = #{n <= x : k(n) >= g}."""
    check_flavor(flavor)
    if g < 1:
        raise InvalidArgument(f"g must be >= 1, got {g}")
    _check_range(sieve, x + g)
    if x < 1:
        return 0
    total = 0
    for start, stop, ext in iter_ranges(2, x + 1, DEFAULT_CHUNK, g - 1):
        t = compute_range(sieve, start, min(ext, x + g))
        r = run_lengths(t.values(flavor))[: stop - start + 1]
        total += int(np.count_nonzero(r >= g))
    return total


def smooth_omega_census(x: int, k: int, a: int, sieve: SieveTable) -> int:
    """V_k(x) = #{n <= x : Omega(n + j) <= a for 0 <= j <= k}."""
    if k < 0:
        raise InvalidArgument(f"k must be >= 0, got {k}")
    _check_range(sieve, x + k)
    if x < 1:
        return 0
    t = compute_range(sieve, 1, x + k)
    return int(_window_all(t.big_omega <= a, x, k + 1).sum())


@dataclass
class GapReport:
    code: str
    search_limit: int
    occurrences: list[int]

    @property
    def gaps(self) -> list[int]:
        return [b - a for a, b in zip(self.occurrences, self.occurrences[1:])]

    @property
    def max_gap(self) -> int | None:
        g = self.gaps
        return max(g) if g else None

    def to_dict(self):
        return {
            "code": self.code,
            "search_limit": self.search_limit,
            "occurrences": len(self.occurrences),
            "max_gap": self.max_gap,
            "status": "ABSENT" if self.max_gap is None else "COMPUTED",
        }


def same_tree_gaps(n1: int, X: int, flavor: str, sieve: SieveTable) -> GapReport:
    """Occurrences of the tree of n1 in [n1, X] and their consecutive gaps."""
    check_flavor(flavor)
    if n1 < 1 or X < n1:
        raise InvalidArgument(f"need 1 <= n1 <= X, got n1={n1}, X={X}")
    _check_range(sieve, X)
    t = compute_range(sieve, n1, X)
    keys = t.values(flavor)
    occ = (np.flatnonzero(keys == keys[0]) + n1).tolist()
    return GapReport(t.code(n1, flavor), X, occ)


def progression_quantity(n: int, m: int, k: int) -> float:
    """k log((n + k) / (m + k)) for a pair of matching windows at m < n of length k."""
    return k * math.log((n + k) / (m + k))


def _stat_runs(sieve: SieveTable, lo: int, hi: int, stat: str) -> np.ndarray:
    """Run length of equal ``stat`` values starting at n + 1, for n in [lo, hi]."""
    pad = 64
    while True:
        top = min(sieve.limit, hi + pad)
        if top <= hi:
            raise OutOfRange(f"runs after {hi} need values beyond the sieve limit {sieve.limit}")
        r = run_lengths(compute_range(sieve, lo + 1, top).values(stat))
        k = r[: hi - lo + 1]
        if not np.any(np.arange(k.size) + k >= r.size):
            return k.copy()
        if top == sieve.limit:
            raise OutOfRange(f"a run starting at or before {hi} reaches the sieve limit {sieve.limit}")
        pad *= 4


def run_bound_monitor(x: int, sieve: SieveTable, threshold: float = 2.0, start: int = 10) -> BoundReport:
    """max over start <= n <= x with k(n) >= 2 of log k(n) * log log n / log n."""
    if x < start:
        return BoundReport("run", (start, x), 0.0, None, threshold)
    k = _stat_runs(sieve, start, x, NONPLANAR)
    n = np.arange(start, x + 1, dtype=np.float64)
    ratio = np.where(k >= 2, np.log(np.maximum(k, 1)) * np.log(np.log(n)) / np.log(n), 0.0)
    i = int(np.argmax(ratio))
    best = float(ratio[i])
    return BoundReport("run", (start, x), best, start + i if best > 0 else None, threshold)


def eps_monitor(x: int, sieve: SieveTable) -> BoundReport:
    """max over n <= x of k(n) / k_omega(n); a nonplanar run is always an omega run."""
    k = _stat_runs(sieve, 1, x, NONPLANAR)
    ratio = k / _stat_runs(sieve, 1, x, "omega")
    i = int(np.argmax(ratio))
    return BoundReport("eps", (1, x), float(ratio[i]), 1 + i, 1.0)


def height_monitor(sieve: SieveTable, xs=(10**4, 10**5, 10**6), ks=(1, 2, 3), threshold: float = 3.0) -> BoundReport:
    """max over x, k of #{n <= x : H(n) >= k} * (2↑↑k) / x."""
    xs = [x for x in xs if x <= sieve.limit]
    if not xs:
        raise OutOfRange(f"no height-monitor point fits the sieve limit {sieve.limit}")
    t = compute_range(sieve, 1, max(xs))
    best, witness = 0.0, None
    for x in xs:
        for k in ks:
            r = height_tail_ratio(x, k, int(np.count_nonzero(t.H[:x] >= k)))
            if r > best:
                best, witness = r, x
    return BoundReport("height", (min(xs), max(xs)), best, witness, threshold)


def rho_monitor(limit: int, threshold: float = 5.0) -> BoundReport:
    """max over 2 <= q <= limit of rho(q) / log(q + 2)."""
    q = np.arange(2, limit + 1, dtype=np.int64)
    ratio = rho_array(q) / np.log(q + 2.0)
    i = int(np.argmax(ratio))
    return BoundReport("rho", (2, limit), float(ratio[i]), int(q[i]), threshold)


def residual_monitor(sieve: SieveTable, *, fit_at: int = 10**6, threshold: float = 10.0,
                     exponents=range(10, 21, 2)) -> BoundReport:
    """max |residual(x)| over x = 2**e with c2 fitted once at ``fit_at``."""
    xs = [2**e for e in exponents if 2**e <= sieve.limit]
    fit_at = min(fit_at, sieve.limit)
    P = F_prefix(max(xs + [fit_at]), sieve)
    c2 = estimate_c2(fit_at, sieve, F=int(P[fit_at]))
    best, witness = 0.0, None
    for x in xs:
        r = abs(asymptotic_residual(x, c2, sieve, F=int(P[x])))
        if r >= best:
            best, witness = r, x
    return BoundReport("residual", (min(xs), max(xs)), best, witness, threshold)
