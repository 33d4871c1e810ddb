"""Split a range into contiguous partitions and merge per-partition results in order."""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

from .errors import InvalidArgument


def split_range(lo: int, hi: int, partitions: int) -> list[tuple[int, int]]:
    if partitions < 1:
        raise InvalidArgument(f"partitions must be >= 1, got {partitions}")
    size = hi - lo + 1
    if size <= 0:
        return []
    partitions = min(partitions, size)
    step, extra = divmod(size, partitions)
    out, start = [], lo
    for i in range(partitions):
        stop = start + step - 1 + (1 if i < extra else 0)
        out.append((start, stop))
        start = stop + 1
    return out


def map_partitions(fn, lo: int, hi: int, partitions: int = 1) -> list:
    """Call ``fn(start, stop)`` on each partition of [lo, hi]; results keep range order.

    numpy releases the GIL in the heavy kernels, so threads are enough and
    the read-only sieve is shared without copying.
    """
    parts = split_range(lo, hi, partitions)
    if len(parts) <= 1:
        return [fn(a, b) for a, b in parts]
    with ThreadPoolExecutor(max_workers=len(parts)) as pool:
        return list(pool.map(lambda ab: fn(*ab), parts))
