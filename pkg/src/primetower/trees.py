"""Prime tower trees, their bit-string codes, and the edge/height statistics."""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache

from .arith import SieveTable, factor_any as _factor, trial_factorize
from .errors import InvalidArgument, MalformedCode

PLANAR = "planar"
NONPLANAR = "nonplanar"
FLAVORS = (PLANAR, NONPLANAR)


class PlanarTree(tuple):
    """Ordered rooted tree; a tuple of child trees. The leaf is ``PlanarTree()``."""

    __slots__ = ()

    def __new__(cls, children=()):
        return super().__new__(cls, (c if isinstance(c, PlanarTree) else PlanarTree(c) for c in children))

    @property
    def children(self):
        return tuple(self)

    def __repr__(self):
        return f"PlanarTree({to_json(self)})"

    @property
    def n_edges(self) -> int:
        return sum(1 + c.n_edges for c in self)

    @property
    def depth(self) -> int:
        return 1 + max(c.depth for c in self) if self else 0


LEAF = PlanarTree()


@dataclass(frozen=True)
class TreeCode:
    """Balanced 1/0 string of length 2E; '1' descends along an edge, '0' climbs back."""

    bits: str
    flavor: str = PLANAR

    def __str__(self):
        return self.bits

    def __len__(self):
        return len(self.bits)

    @property
    def n_edges(self) -> int:
        return len(self.bits) // 2


@dataclass(frozen=True)
class TreeStats:
    n: int
    omega: int
    big_omega: int
    E: int
    H: int


def check_flavor(flavor: str) -> str:
    if flavor not in FLAVORS:
        raise InvalidArgument(f"flavor must be one of {FLAVORS}, got {flavor!r}")
    return flavor


@lru_cache(maxsize=None)
def _small_tree(e: int) -> PlanarTree:
    return PlanarTree(_small_tree(v) for _, v in trial_factorize(e))


def tree_of(n: int, sieve: SieveTable | None = None) -> PlanarTree:
    """Tree of n: one child per prime divisor, ascending, each the tree of its exponent."""
    return PlanarTree(_small_tree(e) for _, e in _factor(n, sieve))


def _planar_bits(t) -> str:
    return "".join("1" + _planar_bits(c) + "0" for c in t)


def _nonplanar_bits(t) -> str:
    return "".join(sorted("1" + _nonplanar_bits(c) + "0" for c in t))


def planar_code(t: PlanarTree) -> TreeCode:
    return TreeCode(_planar_bits(t), PLANAR)


def nonplanar_code(t: PlanarTree) -> TreeCode:
    """Canonical code of the unordered tree: wrapped child codes sorted lexicographically."""
    return TreeCode(_nonplanar_bits(t), NONPLANAR)


def code_of(t: PlanarTree, flavor: str) -> TreeCode:
    return planar_code(t) if check_flavor(flavor) == PLANAR else nonplanar_code(t)


def code_of_int(n: int, flavor: str, sieve: SieveTable | None = None) -> TreeCode:
    return code_of(tree_of(n, sieve), flavor)


def decode(code) -> PlanarTree:
    """Inverse of :func:`planar_code`; accepts a TreeCode or a plain 0/1 string."""
    bits = code.bits if isinstance(code, TreeCode) else str(code)
    if len(bits) % 2:
        raise MalformedCode(f"odd-length code {bits!r}")
    stack = [[]]
    for i, b in enumerate(bits):
        if b == "1":
            stack.append([])
        elif b == "0":
            if len(stack) == 1:
                raise MalformedCode(f"unbalanced code {bits!r} at position {i}")
            node = PlanarTree(stack.pop())
            stack[-1].append(node)
        else:
            raise MalformedCode(f"invalid symbol {b!r} in code")
    if len(stack) != 1:
        raise MalformedCode(f"unbalanced code {bits!r}")
    return PlanarTree(stack[0])


def split_children(bits: str) -> list[str]:
    """Split a code into the inner codes of the root's children."""
    out, depth, start = [], 0, 0
    for i, b in enumerate(bits):
        depth += 1 if b == "1" else -1
        if depth == 0:
            out.append(bits[start + 1:i])
            start = i + 1
    return out


@lru_cache(maxsize=None)
def _small_edges(e: int) -> int:
    return sum(1 + _small_edges(v) for _, v in trial_factorize(e))


@lru_cache(maxsize=None)
def _small_height(e: int) -> int:
    return max((1 + _small_height(v) for _, v in trial_factorize(e)), default=0)


def edges(n: int, sieve: SieveTable | None = None) -> int:
    """E(n) = sum over p^v || n of 1 + E(v)."""
    return sum(1 + _small_edges(v) for _, v in _factor(n, sieve))


def height(n: int, sieve: SieveTable | None = None) -> int:
    """H(n) = 1 + max over p^v || n of H(v); H(1) = 0."""
    return max((1 + _small_height(v) for _, v in _factor(n, sieve)), default=0)


def tree_stats(n: int, sieve: SieveTable | None = None) -> TreeStats:
    f = _factor(n, sieve)
    return TreeStats(
        n=n,
        omega=len(f),
        big_omega=sum(v for _, v in f),
        E=sum(1 + _small_edges(v) for _, v in f),
        H=max((1 + _small_height(v) for _, v in f), default=0),
    )


def to_json(t: PlanarTree) -> str:
    return json.dumps(to_lists(t), separators=(",", ":"))


def to_lists(t: PlanarTree) -> list:
    return [to_lists(c) for c in t]


def from_lists(obj) -> PlanarTree:
    if not isinstance(obj, (list, tuple)):
        raise MalformedCode(f"tree nodes must be arrays, got {type(obj).__name__}")
    return PlanarTree(from_lists(c) for c in obj)
