"""Word overlap decomposition and realization of planar trees inside arithmetic progressions."""
from __future__ import annotations

import math
from dataclasses import dataclass

from sympy import isprime
from sympy.ntheory import n_order

from .errors import InvalidArgument, PreconditionViolation, ResourceError
from .trees import PlanarTree

DEFAULT_BUDGET = 1_000_000


def word_overlap_decompose(alpha, beta, gamma):
    """For words with alpha·beta == beta·gamma return (n, delta) with alpha·beta·gamma == alpha**n · delta.

    delta is a proper prefix of alpha (possibly empty).  Works on any
    sliceable sequence type that supports ``+`` (str, bytes, tuple, list).
    """
    if len(alpha) == 0 or len(gamma) == 0:
        raise InvalidArgument("alpha and gamma must be nonempty")
    if alpha + beta != beta + gamma:
        raise PreconditionViolation("alpha·beta differs from beta·gamma")
    w = alpha + beta + gamma
    n, r = divmod(len(w), len(alpha))
    delta = w[len(w) - r:]
    if alpha * n + delta != w:
        # unreachable when alpha·beta == beta·gamma: w then has period |alpha|
        raise AssertionError("overlap word is not alpha-periodic")
    return n, delta


@dataclass(frozen=True)
class LabeledTower:
    """A planar tree whose edges carry primes; ``edges`` pairs each label with its subtree."""

    edges: tuple[tuple[int, "LabeledTower"], ...] = ()

    @property
    def shape(self) -> PlanarTree:
        return PlanarTree(sub.shape for _, sub in self.edges)

    @property
    def labels(self) -> list[int]:
        """Edge labels in preorder."""
        out = []
        for p, sub in self.edges:
            out.append(p)
            out.extend(sub.labels)
        return out

    def to_lists(self) -> list:
        return [[p, sub.to_lists()] for p, sub in self.edges]

    @classmethod
    def from_lists(cls, obj) -> "LabeledTower":
        return cls(tuple((int(p), cls.from_lists(sub)) for p, sub in obj))

    @classmethod
    def from_int(cls, n: int) -> "LabeledTower":
        from .arith import trial_factorize

        return cls(tuple((p, cls.from_int(e)) for p, e in trial_factorize(n)))


def expand_tower(t: LabeledTower, cap_bits: int = 64) -> int | None:
    """Integer value of the tower, or None once it would need more than ``cap_bits`` bits."""
    value = 1
    bits = 0.0
    for p, sub in t.edges:
        e = expand_tower(sub, cap_bits)
        if e is None:
            return None
        bits += e * math.log2(p)
        if bits > cap_bits:
            return None
        value *= p**e
    return value if value.bit_length() <= cap_bits else None


def _next_prime_in_class(after: int, residue: int, modulus: int, budget: int) -> int:
    """Smallest prime p > after with p ≡ residue (mod modulus)."""
    residue %= modulus
    c = after + 1
    c += (residue - c) % modulus
    for _ in range(budget):
        if isprime(c):
            return c
        c += modulus
    raise ResourceError(
        f"no prime ≡ {residue} (mod {modulus}) found above {after} within {budget} candidates"
    )


def _label(shape: PlanarTree, modulus: int, budget: int) -> LabeledTower:
    """Label every edge by primes ≡ 1 (mod modulus), smallest first, siblings ascending."""
    out, last = [], 1
    for child in shape:
        p = _next_prime_in_class(last, 1, modulus, budget)
        out.append((p, _label(child, modulus, budget)))
        last = p
    return LabeledTower(tuple(out))


def realize_in_progression(shape: PlanarTree, a: int, q: int, budget: int = DEFAULT_BUDGET) -> LabeledTower:
    """Label ``shape`` with primes so that the tower value n has n ≡ a (mod q) and t(n) = shape.

    First root edge: p1 ≡ a (mod q) with its whole subtree labeled ≡ 1 (mod d),
    d the order of a mod q; later root edges ≡ 1 (mod q), their subtrees
    ≡ 1 (mod q·d).  Every choice is the smallest admissible prime.
    """
    shape = PlanarTree(shape)
    if q < 2:
        raise InvalidArgument(f"modulus must be >= 2, got {q}")
    if math.gcd(a, q) != 1:
        raise InvalidArgument(f"gcd({a}, {q}) != 1")
    if not shape:
        raise InvalidArgument("the single-vertex tree cannot be realized (it is the tree of 1)")
    a %= q
    d = n_order(a, q)
    first, *rest = shape
    p1 = _next_prime_in_class(1, a, q, budget)
    edges = [(p1, _label(first, d, budget))]
    last = p1
    for child in rest:
        p = _next_prime_in_class(last, 1, q, budget)
        edges.append((p, _label(child, q * d, budget)))
        last = p
    return LabeledTower(tuple(edges))


def validate_realization(t: LabeledTower, shape: PlanarTree, a: int, q: int) -> list[str]:
    """Structural check of a realization; returns a list of problems (empty when valid)."""
    problems = []
    if t.shape != PlanarTree(shape):
        problems.append("labeled tower does not have the requested shape")

    def walk(node: LabeledTower, modulus: int | None, where: str):
        last = 0
        for i, (p, sub) in enumerate(node.edges):
            if not isprime(p):
                problems.append(f"{where}[{i}] label {p} is not prime")
            if p <= last:
                problems.append(f"{where}[{i}] label {p} does not exceed its left sibling {last}")
            if modulus is not None and p % modulus != 1 % modulus:
                problems.append(f"{where}[{i}] label {p} is not ≡ 1 (mod {modulus})")
            walk(sub, modulus, f"{where}[{i}]")
            last = p

    a %= q
    d = n_order(a, q)
    last = 0
    for j, (p, sub) in enumerate(t.edges):
        if not isprime(p):
            problems.append(f"root[{j}] label {p} is not prime")
        if p <= last:
            problems.append(f"root[{j}] label {p} does not exceed its left sibling {last}")
        want = a if j == 0 else 1
        if p % q != want:
            problems.append(f"root[{j}] label {p} is not ≡ {want} (mod {q})")
        walk(sub, d if j == 0 else q * d, f"root[{j}]")
        last = p
    return problems
