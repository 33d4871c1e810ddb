import math
import random

import pytest
from sympy import factorint

from primetower.constructive import (
    LabeledTower,
    expand_tower,
    realize_in_progression,
    validate_realization,
    word_overlap_decompose,
)
from primetower.errors import InvalidArgument, PreconditionViolation
from primetower.trees import PlanarTree, planar_code, tree_of


def test_word_examples():
    assert word_overlap_decompose("ab", "a", "ba") == (2, "a")
    assert word_overlap_decompose("x", "", "x") == (2, "")
    assert word_overlap_decompose("a", "aaa", "a") == (5, "")
    assert word_overlap_decompose((1, 2), (1,), (2, 1)) == (2, (1,))


def test_word_errors():
    with pytest.raises(PreconditionViolation):
        word_overlap_decompose("ab", "b", "ab")
    with pytest.raises(InvalidArgument):
        word_overlap_decompose("", "a", "")


def _random_triple(rng):
    u = "".join(rng.choice("ab") for _ in range(rng.randint(0, 4)))
    v = "".join(rng.choice("ab") for _ in range(rng.randint(0, 4)))
    if not u + v:
        v = "a"
    j = rng.randint(0, 4)
    return u + v, (u + v) * j + u, v + u


def test_word_fuzz():
    rng = random.Random(11)
    for _ in range(1000):
        alpha, beta, gamma = _random_triple(rng)
        assert alpha + beta == beta + gamma
        n, delta = word_overlap_decompose(alpha, beta, gamma)
        assert n >= 1
        assert alpha * n + delta == alpha + beta + gamma
        assert len(delta) < len(alpha) and alpha.startswith(delta)


def test_expand_tower():
    assert expand_tower(LabeledTower(((3, LabeledTower()),))) == 3
    assert expand_tower(LabeledTower.from_int(320)) == 320
    two = LabeledTower(((2, LabeledTower()),))
    huge = LabeledTower(((2, LabeledTower(((2, LabeledTower(((2, LabeledTower(((2, LabeledTower.from_int(10)),))),))),))),))
    assert expand_tower(huge) is None
    assert expand_tower(two) == 2


def test_realize_examples():
    t = realize_in_progression(tree_of(2), 3, 5)
    assert t.to_lists() == [[3, []]] and expand_tower(t) == 3
    t = realize_in_progression(tree_of(12), 1, 4)
    n = expand_tower(t)
    assert n is not None and n % 4 == 1
    assert planar_code(tree_of(n)).bits == "110010"
    assert validate_realization(t, tree_of(12), 1, 4) == []


def test_realize_errors():
    with pytest.raises(InvalidArgument):
        realize_in_progression(tree_of(2), 2, 4)
    with pytest.raises(InvalidArgument):
        realize_in_progression(PlanarTree(), 1, 4)
    with pytest.raises(InvalidArgument):
        realize_in_progression(tree_of(2), 1, 1)


def test_validator_flags_bad_towers():
    shape = tree_of(12)
    good = realize_in_progression(shape, 1, 4)
    assert validate_realization(good, shape, 1, 4) == []
    assert validate_realization(good, tree_of(18), 1, 4)
    bad = LabeledTower(((4, LabeledTower()),))
    assert validate_realization(bad, tree_of(2), 1, 3)


def _random_shape(rng, budget):
    kids = []
    while budget > 0 and rng.random() < 0.7:
        sub = rng.randint(0, budget - 1)
        kids.append(_random_shape(rng, sub))
        budget -= sub + 1
    return PlanarTree(kids)


def test_realize_random_instances():
    rng = random.Random(5)
    for _ in range(60):
        shape = _random_shape(rng, 6)
        if not shape:
            shape = tree_of(2)
        q = rng.randint(2, 50)
        a = rng.choice([a for a in range(q) if math.gcd(a, q) == 1])
        t = realize_in_progression(shape, a, q)
        assert validate_realization(t, shape, a, q) == []
        n = expand_tower(t)
        if n is not None:
            assert n % q == a
            f = factorint(n)
            assert LabeledTower.from_int(n) == t and len(f) == len(shape)
