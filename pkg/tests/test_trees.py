import json
import math
import random

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from primetower.errors import MalformedCode
from primetower.trees import (
    LEAF,
    PlanarTree,
    decode,
    edges,
    from_lists,
    height,
    nonplanar_code,
    planar_code,
    to_json,
    tree_of,
    tree_stats,
)

from . import oracles


def test_tree_of_examples(small_sieve):
    t = tree_of(320, small_sieve)
    assert to_json(t) == "[[[],[]],[]]"
    assert len(t) == 2 and t[0] == tree_of(6) and t[1] == LEAF
    assert t.n_edges == 4
    assert tree_of(1) == LEAF
    assert tree_of(7) == PlanarTree([[]])


def test_planar_codes():
    assert planar_code(tree_of(1)).bits == ""
    assert planar_code(tree_of(2)).bits == "10"
    assert planar_code(tree_of(12)).bits == "110010"
    assert planar_code(tree_of(18)).bits == "101100"


def test_nonplanar_codes():
    assert nonplanar_code(tree_of(12)) == nonplanar_code(tree_of(18))
    assert nonplanar_code(tree_of(12)).bits == "101100"
    assert nonplanar_code(tree_of(1)).bits == ""


def test_edges_and_height():
    assert edges(320) == 4
    assert height(16) == 3
    assert edges(12) == 3 and height(12) == 2
    assert edges(1) == 0 and height(1) == 0


def test_decode_examples():
    assert decode("") == LEAF
    assert decode("10") == PlanarTree([[]])
    assert decode("110010") == tree_of(12)


@pytest.mark.parametrize("bad", ["1", "01", "1100101", "0110", "1120"])
def test_decode_rejects_malformed(bad):
    with pytest.raises(MalformedCode):
        decode(bad)


def test_roundtrip_and_lengths(small_sieve):
    for n in range(1, small_sieve.limit + 1):
        t = tree_of(n, small_sieve)
        pc = planar_code(t)
        assert decode(pc) == t
        e = edges(n, small_sieve)
        assert len(pc) == 2 * e
        assert len(nonplanar_code(t)) == 2 * e


def test_stat_bounds(small_sieve):
    for n in range(2, small_sieve.limit + 1):
        s = tree_stats(n, small_sieve)
        assert s.E >= s.omega
        assert 1 <= s.H <= math.log2(math.log2(n)) + 2


def test_oracle_equivalence_materialized():
    for n in range(1, 10_001):
        t = tree_of(n)
        ref = oracles.tree(n)
        assert from_lists(ref) == t
        assert edges(n) == oracles.n_edges(ref) == t.n_edges
        assert height(n) == oracles.depth(ref) == t.depth
        assert planar_code(t).bits == oracles.parens(ref)


def _shuffled(t, rng):
    kids = [_shuffled(c, rng) for c in t]
    rng.shuffle(kids)
    return PlanarTree(kids)


def test_nonplanar_invariant_under_shuffles():
    rng = random.Random(7)
    for n in rng.sample(range(2, 10**6), 500):
        t = tree_of(n)
        for _ in range(3):
            assert nonplanar_code(_shuffled(t, rng)) == nonplanar_code(t)


def _to_nx(t):
    g = nx.Graph()
    g.add_node(0)
    counter = [0]

    def add(node, parent):
        for c in node:
            counter[0] += 1
            me = counter[0]
            g.add_edge(parent, me)
            add(c, me)

    add(t, 0)
    return g


@settings(max_examples=300, deadline=None)
@given(st.integers(2, 5000), st.integers(2, 5000))
def test_nonplanar_equality_is_rooted_isomorphism(m, n):
    tm, tn = tree_of(m), tree_of(n)
    same = nonplanar_code(tm) == nonplanar_code(tn)
    if tm.n_edges != tn.n_edges:
        assert not same
        return
    iso = bool(nx.isomorphism.rooted_tree_isomorphism(_to_nx(tm), 0, _to_nx(tn), 0))
    assert same == iso


def test_nonplanar_matches_sorted_tuple_oracle():
    seen = {}
    for n in range(1, 3000):
        form = oracles.unordered_form(oracles.tree(n))
        code = nonplanar_code(tree_of(n)).bits
        assert seen.setdefault(form, code) == code
    assert len(set(seen.values())) == len(seen)


def test_json_form():
    t = tree_of(320)
    assert json.loads(to_json(t)) == [[[], []], []]
    assert from_lists(json.loads(to_json(t))) == t
