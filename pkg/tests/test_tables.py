import numpy as np
import pytest

from primetower.arith import big_omega, omega
from primetower.errors import InvalidArgument, OutOfRange
from primetower.parallel import map_partitions, split_range
from primetower.tables import (
    CLASSES,
    code_to_key,
    compute_range,
    iter_ranges,
    key_to_code,
    run_lengths,
)
from primetower.trees import NONPLANAR, PLANAR, edges, height, nonplanar_code, planar_code, tree_of


def test_vectorized_matches_scalar(small_sieve):
    t = compute_range(small_sieve, 1, 20_000)
    for n in range(1, 20_001):
        tr = tree_of(n, small_sieve)
        assert t.at(n, "omega") == omega(n)
        assert t.at(n, "big_omega") == big_omega(n)
        assert t.at(n, "E") == edges(n)
        assert t.at(n, "H") == height(n)
        assert t.code(n, PLANAR) == planar_code(tr).bits
        assert t.code(n, NONPLANAR) == nonplanar_code(tr).bits


def test_keys_are_injective_on_codes(small_sieve):
    t = compute_range(small_sieve, 1, small_sieve.limit)
    for flavor in (PLANAR, NONPLANAR):
        keys = t.values(flavor)
        uniq, first = np.unique(keys, return_index=True)
        codes = [planar_code(tree_of(int(i) + 1)).bits if flavor == PLANAR
                 else nonplanar_code(tree_of(int(i) + 1)).bits for i in first]
        assert len(set(codes)) == len(codes)
        for k, c in zip(uniq, codes):
            assert key_to_code(int(k), flavor) == c
            assert code_to_key(c, flavor) == k


def test_offset_range_agrees_with_full(small_sieve):
    full = compute_range(small_sieve, 1, 50_000)
    part = compute_range(small_sieve, 31_337, 50_000)
    for stat in ("planar", "nonplanar", "omega", "E", "H"):
        assert np.array_equal(full.values(stat)[31_336:], part.values(stat))


def test_code_to_key_unknown_shapes():
    # a root with ten children cannot be the tree of any n < 2**32
    assert code_to_key("10" * 10, PLANAR) is None
    assert code_to_key("", PLANAR) == 0


def test_exponent_classes():
    assert len(CLASSES.planar_codes) == 8
    assert len(CLASSES.nonplanar_codes) == 7


def test_range_errors(small_sieve):
    with pytest.raises(OutOfRange):
        compute_range(small_sieve, 1, small_sieve.limit + 1)
    with pytest.raises(InvalidArgument):
        compute_range(small_sieve, 0, 10)
    with pytest.raises(InvalidArgument):
        t = compute_range(small_sieve, 1, 10)
        t.values("bogus")


def test_iter_ranges_cover():
    blocks = list(iter_ranges(1, 10, chunk=3, overlap=2))
    assert blocks == [(1, 3, 5), (4, 6, 8), (7, 9, 11), (10, 10, 12)]


def test_run_lengths():
    assert run_lengths(np.array([1, 1, 2, 2, 2, 3])).tolist() == [2, 1, 3, 2, 1, 1]
    assert run_lengths(np.array([], dtype=np.int64)).tolist() == []


def test_split_range_and_order():
    assert split_range(1, 10, 3) == [(1, 4), (5, 7), (8, 10)] or sum(
        b - a + 1 for a, b in split_range(1, 10, 3)) == 10
    parts = split_range(1, 1000, 7)
    assert parts[0][0] == 1 and parts[-1][1] == 1000
    assert all(b + 1 == c for (_, b), (c, _) in zip(parts, parts[1:]))
    out = map_partitions(lambda a, b: list(range(a, b + 1)), 1, 100, 4)
    assert [x for p in out for x in p] == list(range(1, 101))
