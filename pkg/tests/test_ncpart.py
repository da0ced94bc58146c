import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from freeprob import ncpart as nc
from freeprob.errors import ResourceLimitError, ValidationError


def catalan_recurrence(n):
    cs = [1]
    for m in range(1, n + 1):
        cs.append(sum(cs[i] * cs[m - 1 - i] for i in range(m)))
    return cs[n]


def test_noncrossing_examples_from_circular_representation():
    good = nc.Partition(12, [(1, 2, 5, 9), (3, 4), (6,), (7, 8), (10, 11, 12)])
    assert nc.is_noncrossing(good)
    bad = nc.Partition(12, [(1, 4, 7), (2, 9), (3, 11, 12), (5, 6, 8, 10)])
    assert not nc.is_noncrossing(bad)
    assert nc.is_noncrossing(nc.one_partition(9))


def test_ncpartition_rejects_crossing():
    with pytest.raises(ValidationError):
        nc.NCPartition(4, [(1, 3), (2, 4)])


def test_partition_validation():
    with pytest.raises(ValidationError):
        nc.Partition(3, [(1, 2)])
    with pytest.raises(ValidationError):
        nc.Partition(3, [(1, 2), (2, 3)])


@pytest.mark.parametrize("n", range(1, 13))
def test_enumerate_nc_counts_match_independent_recurrence(n):
    assert sum(1 for _ in nc.iter_nc(n)) == catalan_recurrence(n)


def test_enumerate_nc_small_cases():
    assert [p.blocks for p in nc.enumerate_nc(1)] == [((1,),)]
    assert len(nc.enumerate_nc(3)) == 5
    assert len(nc.enumerate_nc(6)) == 132


def test_enumeration_is_duplicate_free_and_deterministic():
    run1 = [p.blocks for p in nc.enumerate_nc(6)]
    run2 = [p.blocks for p in nc.enumerate_nc(6)]
    assert run1 == run2
    assert len(set(run1)) == len(run1)


def test_enumeration_cap():
    with pytest.raises(ResourceLimitError):
        nc.enumerate_nc(17)
    # budget for structured enumerations follows the partition count
    with pytest.raises(ResourceLimitError):
        nc.enumerate_kdivisible(5, 4, max_n=4)
    assert len(nc.enumerate_kdivisible(5, 4, max_n=10)) == \
        nc.fuss_catalan_kdivisible(5, 4)
    with pytest.raises(ResourceLimitError):
        list(nc.iter_kequal(2, 12, max_n=6))


def test_cap_env_override(monkeypatch):
    monkeypatch.setenv("FREEPROB_MAX_N", "3")
    with pytest.raises(ResourceLimitError):
        nc.enumerate_nc(4)
    assert len(nc.enumerate_nc(3)) == 5


@pytest.mark.parametrize("k,n", [(1, 3), (2, 2), (2, 3), (3, 2), (2, 4), (4, 2)])
def test_kdivisible_matches_filter_oracle(k, n):
    direct = nc.enumerate_kdivisible(k, n)
    oracle = [
        p.blocks for p in nc.iter_nc(k * n) if all(len(b) % k == 0 for b in p.blocks)
    ]
    assert sorted(p.blocks for p in direct) == sorted(oracle)
    assert len(direct) == nc.fuss_catalan_kdivisible(k, n)


def test_kdivisible_examples():
    got = {p.blocks for p in nc.enumerate_kdivisible(2, 2)}
    assert got == {
        ((1, 2, 3, 4),),
        ((1, 2), (3, 4)),
        ((1, 4), (2, 3)),
    }
    assert len(nc.enumerate_kdivisible(1, 3)) == 5
    assert len(nc.enumerate_kdivisible(3, 2)) == 4
    assert math.comb(8, 2) // 7 == 4


@pytest.mark.parametrize("k,n", [(1, 4), (2, 2), (2, 3), (3, 2), (3, 3), (4, 2)])
def test_kequal_matches_filter_oracle(k, n):
    direct = nc.enumerate_kequal(k, n)
    oracle = [
        p.blocks for p in nc.iter_nc(k * n) if all(len(b) == k for b in p.blocks)
    ]
    assert sorted(p.blocks for p in direct) == sorted(oracle)
    assert len(direct) == nc.count_kequal(k, n)


def test_kequal_examples():
    got = {p.blocks for p in nc.enumerate_kequal(2, 2)}
    assert got == {((1, 2), (3, 4)), ((1, 4), (2, 3))}
    assert len(nc.enumerate_kequal(4, 1)) == 1
    assert len(nc.enumerate_kequal(3, 2)) == 3
    assert nc.count_kequal(2, 3) == 5


def test_count_coincidences():
    # (k+1)-equal of [(k+1)n], k-divisible of [kn] and k-multichains agree
    for k in range(1, 6):
        for n in range(1, 6):
            a = nc.count_kequal(k + 1, n)
            b = nc.fuss_catalan_kdivisible(k, n)
            c = nc.count_multichains(k, n)
            assert a == b == c
    assert nc.fuss_catalan_kdivisible(1, 7) == nc.catalan(7)


def test_multichain_closed_form_against_pair_enumeration():
    # 2-multichains are just comparable pairs
    for n in range(1, 6):
        elems = nc.enumerate_nc(n)
        pairs = sum(
            1 for p in elems for q in elems if nc.leq(p, q)
        )
        assert pairs == nc.count_multichains(2, n)
    assert nc.count_multichains(2, 2) == 3


# --- Kreweras ---------------------------------------------------------------


def _interleave_noncrossing(p, s):
    n = p.n
    blocks = [tuple(2 * x - 1 for x in b) for b in p.blocks]
    blocks += [tuple(2 * x for x in b) for b in s.blocks]
    return nc.is_noncrossing(nc.Partition(2 * n, blocks))


@pytest.mark.parametrize("n", range(1, 7))
def test_kreweras_is_the_coarsest_interleaving_complement(n):
    allp = nc.enumerate_nc(n)
    for p in allp:
        kr = nc.kreweras(p)
        candidates = [s for s in allp if _interleave_noncrossing(p, s)]
        best = min(len(c) for c in candidates)
        maximal = [c for c in candidates if len(c) == best]
        assert maximal == [kr]
        assert all(nc.leq(c, kr) for c in candidates)


def test_kreweras_examples():
    assert nc.kreweras(nc.zero_partition(6)) == nc.one_partition(6)
    assert nc.kreweras(nc.one_partition(6)) == nc.zero_partition(6)
    p = nc.NCPartition(4, [(1, 2), (3, 4)])
    assert nc.kreweras(p).blocks == ((1,), (2, 4), (3,))


@pytest.mark.parametrize("n", range(1, 10))
def test_kreweras_block_count_identity(n):
    for p in nc.iter_nc(n):
        kr = nc.kreweras(p)
        assert len(p) + len(kr) == n + 1
        assert _interleave_noncrossing(p, kr)


def test_kreweras_reverses_order():
    for n in range(2, 8):
        elems = nc.enumerate_nc(n)
        for p in elems:
            for q in elems:
                if nc.leq(p, q):
                    assert nc.leq(nc.kreweras(q), nc.kreweras(p))


def test_kreweras_rejects_crossing_input():
    with pytest.raises(ValidationError):
        nc.kreweras(nc.Partition(4, [(1, 3), (2, 4)]))


# --- order and join ---------------------------------------------------------


def test_leq_basics():
    for n in (3, 5):
        for p in nc.iter_nc(n):
            assert nc.leq(nc.zero_partition(n), p)
            assert nc.leq(p, nc.one_partition(n))
            assert nc.leq(p, p)


@pytest.mark.parametrize("n", range(2, 6))
def test_join_matches_bruteforce_least_upper_bound(n):
    elems = nc.enumerate_nc(n)
    for p in elems:
        for q in elems:
            ubs = [s for s in elems if nc.leq(p, s) and nc.leq(q, s)]
            least = [s for s in ubs if all(nc.leq(s, t) for t in ubs)]
            assert len(least) == 1
            assert nc.join(p, q) == least[0]


def test_join_properties():
    elems = nc.enumerate_nc(6)
    z = nc.zero_partition(6)
    for p in elems[::7]:
        assert nc.join(p, z) == p
        assert nc.join(p, p) == p
        for q in elems[::11]:
            assert nc.join(p, q) == nc.join(q, p)


def test_join_is_monotone():
    elems = nc.enumerate_nc(5)
    for p in elems[::3]:
        for p2 in elems[::5]:
            if not nc.leq(p, p2):
                continue
            for q in elems[::4]:
                assert nc.leq(nc.join(p, q), nc.join(p2, q))


def test_join_example():
    a = nc.NCPartition(4, [(1, 3), (2,), (4,)])
    b = nc.NCPartition(4, [(1,), (2, 4), (3,)])
    assert nc.join(a, b) == nc.one_partition(4)


# --- text format ------------------------------------------------------------


def test_text_format_roundtrip():
    p = nc.NCPartition(5, [(1, 2, 5), (3, 4)])
    text = nc.format_partition(p)
    assert text == "{1,2,5}{3,4}"
    assert nc.parse_partition(text) == p


def test_parse_rejects_garbage():
    with pytest.raises(ValidationError):
        nc.parse_partition("1,2}{3")
    with pytest.raises(ValidationError):
        nc.parse_partition("{1,x}")


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=1, max_value=7), st.randoms(use_true_random=False))
def test_random_partition_canonical_roundtrip(n, rnd):
    labels = list(range(1, n + 1))
    rnd.shuffle(labels)
    cuts = sorted(rnd.sample(range(1, n), rnd.randint(0, n - 1))) if n > 1 else []
    blocks, prev = [], 0
    for c in cuts + [n]:
        blocks.append(tuple(labels[prev:c]))
        prev = c
    p = nc.Partition(n, blocks)
    assert nc.parse_partition(nc.format_partition(p), noncrossing=False) == p
    assert all(p.blocks[i][0] < p.blocks[i + 1][0] for i in range(len(p.blocks) - 1))
