import random

import pytest
from hypothesis import given, settings, strategies as st

from oracles import brute_erasable
from pdaverify.closure import bounded_path_search, dyck_closure, is_insecure
from pdaverify.corpus import PROTOCOLS, random_fsa
from pdaverify.protocol import (DEFAULT_TABLE, OPERATORS, Fsa, build_fsa,
                                reduce_word)


def fsas():
    return st.integers(0, 2**32).map(lambda s: random_fsa(random.Random(s), max_nodes=6,
                                                          max_edges=12))


@pytest.mark.parametrize("k,want", [(1, True), (2, False), (3, True)])
def test_fixtures(k, want):
    assert is_insecure(build_fsa(PROTOCOLS[k])) is want


@pytest.mark.parametrize("edges,want", [
    ([("0", "EY", "1")], False),
    ([("0", "EY", "2"), ("2", "DY", "1")], True),
    ([("0", "DY", "2"), ("2", "EY", "1")], True),
    ([("0", "MX", "2"), ("2", "PX", "1")], False),
    ([("0", "PX", "2"), ("2", "M", "1")], True),
    ([("0", "EX", "2"), ("2", "EY", "3"), ("3", "DY", "4"), ("4", "DX", "1")], True),
])
def test_small_cases(edges, want):
    assert is_insecure(Fsa(tuple(edges))) is want


@settings(max_examples=100, deadline=None)
@given(fsas())
def test_preorder(f):
    r = dyck_closure(f)
    for v in f.nodes:
        assert (v, v) in r
    for a, b in r.pairs:
        for c in r.successors(b):
            assert (a, c) in r


@settings(max_examples=100, deadline=None)
@given(fsas(), st.sampled_from(OPERATORS), st.integers(0, 5), st.integers(0, 5))
def test_monotone(f, op, u, v):
    bigger = Fsa(f.edges + ((str(u), op, str(v)),))
    assert dyck_closure(f).pairs <= dyck_closure(bigger).pairs


@settings(max_examples=100, deadline=None)
@given(fsas())
def test_surround_closed(f):
    r = dyck_closure(f)
    for u, a, u2 in f.edges:
        for v2, b, v in f.edges:
            if (u2, v2) in r and DEFAULT_TABLE.cancels(a, b):
                assert (u, v) in r


def _paths_up_to(f, n):
    """Every source->target edge sequence of length <= n, for small graphs."""
    out = {}
    for e in f.edges:
        out.setdefault(e[0], []).append(e)
    stack = [(f.source, [])]
    while stack:
        node, path = stack.pop()
        if node == f.target and path:
            yield path
        if len(path) < n:
            for e in out.get(node, ()):
                stack.append((e[2], path + [e]))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32))
def test_bounded_search_is_exhaustive(seed):
    f = random_fsa(random.Random(seed), max_nodes=4, max_edges=6)
    n = 6
    found = bounded_path_search(f, DEFAULT_TABLE, n)
    pairs = list(DEFAULT_TABLE)
    brute = [p for p in _paths_up_to(f, n) if brute_erasable([op for _, op, _ in p], pairs)]
    assert (found is None) == (not brute)
    if found is not None:
        assert len(found) == min(len(p) for p in brute)
        assert reduce_word([op for _, op, _ in found]) == []


def test_bounded_search_consistent_with_closure():
    rng = random.Random(2)
    for _ in range(150):
        f = random_fsa(rng)
        bound = 2 * len(f.nodes) * (len(f.edges) + 1)
        if is_insecure(f):
            path = bounded_path_search(f, DEFAULT_TABLE, min(bound, 40))
            assert path is not None
            assert reduce_word([op for _, op, _ in path]) == []
        else:
            assert bounded_path_search(f, DEFAULT_TABLE, 10) is None


def test_bounded_search_examples():
    assert len(bounded_path_search(build_fsa(PROTOCOLS[1]), DEFAULT_TABLE, 4)) == 4
    assert bounded_path_search(build_fsa(PROTOCOLS[2]), DEFAULT_TABLE, 12) is None
    assert bounded_path_search(Fsa((("0", "EY", "1"),)), DEFAULT_TABLE, 5) is None
    with pytest.raises(ValueError):
        bounded_path_search(Fsa((("0", "EY", "1"),)), DEFAULT_TABLE, 0)
