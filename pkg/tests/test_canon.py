from itertools import combinations, permutations

import pytest
from hypothesis import given, settings, strategies as st

from tripack.canon import are_isomorphic, canonical_form, canonical_graph, canonical_order, dedup
from tripack.graph import (
    blowup,
    complement,
    complete_bipartite,
    complete_graph,
    complete_minus_matching,
    cycle_graph,
    empty_graph,
    graph_new,
    petersen_graph,
    relabel,
)
from tripack.graph6 import decode

from conftest import graphs, random_graph

# unlabeled graph counts on n vertices (OEIS A000088)
GRAPH_CLASSES = {0: 1, 1: 1, 2: 2, 3: 4, 4: 11, 5: 34, 6: 156}


def _all_graphs(n):
    pairs = list(combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        yield graph_new(n, [pairs[i] for i in range(len(pairs)) if mask >> i & 1])


def _isomorphic_brute(g, h):
    if g.n != h.n or g.num_edges != h.num_edges:
        return False
    target = set(h.edges())
    edges = list(g.edges())
    for p in permutations(range(g.n)):
        if all(tuple(sorted((p[a], p[b]))) in target for a, b in edges):
            return True
    return False


@given(graphs(max_n=10), st.randoms(use_true_random=False))
def test_canonical_form_is_relabeling_invariant(g, r):
    key = canonical_form(g)
    for _ in range(10):
        perm = list(range(g.n))
        r.shuffle(perm)
        assert canonical_form(relabel(g, perm)) == key


def test_invariance_under_1000_permutations(rng):
    for g in (petersen_graph(), blowup(cycle_graph(5), 3), random_graph(rng, 16, 0.4)):
        key = canonical_form(g)
        for _ in range(1000):
            perm = list(range(g.n))
            rng.shuffle(perm)
            assert canonical_form(relabel(g, perm)) == key


def test_canonical_graph_is_isomorphic_copy(rng):
    for n in (7, 12):
        g = random_graph(rng, n, 0.4)
        order = canonical_order(g)
        assert sorted(order) == list(range(n))
        cg = canonical_graph(g)
        assert decode(canonical_form(g)) == cg
        # position p of the canonical graph is old vertex order[p]
        assert all(cg.has_edge(p, q) == g.has_edge(order[p], order[q])
                   for p in range(n) for q in range(n) if p != q)
    h = random_graph(rng, 7, 0.5)
    assert _isomorphic_brute(canonical_graph(h), h)


@settings(max_examples=80, deadline=None)
@given(graphs(min_n=1, max_n=7), graphs(min_n=1, max_n=7))
def test_isomorphism_matches_permutation_search(g, h):
    assert are_isomorphic(g, h) == _isomorphic_brute(g, h)


@settings(max_examples=40, deadline=None)
@given(graphs(min_n=1, max_n=7), st.randoms(use_true_random=False))
def test_relabeled_copies_are_isomorphic(g, r):
    perm = list(range(g.n))
    r.shuffle(perm)
    h = relabel(g, perm)
    assert are_isomorphic(g, h) and _isomorphic_brute(g, h)


@pytest.mark.parametrize("n", sorted(GRAPH_CLASSES))
def test_class_counts_of_all_labeled_graphs(n):
    assert len({canonical_form(g) for g in _all_graphs(n)}) == GRAPH_CLASSES[n]


def test_non_isomorphic_same_degree_sequence():
    # both are 2-regular on 6 vertices; only one is connected
    two_triangles = graph_new(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
    assert not are_isomorphic(cycle_graph(6), two_triangles)
    # C6 is K_{3,3} minus a perfect matching
    k33_minus = graph_new(6, [(a, b) for a in range(3) for b in range(3, 6) if b != a + 3])
    assert are_isomorphic(cycle_graph(6), k33_minus)
    assert are_isomorphic(complement(cycle_graph(5)), cycle_graph(5))


def test_highly_symmetric_graphs_are_fast():
    for g in (complete_bipartite(12, 13), complete_graph(26), empty_graph(30),
              blowup(cycle_graph(5), 5), complete_minus_matching(20, 10)):
        key = canonical_form(g)
        perm = list(range(g.n))[::-1]
        assert canonical_form(relabel(g, perm)) == key


def test_dedup():
    c5 = cycle_graph(5)
    shifted = relabel(c5, [2, 0, 4, 1, 3])
    reps = dedup([c5, shifted, complete_graph(5), empty_graph(5)])
    assert len(reps) == 3
    assert c5 in reps
    assert [canonical_form(g) for g in reps] == sorted(canonical_form(g) for g in reps)
    with pytest.raises(ValueError):
        dedup([c5, complete_graph(4)])
