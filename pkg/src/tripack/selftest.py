"""Quick invariant checks runnable without pytest (``tripack selftest``)."""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations

from . import canon, graph6
from .graph import (
    Graph,
    blowup,
    complement,
    complete_graph,
    complete_minus_matching,
    cycle_graph,
    delete_vertex,
    graph_new,
    independent_sets,
    is_bipartite,
    relabel,
    triangles,
)
from .lp import LPResult, Packing, certified, verify_certificate
from .packing import (
    critical_lower_bound,
    critical_packing,
    decompose_complete_minus_matching,
    eta,
    is_critical,
    nu_integer,
    verify_packing,
)


def _random_graph(rng: random.Random, n: int, p: float) -> Graph:
    return graph_new(n, [e for e in combinations(range(n), 2) if rng.random() < p])


def _check_graph_core(rng):
    for _ in range(50):
        g = _random_graph(rng, rng.randint(0, 10), rng.random())
        assert complement(complement(g)) == g
        naive = [t for t in combinations(range(g.n), 3)
                 if all(g.has_edge(a, b) for a, b in combinations(t, 2))]
        assert triangles(g) == naive
        sets = list(independent_sets(g))
        assert len(sets) == len(set(sets))
        split = is_bipartite(g)
        if split:
            U, W = split
            assert not any(g.has_edge(a, b) for side in (U, W) for a, b in combinations(side, 2))


def _check_graph6(rng):
    for _ in range(50):
        g = _random_graph(rng, rng.randint(0, 30), rng.random())
        assert graph6.decode(graph6.encode(g)) == g
    assert graph6.encode(complete_graph(3)) == b"Bw"


def _check_canon(rng):
    for _ in range(20):
        g = _random_graph(rng, rng.randint(1, 12), rng.random())
        key = canon.canonical_form(g)
        for _ in range(20):
            perm = list(range(g.n))
            rng.shuffle(perm)
            assert canon.canonical_form(relabel(g, perm)) == key


def _check_lp(rng):
    for _ in range(20):
        g = _random_graph(rng, rng.randint(3, 9), 0.4 + 0.6 * rng.random())
        res = certified(g)
        assert verify_certificate(g, res)
        if g.n <= 8:
            assert nu_integer(g) <= res.nu_star
        if res.primal.weights:
            T = next(iter(res.primal.weights))
            bumped = dict(res.primal.weights)
            bumped[T] += Fraction(1, 7)
            assert not verify_certificate(g, LPResult(res.nu_star, Packing(g, bumped), res.dual))


def _check_equality_case(rng):
    rep = eta(complement(blowup(cycle_graph(5), 5)))
    assert rep.nu_star == 150 and rep.eta == Fraction(1, 4)


def _check_decompositions(rng):
    for n in range(7, 11):
        for k in range(n // 2 + 1):
            p = decompose_complete_minus_matching(n, k)
            rep = verify_packing(p.host, p)
            assert rep.feasible and rep.tight_edges == complete_minus_matching(n, k).num_edges


def _check_critical(rng):
    for n in (19, 21):
        g = complement(cycle_graph(n))
        p = critical_packing(g, is_critical(g))
        rep = verify_packing(g, p)
        assert rep.feasible and rep.size >= critical_lower_bound(n)


def _check_averaging(rng):
    for _ in range(10):
        g = _random_graph(rng, rng.randint(5, 7), 0.7)
        n = g.n
        subs = [eta(delete_vertex(g, i)).eta for i in range(n)]
        assert eta(g).eta >= sum(subs, Fraction(0)) / n


CHECKS = [
    ("graph-core invariants", _check_graph_core),
    ("graph6 round trip", _check_graph6),
    ("canonical form invariance", _check_canon),
    ("LP certificates", _check_lp),
    ("equality case eta = 1/4", _check_equality_case),
    ("K_n minus matching decompositions", _check_decompositions),
    ("critical packings", _check_critical),
    ("averaging inequality", _check_averaging),
]


def run_selftest(seed: int = 2024) -> bool:
    ok = True
    for name, check in CHECKS:
        try:
            check(random.Random(seed))
            print(f"PASS {name}")
        except Exception as exc:  # report every failing check, not just the first
            ok = False
            print(f"FAIL {name}: {exc!r}")
    return ok
