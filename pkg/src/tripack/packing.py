"""Packing densities and the explicit packing constructions.

Sizes are measured in edges: a packing's size is three times its total
triangle weight.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Optional, Sequence

from . import canon
from .graph import (
    Edge,
    Graph,
    Triangle,
    bipartite_edit_distance,
    complement,
    complete_minus_matching,
    delete_vertex,
    graph_new,
    greedy_clique_matching,
    is_bipartite,
    is_triangle_free,
    triangles,
)
from .lp import Packing, certified, check_packing, nu_star

MAX_INTEGER_N = 12
MAX_F_SMALL_N = 6


@dataclass(frozen=True)
class EtaReport:
    graph: Graph
    nu_star: Fraction
    eta: Fraction
    co_triangle_free: bool
    co_bipartite: bool


def eta(g: Graph, presolve: bool = True) -> EtaReport:
    """Packing density nu*(g) / (n(n-1)), exact."""
    if g.n < 2:
        raise ValueError("packing density needs at least two vertices")
    value = nu_star(g, presolve=presolve)
    comp = complement(g)
    return EtaReport(
        graph=g,
        nu_star=value,
        eta=value / (g.n * (g.n - 1)),
        co_triangle_free=is_triangle_free(comp),
        co_bipartite=is_bipartite(comp) is not None,
    )


def eta_general(g: Graph, presolve: bool = True) -> Fraction:
    """Two-colour density (nu*(g) + nu*(complement)) / (n(n-1))."""
    if g.n < 2:
        raise ValueError("packing density needs at least two vertices")
    total = nu_star(g, presolve=presolve) + nu_star(complement(g), presolve=presolve)
    return total / (g.n * (g.n - 1))


@dataclass(frozen=True)
class PackingReport:
    feasible: bool
    size: Fraction
    tight_edges: int
    reason: str = ""


def verify_packing(g: Graph, p: Packing) -> PackingReport:
    verdict = check_packing(g, p.weights)
    loads = p.edge_loads()
    tight = sum(1 for load in loads.values() if load == 1)
    return PackingReport(bool(verdict), p.size, tight, verdict.reason)


def _lift(p: Packing, g: Graph, i: int) -> dict[Triangle, Fraction]:
    """Weights of a packing of g - i, expressed in the labels of g."""
    if p.host.n == g.n:
        for T in p.weights:
            if i in T:
                raise ValueError(f"packing {i} uses deleted vertex {i}")
        sub = delete_vertex(g, i)
        old = [v for v in range(g.n) if v != i]
        back = {v: k for k, v in enumerate(old)}
        local = {tuple(back[v] for v in T): w for T, w in p.weights.items()}
        verdict = check_packing(sub, local)
        if not verdict:
            raise ValueError(f"packing {i} is infeasible: {verdict.reason}")
        return dict(p.weights)
    if p.host.n != g.n - 1:
        raise ValueError(f"packing {i} has host of order {p.host.n}")
    if p.host != delete_vertex(g, i):
        raise ValueError(f"packing {i} is not hosted on the graph minus vertex {i}")
    verdict = check_packing(p.host, p.weights)
    if not verdict:
        raise ValueError(f"packing {i} is infeasible: {verdict.reason}")
    old = [v for v in range(g.n) if v != i]
    return {tuple(old[v] for v in T): w for T, w in p.weights.items()}


def average_packings(g: Graph, subgraph_packings: Sequence[Packing]) -> Packing:
    """Combine packings of the n vertex-deleted subgraphs into one packing of g.

    Every edge of g lies in exactly n - 2 of the subgraphs, so the sum of the
    inputs divided by n - 2 loads each edge by at most one, and by exactly one
    when every input is a decomposition.  Inputs may be hosted on the
    subgraph itself or on g (avoiding the deleted vertex).
    """
    n = g.n
    if n < 3:
        raise ValueError("averaging needs n >= 3")
    if len(subgraph_packings) != n:
        raise ValueError(f"need {n} subgraph packings, got {len(subgraph_packings)}")
    total: dict[Triangle, Fraction] = {}
    for i, p in enumerate(subgraph_packings):
        for T, w in _lift(p, g, i).items():
            total[T] = total.get(T, Fraction(0)) + w
    scale = Fraction(1, n - 2)
    return Packing(g, {T: w * scale for T, w in total.items() if w})


# -- K_n minus a matching ---------------------------------------------------

@lru_cache(maxsize=None)
def _cmm_weights(n: int, k: int) -> tuple[tuple[Triangle, Fraction], ...]:
    if n == 7:
        g = complete_minus_matching(7, k)
        res = certified(g)
        if res.nu_star != g.num_edges:
            raise AssertionError(f"K_7 minus {k} matching edges has no fractional decomposition")
        return tuple(sorted(res.primal.weights.items()))
    total: dict[Triangle, Fraction] = {}
    for i in range(n):
        pairs = [(2 * t, 2 * t + 1) for t in range(k) if i not in (2 * t, 2 * t + 1)]
        matched = {v for pair in pairs for v in pair}
        rest = [v for v in range(n) if v != i and v not in matched]
        # standard labels of K_{n-1} minus len(pairs) edges -> labels in K_n
        to_old = [v for pair in pairs for v in pair] + rest
        for T, w in _cmm_weights(n - 1, len(pairs)):
            key = tuple(sorted(to_old[v] for v in T))
            total[key] = total.get(key, Fraction(0)) + w
    scale = Fraction(1, n - 2)
    return tuple(sorted((T, w * scale) for T, w in total.items()))


def decompose_complete_minus_matching(n: int, k: int) -> Packing:
    """Fractional triangle decomposition of K_n minus the matching {0,1},...,{2k-2,2k-1}.

    The n = 7 cases are solved by the exact LP; larger n are built by
    averaging the decompositions of the vertex-deleted subgraphs.
    """
    if n < 7:
        raise ValueError(f"need n >= 7, got {n}")
    if not 0 <= k <= n // 2:
        raise ValueError(f"need 0 <= k <= {n // 2}, got {k}")
    return Packing(complete_minus_matching(n, k), dict(_cmm_weights(n, k)))


def _place_decomposition(size: int, matching: list[Edge], vertices: Sequence[int]) -> dict[Triangle, Fraction]:
    """Decomposition of the clique on ``vertices`` minus ``matching``, in host labels."""
    matched = {v for e in matching for v in e}
    to_host = [v for e in matching for v in e] + [v for v in sorted(vertices) if v not in matched]
    assert len(to_host) == size
    return {
        tuple(sorted(to_host[v] for v in T)): w
        for T, w in _cmm_weights(size, len(matching))
    }


# -- critical graphs --------------------------------------------------------

@dataclass(frozen=True)
class CriticalWitness:
    apex: int
    A: frozenset[int]
    B: frozenset[int]
    X: frozenset[int]
    Y: frozenset[int]
    U: frozenset[int]
    W: frozenset[int]


def _witness(g: Graph, v: int, U: frozenset[int], W: frozenset[int]) -> CriticalWitness:
    nbrs = set(g.neighbors(v))
    A = frozenset(U & nbrs)
    B = frozenset(W & nbrs)
    return CriticalWitness(v, A, B, U - A, W - B, U, W)


def is_critical(g: Graph) -> Optional[CriticalWitness]:
    """Witness that g is critical for the smallest possible apex, or None.

    Critical means: the complement is triangle-free and not bipartite, but
    becomes bipartite after deleting one vertex.
    """
    comp = complement(g)
    if not is_triangle_free(comp):
        raise ValueError("graph is not co-triangle-free")
    if is_bipartite(comp) is not None:
        return None
    for v in range(g.n):
        split = is_bipartite(delete_vertex(comp, v))
        if split is None:
            continue
        old = [u for u in range(g.n) if u != v]
        U = frozenset(old[u] for u in split[0])
        W = frozenset(old[u] for u in split[1])
        return _witness(g, v, U, W)
    return None


def _check_witness(g: Graph, w: CriticalWitness) -> None:
    v = w.apex
    if not 0 <= v < g.n:
        raise ValueError(f"apex {v} is not a vertex")
    if w.U & w.W or (w.U | w.W) != frozenset(range(g.n)) - {v}:
        raise ValueError("U and W do not partition the vertices other than the apex")
    for side in (w.U, w.W):
        for a, b in combinations(sorted(side), 2):
            if not g.has_edge(a, b):
                raise ValueError(f"side containing {a} and {b} is not a clique")
    expect = _witness(g, v, w.U, w.W)
    if (expect.A, expect.B, expect.X, expect.Y) != (w.A, w.B, w.X, w.Y):
        raise ValueError("A, B, X, Y disagree with the apex neighbourhood")
    if not w.X:
        raise ValueError("X is empty, so the graph is co-bipartite")
    if not w.Y:
        raise ValueError("Y is empty, so the graph is co-bipartite")
    for x in w.X:
        for y in w.Y:
            if not g.has_edge(x, y):
                raise ValueError(f"G[X, Y] is not complete bipartite: {x}{y} missing")


def critical_packing(g: Graph, w: CriticalWitness) -> Packing:
    """Explicit packing of a critical graph of size at least (n^2 - 17) / 4.

    Triangles through the apex and through cross pairs between X and Y
    account for at least n - 5 edges outside the two cliques; what is left
    of each clique is a clique minus a matching and is decomposed
    fractionally.
    """
    n = g.n
    if n < 18:
        raise ValueError(f"critical packing needs n >= 18, got {n}")
    _check_witness(g, w)
    if min(len(w.U), len(w.W)) < 7:
        raise ValueError(f"need min(|U|, |W|) >= 7, got {len(w.U)} and {len(w.W)}")
    X, Y = sorted(w.X), sorted(w.Y)
    cross: list[Triangle] = []

    def fan(matching: list[Edge], apex: int) -> None:
        cross.extend(tuple(sorted((a, b, apex))) for a, b in matching)

    if len(Y) % 2 == 0:
        x = X[0]
        m_y = greedy_clique_matching(g, Y)
        y = Y[0]
        m_x = greedy_clique_matching(g, X, exclude=[x])
    elif len(X) % 2 == 0:
        y = Y[0]
        m_x = greedy_clique_matching(g, X)
        x = X[0]
        m_y = greedy_clique_matching(g, Y, exclude=[y])
    else:
        x = X[0]
        m_y = greedy_clique_matching(g, Y)
        (y,) = set(Y) - {v for e in m_y for v in e}
        m_x = greedy_clique_matching(g, X, exclude=[x])
    fan(m_y, x)
    fan(m_x, y)
    m_a = greedy_clique_matching(g, w.A)
    m_b = greedy_clique_matching(g, w.B)
    fan(m_a, w.apex)
    fan(m_b, w.apex)

    weights: dict[Triangle, Fraction] = {T: Fraction(1) for T in cross}
    weights.update(_place_decomposition(len(w.U), m_a + m_x, w.U))
    weights.update(_place_decomposition(len(w.W), m_b + m_y, w.W))
    return Packing(g, weights)


# -- integer packings -------------------------------------------------------

def nu_integer(g: Graph) -> int:
    """Largest edge-disjoint triangle packing, in edges, by branch and bound (n <= 12)."""
    if g.n > MAX_INTEGER_N:
        raise ValueError(f"exact integer packing is limited to n <= {MAX_INTEGER_N}")
    edges = g.edges()
    index = {e: i for i, e in enumerate(edges)}
    tris = [
        (1 << index[(a, b)]) | (1 << index[(a, c)]) | (1 << index[(b, c)])
        for a, b, c in triangles(g)
    ]
    if not tris:
        return 0
    by_edge: list[list[int]] = [[] for _ in edges]
    for t in tris:
        m = t
        while m:
            low = m & -m
            by_edge[low.bit_length() - 1].append(t)
            m ^= low
    best = 0

    def bound(avail: int) -> int:
        # each triangle uses two available edges at each of its corners
        deg = [0] * g.n
        m = avail
        cnt = 0
        while m:
            low = m & -m
            a, b = edges[low.bit_length() - 1]
            deg[a] += 1
            deg[b] += 1
            cnt += 1
            m ^= low
        return min(cnt // 3, sum(d // 2 for d in deg) // 3)

    def rec(avail: int, count: int) -> None:
        nonlocal best
        # drop edges that no longer lie in an available triangle
        m = avail
        while m:
            low = m & -m
            i = low.bit_length() - 1
            if not any(t & avail == t for t in by_edge[i]):
                avail &= ~low
            m ^= low
        if count > best:
            best = count
        if not avail or count + bound(avail) <= best:
            return
        low = avail & -avail
        i = low.bit_length() - 1
        for t in by_edge[i]:
            if t & avail == t:
                rec(avail & ~t, count + 1)
        rec(avail & ~low, count)

    rec((1 << len(edges)) - 1, 0)
    return 3 * best


def f_small(n: int) -> int:
    """min over 2-colourings of K_n of the largest monochromatic triangle packing.

    The two colour classes have disjoint edge sets, so the best packing is
    nu_integer(G) + nu_integer(complement G).  All 2^C(n,2) colourings are
    visited; the integer packing number is cached per isomorphism class.
    """
    if n > MAX_F_SMALL_N:
        raise ValueError(f"f_small is exhaustive and limited to n <= {MAX_F_SMALL_N}")
    if n < 0:
        raise ValueError("n must be non-negative")
    pairs = list(combinations(range(n), 2))
    cache: dict[bytes, int] = {}

    def nu_cached(h: Graph) -> int:
        key = canon.canonical_form(h)
        if key not in cache:
            cache[key] = nu_integer(h)
        return cache[key]

    best = None
    for mask in range(1 << len(pairs)):
        g = graph_new(n, [pairs[i] for i in range(len(pairs)) if mask >> i & 1])
        value = nu_cached(g) + nu_cached(complement(g))
        if best is None or value < best:
            best = value
    return best if best is not None else 0


# -- two-sided hypothesis ---------------------------------------------------

@dataclass(frozen=True)
class Conjecture51Report:
    eta_general: Fraction
    min_side_edit: int
    within_bound: bool


def conjecture51_hypothesis(g: Graph, presolve: bool = True) -> Conjecture51Report:
    """Edit distance to bipartite of the closer side, against the n/8 bound."""
    if g.n > 28:
        raise ValueError("exact edit distance is limited to n <= 28")
    side = min(bipartite_edit_distance(g), bipartite_edit_distance(complement(g)))
    return Conjecture51Report(
        eta_general=eta_general(g, presolve=presolve),
        min_side_edit=side,
        within_bound=8 * side <= g.n,
    )


def co_bipartite_lower_bound(n: int) -> Fraction:
    """n(n-2)/4, the packing guaranteed in a co-bipartite graph of order n >= 6."""
    return Fraction(n * (n - 2), 4)


def critical_lower_bound(n: int) -> Fraction:
    """(n^2 - 17)/4, the packing guaranteed in a critical graph of order n >= 18."""
    return Fraction(n * n - 17, 4)

