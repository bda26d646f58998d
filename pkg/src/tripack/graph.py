"""Small simple graphs stored as rows of bits.

A :class:`Graph` holds ``n`` integers; bit ``j`` of ``adj[i]`` is set iff
``{i, j}`` is an edge.  Graphs are immutable values and every operation in
this module is a pure function.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, Optional

MAX_VERTICES = 62
MAX_EDIT_DISTANCE_N = 28

Triangle = tuple[int, int, int]
Edge = tuple[int, int]


@dataclass(frozen=True)
class Graph:
    n: int
    adj: tuple[int, ...]

    def __post_init__(self):
        if not 0 <= self.n <= MAX_VERTICES:
            raise ValueError(f"vertex count {self.n} outside 0..{MAX_VERTICES}")
        if len(self.adj) != self.n:
            raise ValueError("need exactly one adjacency row per vertex")
        full = (1 << self.n) - 1
        for i, row in enumerate(self.adj):
            if row & ~full:
                raise ValueError(f"row {i} has bits beyond vertex {self.n - 1}")
            if row >> i & 1:
                raise ValueError(f"loop at vertex {i}")
            r = row
            while r:
                j = (r & -r).bit_length() - 1
                r &= r - 1
                if not self.adj[j] >> i & 1:
                    raise ValueError(f"asymmetric adjacency at {{{i}, {j}}}")

    def has_edge(self, i: int, j: int) -> bool:
        return bool(self.adj[i] >> j & 1)

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    @property
    def num_edges(self) -> int:
        return sum(row.bit_count() for row in self.adj) // 2

    def edges(self) -> list[Edge]:
        """All edges ``(i, j)`` with ``i < j`` in lexicographic order."""
        out = []
        for i in range(self.n):
            for j in bits(self.adj[i] >> (i + 1)):
                out.append((i, i + 1 + j))
        return out

    def neighbors(self, v: int) -> list[int]:
        return list(bits(self.adj[v]))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.edges()})"


def bits(mask: int) -> Iterator[int]:
    """Indices of set bits, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def graph_new(n: int, edges: Iterable[Edge]) -> Graph:
    if not 0 <= n <= MAX_VERTICES:
        raise ValueError(f"vertex count {n} outside 0..{MAX_VERTICES}")
    adj = [0] * n
    for i, j in edges:
        if not (0 <= i < n and 0 <= j < n):
            raise ValueError(f"edge {{{i}, {j}}} has an endpoint outside 0..{n - 1}")
        if i == j:
            raise ValueError(f"loop at vertex {i}")
        adj[i] |= 1 << j
        adj[j] |= 1 << i
    return Graph(n, tuple(adj))


def _from_rows(n: int, adj: Iterable[int]) -> Graph:
    # Skips validation; callers guarantee symmetric, loop-free rows.
    g = object.__new__(Graph)
    object.__setattr__(g, "n", n)
    object.__setattr__(g, "adj", tuple(adj))
    return g


def complement(g: Graph) -> Graph:
    full = (1 << g.n) - 1
    return _from_rows(g.n, (full & ~row & ~(1 << i) for i, row in enumerate(g.adj)))


def induced_subgraph(g: Graph, keep: Iterable[int]) -> Graph:
    """Subgraph on ``keep``, relabeled in increasing order of original index."""
    order = sorted(set(keep))
    for v in order:
        if not 0 <= v < g.n:
            raise ValueError(f"vertex {v} not in graph")
    rows = []
    for v in order:
        row = g.adj[v]
        new = 0
        for k, u in enumerate(order):
            if row >> u & 1:
                new |= 1 << k
        rows.append(new)
    return _from_rows(len(order), rows)


def delete_vertex(g: Graph, v: int) -> Graph:
    return induced_subgraph(g, (u for u in range(g.n) if u != v))


def add_vertex(g: Graph, neighborhood: int) -> Graph:
    """Append vertex ``g.n`` adjacent to the vertices in bitmask ``neighborhood``."""
    new = g.n
    rows = [row | (1 << new) if neighborhood >> i & 1 else row for i, row in enumerate(g.adj)]
    rows.append(neighborhood)
    return _from_rows(g.n + 1, rows)


def relabel(g: Graph, perm: list[int]) -> Graph:
    """Graph with vertex ``perm[v]`` playing the role of old vertex ``v``."""
    rows = [0] * g.n
    for v in range(g.n):
        r = 0
        for u in bits(g.adj[v]):
            r |= 1 << perm[u]
        rows[perm[v]] = r
    return _from_rows(g.n, rows)


def triangles(g: Graph) -> list[Triangle]:
    """Every triangle ``(a, b, c)`` with ``a < b < c``, lexicographically sorted."""
    out = []
    adj = g.adj
    for a in range(g.n):
        higher_a = adj[a] >> (a + 1) << (a + 1)
        for b in bits(higher_a):
            for c in bits(higher_a & adj[b] >> (b + 1) << (b + 1)):
                out.append((a, b, c))
    return out


def is_triangle_free(g: Graph) -> bool:
    adj = g.adj
    for a in range(g.n):
        for b in bits(adj[a] >> (a + 1)):
            if adj[a] & adj[a + 1 + b]:
                return False
    return True


def is_bipartite(g: Graph) -> Optional[tuple[frozenset[int], frozenset[int]]]:
    """Return a bipartition ``(U, W)`` found by BFS layering, or None.

    Every BFS root, and hence every isolated vertex, is placed in ``U``.
    """
    color = [-1] * g.n
    for root in range(g.n):
        if color[root] >= 0:
            continue
        color[root] = 0
        frontier = [root]
        while frontier:
            nxt = []
            for u in frontier:
                for w in bits(g.adj[u]):
                    if color[w] < 0:
                        color[w] = 1 - color[u]
                        nxt.append(w)
                    elif color[w] == color[u]:
                        return None
            frontier = nxt
    U = frozenset(v for v in range(g.n) if color[v] == 0)
    W = frozenset(v for v in range(g.n) if color[v] == 1)
    return U, W


def odd_cycle(g: Graph) -> Optional[list[int]]:
    """An odd cycle of ``g`` as a vertex list, or None if ``g`` is bipartite."""
    for root in range(g.n):
        parent = {root: None}
        depth = {root: 0}
        frontier = [root]
        while frontier:
            nxt = []
            for u in frontier:
                for w in bits(g.adj[u]):
                    if w not in depth:
                        depth[w] = depth[u] + 1
                        parent[w] = u
                        nxt.append(w)
                    elif depth[w] == depth[u]:
                        # climb both branches to their meeting point
                        left, right = [u], [w]
                        while left[-1] != right[-1]:
                            left.append(parent[left[-1]])
                            right.append(parent[right[-1]])
                        return left + right[-2::-1]
            frontier = nxt
    return None


def is_co_bipartite(g: Graph) -> bool:
    return is_bipartite(complement(g)) is not None


def is_co_triangle_free(g: Graph) -> bool:
    return is_triangle_free(complement(g))


def independence_number(g: Graph) -> int:
    best = 0
    for s in independent_sets(g):
        best = max(best, s.bit_count())
    return best


def independent_sets(g: Graph) -> Iterator[int]:
    """Yield every independent set of ``g`` as a bitmask, in increasing numeric order.

    The empty set (mask 0) comes first.
    """
    n = g.n
    adj = g.adj

    # Increasing numeric order means deciding the highest vertex first.
    def rec(v: int, chosen: int, blocked: int) -> Iterator[int]:
        if v < 0:
            yield chosen
            return
        yield from rec(v - 1, chosen, blocked)
        if not blocked >> v & 1:
            yield from rec(v - 1, chosen | (1 << v), blocked | adj[v])

    # rec yields the branch without v before the branch with v, and v is the
    # most significant undecided bit, so the stream is sorted.
    yield from rec(n - 1, 0, 0)


def greedy_clique_matching(g: Graph, inside: Iterable[int], exclude: Iterable[int] = ()) -> list[Edge]:
    """Pair up consecutive vertices of ``inside`` minus ``exclude`` in index order.

    ``inside`` must span a clique.  With an odd number of vertices left the
    largest one stays unmatched.
    """
    inside = sorted(set(inside))
    for a, b in combinations(inside, 2):
        if not g.has_edge(a, b):
            raise ValueError(f"vertices {a} and {b} are not adjacent, so the set is not a clique")
    excluded = set(exclude)
    if not excluded <= set(inside):
        raise ValueError("exclude must be a subset of inside")
    rest = [v for v in inside if v not in excluded]
    return [(rest[i], rest[i + 1]) for i in range(0, len(rest) - 1, 2)]


def bipartite_edit_distance(g: Graph) -> int:
    """Minimum number of edge deletions that make ``g`` bipartite (exact, n <= 28).

    Walks all bipartitions with vertex 0 fixed on one side in Gray-code order,
    tracking the number of edges inside the two sides.
    """
    n = g.n
    if n > MAX_EDIT_DISTANCE_N:
        raise ValueError(f"exact edit distance is limited to n <= {MAX_EDIT_DISTANCE_N}")
    if n <= 1:
        return 0
    adj = g.adj
    side = 0  # bitmask of vertices in W; vertex 0 stays in U
    inside = g.num_edges  # everything starts in U
    best = inside
    for k in range(1, 1 << (n - 1)):
        v = (k & -k).bit_length()  # flip vertex 1..n-1
        same_before = adj[v] & (side if side >> v & 1 else ~side)
        same_before = (same_before & ((1 << n) - 1)).bit_count()
        other_before = g.degree(v) - same_before
        inside += other_before - same_before
        side ^= 1 << v
        if inside < best:
            best = inside
    return best


# -- constructors ---------------------------------------------------------

def empty_graph(n: int) -> Graph:
    return _from_rows(n, [0] * n)


def complete_graph(n: int) -> Graph:
    full = (1 << n) - 1
    return _from_rows(n, (full ^ (1 << i) for i in range(n)))


def cycle_graph(n: int) -> Graph:
    return graph_new(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> Graph:
    return graph_new(n, [(i, i + 1) for i in range(n - 1)])


def complete_bipartite(a: int, b: int) -> Graph:
    return graph_new(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def disjoint_union(g: Graph, h: Graph) -> Graph:
    rows = list(g.adj) + [row << g.n for row in h.adj]
    return _from_rows(g.n + h.n, rows)


def complete_minus_matching(n: int, k: int) -> Graph:
    """K_n without the matching {0,1}, {2,3}, ..., of k edges."""
    if not 0 <= k <= n // 2:
        raise ValueError(f"a matching in K_{n} has at most {n // 2} edges, got {k}")
    rows = list(complete_graph(n).adj)
    for t in range(k):
        a, b = 2 * t, 2 * t + 1
        rows[a] &= ~(1 << b)
        rows[b] &= ~(1 << a)
    return _from_rows(n, rows)


def blowup(g: Graph, t: int) -> Graph:
    """Replace each vertex by an independent class of ``t`` vertices.

    Vertex ``v`` of ``g`` becomes ``v*t .. v*t + t - 1``.
    """
    edges = []
    for i, j in g.edges():
        for a in range(t):
            for b in range(t):
                edges.append((i * t + a, j * t + b))
    return graph_new(g.n * t, edges)


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return graph_new(10, outer + spokes + inner)
