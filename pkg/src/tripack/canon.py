"""Canonical labeling and isomorphism rejection.

The canonical form of a graph is the graph6 encoding of the relabeling whose
upper-triangle bit string is smallest among all orderings produced by
individualization and equitable refinement.  Subtrees are skipped only when a
discovered automorphism maps them onto explored ones, so the result does not
depend on how well refinement separates vertices.
"""

from __future__ import annotations

from typing import Iterable, Optional

from . import graph6
from .graph import Graph, bits, relabel

_INF = 1 << 30


def _refine(adj: tuple[int, ...], cells: list[int]) -> list[int]:
    """Refine an ordered partition (list of vertex bitmasks) until equitable.

    A cell splits by the number of neighbours each vertex has in a splitter
    cell; fragments are ordered by that count, so the result commutes with
    vertex relabeling.
    """
    s = 0
    while s < len(cells):
        splitter = cells[s]
        out = []
        split = False
        for cell in cells:
            if cell & (cell - 1) == 0:
                out.append(cell)
                continue
            groups: dict[int, int] = {}
            c = cell
            while c:
                low = c & -c
                c ^= low
                k = (adj[low.bit_length() - 1] & splitter).bit_count()
                groups[k] = groups.get(k, 0) | low
            if len(groups) == 1:
                out.append(cell)
            else:
                out.extend(groups[k] for k in sorted(groups))
                split = True
        cells = out
        if split:
            # restart so every cell is re-tested against every splitter
            s = 0
        else:
            s += 1
    return cells


def _code(adj: tuple[int, ...], order: list[int]) -> int:
    """Upper triangle of the relabeled graph in graph6 bit order, as an integer."""
    code = 0
    for j in range(1, len(order)):
        col = adj[order[j]]
        for i in range(j):
            code = (code << 1) | (col >> order[i] & 1)
    return code


class _Search:
    def __init__(self, g: Graph):
        self.adj = g.adj
        self.n = g.n
        self.first: Optional[tuple[int, list[int], list[int]]] = None
        self.best: Optional[tuple[int, list[int], list[int]]] = None
        self.generators: list[list[int]] = []

    def _automorphism(self, order_a: list[int], order_b: list[int]) -> None:
        perm = [0] * self.n
        for a, b in zip(order_a, order_b):
            perm[a] = b
        if any(perm[v] != v for v in range(self.n)):
            self.generators.append(perm)

    def _orbit_root(self, path: list[int]):
        parent = list(range(self.n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for perm in self.generators:
            if all(perm[p] == p for p in path):
                for v in range(self.n):
                    a, b = find(v), find(perm[v])
                    if a != b:
                        parent[max(a, b)] = min(a, b)
        return find

    def _leaf(self, cells: list[int], path: list[int]) -> int:
        order = [c.bit_length() - 1 for c in cells]
        code = _code(self.adj, order)
        if self.first is None:
            self.first = self.best = (code, order, path)
            return _INF
        if code == self.first[0]:
            self._automorphism(self.first[1], order)
            return _common_prefix(path, self.first[2])
        if code < self.best[0]:
            self.best = (code, order, path)
            return _INF
        if code == self.best[0]:
            self._automorphism(self.best[1], order)
            return _common_prefix(path, self.best[2])
        return _INF

    def run(self, cells: list[int], path: list[int]) -> int:
        if len(cells) == self.n:
            return self._leaf(cells, path)
        target = next(i for i, c in enumerate(cells) if c & (c - 1))
        depth = len(path)
        explored: list[int] = []
        n_gens = -1
        find = None
        for v in bits(cells[target]):
            if explored:
                if n_gens != len(self.generators):
                    find = self._orbit_root(path)
                    n_gens = len(self.generators)
                root = find(v)
                if any(find(u) == root for u in explored):
                    continue
            low = 1 << v
            child = cells[:target] + [low, cells[target] ^ low] + cells[target + 1:]
            child = _refine(self.adj, child)
            back = self.run(child, path + [v])
            explored.append(v)
            if back < depth:
                return back
        return _INF


def _common_prefix(a: list[int], b: list[int]) -> int:
    k = 0
    for x, y in zip(a, b):
        if x != y:
            break
        k += 1
    return k


def canonical_order(g: Graph) -> list[int]:
    """Vertex order of the canonical relabeling: position p holds old vertex order[p]."""
    if g.n == 0:
        return []
    search = _Search(g)
    start = _refine(g.adj, [(1 << g.n) - 1])
    search.run(start, [])
    return search.best[1]


def canonical_graph(g: Graph) -> Graph:
    order = canonical_order(g)
    perm = [0] * g.n
    for p, v in enumerate(order):
        perm[v] = p
    return relabel(g, perm)


def canonical_form(g: Graph) -> bytes:
    return graph6.encode(canonical_graph(g))


def are_isomorphic(g: Graph, h: Graph) -> bool:
    if g.n != h.n or g.num_edges != h.num_edges:
        return False
    return canonical_form(g) == canonical_form(h)


def dedup(graphs: Iterable[Graph]) -> list[Graph]:
    """One representative per isomorphism class, sorted by canonical form.

    The first occurrence of each class is the representative kept.
    """
    seen: dict[bytes, Graph] = {}
    n = None
    for g in graphs:
        if n is None:
            n = g.n
        elif g.n != n:
            raise ValueError(f"mixed vertex counts {n} and {g.n}")
        key = canonical_form(g)
        if key not in seen:
            seen[key] = g
    return [seen[k] for k in sorted(seen)]
