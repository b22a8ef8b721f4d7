"""Loopless undirected multigraphs and the connectivity queries the solver needs."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .errors import LoopEdge, NotConnected, VertexOutOfRange


@dataclass(frozen=True)
class ComponentStats:
    """One component C of G - x, seen from the removed vertex x."""

    vertices: frozenset
    edges: int  # e(C), edges with both ends in C
    attachment: int  # d(x, C), edges joining x to C


@dataclass(frozen=True)
class Biconnected:
    cut_vertices: frozenset
    blocks: tuple  # tuple of tuples of edge ids


class MultiGraph:
    """Immutable loopless multigraph on vertices ``0..n-1``.

    Edge ids follow input order. ``adjacency[v]`` lists ``(edge id, other end)``
    sorted by other end and then edge id, so every traversal that walks it is
    deterministic with smallest-id tie-breaking.

    ``vertex_ids``/``edge_ids`` map local ids back to a parent graph when the
    graph was produced by :meth:`induced` or :func:`blocks_at`.
    """

    def __init__(
        self,
        n: int,
        edges: Iterable[Sequence[int]],
        vertex_ids: Sequence[int] | None = None,
        edge_ids: Sequence[int] | None = None,
    ):
        if n < 0:
            raise ValueError("negative vertex count")
        self.n = n
        checked = []
        for i, pair in enumerate(edges):
            a, b = int(pair[0]), int(pair[1])
            for v in (a, b):
                if not 0 <= v < n:
                    raise VertexOutOfRange(v, n)
            if a == b:
                raise LoopEdge(i)
            checked.append((a, b))
        self.edges = tuple(checked)
        adjacency = [[] for _ in range(n)]
        for eid, (a, b) in enumerate(self.edges):
            adjacency[a].append((eid, b))
            adjacency[b].append((eid, a))
        for lst in adjacency:
            lst.sort(key=lambda item: (item[1], item[0]))
        self.adjacency = tuple(tuple(lst) for lst in adjacency)
        self.vertex_ids = tuple(range(n)) if vertex_ids is None else tuple(vertex_ids)
        self.edge_ids = tuple(range(len(self.edges))) if edge_ids is None else tuple(edge_ids)

    def __repr__(self):
        return f"MultiGraph(n={self.n}, edges={list(self.edges)})"

    def __eq__(self, other):
        return isinstance(other, MultiGraph) and self.n == other.n and self.edges == other.edges

    def __hash__(self):
        return hash((self.n, self.edges))

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    @cached_property
    def degrees(self) -> tuple:
        return tuple(len(a) for a in self.adjacency)

    def other(self, eid: int, v: int) -> int:
        a, b = self.edges[eid]
        return b if v == a else a

    def components(self, removed: int | None = None) -> list[list[int]]:
        """Connected components, optionally of ``G - removed``; each sorted, listed by min vertex."""
        seen = [False] * self.n
        if removed is not None:
            seen[removed] = True
        out = []
        for s in range(self.n):
            if seen[s]:
                continue
            seen[s] = True
            comp = [s]
            queue = deque([s])
            while queue:
                v = queue.popleft()
                for _, w in self.adjacency[v]:
                    if not seen[w]:
                        seen[w] = True
                        comp.append(w)
                        queue.append(w)
            comp.sort()
            out.append(comp)
        return out

    def is_connected(self) -> bool:
        return self.n <= 1 or len(self.components()) == 1

    def require_connected(self):
        if not self.is_connected():
            raise NotConnected("graph is not connected")

    def induced(self, vertices: Iterable[int]) -> MultiGraph:
        """Induced subgraph with local dense ids; ids map back via vertex_ids/edge_ids."""
        keep = sorted(set(vertices))
        local = {v: i for i, v in enumerate(keep)}
        sub_edges, sub_ids = [], []
        for eid, (a, b) in enumerate(self.edges):
            if a in local and b in local:
                sub_edges.append((local[a], local[b]))
                sub_ids.append(self.edge_ids[eid])
        return MultiGraph(
            len(keep),
            sub_edges,
            vertex_ids=[self.vertex_ids[v] for v in keep],
            edge_ids=sub_ids,
        )

    @cached_property
    def biconnected(self) -> Biconnected:
        return _biconnected(self)


def build(vertex_count: int, edge_list: Iterable[Sequence[int]]) -> MultiGraph:
    return MultiGraph(vertex_count, edge_list)


def _biconnected(g: MultiGraph) -> Biconnected:
    # Iterative Hopcroft-Tarjan lowpoint DFS. Only the tree edge itself is
    # skipped when scanning a child, so parallel edges act as back edges.
    n = g.n
    disc = [-1] * n
    low = [0] * n
    cuts = set()
    blocks = []
    edge_stack = []
    clock = 0
    for root in range(n):
        if disc[root] != -1:
            continue
        disc[root] = low[root] = clock
        clock += 1
        root_children = 0
        stack = [(root, -1, iter(g.adjacency[root]))]
        while stack:
            v, parent_edge, it = stack[-1]
            descended = False
            for eid, w in it:
                if eid == parent_edge:
                    continue
                if disc[w] == -1:
                    edge_stack.append(eid)
                    disc[w] = low[w] = clock
                    clock += 1
                    stack.append((w, eid, iter(g.adjacency[w])))
                    descended = True
                    break
                if disc[w] < disc[v]:
                    edge_stack.append(eid)
                    if disc[w] < low[v]:
                        low[v] = disc[w]
            if descended:
                continue
            stack.pop()
            if not stack:
                continue
            p = stack[-1][0]
            if low[v] < low[p]:
                low[p] = low[v]
            if low[v] >= disc[p]:
                block = []
                while True:
                    e = edge_stack.pop()
                    block.append(e)
                    if e == parent_edge:
                        break
                block.sort()
                blocks.append(tuple(block))
                if p == root:
                    root_children += 1
                else:
                    cuts.add(p)
        if root_children >= 2:
            cuts.add(root)
    return Biconnected(frozenset(cuts), tuple(blocks))


def cut_vertices(g: MultiGraph) -> frozenset:
    """Vertices whose removal disconnects ``g``."""
    g.require_connected()
    return g.biconnected.cut_vertices


def components_minus(g: MultiGraph, x: int) -> list[ComponentStats]:
    """Components of ``G - x`` with their internal edge counts and attachment to x."""
    if not 0 <= x < g.n:
        raise VertexOutOfRange(x, g.n)
    comps = g.components(removed=x)
    label = {}
    for i, comp in enumerate(comps):
        for v in comp:
            label[v] = i
    inner = [0] * len(comps)
    attach = [0] * len(comps)
    for a, b in g.edges:
        if a == x:
            attach[label[b]] += 1
        elif b == x:
            attach[label[a]] += 1
        else:
            inner[label[a]] += 1
    return [
        ComponentStats(frozenset(comp), inner[i], attach[i]) for i, comp in enumerate(comps)
    ]


def blocks_at(g: MultiGraph, x: int) -> list[MultiGraph]:
    """The subgraphs G[C + x], one per component C of G - x (x is never a cut vertex of these)."""
    g.require_connected()
    if not 0 <= x < g.n:
        raise VertexOutOfRange(x, g.n)
    if g.n == 1:
        return [g.induced([x])]
    return [g.induced(comp + [x]) for comp in g.components(removed=x)]


def is_biconnected(g: MultiGraph) -> bool:
    """2-connected in the loose sense used here: connected, >= 2 vertices, no cut vertex."""
    return g.n >= 2 and g.is_connected() and not g.biconnected.cut_vertices
