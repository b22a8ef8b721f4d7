"""Edge orientations with incremental out-degree bookkeeping and trail flips."""

from __future__ import annotations

from typing import Iterable, Sequence

from .constraints import ConstraintMap
from .errors import NotATrail
from .graph import MultiGraph


class Orientation:
    """Direction of every edge of ``graph``.

    ``flipped[e]`` is 0 when edge ``e = (a, b)`` points a -> b as listed in the
    graph, 1 when it points b -> a. ``out`` holds the out-degree counters.
    """

    def __init__(self, graph: MultiGraph, flipped: Iterable[int] | None = None):
        self.graph = graph
        self.flipped = bytearray(graph.m) if flipped is None else bytearray(flipped)
        if len(self.flipped) != graph.m:
            raise ValueError("one direction bit per edge expected")
        self.out = self._count()

    def _count(self) -> list[int]:
        out = [0] * self.graph.n
        for eid, (a, b) in enumerate(self.graph.edges):
            out[b if self.flipped[eid] else a] += 1
        return out

    @classmethod
    def from_tails(cls, graph: MultiGraph, tails: Sequence[int]) -> Orientation:
        bits = []
        for eid, (a, b) in enumerate(graph.edges):
            if tails[eid] not in (a, b):
                raise ValueError(f"tail {tails[eid]} is not an endpoint of edge {eid}")
            bits.append(0 if tails[eid] == a else 1)
        return cls(graph, bits)

    def copy(self) -> Orientation:
        o = Orientation.__new__(Orientation)
        o.graph = self.graph
        o.flipped = bytearray(self.flipped)
        o.out = list(self.out)
        return o

    def __eq__(self, other):
        return (
            isinstance(other, Orientation)
            and self.graph == other.graph
            and self.flipped == other.flipped
        )

    def __repr__(self):
        return f"Orientation(out={self.out})"

    def tail(self, eid: int) -> int:
        a, b = self.graph.edges[eid]
        return b if self.flipped[eid] else a

    def head(self, eid: int) -> int:
        a, b = self.graph.edges[eid]
        return a if self.flipped[eid] else b

    def tails(self) -> list[int]:
        return [self.tail(e) for e in range(self.graph.m)]

    def arcs(self) -> list[tuple[int, int, int]]:
        """``(tail, head, edge id)`` for every edge, by edge id."""
        return [(self.tail(e), self.head(e), e) for e in range(self.graph.m)]

    def flip_edge(self, eid: int):
        a, b = self.graph.edges[eid]
        if self.flipped[eid]:
            self.out[b] -= 1
            self.out[a] += 1
        else:
            self.out[a] -= 1
            self.out[b] += 1
        self.flipped[eid] ^= 1

    def flip_trail(self, trail: Sequence[int]):
        """Reverse every edge of an edge-distinct walk, in place."""
        trail_vertices(self.graph, trail)
        for eid in trail:
            self.flip_edge(eid)

    def audit(self) -> bool:
        """True iff the incremental counters match a full recount."""
        return self.out == self._count() and sum(self.out) == self.graph.m


def trail_vertices(g: MultiGraph, trail: Sequence[int]) -> list[int]:
    """Vertex sequence of a trail given as edge ids; raises NotATrail otherwise."""
    if len(set(trail)) != len(trail):
        raise NotATrail("trail repeats an edge")
    for eid in trail:
        if not 0 <= eid < g.m:
            raise NotATrail(f"unknown edge {eid}")
    if not trail:
        return []
    first = g.edges[trail[0]]
    for start in (first[0], first[1]):
        walk = [start]
        cur = start
        for eid in trail:
            a, b = g.edges[eid]
            if cur == a:
                cur = b
            elif cur == b:
                cur = a
            else:
                break
            walk.append(cur)
        else:
            return walk
    raise NotATrail("consecutive edges do not share a vertex")


def arbitrary(g: MultiGraph) -> Orientation:
    """Seed orientation: every edge from its lower to its higher endpoint."""
    return Orientation(g, [0 if a < b else 1 for a, b in g.edges])


def flip(o: Orientation, trail: Sequence[int]) -> Orientation:
    """Copy of ``o`` with exactly the edges of ``trail`` reversed."""
    result = o.copy()
    result.flip_trail(trail)
    return result


def verify(g: MultiGraph, h: ConstraintMap, o: Orientation) -> list[int]:
    """Every vertex whose out-degree is not allowed; empty means ``o`` is an H-orientation."""
    if o.graph != g:
        raise ValueError("orientation belongs to a different graph")
    out = o._count()
    return [v for v in range(g.n) if out[v] not in h[v]]
