"""Building an H-orientation once the decision says one exists.

``repair`` makes every vertex except an anchor feasible by flipping tail
segments of shortest paths from the anchor. ``finalize`` then moves the
anchor's out-degree with cycle flips through pairs of its edges that lie in a
common component of G - u, sweeping each component up and then down until
the anchor lands in its allowed set.

Both rely on the dense condition in its symmetric form: if i is forbidden at
v then i - 1 and i + 1 are allowed whenever they lie in [0, d(v)].
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .constraints import ConstraintMap
from .decision import Certificate, Verdict, decide
from .errors import InternalInvariantBroken
from .graph import MultiGraph
from .orientation import Orientation, arbitrary, verify


@dataclass
class RepairStep:
    target: int  # the infeasible vertex v fixed by this step
    stop: int  # x, the far end of the committed segment (the anchor if no vertex broke)
    edges: tuple
    potential_before: int
    potential_after: int


@dataclass
class FinalizeMove:
    component: int
    delta: int  # change of the anchor's out-degree: +-1 (partial flip) or +-2 (cycle)
    edges: tuple


@dataclass
class ConstructLog:
    anchor: int | None = None
    repair: list = field(default_factory=list)
    finalize: list = field(default_factory=list)


def _bfs_tree(g: MultiGraph, root: int):
    parent_edge = [-1] * g.n
    seen = [False] * g.n
    seen[root] = True
    order = [root]
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for eid, w in g.adjacency[v]:
            if not seen[w]:
                seen[w] = True
                parent_edge[w] = eid
                order.append(w)
                queue.append(w)
    return order, parent_edge


def _shift(o: Orientation, eid: int, v: int) -> int:
    """Change of d+(v) caused by reversing edge ``eid``."""
    return -1 if o.tail(eid) == v else 1


def repair(
    g: MultiGraph,
    h: ConstraintMap,
    u: int,
    o: Orientation,
    log: list | None = None,
) -> Orientation:
    """Orientation in which every vertex other than ``u`` is feasible.

    Vertices are visited in breadth-first order from ``u``; each infeasible one
    is fixed by flipping the part of its tree path to ``u`` that ends at the
    first vertex (seen from v) that a full-path flip would break. Flips never
    make a feasible non-anchor vertex infeasible, so the number of infeasible
    non-anchor vertices drops by one per step.
    """
    o = o.copy()
    sets = h.sets
    out = o.out
    order, parent_edge = _bfs_tree(g, u)
    if len(order) != g.n:
        raise ValueError("graph is not connected")
    potential = sum(1 for v in range(g.n) if v != u and out[v] not in sets[v])
    for v in order[1:]:
        if out[v] in sets[v]:
            continue
        segment = [parent_edge[v]]
        cur = g.other(parent_edge[v], v)
        while cur != u:
            up = parent_edge[cur]
            change = _shift(o, segment[-1], cur) + _shift(o, up, cur)
            if out[cur] + change not in sets[cur]:
                break
            segment.append(up)
            cur = g.other(up, cur)
        for eid in segment:
            o.flip_edge(eid)
        after = potential - 1
        if log is not None:
            now = sum(1 for w in range(g.n) if w != u and out[w] not in sets[w])
            if now != after or out[v] not in sets[v]:
                raise InternalInvariantBroken(f"repair at {v} left {now} infeasible vertices, expected {after}")
            log.append(RepairStep(v, cur, tuple(segment), potential, now))
        potential = after
    if potential != 0:
        raise InternalInvariantBroken("repair finished with infeasible vertices")
    return o


def _components_at(g: MultiGraph, u: int):
    label = [-1] * g.n
    comps = 0
    for s in range(g.n):
        if s == u or label[s] != -1:
            continue
        label[s] = comps
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for _, w in g.adjacency[v]:
                if w != u and label[w] == -1:
                    label[w] = comps
                    queue.append(w)
        comps += 1
    return label, comps


def _path_avoiding(g: MultiGraph, src: int, dst: int, u: int) -> list[int]:
    """Edge ids of a shortest src-dst path in G - u."""
    if src == dst:
        return []
    parent_edge = {src: -1}
    queue = deque([src])
    while queue:
        v = queue.popleft()
        for eid, w in g.adjacency[v]:
            if w == u or w in parent_edge:
                continue
            parent_edge[w] = eid
            if w == dst:
                path = []
                while w != src:
                    e = parent_edge[w]
                    path.append(e)
                    w = g.other(e, w)
                path.reverse()
                return path
            queue.append(w)
    raise InternalInvariantBroken(f"no path from {src} to {dst} avoiding {u}")


def _move(g, h, u, o, e1, e2):
    """Flip the cycle u-e1-...-e2-u, or its prefix up to the first vertex the full flip would break."""
    sets, out = h.sets, o.out
    a, b = g.other(e1, u), g.other(e2, u)
    cycle = [e1] + _path_avoiding(g, a, b, u) + [e2]
    prefix = None
    cur = u
    for i in range(len(cycle) - 1):
        cur = g.other(cycle[i], cur)
        change = _shift(o, cycle[i], cur) + _shift(o, cycle[i + 1], cur)
        if out[cur] + change not in sets[cur]:
            prefix = cycle[: i + 1]
            break
    chosen = cycle if prefix is None else prefix
    for eid in chosen:
        o.flip_edge(eid)
    return tuple(chosen)


def finalize(
    g: MultiGraph,
    h: ConstraintMap,
    u: int,
    o: Orientation,
    log: list | None = None,
) -> Orientation:
    """Move the anchor's out-degree into H(u) while keeping every other vertex feasible.

    Each move takes two edges of u into one component of G - u, both pointing
    into u (raise) or both out of u (lower), closes them into a cycle through
    that component and flips it. If some cycle vertex would break, only the
    segment up to it is flipped, which shifts u by one and lands it in H(u).
    Components are swept upwards until saturated and then downwards, so every
    reachable out-degree of u's parity is visited.
    """
    o = o.copy()
    sets, out = h.sets, o.out
    if out[u] in sets[u]:
        return o
    label, count = _components_at(g, u)
    incident = [[] for _ in range(count)]
    for eid, w in g.adjacency[u]:
        incident[label[w]].append(eid)

    def pool(comp, outward):
        # edges of u into comp currently pointing away from u (outward) or towards it
        return [e for e in incident[comp] if (o.tail(e) == u) == outward]

    moves = 0
    for raising in (True, False):
        while out[u] not in sets[u]:
            best, best_edges = None, None
            for comp in range(count):
                edges = pool(comp, outward=not raising)
                if len(edges) >= 2 and (best_edges is None or len(edges) > len(best_edges)):
                    best, best_edges = comp, edges
            if best is None:
                break
            before = out[u]
            flipped = _move(g, h, u, o, best_edges[0], best_edges[1])
            moves += 1
            delta = out[u] - before
            if delta not in ((1, 2) if raising else (-1, -2)):
                raise InternalInvariantBroken(f"anchor moved by {delta}")
            if log is not None:
                bad = [w for w in range(g.n) if w != u and out[w] not in sets[w]]
                if bad:
                    raise InternalInvariantBroken(f"move broke vertices {bad}")
                log.append(FinalizeMove(best, delta, flipped))
            if abs(delta) == 1 and out[u] not in sets[u]:
                raise InternalInvariantBroken("partial flip did not land in the allowed set")
            if moves > g.degree(u) + 1:
                raise InternalInvariantBroken("finalize exceeded its move budget")
        if out[u] in sets[u]:
            return o
    raise InternalInvariantBroken(f"no allowed out-degree reachable at anchor {u}")


def orient_with_verdict(g: MultiGraph, h: ConstraintMap, log: ConstructLog | None = None):
    """(verdict, orientation or None)."""
    verdict = decide(g, h)
    if not verdict.exists:
        return verdict, None
    o = arbitrary(g)
    if g.n == 0:
        return verdict, o
    anchor = verdict.witness
    if log is not None:
        log.anchor = anchor
    o = repair(g, h, anchor, o, None if log is None else log.repair)
    o = finalize(g, h, anchor, o, None if log is None else log.finalize)
    bad = verify(g, h, o)
    if bad:
        raise InternalInvariantBroken(f"constructed orientation infeasible at {bad}")
    return verdict, o


def orient(g: MultiGraph, h: ConstraintMap) -> Orientation | Certificate:
    """An H-orientation when one exists, otherwise the non-existence certificate."""
    verdict, o = orient_with_verdict(g, h)
    return o if verdict.exists else verdict.certificate


def replay(g: MultiGraph, log: ConstructLog) -> Orientation:
    """Re-apply every recorded flip to the seed orientation."""
    o = arbitrary(g)
    for step in log.repair:
        for eid in step.edges:
            o.flip_edge(eid)
    for move in log.finalize:
        for eid in move.edges:
            o.flip_edge(eid)
    return o


__all__ = [
    "ConstructLog",
    "FinalizeMove",
    "RepairStep",
    "Verdict",
    "finalize",
    "orient",
    "orient_with_verdict",
    "repair",
    "replay",
]
