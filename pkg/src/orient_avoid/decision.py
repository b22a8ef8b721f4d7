"""Existence decision for dense pairs via greedy parity traces.

The decision walks the mixed-parity vertices (all of them cut vertices once the
early exit has been passed) in an order where each step has at most one
component of G - x still containing unresolved vertices. At each step the
resolved components pin down the parity of the edges x sends into them, which
yields an interval [low, high] that any H-orientation must put d+(x) in. The
allowed values inside that interval either all share one parity (x is then
resolved to that parity), mix parities (an orientation exists), or are absent
(no orientation exists). A completed trace decides by comparing the number of
odd vertices with e(G) modulo 2.

Two engines produce identical traces: a reference engine that recomputes
components from scratch at every step, and a block-cut-tree engine with
Fenwick-tree subtree counts used by default.
"""

from __future__ import annotations

import enum
import hashlib
import heapq
from dataclasses import dataclass, field

from .constraints import ConstraintMap, Parity, instance_digest, validate_dense
from .errors import (
    DensityViolation,
    InternalInvariantBroken,
    Not2Connected,
    NotConnected,
    TooManyUnresolvedComponents,
)
from .graph import MultiGraph, components_minus, is_biconnected


class Reason(enum.Enum):
    MIXED_PARITY_VERTEX = "mixed-parity-vertex"
    MIXED_WINDOW = "mixed-window"
    TRACE_MATCHING = "trace-matching"


class CertificateKind(enum.Enum):
    TRACE_MISMATCH = "trace-mismatch"
    EMPTY_WINDOW = "empty-window"
    PER_VERTEX_VOID = "per-vertex-void"


@dataclass(frozen=True)
class TraceStep:
    vertex: int
    low: int
    high: int
    slack: int  # components whose edge count and odd count disagree in parity
    window: tuple
    parity: Parity  # MIXED only for the step that ends a decision with EXISTS
    digest: str  # hash of the resolved partition before this step


@dataclass(frozen=True)
class ParityTrace:
    steps: tuple = ()
    odd: frozenset = frozenset()
    even: frozenset = frozenset()

    @property
    def order(self) -> list[int]:
        return [s.vertex for s in self.steps]


@dataclass(frozen=True)
class Certificate:
    kind: CertificateKind
    digest: str
    trace: ParityTrace = field(default_factory=ParityTrace)
    vertex: int | None = None
    low: int | None = None
    high: int | None = None


@dataclass(frozen=True)
class Verdict:
    exists: bool
    witness: int | None = None
    reason: Reason | None = None
    step: TraceStep | None = None
    trace: ParityTrace = field(default_factory=ParityTrace)
    certificate: Certificate | None = None


@dataclass(frozen=True)
class Window:
    low: int
    high: int
    slack: int
    members: tuple

    @property
    def parity(self) -> Parity | None:
        kinds = {i % 2 for i in self.members}
        if not kinds:
            return None
        if len(kinds) == 2:
            return Parity.MIXED
        return Parity.ODD if 1 in kinds else Parity.EVEN


def partition_digest(odd, even) -> str:
    """Digest of the initial odd/even partition."""
    text = ",".join(map(str, sorted(odd))) + "|" + ",".join(map(str, sorted(even)))
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def chain_digest(previous: str, vertex: int, parity: Parity) -> str:
    """Digest of the partition after ``vertex`` joins the ``parity`` side.

    Chaining keeps each step O(1) while still pinning the whole resolved
    partition, given the initial one.
    """
    text = f"{previous}|{vertex}:{parity.value}"
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def _parity_matches(odd_count: int, edge_count: int) -> bool:
    return odd_count % 2 == edge_count % 2


def initial_partition(g: MultiGraph, h: ConstraintMap):
    """(odd vertices, even vertices, mixed vertices in id order)."""
    odd, even, mixed = set(), set(), []
    for v in range(g.n):
        p = h[v].parity
        if p is Parity.ODD:
            odd.add(v)
        elif p is Parity.EVEN:
            even.add(v)
        else:
            mixed.append(v)
    return odd, even, mixed


def _counts(comps, odd, resolved):
    low = slack = 0
    unresolved = 0
    for c in comps:
        if not c.vertices <= resolved:
            unresolved += 1
            continue
        k = len(c.vertices & odd)
        if (k + c.edges - c.attachment) % 2:
            low += 1
        if (k - c.edges) % 2:
            slack += 1
    return low, slack, unresolved


def window(g: MultiGraph, h: ConstraintMap, x: int, odd, even) -> Window:
    """Forced out-degree interval at ``x`` given the resolved parities."""
    comps = components_minus(g, x)
    low, slack, unresolved = _counts(comps, set(odd), set(odd) | set(even))
    if unresolved > 1:
        raise TooManyUnresolvedComponents(f"{unresolved} components of G - {x} are unresolved")
    high = g.degree(x) - slack
    return Window(low, high, slack, tuple(h[x].window(low, high)))


def pick_next(g: MultiGraph, unresolved, resolved=None) -> int:
    """Unresolved vertex whose largest component of G - x holds the most unresolved vertices.

    Ties go to the smallest id. At most one component of G - x may meet the
    unresolved set; anything else is a bug.
    """
    pool = set(unresolved)
    best, best_score = None, -1
    for x in sorted(pool):
        others = pool - {x}
        score = max((len(others.intersection(c)) for c in g.components(removed=x)), default=0)
        if score > best_score:
            best, best_score = x, score
    if best is None:
        raise ValueError("no unresolved vertex left")
    if best_score != len(pool) - 1:
        raise InternalInvariantBroken(f"no vertex of {sorted(pool)} isolates the unresolved set")
    return best


class _ReferenceEngine:
    def __init__(self, g, h, odd, even, mixed):
        self.g, self.h = g, h
        self.odd, self.even = set(odd), set(even)
        self.pending = set(mixed)

    def remaining(self):
        return bool(self.pending)

    def pick(self):
        return pick_next(self.g, self.pending, self.odd | self.even)

    def counts(self, x):
        comps = components_minus(self.g, x)
        return _counts(comps, self.odd, self.odd | self.even)

    def resolve(self, x, odd):
        self.pending.discard(x)
        (self.odd if odd else self.even).add(x)


class _Fenwick:
    def __init__(self, size):
        self.tree = [0] * (size + 1)

    def add(self, i, delta):
        i += 1
        while i < len(self.tree):
            self.tree[i] += delta
            i += i & -i

    def prefix(self, i):
        # sum of positions [0, i)
        s = 0
        while i > 0:
            s += self.tree[i]
            i -= i & -i
        return s

    def span(self, lo, hi):
        return self.prefix(hi) - self.prefix(lo)


class _TreeEngine:
    """Block-cut tree with subtree counters; O((n + m) log n) per full trace."""

    def __init__(self, g, h, odd, even, mixed):
        self.g = g
        bc = g.biconnected
        blocks = bc.blocks
        nb = len(blocks)
        cuts = sorted(bc.cut_vertices)
        cut_node = {c: nb + i for i, c in enumerate(cuts)}
        size = nb + len(cuts)
        adj = [[] for _ in range(size)]
        node_of = [0] * g.n
        attach = {}
        for b, block in enumerate(blocks):
            members = set()
            for e in block:
                for end in g.edges[e]:
                    members.add(end)
                    if end in cut_node:
                        attach[b, end] = attach.get((b, end), 0) + 1
            for v in sorted(members):
                if v in cut_node:
                    adj[b].append(cut_node[v])
                    adj[cut_node[v]].append(b)
                else:
                    node_of[v] = b
        for c, node in cut_node.items():
            node_of[c] = node

        parent = [-1] * size
        tin = [0] * size
        tout = [0] * size
        esub = [len(blocks[i]) if i < nb else 0 for i in range(size)]
        order = []
        seen = [False] * size
        stack = [0]
        seen[0] = True
        while stack:
            node = stack.pop()
            tin[node] = len(order)
            order.append(node)
            for nxt in adj[node]:
                if not seen[nxt]:
                    seen[nxt] = True
                    parent[nxt] = node
                    stack.append(nxt)
        # preorder from an explicit stack is still contiguous per subtree
        span = [1] * size
        for node in reversed(order):
            p = parent[node]
            if p >= 0:
                span[p] += span[node]
                esub[p] += esub[node]
        for node in range(size):
            tout[node] = tin[node] + span[node]

        self.cut_node, self.node_of, self.attach = cut_node, node_of, attach
        self.cuts, self.nblocks = cuts, nb
        self.adj, self.parent, self.tin, self.tout, self.esub = adj, parent, tin, tout, esub
        self.odd_fw, self.pending_fw = _Fenwick(size), _Fenwick(size)
        self.odd_total, self.pending_total = 0, 0
        for v in odd:
            self.odd_fw.add(tin[node_of[v]], 1)
            self.odd_total += 1
        in_u = [False] * size
        for v in mixed:
            if v not in cut_node:
                raise InternalInvariantBroken(f"mixed vertex {v} is not a cut vertex")
            in_u[cut_node[v]] = True
            self.pending_fw.add(tin[cut_node[v]], 1)
            self.pending_total += 1
        self.in_u = in_u

        # Steiner tree of the pending cut vertices; its leaves are exactly the
        # vertices with at most one pending component.
        self.alive = [True] * size
        self.deg = [len(a) for a in adj]
        self.heap = []
        self.queued = set()
        for node in range(size):
            if self.alive[node] and not in_u[node] and self.deg[node] <= 1:
                self._prune(node)
        for v in mixed:
            node = cut_node[v]
            if self.alive[node] and self.deg[node] <= 1:
                self._push(node)

    def _push(self, node):
        if node not in self.queued:
            self.queued.add(node)
            heapq.heappush(self.heap, node)

    def _prune(self, node):
        stack = [node]
        while stack:
            cur = stack.pop()
            if not self.alive[cur]:
                continue
            self.alive[cur] = False
            for nxt in self.adj[cur]:
                if not self.alive[nxt]:
                    continue
                self.deg[nxt] -= 1
                if self.deg[nxt] <= 1:
                    if self.in_u[nxt]:
                        self._push(nxt)
                    else:
                        stack.append(nxt)

    def remaining(self):
        return self.pending_total > 0

    def pick(self):
        # cut nodes are numbered in vertex-id order, so the heap yields the smallest id
        while self.heap:
            node = heapq.heappop(self.heap)
            if self.alive[node] and self.in_u[node]:
                return self.cuts[node - self.nblocks]
        raise InternalInvariantBroken("pending vertices remain but none is extremal")

    def counts(self, x):
        node = self.cut_node[x]
        tin, tout = self.tin, self.tout
        low = slack = unresolved = 0
        for b in self.adj[node]:
            d = self.attach[b, x]
            if self.parent[b] == node:
                k = self.odd_fw.span(tin[b], tout[b])
                pending = self.pending_fw.span(tin[b], tout[b])
                e = self.esub[b] - d
            else:
                k = self.odd_total - self.odd_fw.span(tin[node], tout[node])
                pending = self.pending_total - self.pending_fw.span(tin[node], tout[node])
                e = self.g.m - self.esub[node] - d
            if pending:
                unresolved += 1
                continue
            if (k + e - d) % 2:
                low += 1
            if (k - e) % 2:
                slack += 1
        return low, slack, unresolved

    def resolve(self, x, odd):
        node = self.cut_node[x]
        self.in_u[node] = False
        self.pending_fw.add(self.tin[node], -1)
        self.pending_total -= 1
        if odd:
            self.odd_fw.add(self.tin[node], 1)
            self.odd_total += 1
        self._prune(node)


def _require_dense(g: MultiGraph, h: ConstraintMap):
    violations = validate_dense(g, h)
    if any(v.reason == "disconnected" for v in violations):
        raise NotConnected("decision requires a connected graph")
    if violations:
        raise DensityViolation(violations)


def decide(g: MultiGraph, h: ConstraintMap, *, reference: bool = False) -> Verdict:
    """Decide whether ``g`` has an H-orientation; ``reference`` selects the naive engine."""
    _require_dense(g, h)
    digest = instance_digest(g, h)
    for v in range(g.n):
        if not h[v].mask:
            return Verdict(False, certificate=Certificate(CertificateKind.PER_VERTEX_VOID, digest, vertex=v))
    if g.n == 0:
        return Verdict(True, reason=Reason.TRACE_MATCHING)
    cuts = g.biconnected.cut_vertices
    odd, even, mixed = initial_partition(g, h)
    for v in mixed:
        if v not in cuts:
            return Verdict(True, v, Reason.MIXED_PARITY_VERTEX, trace=ParityTrace((), frozenset(odd), frozenset(even)))

    steps = []
    current = partition_digest(odd, even)
    if mixed:
        engine = (_ReferenceEngine if reference else _TreeEngine)(g, h, odd, even, mixed)
        while engine.remaining():
            x = engine.pick()
            low, slack, unresolved = engine.counts(x)
            if unresolved > 1:
                raise InternalInvariantBroken(f"step at {x} has {unresolved} unresolved components")
            high = g.degree(x) - slack
            members = tuple(h[x].window(low, high))
            if not members:
                prefix = ParityTrace(tuple(steps), frozenset(odd), frozenset(even))
                cert = Certificate(CertificateKind.EMPTY_WINDOW, digest, prefix, x, low, high)
                return Verdict(False, trace=prefix, certificate=cert)
            w = Window(low, high, slack, members)
            step = TraceStep(x, low, high, slack, members, w.parity, current)
            if w.parity is Parity.MIXED:
                prefix = ParityTrace(tuple(steps), frozenset(odd), frozenset(even))
                return Verdict(True, x, Reason.MIXED_WINDOW, step, prefix)
            steps.append(step)
            is_odd = w.parity is Parity.ODD
            (odd if is_odd else even).add(x)
            engine.resolve(x, is_odd)
            current = chain_digest(current, x, w.parity)

    trace = ParityTrace(tuple(steps), frozenset(odd), frozenset(even))
    if _parity_matches(len(odd), g.m):
        witness = steps[-1].vertex if steps else 0
        return Verdict(True, witness, Reason.TRACE_MATCHING, trace=trace)
    cert = Certificate(CertificateKind.TRACE_MISMATCH, digest, trace)
    return Verdict(False, trace=trace, certificate=cert)


def decide_2connected(g: MultiGraph, h: ConstraintMap) -> Verdict:
    """Closed form for 2-connected graphs: infeasible iff all parities fixed and the odd count mismatches."""
    if not is_biconnected(g):
        raise Not2Connected("graph has a cut vertex or fewer than two vertices")
    _require_dense(g, h)
    digest = instance_digest(g, h)
    for v in range(g.n):
        if not h[v].mask:
            return Verdict(False, certificate=Certificate(CertificateKind.PER_VERTEX_VOID, digest, vertex=v))
    odd, even, mixed = initial_partition(g, h)
    trace = ParityTrace((), frozenset(odd), frozenset(even))
    if mixed:
        return Verdict(True, mixed[0], Reason.MIXED_PARITY_VERTEX, trace=trace)
    if _parity_matches(len(odd), g.m):
        return Verdict(True, 0, Reason.TRACE_MATCHING, trace=trace)
    return Verdict(False, trace=trace, certificate=Certificate(CertificateKind.TRACE_MISMATCH, digest, trace))


def verify_certificate(g: MultiGraph, h: ConstraintMap, cert: Certificate) -> str | None:
    """Replay a certificate from scratch; ``None`` means it proves non-existence."""
    if cert.digest != instance_digest(g, h):
        return "certificate digest does not match the instance"
    if cert.kind is CertificateKind.PER_VERTEX_VOID:
        v = cert.vertex
        if v is None or not 0 <= v < g.n:
            return "void vertex out of range"
        return None if not h[v].mask else f"vertex {v} has a nonempty allowed set"
    if any(not s.mask for s in h.sets):
        return "instance has an empty allowed set; only a per-vertex-void certificate applies"

    odd, even, mixed = initial_partition(g, h)
    pending = set(mixed)
    current = partition_digest(odd, even)
    for i, step in enumerate(cert.trace.steps):
        x = step.vertex
        if x not in pending:
            return f"step {i}: vertex {x} is not an unresolved mixed vertex"
        if step.digest != current:
            return f"step {i}: resolved-partition digest mismatch"
        try:
            w = window(g, h, x, odd, even)
        except TooManyUnresolvedComponents as exc:
            return f"step {i}: {exc}"
        if (w.low, w.high, w.slack, w.members) != (step.low, step.high, step.slack, tuple(step.window)):
            return f"step {i}: window at {x} recomputes to [{w.low}, {w.high}]"
        if w.parity is Parity.MIXED:
            return f"step {i}: window at {x} mixes parities"
        if step.parity not in (Parity.ODD, Parity.EVEN):
            return f"step {i}: no parity assigned"
        if w.parity is not None and w.parity is not step.parity:
            return f"step {i}: recorded parity disagrees with the window"
        pending.discard(x)
        (odd if step.parity is Parity.ODD else even).add(x)
        current = chain_digest(current, x, step.parity)

    if (cert.trace.odd, cert.trace.even) != (frozenset(odd), frozenset(even)):
        return "recorded odd/even partition does not match the replay"
    if cert.kind is CertificateKind.TRACE_MISMATCH:
        if pending:
            return f"trace leaves {sorted(pending)} unresolved"
        if _parity_matches(len(odd), g.m):
            return "odd count agrees with e(G) modulo 2"
        return None
    if cert.kind is CertificateKind.EMPTY_WINDOW:
        x = cert.vertex
        if x not in pending:
            return f"empty-window vertex {x} is not unresolved"
        try:
            w = window(g, h, x, odd, even)
        except TooManyUnresolvedComponents as exc:
            return str(exc)
        if (w.low, w.high) != (cert.low, cert.high):
            return f"window at {x} recomputes to [{w.low}, {w.high}]"
        if w.members:
            return f"window at {x} is not empty"
        return None
    return f"unknown certificate kind {cert.kind}"
