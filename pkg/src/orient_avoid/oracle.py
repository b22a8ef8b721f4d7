"""Exhaustive ground truth over all 2^e(G) orientations.

Nothing here imports the decision or construction code; the differential
tests depend on that independence. Orientations are visited in Gray-code
order so consecutive orientations differ in one edge and out-degrees update
in O(1).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterator

from .constraints import ConstraintMap
from .errors import TooManyEdges
from .graph import MultiGraph, blocks_at

DEFAULT_CAP = 20


class SpectrumClass(enum.Enum):
    CONTAINS_CONSECUTIVE = "contains-consecutive"
    ODD_CLASS = "odd-class"
    EVEN_CLASS = "even-class"
    OTHER = "other"


@dataclass(frozen=True)
class SpectrumReport:
    vertex: int
    values: frozenset
    degree: int

    @property
    def classification(self) -> SpectrumClass:
        return classify(self.values, self.degree)


def classify(values, degree: int) -> SpectrumClass:
    values = set(values)
    if any(i + 1 in values for i in values):
        return SpectrumClass.CONTAINS_CONSECUTIVE
    if values == set(range(1, degree + 1, 2)) and values:
        return SpectrumClass.ODD_CLASS
    if values == set(range(0, degree + 1, 2)):
        return SpectrumClass.EVEN_CLASS
    return SpectrumClass.OTHER


def _check_cap(g: MultiGraph, cap: int):
    if g.m > cap:
        raise TooManyEdges(f"{g.m} edges exceed the oracle cap of {cap}")


def gray_walk(g: MultiGraph, cap: int = DEFAULT_CAP) -> Iterator[tuple[int, list[int], bytearray]]:
    """Yield ``(changed edge or -1, out-degrees, direction bits)`` for every orientation.

    The yielded lists are live views that change on the next iteration.
    Direction bit 0 means edge ``(a, b)`` points a -> b.
    """
    _check_cap(g, cap)
    edges = g.edges
    out = [0] * g.n
    for a, _ in edges:
        out[a] += 1
    bits = bytearray(len(edges))
    yield -1, out, bits
    for i in range(1, 1 << len(edges)):
        e = (i & -i).bit_length() - 1
        a, b = edges[e]
        if bits[e]:
            out[b] -= 1
            out[a] += 1
        else:
            out[a] -= 1
            out[b] += 1
        bits[e] ^= 1
        yield e, out, bits


def _walk_bad(g: MultiGraph, h: ConstraintMap, cap: int):
    """Gray walk that also tracks the set of infeasible vertices."""
    masks = h.masks()
    edges = g.edges
    bad = set()
    first = True
    for e, out, bits in gray_walk(g, cap):
        if first:
            bad = {v for v in range(g.n) if not (masks[v] >> out[v]) & 1}
            first = False
        else:
            for v in edges[e]:
                if (masks[v] >> out[v]) & 1:
                    bad.discard(v)
                else:
                    bad.add(v)
        yield out, bits, bad


def enumerate_existence(g: MultiGraph, h: ConstraintMap, cap: int = DEFAULT_CAP) -> tuple[bool, int]:
    """(exists, number of H-orientations)."""
    count = 0
    for _, _, bad in _walk_bad(g, h, cap):
        if not bad:
            count += 1
    return count > 0, count


def feasible_orientations(g: MultiGraph, h: ConstraintMap, cap: int = DEFAULT_CAP) -> Iterator[list[int]]:
    """Tail vertex per edge for every H-orientation."""
    edges = g.edges
    for _, bits, bad in _walk_bad(g, h, cap):
        if not bad:
            yield [b if bits[e] else a for e, (a, b) in enumerate(edges)]


def spectra(g: MultiGraph, h: ConstraintMap, cap: int = DEFAULT_CAP) -> list[frozenset]:
    """D+(u) for every vertex u in one pass: out-degrees of u over orientations feasible off u."""
    found = [0] * g.n
    everyone = range(g.n)
    for out, _, bad in _walk_bad(g, h, cap):
        if not bad:
            for v in everyone:
                found[v] |= 1 << out[v]
        elif len(bad) == 1:
            (v,) = bad
            found[v] |= 1 << out[v]
    return [frozenset(i for i in range(g.degree(v) + 1) if (found[v] >> i) & 1) for v in everyone]


def spectrum(g: MultiGraph, h: ConstraintMap, u: int, cap: int = DEFAULT_CAP) -> SpectrumReport:
    return SpectrumReport(u, spectra(g, h, cap)[u], g.degree(u))


def minkowski_sum(sets) -> frozenset:
    total = {0}
    for s in sets:
        total = {a + b for a in total for b in s}
    return frozenset(total)


@dataclass(frozen=True)
class MinkowskiResult:
    ok: bool
    whole: frozenset
    parts: tuple

    def __bool__(self):
        return self.ok


def minkowski_check(g: MultiGraph, h: ConstraintMap, x: int, cap: int = DEFAULT_CAP) -> MinkowskiResult:
    """Compare D+(x) in G with the sum of D+(x) over the blocks G[C + x]."""
    whole = spectra(g, h, cap)[x]
    parts = []
    for block in blocks_at(g, x):
        local_x = block.vertex_ids.index(x)
        hb = h.restrict(block)
        parts.append(spectra(block, hb, cap)[local_x])
    total = minkowski_sum(parts)
    return MinkowskiResult(total == whole, whole, tuple(parts))
