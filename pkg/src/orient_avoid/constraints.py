"""Allowed / forbidden out-degree sets and the dense-pair condition.

A vertex of degree d owns an allowed set H(v) within [0, d]; the forbidden set
is the complement F(v) = [0, d] - H(v). The pair (G, H) is dense when G is
connected and no F(v) contains two consecutive integers. Under that reading a
forbidden value i always has both neighbours i - 1 and i + 1 allowed whenever
they lie in [0, d], which is what the repair moves rely on.
"""

from __future__ import annotations

import enum
import hashlib
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import EmptyAllowedSet, VertexOutOfRange
from .graph import MultiGraph


class Parity(enum.Enum):
    ODD = "odd"
    EVEN = "even"
    MIXED = "mixed"


def _range_mask(d: int) -> int:
    return (1 << (d + 1)) - 1


def _parity_mask(d: int, parity: int) -> int:
    mask = 0
    for i in range(parity, d + 1, 2):
        mask |= 1 << i
    return mask


@dataclass(frozen=True)
class DegreeSet:
    """Subset of ``{0..degree}`` stored as an int bitmask (bit i set iff i is a member)."""

    degree: int
    mask: int

    def __post_init__(self):
        if self.mask & ~_range_mask(self.degree):
            raise ValueError("member outside [0, degree]")

    @classmethod
    def of(cls, degree: int, values: Iterable[int]) -> DegreeSet:
        mask = 0
        for i in values:
            if 0 <= i <= degree:
                mask |= 1 << i
        return cls(degree, mask)

    @classmethod
    def parity_class(cls, degree: int, odd: bool) -> DegreeSet:
        return cls(degree, _parity_mask(degree, 1 if odd else 0))

    def __contains__(self, i) -> bool:
        return 0 <= i <= self.degree and (self.mask >> i) & 1 == 1

    def __iter__(self):
        return iter(self.members())

    def __len__(self) -> int:
        return bin(self.mask).count("1")

    def members(self) -> list[int]:
        return [i for i in range(self.degree + 1) if (self.mask >> i) & 1]

    def complement(self) -> DegreeSet:
        return DegreeSet(self.degree, _range_mask(self.degree) & ~self.mask)

    def window(self, low: int, high: int) -> list[int]:
        """Members inside ``[low, high]``."""
        return [i for i in range(max(low, 0), min(high, self.degree) + 1) if (self.mask >> i) & 1]

    @property
    def parity(self) -> Parity:
        if not self.mask:
            raise ValueError("parity of an empty set")
        odd = self.mask & _parity_mask(self.degree, 1)
        even = self.mask & _parity_mask(self.degree, 0)
        if odd and even:
            return Parity.MIXED
        return Parity.ODD if odd else Parity.EVEN


class ConstraintMap:
    """Per-vertex allowed sets H(v) for one graph."""

    def __init__(self, sets: Sequence[DegreeSet]):
        self.sets = tuple(sets)

    def __len__(self):
        return len(self.sets)

    def __getitem__(self, v: int) -> DegreeSet:
        return self.sets[v]

    def __eq__(self, other):
        return isinstance(other, ConstraintMap) and self.sets == other.sets

    def __hash__(self):
        return hash(self.sets)

    def __repr__(self):
        return "ConstraintMap({})".format({v: s.members() for v, s in enumerate(self.sets)})

    def allowed(self, v: int) -> list[int]:
        return self.sets[v].members()

    def forbidden(self, v: int) -> list[int]:
        return self.sets[v].complement().members()

    def masks(self) -> list[int]:
        return [s.mask for s in self.sets]

    def restrict(self, g: MultiGraph) -> ConstraintMap:
        """Constraints for a subgraph built by ``MultiGraph.induced`` (clipped to the new degrees)."""
        return ConstraintMap(
            [
                DegreeSet(d, self.sets[orig].mask & _range_mask(d))
                for orig, d in zip(g.vertex_ids, g.degrees)
            ]
        )


def _check_keys(g: MultiGraph, table: Mapping[int, Iterable[int]] | Sequence):
    items = table.items() if isinstance(table, Mapping) else enumerate(table)
    for v, values in items:
        if not 0 <= v < g.n:
            raise VertexOutOfRange(v, g.n)
        yield v, values


def from_forbidden(
    g: MultiGraph, forbidden: Mapping[int, Iterable[int]] | Sequence[Iterable[int]]
) -> ConstraintMap:
    """H(v) = [0, d(v)] - F(v); values outside [0, d(v)] forbid nothing."""
    sets = [DegreeSet(d, _range_mask(d)) for d in g.degrees]
    for v, values in _check_keys(g, forbidden):
        f = DegreeSet.of(g.degree(v), values)
        sets[v] = f.complement()
    for v, s in enumerate(sets):
        if not s.mask:
            raise EmptyAllowedSet(v)
    return ConstraintMap(sets)


def from_allowed(
    g: MultiGraph, allowed: Mapping[int, Iterable[int]] | Sequence[Iterable[int]]
) -> ConstraintMap:
    """Explicit allowed sets; vertices not listed keep the full range.

    Empty allowed sets are kept as-is so that a decision can report them.
    """
    sets = [DegreeSet(d, _range_mask(d)) for d in g.degrees]
    for v, values in _check_keys(g, allowed):
        sets[v] = DegreeSet.of(g.degree(v), values)
    return ConstraintMap(sets)


def full_parity(g: MultiGraph, odd: Iterable[int]) -> ConstraintMap:
    """Every vertex gets a whole parity class of [0, d(v)]; ``odd`` lists the odd ones."""
    odd = set(odd)
    return ConstraintMap([DegreeSet.parity_class(d, v in odd) for v, d in enumerate(g.degrees)])


@dataclass(frozen=True)
class Violation:
    vertex: int | None
    value: int | None  # i with i, i + 1 both forbidden; None for a disconnection report
    reason: str = "consecutive"


def density_violations(g: MultiGraph, h: ConstraintMap) -> list[Violation]:
    """Consecutive forbidden pairs only (connectivity not considered)."""
    out = []
    for v, s in enumerate(h.sets):
        forbidden = s.complement().mask
        pairs = forbidden & (forbidden >> 1)
        i = 0
        while pairs:
            if pairs & 1:
                out.append(Violation(v, i))
            pairs >>= 1
            i += 1
    return out


def validate_dense(g: MultiGraph, h: ConstraintMap) -> list[Violation]:
    """Empty list iff (g, h) is a dense pair."""
    if len(h) != g.n:
        raise ValueError("constraint map does not match the graph")
    out = density_violations(g, h)
    if not g.is_connected():
        out.append(Violation(None, None, "disconnected"))
    return out


def is_dense(g: MultiGraph, h: ConstraintMap) -> bool:
    return not validate_dense(g, h)


def parity_class(h: ConstraintMap, v: int) -> Parity:
    s = h[v]
    if not s.mask:
        raise EmptyAllowedSet(v)
    return s.parity


def instance_digest(g: MultiGraph, h: ConstraintMap) -> str:
    """Stable hash of (n, edge list, allowed masks)."""
    text = "{}|{}|{}".format(
        g.n,
        ";".join(f"{a},{b}" for a, b in g.edges),
        ";".join(format(m, "x") for m in h.masks()),
    )
    return hashlib.sha256(text.encode()).hexdigest()
