import pytest
from hypothesis import given, strategies as st

from orient_avoid.constraints import from_allowed
from orient_avoid.errors import NotATrail
from orient_avoid.graph import build
from orient_avoid.orientation import Orientation, arbitrary, flip, trail_vertices, verify

from conftest import connected_multigraphs


def test_arbitrary_points_low_to_high(triangle):
    assert arbitrary(build(2, [(0, 1)])).out == [1, 0]
    assert arbitrary(triangle).out == [2, 1, 0]
    assert arbitrary(build(2, [(0, 1), (0, 1)])).out == [2, 0]


def test_flip_examples(triangle):
    cyclic = Orientation.from_tails(triangle, [0, 1, 2])
    assert flip(cyclic, [0, 1, 2]).out == [1, 1, 1]
    k2 = build(2, [(0, 1)])
    assert flip(arbitrary(k2), [0]).out == [0, 1]
    path = build(3, [(0, 1), (1, 2)])
    o = arbitrary(path)
    assert o.out == [1, 1, 0]
    assert flip(o, [0, 1]).out == [0, 1, 1]


def test_flip_rejects_non_trails(star):
    with pytest.raises(NotATrail):
        flip(arbitrary(star), [0, 0])
    with pytest.raises(NotATrail):
        trail_vertices(build(4, [(0, 1), (2, 3)]), [0, 1])


def test_verify_examples(triangle):
    cyclic = Orientation.from_tails(triangle, [0, 1, 2])
    ones = from_allowed(triangle, {v: [1] for v in range(3)})
    evens = from_allowed(triangle, {v: [0, 2] for v in range(3)})
    assert verify(triangle, ones, cyclic) == []
    assert verify(triangle, evens, cyclic) == [0, 1, 2]
    k2 = build(2, [(0, 1)])
    assert verify(k2, from_allowed(k2, {0: [0, 1], 1: [1]}), arbitrary(k2)) == [1]


def test_arcs_and_tails_agree(triangle):
    o = Orientation.from_tails(triangle, [1, 1, 0])
    assert o.tails() == [1, 1, 0]
    assert [(t, h) for t, h, _ in o.arcs()] == [(1, 0), (1, 2), (0, 2)]


@st.composite
def graph_and_trail(draw):
    g = draw(connected_multigraphs(max_vertices=6, max_extra=6))
    bits = draw(st.lists(st.booleans(), min_size=g.m, max_size=g.m))
    o = Orientation(g, [int(b) for b in bits])
    # random walk without repeated edges
    start = draw(st.integers(0, g.n - 1))
    used, trail, cur = set(), [], start
    for _ in range(draw(st.integers(0, g.m))):
        options = [(e, w) for e, w in g.adjacency[cur] if e not in used]
        if not options:
            break
        e, w = draw(st.sampled_from(options))
        used.add(e)
        trail.append(e)
        cur = w
    return g, o, trail, start, cur


@given(graph_and_trail())
def test_flip_is_an_involution(case):
    g, o, trail, _, _ = case
    assert flip(flip(o, trail), trail) == o


@given(graph_and_trail())
def test_flip_keeps_total_and_interior_parity(case):
    g, o, trail, start, end = case
    after = flip(o, trail)
    assert sum(after.out) == g.m
    assert after.audit()
    for v in range(g.n):
        ends = (v == start) + (v == end) if trail else 0
        assert (after.out[v] - o.out[v]) % 2 == ends % 2
