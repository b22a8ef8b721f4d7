from __future__ import annotations

import pytest
from hypothesis import settings, strategies as st

from orient_avoid.constraints import ConstraintMap, DegreeSet
from orient_avoid.graph import MultiGraph, build

settings.register_profile("default", max_examples=150, deadline=None)
settings.load_profile("default")


TRIANGLE = [(0, 1), (1, 2), (2, 0)]
STAR = [(0, 1), (0, 2), (0, 3)]
PATH3 = [(0, 1), (1, 2)]
BOWTIE = [(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)]


@pytest.fixture
def triangle():
    return build(3, TRIANGLE)


@pytest.fixture
def star():
    return build(4, STAR)


@pytest.fixture
def path3():
    return build(3, PATH3)


@pytest.fixture
def bowtie():
    return build(5, BOWTIE)


def allowed(g: MultiGraph, table) -> ConstraintMap:
    """Allowed sets from a {vertex: values} table; unlisted vertices are free."""
    sets = []
    for v, d in enumerate(g.degrees):
        values = table.get(v, range(d + 1))
        sets.append(DegreeSet.of(d, values))
    return ConstraintMap(sets)


@st.composite
def connected_multigraphs(draw, max_vertices=6, max_extra=5, allow_parallel=True):
    n = draw(st.integers(1, max_vertices))
    edges = [(draw(st.integers(0, v - 1)), v) for v in range(1, n)]
    if n >= 2:
        extra = draw(st.integers(0, max_extra))
        for _ in range(extra):
            a = draw(st.integers(0, n - 1))
            b = draw(st.integers(0, n - 1).filter(lambda x: x != a))
            if allow_parallel or (a, b) not in edges and (b, a) not in edges:
                edges.append((a, b))
    return build(n, edges)


@st.composite
def dense_sets(draw, degree: int) -> DegreeSet:
    """A random allowed set on [0, degree] whose forbidden part has no two consecutive values."""
    forbidden = 0
    prev = False
    for i in range(degree + 1):
        take = not prev and draw(st.booleans())
        if take:
            forbidden |= 1 << i
        prev = take
    full = (1 << (degree + 1)) - 1
    if forbidden == full:  # only possible for degree 0
        forbidden = 0
    return DegreeSet(degree, full & ~forbidden)


@st.composite
def dense_instances(draw, max_vertices=6, max_extra=5):
    g = draw(connected_multigraphs(max_vertices, max_extra))
    h = ConstraintMap([draw(dense_sets(d)) for d in g.degrees])
    return g, h


# ---------------------------------------------------------------- acceptance summary

ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def record(criterion: int, ok: bool, detail: str) -> None:
    ACCEPTANCE[criterion] = (ok, detail)
    print(f"criterion {criterion}: {'PASS' if ok else 'FAIL'} - {detail}")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for criterion in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[criterion]
        terminalreporter.write_line(f"criterion {criterion:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
