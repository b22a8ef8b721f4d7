import dataclasses

import pytest
from hypothesis import given

from orient_avoid.constraints import ConstraintMap, Parity, from_allowed
from orient_avoid.decision import (
    CertificateKind,
    Reason,
    decide,
    decide_2connected,
    initial_partition,
    pick_next,
    verify_certificate,
    window,
)
from orient_avoid.errors import DensityViolation, Not2Connected, NotConnected
from orient_avoid.graph import build, is_biconnected
from orient_avoid.oracle import enumerate_existence, feasible_orientations
from orient_avoid.orientation import Orientation

from conftest import allowed, dense_instances


def test_initial_partition_examples(triangle, path3):
    odd, even, mixed = initial_partition(triangle, allowed(triangle, {v: [1] for v in range(3)}))
    assert (odd, even, mixed) == ({0, 1, 2}, set(), [])
    odd, even, mixed = initial_partition(path3, allowed(path3, {0: [1], 2: [1]}))
    assert (odd, mixed) == ({0, 2}, [1])
    k2 = build(2, [(0, 1)])
    assert initial_partition(k2, allowed(k2, {}))[2] == [0, 1]


def test_window_on_star(star):
    leaves = {1: [1], 2: [1], 3: [1]}
    w = window(star, allowed(star, {0: [0, 2], **leaves}), 0, {1, 2, 3}, set())
    assert (w.low, w.slack, w.high, w.members) == (0, 3, 0, (0,))
    w = window(star, allowed(star, {0: [1, 3], **leaves}), 0, {1, 2, 3}, set())
    assert w.members == () and w.parity is None


def test_window_on_path(path3):
    w = window(path3, allowed(path3, {0: [1], 1: [0, 2], 2: [1]}), 1, {0, 2}, set())
    assert (w.low, w.slack, w.high, w.members) == (0, 2, 0, (0,))


def test_pick_next_examples(bowtie):
    caterpillar = build(5, [(0, 1), (1, 2), (2, 3), (3, 4)])
    assert pick_next(caterpillar, {1, 2, 3}) == 1
    assert pick_next(caterpillar, {2}) == 2
    assert pick_next(bowtie, {0}) == 0


def test_decide_triangle(triangle):
    ones = allowed(triangle, {v: [1] for v in range(3)})
    verdict = decide(triangle, ones)
    assert verdict.exists and verdict.reason is Reason.TRACE_MATCHING
    evens = allowed(triangle, {v: [0, 2] for v in range(3)})
    verdict = decide(triangle, evens)
    assert not verdict.exists
    assert verdict.certificate.kind is CertificateKind.TRACE_MISMATCH
    assert verify_certificate(triangle, evens, verdict.certificate) is None


def test_decide_star_with_fixed_center_is_a_parity_mismatch(star):
    # the centre {1,3} is a whole parity class, so no trace step is taken
    h = allowed(star, {0: [1, 3], 1: [1], 2: [1], 3: [1]})
    verdict = decide(star, h)
    assert not verdict.exists
    assert verdict.certificate.kind is CertificateKind.TRACE_MISMATCH
    assert enumerate_existence(star, h) == (False, 0)


def test_decide_star_empty_window(star):
    h = allowed(star, {0: [1, 2, 3], 1: [1], 2: [1], 3: [1]})
    verdict = decide(star, h)
    cert = verdict.certificate
    assert not verdict.exists and cert.kind is CertificateKind.EMPTY_WINDOW
    assert (cert.vertex, cert.low, cert.high) == (0, 0, 0)
    assert verify_certificate(star, h, cert) is None
    assert enumerate_existence(star, h) == (False, 0)


def test_decide_mixed_leaf(path3):
    h = allowed(path3, {0: [0, 1], 2: [1]})
    verdict = decide(path3, h)
    assert verdict.exists and verdict.reason is Reason.MIXED_PARITY_VERTEX and verdict.witness == 0


def test_decide_requires_a_dense_connected_pair(path3):
    with pytest.raises(DensityViolation):
        decide(path3, allowed(path3, {1: [2]}))
    g = build(3, [(0, 1)])
    with pytest.raises(NotConnected):
        decide(g, allowed(g, {}))


def test_per_vertex_void():
    g = build(1, [])
    h = from_allowed(g, {0: []})
    verdict = decide(g, h)
    assert verdict.certificate.kind is CertificateKind.PER_VERTEX_VOID
    assert verify_certificate(g, h, verdict.certificate) is None


def test_decide_2connected_examples(triangle):
    assert decide_2connected(triangle, allowed(triangle, {v: [1] for v in range(3)})).exists
    digon = build(2, [(0, 1), (0, 1)])
    assert decide_2connected(digon, allowed(digon, {0: [1], 1: [1]})).exists
    c4 = build(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    assert decide_2connected(c4, allowed(c4, {v: [1] for v in range(4)})).exists
    with pytest.raises(Not2Connected):
        decide_2connected(build(3, [(0, 1), (1, 2)]), allowed(build(3, [(0, 1), (1, 2)]), {}))


def test_certificate_tampering_is_caught(triangle, star):
    evens = allowed(triangle, {v: [0, 2] for v in range(3)})
    cert = decide(triangle, evens).certificate
    trace = cert.trace
    swapped = dataclasses.replace(cert, trace=dataclasses.replace(trace, odd=trace.even, even=trace.odd))
    assert verify_certificate(triangle, evens, swapped) is not None
    assert verify_certificate(triangle, evens, dataclasses.replace(cert, digest="0" * 64)) is not None
    ones = allowed(triangle, {v: [1] for v in range(3)})
    assert verify_certificate(triangle, ones, cert) is not None


def test_forged_trace_step_is_caught():
    # vertex 0 is a mixed cut vertex between a triple edge to 1 and a double edge to 2
    g = build(3, [(1, 0), (0, 1), (2, 0), (1, 0), (0, 2)])
    h = allowed(g, {0: [0, 1, 3, 5], 1: [0, 2], 2: [1]})
    verdict = decide(g, h)
    cert = verdict.certificate
    assert cert.kind is CertificateKind.TRACE_MISMATCH and len(cert.trace.steps) == 1
    assert verify_certificate(g, h, cert) is None
    step = cert.trace.steps[0]
    for forged in (
        dataclasses.replace(step, low=step.low + 1),
        dataclasses.replace(step, parity=Parity.ODD if step.parity is Parity.EVEN else Parity.EVEN),
        dataclasses.replace(step, digest="f" * 64),
    ):
        bad = dataclasses.replace(cert, trace=dataclasses.replace(cert.trace, steps=(forged,)))
        assert verify_certificate(g, h, bad) is not None
    truncated = dataclasses.replace(cert, trace=dataclasses.replace(cert.trace, steps=()))
    assert verify_certificate(g, h, truncated) is not None


@given(dense_instances(max_vertices=6, max_extra=4))
def test_decide_matches_oracle(inst):
    g, h = inst
    verdict = decide(g, h)
    assert verdict.exists == enumerate_existence(g, h)[0]
    if not verdict.exists:
        assert verify_certificate(g, h, verdict.certificate) is None


@given(dense_instances(max_vertices=8, max_extra=4))
def test_tree_engine_matches_reference_engine(inst):
    g, h = inst
    assert decide(g, h) == decide(g, h, reference=True)


@given(dense_instances(max_vertices=6, max_extra=4))
def test_trace_is_necessary_for_every_feasible_orientation(inst):
    g, h = inst
    verdict = decide(g, h)
    trace = verdict.trace
    for tails in feasible_orientations(g, h):
        out = Orientation.from_tails(g, tails).out
        assert all(out[x] % 2 == 1 for x in trace.odd)
        assert all(out[x] % 2 == 0 for x in trace.even)
        for step in trace.steps:
            assert step.low <= out[step.vertex] <= step.high
        if verdict.reason is Reason.MIXED_WINDOW:
            assert verdict.step.low <= out[verdict.step.vertex] <= verdict.step.high


@given(dense_instances(max_vertices=6, max_extra=5))
def test_two_connected_closed_form_agrees(inst):
    g, h = inst
    if is_biconnected(g):
        assert decide_2connected(g, h).exists == decide(g, h).exists


def test_mixed_window_steps_are_mixed():
    # a cut vertex allowed {0,1,2} between two fixed leaves
    g = build(3, [(0, 1), (1, 2)])
    h = ConstraintMap([allowed(g, {0: [1]})[0], allowed(g, {})[1], allowed(g, {2: [0]})[2]])
    verdict = decide(g, h)
    assert verdict.exists
    if verdict.reason is Reason.MIXED_WINDOW:
        assert verdict.step.parity is Parity.MIXED
