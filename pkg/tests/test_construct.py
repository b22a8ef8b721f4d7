from hypothesis import given

from orient_avoid.construct import ConstructLog, finalize, orient, orient_with_verdict, repair, replay
from orient_avoid.decision import Certificate, CertificateKind
from orient_avoid.graph import build
from orient_avoid.oracle import enumerate_existence
from orient_avoid.orientation import Orientation, arbitrary, verify

from conftest import allowed, dense_instances


def test_repair_triangle(triangle):
    h = allowed(triangle, {v: [1] for v in range(3)})
    o = arbitrary(triangle)
    assert o.out == [2, 1, 0]
    log = []
    fixed = repair(triangle, h, 0, o, log)
    assert fixed.out[1] == 1 and fixed.out[2] == 1
    assert [step.potential_after for step in log] == [0]


def test_repair_leaves_feasible_start_alone(triangle):
    h = allowed(triangle, {})
    o = arbitrary(triangle)
    assert repair(triangle, h, 0, o) == o


def test_repair_path_single_flip(path3):
    h = allowed(path3, {0: [1], 2: [1]})
    log = []
    fixed = repair(path3, h, 1, arbitrary(path3), log)
    assert fixed.out == [1, 0, 1]
    assert len(log) == 1 and log[0].target == 2 and log[0].edges == (1,)


def test_finalize_leaves_feasible_anchor_alone(triangle):
    h = allowed(triangle, {v: [1] for v in range(3)})
    cyclic = Orientation.from_tails(triangle, [0, 1, 2])
    assert finalize(triangle, h, 0, cyclic) == cyclic


def test_finalize_moves_anchor(triangle):
    # off-anchor feasible, anchor at 0 needs 2
    h = allowed(triangle, {0: [2], 1: [0, 1], 2: [0, 1]})
    o = Orientation.from_tails(triangle, [1, 1, 2])
    assert o.out[0] == 0
    log = []
    done = finalize(triangle, h, 0, o, log)
    assert done.out[0] == 2 and verify(triangle, h, done) == []
    assert all(abs(move.delta) in (1, 2) for move in log)


def test_orient_examples(triangle, star):
    o = orient(triangle, allowed(triangle, {v: [1] for v in range(3)}))
    assert isinstance(o, Orientation) and o.out == [1, 1, 1]
    leaves = {1: [1], 2: [1], 3: [1]}
    o = orient(star, allowed(star, {0: [0, 2], **leaves}))
    assert o.out == [0, 1, 1, 1]
    cert = orient(star, allowed(star, {0: [1, 2, 3], **leaves}))
    assert isinstance(cert, Certificate) and cert.kind is CertificateKind.EMPTY_WINDOW


def test_orient_on_digon_multigraph():
    digon = build(2, [(0, 1), (0, 1)])
    o = orient(digon, allowed(digon, {0: [1], 1: [1]}))
    assert o.out == [1, 1]


@given(dense_instances(max_vertices=7, max_extra=5))
def test_orient_is_correct_and_replayable(inst):
    g, h = inst
    log = ConstructLog()
    verdict, o = orient_with_verdict(g, h, log)
    assert verdict.exists == enumerate_existence(g, h)[0]
    if not verdict.exists:
        return
    assert verify(g, h, o) == []
    assert replay(g, log) == o
    assert len(log.repair) <= g.n
    for step in log.repair:
        assert step.potential_after == step.potential_before - 1
    assert len(log.finalize) <= g.degree(log.anchor) + 1


@given(dense_instances(max_vertices=7, max_extra=5))
def test_orient_is_deterministic(inst):
    g, h = inst
    first, second = orient(g, h), orient(g, h)
    assert first == second


@given(dense_instances(max_vertices=6, max_extra=4))
def test_repair_works_from_any_anchor(inst):
    g, h = inst
    for u in range(g.n):
        o = repair(g, h, u, arbitrary(g))
        assert set(verify(g, h, o)) <= {u}
