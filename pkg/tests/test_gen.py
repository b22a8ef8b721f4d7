import random

import pytest
from hypothesis import given, strategies as st

from orient_avoid.constraints import Parity, is_dense
from orient_avoid.decision import decide
from orient_avoid.errors import InfeasibleParameters
from orient_avoid.formats import parse_instance
from orient_avoid.gen import (
    Family,
    GenSpec,
    Instance,
    Policy,
    all_small_graphs,
    cactus,
    strict_budget,
    fuzz,
    gen_constraints,
    gen_graph,
    gen_instance,
    random_spec,
    relaxed_budget,
    sample_sparse,
    shrink,
)
from orient_avoid.graph import build, cut_vertices, is_biconnected


def test_small_graph_catalogue_sizes():
    # connected simple graphs up to isomorphism: 1, 1, 2, 6, 21 on 1..5 vertices
    assert len(all_small_graphs(4)) == 10
    assert len(all_small_graphs(5)) == 31
    for g in all_small_graphs(5):
        assert g.is_connected()
        assert len({tuple(sorted(e)) for e in g.edges}) == g.m


def test_tree_is_reproducible():
    spec = GenSpec(seed=1, family=Family.TREE, n=5)
    g = gen_graph(spec)
    assert g.m == 4 and g.is_connected()
    assert gen_graph(spec) == g


def test_cactus_blocks_are_cycles():
    g = cactus(3, random.Random(4), max_cycle=4)
    blocks = g.biconnected.blocks
    assert len(blocks) == 3
    for block in blocks:
        vertices = {v for e in block for v in g.edges[e]}
        assert len(vertices) == len(block)  # a cycle has as many vertices as edges


def test_biconnected_family():
    for seed in range(30):
        g = gen_graph(GenSpec(seed=seed, family=Family.BICONNECTED, n=6, m=8))
        assert is_biconnected(g) and g.m == 8


def test_budgets():
    assert strict_budget(4) == 1
    assert strict_budget(1) == 0
    assert strict_budget(9, slack=2) == 2
    assert relaxed_budget(4) == 2


def test_sample_sparse_rejects_overfull_requests():
    with pytest.raises(InfeasibleParameters):
        sample_sparse(random.Random(0), 3, 3)


@given(st.integers(0, 30), st.integers(0, 10**6))
def test_sample_sparse_has_no_neighbours(d, seed):
    rng = random.Random(seed)
    k = rng.randint(0, (d + 2) // 2)
    values = sample_sparse(rng, d, k)
    assert len(values) == k and all(0 <= x <= d for x in values)
    assert all(b - a >= 2 for a, b in zip(values, values[1:]))


def test_full_parity_triangle():
    tri = build(3, [(0, 1), (1, 2), (2, 0)])
    for seed in range(20):
        h = gen_constraints(tri, GenSpec(seed=seed, policy=Policy.FULL_PARITY, match_parity=True))
        odd = [v for v in range(3) if h[v].parity is Parity.ODD]
        assert len(odd) % 2 == 1
        if len(odd) == 3:
            assert all(h.allowed(v) == [1] for v in range(3))


@given(st.integers(0, 10**6), st.sampled_from(list(Policy)), st.sampled_from(list(Family)))
def test_generated_instances_are_dense_and_reproducible(seed, policy, family):
    spec = GenSpec(seed=seed, family=family, n=5, m=7, blocks=4, policy=policy)
    g, h = gen_instance(spec)
    assert is_dense(g, h)
    again = gen_instance(spec)
    assert again[0] == g and again[1] == h


@given(st.integers(0, 10**6))
def test_strict_budget_instances_respect_budget(seed):
    spec = GenSpec(seed=seed, family=Family.CONNECTED, n=12, m=30, policy=Policy.STRICT_BUDGET)
    g, h = gen_instance(spec)
    for v in range(g.n):
        assert len(h.forbidden(v)) <= strict_budget(g.degree(v))


@given(st.integers(0, 10**6))
def test_relaxed_budget_instances_have_a_tight_non_cut_vertex(seed):
    spec = GenSpec(seed=seed, family=Family.CACTUS, blocks=5, policy=Policy.RELAXED_BUDGET)
    g, h = gen_instance(spec)
    cuts = cut_vertices(g)
    assert all(len(h.forbidden(v)) <= relaxed_budget(g.degree(v)) for v in range(g.n))
    assert any(len(h.forbidden(v)) <= strict_budget(g.degree(v)) for v in range(g.n) if v not in cuts)


def test_random_specs_respect_the_edge_cap():
    for i in range(400):
        g, _ = gen_instance(random_spec(11, i, cap=10))
        assert g.m <= 10


def test_fuzz_clean_run_is_worker_independent():
    one = fuzz(120, seed=5, cap=10, workers=1)
    two = fuzz(120, seed=5, cap=10, workers=2)
    assert one.failures == [] and one.to_json() == two.to_json()
    assert one.exists > 0 and one.not_exists > 0


def test_case_file_replays_identically(tmp_path):
    spec = random_spec(3, 17)
    g, h = gen_instance(spec)
    path = tmp_path / "case.json"
    import json

    path.write_text(json.dumps(Instance.of(g, h).to_json()))
    g2, h2 = parse_instance(path.read_text())
    assert (g2, h2) == (g, h)
    assert decide(g2, h2) == decide(g, h)


def test_shrink_finds_a_smaller_failing_instance():
    # property under test: "no vertex has degree 3"; the star violates it
    inst = Instance(6, [[0, 1], [0, 2], [0, 3], [3, 4], [4, 5], [5, 3]], {1: [0]})
    small = shrink(inst, lambda g, h: 3 in g.degrees)
    assert len(small.edges) == 3 and small.n == 4
