"""Seeded instance generators and the differential fuzz driver."""

from __future__ import annotations

import enum
import functools
import itertools
import json
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

from . import construct, decision, oracle
from .constraints import ConstraintMap, DegreeSet, from_forbidden, is_dense
from .errors import InfeasibleParameters, OrientAvoidError
from .graph import MultiGraph, cut_vertices
from .orientation import verify


class Family(enum.Enum):
    ALL_SMALL = "small"
    TREE = "tree"
    CONNECTED = "connected"
    BICONNECTED = "biconnected"
    CACTUS = "cactus"


class Policy(enum.Enum):
    FULL_PARITY = "full-parity"
    RANDOM_DENSE = "random-dense"
    STRICT_BUDGET = "strict-budget"
    RELAXED_BUDGET = "relaxed-budget"


RANDOM_FAMILIES = (Family.TREE, Family.CONNECTED, Family.BICONNECTED, Family.CACTUS)


@dataclass(frozen=True)
class GenSpec:
    seed: int = 0
    family: Family = Family.CONNECTED
    n: int = 6
    m: int | None = None  # CONNECTED / BICONNECTED edge target
    blocks: int = 3  # CACTUS cycle count; 0 means grow to exactly n vertices
    max_cycle: int = 4  # CACTUS longest cycle; 2 gives a digon
    policy: Policy = Policy.RANDOM_DENSE
    slack: int = 0  # STRICT_BUDGET: budget reduction below floor((d - 1) / 2)
    fixed_share: float = 0.5  # RANDOM_DENSE: chance a vertex gets a whole parity class
    match_parity: bool = False  # FULL_PARITY: force |odd| = e(G) mod 2
    mixed_cuts_only: bool = False  # RANDOM_DENSE: non-cut vertices always get a parity class


# ---------------------------------------------------------------- graphs


@functools.lru_cache(maxsize=None)
def all_small_graphs(max_vertices: int) -> tuple[MultiGraph, ...]:
    """Every connected simple graph on 1..max_vertices vertices, one per isomorphism class."""
    out = []
    for n in range(1, max_vertices + 1):
        pairs = list(itertools.combinations(range(n), 2))
        perms = list(itertools.permutations(range(n)))
        seen = set()
        for mask in range(1 << len(pairs)):
            chosen = [p for i, p in enumerate(pairs) if (mask >> i) & 1]
            g = MultiGraph(n, chosen)
            if not g.is_connected():
                continue
            key = min(
                tuple(sorted(tuple(sorted((perm[a], perm[b]))) for a, b in chosen)) for perm in perms
            )
            if key in seen:
                continue
            seen.add(key)
            out.append(MultiGraph(n, key))
    return tuple(out)


def _relabel(rng: random.Random, n: int, edges):
    perm = list(range(n))
    rng.shuffle(perm)
    edges = [(perm[a], perm[b]) for a, b in edges]
    rng.shuffle(edges)
    return MultiGraph(n, edges)


def random_tree(n: int, rng: random.Random) -> MultiGraph:
    if n < 1:
        raise InfeasibleParameters("a tree needs at least one vertex")
    edges = [(rng.randrange(v), v) for v in range(1, n)]
    return _relabel(rng, n, edges)


def random_connected(n: int, m: int, rng: random.Random) -> MultiGraph:
    if n < 1 or m < n - 1 or (n == 1 and m > 0):
        raise InfeasibleParameters(f"cannot build a connected loopless graph with n={n}, m={m}")
    edges = [(rng.randrange(v), v) for v in range(1, n)]
    while len(edges) < m:
        a, b = rng.sample(range(n), 2)
        edges.append((a, b))
    return _relabel(rng, n, edges)


def random_biconnected(n: int, m: int, rng: random.Random) -> MultiGraph:
    """Ear decomposition: a cycle (a digon allowed) plus open ears and chords."""
    if n < 2 or m < max(n, 2):
        raise InfeasibleParameters(f"no 2-connected multigraph with n={n}, m={m}")
    spare = m - n  # each ear beyond the first cycle costs one edge more than its new vertices
    start = n if spare == 0 or n == 2 else rng.randint(2, n)
    edges = [(i, (i + 1) % start) for i in range(start)] if start > 2 else [(0, 1), (0, 1)]
    rest = n - start
    if rest:
        ears = rng.randint(1, min(rest, spare))
        cuts = sorted(rng.sample(range(1, rest), ears - 1))
        sizes = [b - a for a, b in zip([0] + cuts, cuts + [rest])]
        used = start
        for k in sizes:
            a, b = rng.sample(range(used), 2)
            chain = [a] + list(range(used, used + k)) + [b]
            edges.extend(zip(chain, chain[1:]))
            used += k
    while len(edges) < m:
        a, b = rng.sample(range(n), 2)
        edges.append((a, b))
    return _relabel(rng, n, edges)


def cactus(blocks: int, rng: random.Random, max_cycle: int = 4, vertices: int | None = None) -> MultiGraph:
    """Cycles of length 2..max_cycle glued at random existing vertices.

    With ``vertices`` set, cycles are added until exactly that many vertices
    exist (the last cycle is shortened to fit) and ``blocks`` is ignored.
    """
    if max_cycle < 2 or (vertices is None and blocks < 1) or (vertices is not None and vertices < 2):
        raise InfeasibleParameters("cactus needs at least one cycle of length >= 2")
    n = 1
    edges = []
    count = 0
    while (n < vertices) if vertices is not None else (count < blocks):
        length = rng.randint(2, max_cycle)
        if vertices is not None:
            length = min(length, vertices - n + 1)
        anchor = rng.randrange(n)
        ring = [anchor] + list(range(n, n + length - 1))
        n += length - 1
        edges.extend(zip(ring, ring[1:] + ring[:1]))
        count += 1
    return _relabel(rng, n, edges)


def gen_graph(spec: GenSpec, rng: random.Random | None = None) -> MultiGraph:
    rng = rng or random.Random(spec.seed)
    if spec.family is Family.TREE:
        return random_tree(spec.n, rng)
    if spec.family is Family.CONNECTED:
        return random_connected(spec.n, spec.m if spec.m is not None else spec.n + 1, rng)
    if spec.family is Family.BICONNECTED:
        return random_biconnected(spec.n, spec.m if spec.m is not None else spec.n + 1, rng)
    if spec.family is Family.CACTUS:
        if spec.blocks <= 0:
            return cactus(0, rng, spec.max_cycle, vertices=spec.n)
        return cactus(spec.blocks, rng, spec.max_cycle)
    graphs = all_small_graphs(spec.n)
    return graphs[rng.randrange(len(graphs))]


# ---------------------------------------------------------------- constraints


def sample_sparse(rng: random.Random, d: int, k: int) -> list[int]:
    """k values from [0, d], no two consecutive, uniformly among such subsets."""
    if k <= 0:
        return []
    if 2 * k - 1 > d + 1:
        raise InfeasibleParameters(f"{k} pairwise non-consecutive values do not fit in [0, {d}]")
    picks = sorted(rng.sample(range(d - k + 2), k))
    return [p + i for i, p in enumerate(picks)]


def random_dense_forbidden(rng: random.Random, d: int, rate: float) -> list[int]:
    out = []
    for i in range(d + 1):
        if (not out or out[-1] != i - 1) and rng.random() < rate:
            out.append(i)
    if len(out) == d + 1:  # only possible for d = 0
        out = []
    return out


def strict_budget(d: int, slack: int = 0) -> int:
    return max(0, (d - 1) // 2 - slack)


def relaxed_budget(d: int) -> int:
    return (d + 1) // 2


def gen_constraints(g: MultiGraph, spec: GenSpec, rng: random.Random | None = None) -> ConstraintMap:
    rng = rng or random.Random(spec.seed)
    degrees = g.degrees
    forbidden: dict[int, list[int]] = {}
    if spec.policy is Policy.FULL_PARITY:
        odd = {v for v in range(g.n) if degrees[v] > 0 and rng.random() < 0.5}
        if spec.match_parity and len(odd) % 2 != g.m % 2:
            flippable = [v for v in range(g.n) if degrees[v] > 0]
            if not flippable:
                raise InfeasibleParameters("no vertex can change parity")
            odd ^= {rng.choice(flippable)}
        return ConstraintMap([DegreeSet.parity_class(d, v in odd) for v, d in enumerate(degrees)])
    if spec.policy is Policy.RANDOM_DENSE:
        cuts = cut_vertices(g) if spec.mixed_cuts_only and g.n > 1 else None
        for v, d in enumerate(degrees):
            force = cuts is not None and v not in cuts
            if d > 0 and (force or rng.random() < spec.fixed_share):
                forbidden[v] = list(range(rng.randint(0, 1), d + 1, 2))
            else:
                forbidden[v] = random_dense_forbidden(rng, d, rng.uniform(0.2, 0.6))
    elif spec.policy is Policy.STRICT_BUDGET:
        for v, d in enumerate(degrees):
            forbidden[v] = sample_sparse(rng, d, rng.randint(0, strict_budget(d, spec.slack)))
    elif spec.policy is Policy.RELAXED_BUDGET:
        cuts = cut_vertices(g) if g.n > 1 else frozenset()
        special = rng.choice([v for v in range(g.n) if v not in cuts])
        for v, d in enumerate(degrees):
            budget = strict_budget(d) if v == special else relaxed_budget(d)
            forbidden[v] = sample_sparse(rng, d, rng.randint(0, budget))
    return from_forbidden(g, forbidden)


def gen_instance(spec: GenSpec) -> tuple[MultiGraph, ConstraintMap]:
    rng = random.Random(spec.seed)
    g = gen_graph(spec, rng)
    return g, gen_constraints(g, spec, rng)


def random_spec(seed: int, index: int, cap: int = 10, policy: Policy = Policy.RANDOM_DENSE) -> GenSpec:
    """The index-th GenSpec of a fuzz run: families cycle, sizes keep e(G) <= cap."""
    rng = random.Random(f"{seed}-{index}")
    family = RANDOM_FAMILIES[index % len(RANDOM_FAMILIES)]
    base = dict(
        seed=rng.getrandbits(32),
        family=family,
        policy=policy,
        fixed_share=rng.choice([0.3, 0.6, 0.9]),
        mixed_cuts_only=rng.random() < 0.3,
    )
    if family is Family.TREE:
        return GenSpec(n=rng.randint(1, min(cap + 1, 9)), **base)
    if family is Family.CONNECTED:
        n = rng.randint(2, min(cap + 1, 8))
        return GenSpec(n=n, m=rng.randint(n - 1, cap), **base)
    if family is Family.BICONNECTED:
        n = rng.randint(2, min(cap, 7))
        return GenSpec(n=n, m=rng.randint(max(n, 2), cap), **base)
    longest = rng.choice([2, 3, 4, 5])
    return GenSpec(blocks=rng.randint(1, max(1, cap // longest)), max_cycle=longest, **base)


# ---------------------------------------------------------------- fuzzing


@dataclass
class Instance:
    """Plain-data instance used by the fuzzer and case files."""

    n: int
    edges: list
    forbidden: dict

    @classmethod
    def of(cls, g: MultiGraph, h: ConstraintMap) -> Instance:
        return cls(g.n, [list(e) for e in g.edges], {v: h.forbidden(v) for v in range(g.n) if h.forbidden(v)})

    def build(self) -> tuple[MultiGraph, ConstraintMap]:
        g = MultiGraph(self.n, self.edges)
        return g, from_forbidden(g, self.forbidden)

    def to_json(self) -> dict:
        return {
            "version": 1,
            "vertices": self.n,
            "edges": [list(e) for e in self.edges],
            "forbid": {str(v): sorted(f) for v, f in sorted(self.forbidden.items())},
        }


def check_instance(g: MultiGraph, h: ConstraintMap, cap: int = 12) -> list[str]:
    """Differential check of decide / orient / certificates against the oracle; returns problems."""
    return _check(g, h, cap)[0]


def _check(g, h, cap):
    exists, _ = oracle.enumerate_existence(g, h, cap)
    problems = []
    try:
        verdict, o = construct.orient_with_verdict(g, h)
    except (OrientAvoidError, AssertionError) as exc:
        return [f"solver raised {type(exc).__name__}: {exc}"], exists
    if verdict.exists != exists:
        problems.append(f"decide says {verdict.exists}, oracle says {exists}")
    if verdict.exists and o is not None and verify(g, h, o):
        problems.append("constructed orientation is infeasible")
    if not verdict.exists:
        reason = decision.verify_certificate(g, h, verdict.certificate)
        if reason:
            problems.append(f"certificate rejected: {reason}")
    return problems, exists


def _still_valid(inst: Instance):
    try:
        g, h = inst.build()
    except OrientAvoidError:
        return None
    if not is_dense(g, h):
        return None
    return g, h


def _candidates(inst: Instance):
    for i in range(len(inst.edges)):
        yield replace(inst, edges=inst.edges[:i] + inst.edges[i + 1 :])
    for v, f in sorted(inst.forbidden.items()):
        for value in f:
            rest = [x for x in f if x != value]
            fb = dict(inst.forbidden)
            if rest:
                fb[v] = rest
            else:
                del fb[v]
            yield replace(inst, forbidden=fb)
    # drop a vertex of degree <= 1 and renumber
    degree = [0] * inst.n
    for a, b in inst.edges:
        degree[a] += 1
        degree[b] += 1
    for v in range(inst.n):
        if degree[v] <= 1 and inst.n > 1:
            ren = {w: w - (w > v) for w in range(inst.n) if w != v}
            edges = [[ren[a], ren[b]] for a, b in inst.edges if v not in (a, b)]
            fb = {ren[w]: f for w, f in inst.forbidden.items() if w != v}
            yield Instance(inst.n - 1, edges, fb)


def shrink(inst: Instance, failing, budget: int = 2000) -> Instance:
    """Greedy delta-debugging: keep any smaller dense, connected mutant that still fails."""
    improved = True
    while improved and budget > 0:
        improved = False
        for cand in _candidates(inst):
            budget -= 1
            if budget <= 0:
                break
            built = _still_valid(cand)
            if built is None:
                continue
            if failing(*built):
                inst = cand
                improved = True
                break
    return inst


@dataclass
class Failure:
    index: int
    spec: GenSpec
    problems: list
    original: Instance
    shrunk: Instance


@dataclass
class FuzzReport:
    seed: int
    count: int
    checked: int = 0
    exists: int = 0
    not_exists: int = 0
    failures: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "seed": self.seed,
            "count": self.count,
            "checked": self.checked,
            "exists": self.exists,
            "not_exists": self.not_exists,
            "failures": [
                {
                    "index": f.index,
                    "problems": f.problems,
                    "shrunk": f.shrunk.to_json(),
                    "original": f.original.to_json(),
                }
                for f in self.failures
            ],
        }


def _run_one(args):
    seed, index, cap = args
    spec = random_spec(seed, index, cap)
    g, h = gen_instance(spec)
    problems, exists = _check(g, h, cap)
    return index, spec, Instance.of(g, h), problems, exists


def fuzz(
    count: int,
    seed: int = 0,
    cap: int = 10,
    workers: int = 1,
    out_dir: str | Path | None = None,
    stop_after: int | None = None,
) -> FuzzReport:
    """Run ``count`` seeded random instances against the oracle, shrinking every failure."""
    report = FuzzReport(seed, count)
    jobs = [(seed, i, cap) for i in range(count)]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_run_one, jobs, chunksize=64))
    else:
        results = map(_run_one, jobs)
    for index, spec, inst, problems, exists in results:
        report.checked += 1
        if exists:
            report.exists += 1
        else:
            report.not_exists += 1
        if problems:
            small = shrink(inst, lambda g, h: bool(check_instance(g, h, cap)))
            report.failures.append(Failure(index, spec, problems, inst, small))
            if stop_after is not None and len(report.failures) >= stop_after:
                break
    if out_dir is not None and report.failures:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        for f in report.failures:
            path = out / f"case-{seed}-{f.index}.json"
            path.write_text(json.dumps(f.shrunk.to_json(), indent=2) + "\n")
    return report
