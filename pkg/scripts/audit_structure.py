#!/usr/bin/env python3
"""Structural audits over the exhaustive small-graph catalogue.

For every connected simple graph on up to --max-vertices vertices and every
full-parity or random dense constraint assignment, check against the oracle:
spectrum classification at non-cut vertices, the existence/spectrum link,
fixed parity of non-cut vertices on infeasible instances, and the block
decomposition of spectra at cut vertices.
"""

import argparse
import itertools
import random
from collections import Counter

from orient_avoid.constraints import ConstraintMap, DegreeSet, Parity, full_parity
from orient_avoid.gen import all_small_graphs, random_dense_forbidden
from orient_avoid.graph import cut_vertices
from orient_avoid.oracle import SpectrumClass, classify, enumerate_existence, minkowski_check, spectra


def assignments(g, rng, extra):
    for bits in itertools.product((0, 1), repeat=g.n):
        yield full_parity(g, [v for v in range(g.n) if bits[v]])
    for _ in range(extra):
        yield ConstraintMap(
            [DegreeSet.of(d, random_dense_forbidden(rng, d, rng.uniform(0.2, 0.6))).complement() for d in g.degrees]
        )


def main() -> int:
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--max-vertices", type=int, default=5)
    p.add_argument("--random-per-graph", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()
    rng = random.Random(args.seed)

    tally = Counter()
    violations = []
    for g in all_small_graphs(args.max_vertices):
        cuts = cut_vertices(g) if g.n > 1 else frozenset()
        for h in assignments(g, rng, args.random_per_graph):
            tally["instances"] += 1
            exists, _ = enumerate_existence(g, h)
            for u, values in enumerate(spectra(g, h)):
                cls = classify(values, g.degree(u))
                tally[cls.value] += 1
                if u not in cuts and cls is SpectrumClass.OTHER:
                    violations.append(("non-cut spectrum", g.edges, u))
                if exists != bool(values & set(h.allowed(u))):
                    violations.append(("existence vs spectrum", g.edges, u))
            if not exists and any(h[v].mask and h[v].parity is Parity.MIXED for v in range(g.n) if v not in cuts):
                violations.append(("mixed non-cut vertex", g.edges, None))
            for x in cuts:
                tally["minkowski"] += 1
                if not minkowski_check(g, h, x).ok:
                    violations.append(("minkowski", g.edges, x))

    for key, value in sorted(tally.items()):
        print(f"{key:>22}: {value}")
    print(f"{'violations':>22}: {len(violations)}")
    for v in violations[:20]:
        print("   ", v)
    return 1 if violations else 0


if __name__ == "__main__":
    raise SystemExit(main())
