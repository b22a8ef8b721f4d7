#!/usr/bin/env python3
"""Differential fuzz run against the exhaustive oracle; shrunk failures land in --out."""

import argparse
import json
import os
import sys
import time

from orient_avoid.gen import fuzz


def main() -> int:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=10_000)
    p.add_argument("--cap", type=int, default=10, help="largest edge count per instance")
    p.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    p.add_argument("--out", default="fuzz-cases")
    args = p.parse_args()
    seed = int(os.environ.get("ORIENT_AVOID_SEED", args.seed))

    start = time.perf_counter()
    report = fuzz(args.count, seed, args.cap, args.workers, args.out)
    summary = report.to_json()
    summary["seconds"] = round(time.perf_counter() - start, 2)
    summary["failures"] = len(report.failures)
    json.dump(summary, sys.stdout, indent=2)
    print()
    return 1 if report.failures else 0


if __name__ == "__main__":
    raise SystemExit(main())
