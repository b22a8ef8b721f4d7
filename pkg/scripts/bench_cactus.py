#!/usr/bin/env python3
"""Time decide + orient on large random cacti over several seeds and sizes."""

import argparse
import json
import subprocess
import sys


def run(n: int, seed: int, mixed_cuts_only: bool) -> dict:
    cmd = [sys.executable, "-m", "orient_avoid", "bench", "--family", "cactus", "--n", str(n), "--seed", str(seed)]
    if mixed_cuts_only:
        cmd.append("--mixed-cuts-only")
    # a fresh process per run keeps the memory figure honest
    return json.loads(subprocess.run(cmd, capture_output=True, text=True, check=False).stdout)


def main() -> int:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--sizes", type=int, nargs="+", default=[1_000, 10_000, 50_000])
    p.add_argument("--seeds", type=int, default=3)
    args = p.parse_args()
    print(f"{'n':>7} {'m':>7} {'seed':>4} {'cuts-only':>9} {'verdict':>10} {'sec':>7} {'MB':>6}")
    for n in args.sizes:
        for seed in range(args.seeds):
            for mixed in (False, True):
                r = run(n, seed, mixed)
                print(
                    f"{r['vertices']:>7} {r['edges']:>7} {seed:>4} {str(mixed):>9} "
                    f"{r['verdict']:>10} {r['seconds']:>7.2f} {r['max_rss_mb']:>6.0f}"
                )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
