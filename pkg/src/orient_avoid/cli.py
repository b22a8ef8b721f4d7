"""Command-line interface.

Exit codes: 0 when an orientation exists (or a check passes), 3 when none
exists, 1 when ``verify`` rejects a result, 2 on invalid input.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import resource
import sys
import time
import tracemalloc
from pathlib import Path

from .constraints import ConstraintMap
from .decision import verify_certificate
from .errors import MalformedInstance, OrientAvoidError, TooManyEdges
from .formats import (
    certificate_from_json,
    orientation_from_result,
    parse_instance,
    result_json,
    solve,
    to_dot,
    verdict_json,
)
from .gen import Family, GenSpec, Policy, fuzz, gen_instance
from .graph import MultiGraph
from .oracle import DEFAULT_CAP, enumerate_existence, spectrum
from .orientation import Orientation, verify

EXIT_EXISTS, EXIT_REJECTED, EXIT_INVALID, EXIT_NOT_EXISTS = 0, 1, 2, 3
SEED_ENV = "ORIENT_AVOID_SEED"


class InvalidInput(Exception):
    def __init__(self, diagnostics: dict):
        super().__init__(diagnostics.get("message", ""))
        self.diagnostics = diagnostics


def _diagnostics(exc: Exception) -> dict:
    if isinstance(exc, OrientAvoidError):
        out = {"error": exc.code, "message": str(exc)}
        violations = getattr(exc, "violations", None)
        if violations:
            out["violations"] = [{"vertex": v.vertex, "value": v.value, "reason": v.reason} for v in violations]
        for attr in ("vertex", "index"):
            if getattr(exc, attr, None) is not None:
                out[attr] = getattr(exc, attr)
        return out
    return {"error": type(exc).__name__, "message": str(exc)}


def _read(path: str) -> str:
    try:
        return sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise InvalidInput({"error": "IOError", "message": str(exc)}) from None


def _load(path: str) -> tuple[MultiGraph, ConstraintMap]:
    try:
        return parse_instance(_read(path))
    except (OrientAvoidError, ValueError) as exc:
        raise InvalidInput(_diagnostics(exc)) from None


def _load_json(path: str) -> dict:
    try:
        data = json.loads(_read(path))
    except json.JSONDecodeError as exc:
        raise InvalidInput({"error": "MalformedJson", "message": str(exc)}) from None
    if not isinstance(data, dict):
        raise InvalidInput({"error": "MalformedJson", "message": "result must be a JSON object"})
    return data


def _emit(data) -> None:
    sys.stdout.write(json.dumps(data, indent=2) + "\n")


def _seed(args) -> int:
    env = os.environ.get(SEED_ENV)
    return int(env) if env not in (None, "") else args.seed


def cmd_decide(args) -> int:
    g, h = _load(args.instance)
    sol = solve(g, h, construct=False)
    _emit(verdict_json(sol))
    return EXIT_EXISTS if sol.exists else EXIT_NOT_EXISTS


def cmd_orient(args) -> int:
    g, h = _load(args.instance)
    sol = solve(g, h)
    _emit(result_json(g, sol))
    return EXIT_EXISTS if sol.exists else EXIT_NOT_EXISTS


def check_result(g: MultiGraph, h: ConstraintMap, data: dict) -> str | None:
    """``None`` when the result proves its verdict for this instance, otherwise the reason it fails."""
    verdict = data.get("verdict")
    if verdict == "EXISTS":
        try:
            o = orientation_from_result(g, data)
        except ValueError as exc:
            return str(exc)
        bad = verify(g, h, o)
        return f"infeasible at vertices {bad}" if bad else None
    if verdict == "NOT_EXISTS":
        if "certificate" not in data:
            return "missing certificate"
        cert, component = certificate_from_json(data["certificate"])
        if any(not 0 <= v < g.n for v in component) or len(set(component)) != len(component):
            return "certificate component is not a vertex set of the instance"
        if sorted(component) not in g.components():
            return "certificate component is not a connected component"
        sub = g.induced(component)
        return verify_certificate(sub, h.restrict(sub), cert)
    return f"unknown verdict {verdict!r}"


def cmd_verify(args) -> int:
    g, h = _load(args.instance)
    data = _load_json(args.result)
    try:
        problem = check_result(g, h, data)
    except MalformedInstance as exc:
        raise InvalidInput(_diagnostics(exc)) from None
    _emit({"ok": problem is None, "verdict": data.get("verdict"), "problem": problem})
    return EXIT_EXISTS if problem is None else EXIT_REJECTED


def cmd_spectrum(args) -> int:
    g, h = _load(args.instance)
    if not 0 <= args.vertex < g.n:
        raise InvalidInput({"error": "VertexOutOfRange", "message": f"no vertex {args.vertex}"})
    try:
        report = spectrum(g, h, args.vertex, args.cap)
    except TooManyEdges as exc:
        raise InvalidInput(_diagnostics(exc)) from None
    _emit(
        {
            "vertex": report.vertex,
            "degree": report.degree,
            "spectrum": sorted(report.values),
            "classification": report.classification.value,
        }
    )
    return EXIT_EXISTS


def cmd_oracle(args) -> int:
    g, h = _load(args.instance)
    try:
        exists, count = enumerate_existence(g, h, args.cap)
    except TooManyEdges as exc:
        raise InvalidInput(_diagnostics(exc)) from None
    _emit({"verdict": "EXISTS" if exists else "NOT_EXISTS", "count": count})
    return EXIT_EXISTS if exists else EXIT_NOT_EXISTS


def cmd_fuzz(args) -> int:
    report = fuzz(args.count, _seed(args), args.cap, args.workers, args.out)
    _emit(report.to_json())
    return EXIT_EXISTS if not report.failures else EXIT_REJECTED


def bench_spec(family: str, n: int, seed: int, mixed_cuts: bool = False) -> GenSpec:
    fam = Family(family)
    if fam is Family.CACTUS:
        return GenSpec(seed, fam, n=n, blocks=0, max_cycle=4, policy=Policy.RANDOM_DENSE, mixed_cuts_only=mixed_cuts)
    return GenSpec(seed, fam, n=n, m=int(1.5 * n), policy=Policy.RANDOM_DENSE, mixed_cuts_only=mixed_cuts)


def peak_rss_kb() -> int:
    """Peak resident set of this process in KiB.

    ``ru_maxrss`` survives fork and exec, so a child started by a large parent
    reports the parent's peak; the per-process VmHWM line is preferred.
    """
    try:
        for line in Path("/proc/self/status").read_text().splitlines():
            if line.startswith("VmHWM:"):
                return int(line.split()[1])
    except OSError:
        pass
    return resource.getrusage(resource.RUSAGE_SELF).ru_maxrss


def cmd_bench(args) -> int:
    seed = _seed(args)
    spec = bench_spec(args.family, args.n, seed, args.mixed_cuts_only)
    g, h = gen_instance(spec)
    tracemalloc.start()
    start = time.perf_counter()
    sol = solve(g, h)
    elapsed = time.perf_counter() - start
    _, peak = tracemalloc.get_traced_memory()
    tracemalloc.stop()
    if sol.exists:
        ok = not verify(g, h, Orientation.from_tails(g, sol.tails))
    else:
        ok = check_result(g, h, result_json(g, sol)) is None if g.m <= 5000 else None
    _emit(
        {
            "family": args.family,
            "seed": seed,
            "vertices": g.n,
            "edges": g.m,
            "verdict": "EXISTS" if sol.exists else "NOT_EXISTS",
            "verified": ok,
            "result_digest": hashlib.sha256(json.dumps(result_json(g, sol)).encode()).hexdigest(),
            "seconds": round(elapsed, 4),
            "peak_traced_mb": round(peak / 2**20, 2),
            "max_rss_mb": round(peak_rss_kb() / 1024, 1),
        }
    )
    return EXIT_EXISTS if sol.exists else EXIT_NOT_EXISTS


def cmd_export_dot(args) -> int:
    g, _ = _load(args.instance)
    data = _load_json(args.result)
    if data.get("verdict") != "EXISTS":
        raise InvalidInput({"error": "NoOrientation", "message": "result carries no orientation"})
    try:
        o = orientation_from_result(g, data)
    except (MalformedInstance, ValueError) as exc:
        raise InvalidInput(_diagnostics(exc)) from None
    sys.stdout.write(to_dot(g, o.tails()))
    return EXIT_EXISTS


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="orient-avoid", description="Orientations avoiding forbidden out-degrees.")
    sub = p.add_subparsers(dest="command", required=True)

    for name, fn, help_ in (
        ("decide", cmd_decide, "decide existence; prints the verdict"),
        ("orient", cmd_orient, "construct an orientation or a certificate"),
    ):
        s = sub.add_parser(name, help=help_)
        s.add_argument("instance", help="instance file (JSON or edge list), '-' for stdin")
        s.set_defaults(func=fn)

    s = sub.add_parser("verify", help="check a result file against an instance")
    s.add_argument("instance")
    s.add_argument("result")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("spectrum", help="exhaustive out-degree spectrum of one vertex")
    s.add_argument("instance")
    s.add_argument("--vertex", type=int, required=True)
    s.add_argument("--cap", type=int, default=DEFAULT_CAP)
    s.set_defaults(func=cmd_spectrum)

    s = sub.add_parser("oracle", help="exhaustive existence and count")
    s.add_argument("instance")
    s.add_argument("--cap", type=int, default=DEFAULT_CAP)
    s.set_defaults(func=cmd_oracle)

    s = sub.add_parser("fuzz", help="differential fuzzing against the oracle")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--count", type=int, default=1000)
    s.add_argument("--cap", type=int, default=10)
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--out", default=None, help="directory for shrunk failing cases")
    s.set_defaults(func=cmd_fuzz)

    s = sub.add_parser("bench", help="time decide + orient on a generated instance")
    s.add_argument("--family", default="cactus", choices=[f.value for f in Family if f is not Family.ALL_SMALL])
    s.add_argument("--n", type=int, default=10_000)
    s.add_argument(
        "--mixed-cuts-only",
        action="store_true",
        help="give every non-cut vertex a parity class so the trace runs over all cut vertices",
    )
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_bench)

    s = sub.add_parser("export-dot", help="write an oriented result as a dot digraph")
    s.add_argument("instance")
    s.add_argument("result")
    s.set_defaults(func=cmd_export_dot)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InvalidInput as exc:
        sys.stderr.write(json.dumps(exc.diagnostics) + "\n")
        return EXIT_INVALID


if __name__ == "__main__":
    raise SystemExit(main())
