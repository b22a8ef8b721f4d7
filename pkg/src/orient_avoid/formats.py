"""Instance/result file formats and per-component solving for possibly disconnected inputs.

Instance JSON (version 1)::

    {"version": 1, "vertices": 3, "edges": [[0, 1], [1, 2], [2, 0]],
     "forbid": {"all": [0, 2]}, "allow": {"1": [0, 1]}}

Each vertex takes its constraint from an explicit ``allow`` or ``forbid``
entry (never both), else from an ``all`` default, else forbids nothing.

Edge-list text: one ``u v`` pair per line, ``#`` starts a comment, plus
optional ``vertices N``, ``forbid V|* values...`` and ``allow V|* values...``
lines.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .constraints import ConstraintMap, DegreeSet, Parity, density_violations
from .construct import orient_with_verdict
from .decision import (
    Certificate,
    CertificateKind,
    ParityTrace,
    Reason,
    TraceStep,
    Verdict,
    decide,
)
from .errors import DensityViolation, EmptyAllowedSet, MalformedInstance
from .graph import MultiGraph
from .orientation import Orientation

FORMAT_VERSION = 1


@dataclass
class InstanceFile:
    n: int
    edges: list
    allow: dict = field(default_factory=dict)
    forbid: dict = field(default_factory=dict)
    default: tuple | None = None  # ("allow" | "forbid", values)

    def __post_init__(self):
        self.edges = [tuple(e) for e in self.edges]

    def to_json(self) -> dict:
        data = {"version": FORMAT_VERSION, "vertices": self.n, "edges": [list(e) for e in self.edges]}
        for kind in ("allow", "forbid"):
            table = {str(v): list(vals) for v, vals in sorted(getattr(self, kind).items())}
            if self.default is not None and self.default[0] == kind:
                table["all"] = list(self.default[1])
            if table:
                data[kind] = table
        return data

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2) + "\n"

    def build(self) -> tuple[MultiGraph, ConstraintMap]:
        """Graph and allowed sets; raises on loops, empty allowed sets and density violations."""
        g = MultiGraph(self.n, self.edges)
        sets = []
        for v, d in enumerate(g.degrees):
            if v in self.allow:
                kind, values = "allow", self.allow[v]
            elif v in self.forbid:
                kind, values = "forbid", self.forbid[v]
            elif self.default is not None:
                kind, values = self.default
            else:
                kind, values = "forbid", ()
            s = DegreeSet.of(d, values)
            if kind == "forbid":
                s = s.complement()
            sets.append(s)
        h = ConstraintMap(sets)
        violations = density_violations(g, h)
        if violations:
            raise DensityViolation(violations)
        for v, s in enumerate(sets):
            if not s.mask:
                raise EmptyAllowedSet(v)
        return g, h

    @classmethod
    def of(cls, g: MultiGraph, h: ConstraintMap) -> InstanceFile:
        return cls(g.n, list(g.edges), allow={v: h.allowed(v) for v in range(g.n)})


def _int(value, what):
    if isinstance(value, bool) or not isinstance(value, int):
        raise MalformedInstance(f"{what} must be an integer, got {value!r}")
    return value


def _values(raw, what):
    if not isinstance(raw, list):
        raise MalformedInstance(f"{what} must be a list of integers")
    return [_int(x, what) for x in raw]


def _from_json(data) -> InstanceFile:
    if not isinstance(data, dict):
        raise MalformedInstance("instance must be a JSON object")
    version = data.get("version", FORMAT_VERSION)
    if version != FORMAT_VERSION:
        raise MalformedInstance(f"unsupported format version {version!r}")
    edges = data.get("edges")
    if not isinstance(edges, list):
        raise MalformedInstance("'edges' must be a list of [u, v] pairs")
    pairs = []
    for i, e in enumerate(edges):
        if not isinstance(e, list) or len(e) != 2:
            raise MalformedInstance(f"edge {i} must be a [u, v] pair")
        pairs.append((_int(e[0], "endpoint"), _int(e[1], "endpoint")))
    if "vertices" in data:
        n = _int(data["vertices"], "'vertices'")
    else:
        n = 1 + max((max(p) for p in pairs), default=-1)
    inst = InstanceFile(n, pairs)
    for kind in ("allow", "forbid"):
        table = data.get(kind, {})
        if not isinstance(table, dict):
            raise MalformedInstance(f"'{kind}' must map vertex ids to integer lists")
        for key, raw in table.items():
            values = _values(raw, f"{kind}[{key}]")
            if key == "all":
                if inst.default is not None:
                    raise MalformedInstance("both allow.all and forbid.all given")
                inst.default = (kind, values)
                continue
            try:
                v = int(key)
            except ValueError:
                raise MalformedInstance(f"bad vertex key {key!r}") from None
            if v in inst.allow or v in inst.forbid:
                raise MalformedInstance(f"vertex {v} has both allow and forbid")
            getattr(inst, kind)[v] = values
    return inst


def _from_edge_list(text: str) -> InstanceFile:
    n = None
    pairs = []
    inst = InstanceFile(0, pairs)
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].split()
        if not line:
            continue
        head = line[0]
        try:
            if head == "vertices":
                n = int(line[1])
            elif head in ("allow", "forbid"):
                values = [int(x) for x in line[2:]]
                if line[1] == "*":
                    if inst.default is not None:
                        raise MalformedInstance(f"line {lineno}: second default constraint")
                    inst.default = (head, values)
                else:
                    v = int(line[1])
                    if v in inst.allow or v in inst.forbid:
                        raise MalformedInstance(f"line {lineno}: vertex {v} constrained twice")
                    getattr(inst, head)[v] = values
            elif len(line) == 2:
                pairs.append((int(line[0]), int(line[1])))
            else:
                raise MalformedInstance(f"line {lineno}: expected 'u v'")
        except (ValueError, IndexError):
            raise MalformedInstance(f"line {lineno}: cannot parse {raw.strip()!r}") from None
    inst.n = n if n is not None else 1 + max((max(p) for p in pairs), default=-1)
    inst.edges = pairs
    return inst


def parse_instance_file(text: str) -> InstanceFile:
    if text.lstrip().startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise MalformedInstance(f"invalid JSON: {exc}") from None
        return _from_json(data)
    return _from_edge_list(text)


def parse_instance(text: str) -> tuple[MultiGraph, ConstraintMap]:
    """Parse JSON or edge-list text into a validated (graph, constraints) pair."""
    return parse_instance_file(text).build()


# ---------------------------------------------------------------- solving


@dataclass
class ComponentResult:
    vertices: list
    verdict: Verdict


@dataclass
class Solution:
    exists: bool
    components: list
    tails: list | None = None  # global tail per edge when exists and oriented
    failing: ComponentResult | None = None


def _split(g: MultiGraph, h: ConstraintMap):
    for comp in g.components():
        sub = g.induced(comp)
        yield comp, sub, h.restrict(sub)


def solve(g: MultiGraph, h: ConstraintMap, construct: bool = True) -> Solution:
    """Decide (and optionally orient) every component; stops at the first infeasible one."""
    results = []
    tails = [None] * g.m
    for comp, sub, hs in _split(g, h):
        if construct:
            verdict, o = orient_with_verdict(sub, hs)
        else:
            verdict, o = decide(sub, hs), None
        result = ComponentResult(comp, verdict)
        results.append(result)
        if not verdict.exists:
            return Solution(False, results, None, result)
        if o is not None:
            for eid in range(sub.m):
                tails[sub.edge_ids[eid]] = sub.vertex_ids[o.tail(eid)]
    return Solution(True, results, tails if construct else None)


# ---------------------------------------------------------------- results


def _step_json(step: TraceStep, ids) -> dict:
    return {
        "vertex": ids[step.vertex],
        "low": step.low,
        "high": step.high,
        "slack": step.slack,
        "window": list(step.window),
        "parity": step.parity.value,
        "digest": step.digest,
    }


def certificate_json(cert: Certificate, component) -> dict:
    ids = list(component)
    return {
        "kind": cert.kind.value,
        "digest": cert.digest,
        "component": ids,
        "steps": [_step_json(s, ids) for s in cert.trace.steps],
        "odd": sorted(ids[v] for v in cert.trace.odd),
        "even": sorted(ids[v] for v in cert.trace.even),
        "vertex": None if cert.vertex is None else ids[cert.vertex],
        "low": cert.low,
        "high": cert.high,
    }


def certificate_from_json(data: dict) -> tuple[Certificate, list]:
    """Certificate in component-local ids plus the component's global vertex list."""
    try:
        component = [int(v) for v in data["component"]]
        local = {v: i for i, v in enumerate(component)}
        steps = tuple(
            TraceStep(
                local[s["vertex"]],
                s["low"],
                s["high"],
                s["slack"],
                tuple(s["window"]),
                Parity(s["parity"]),
                s["digest"],
            )
            for s in data.get("steps", [])
        )
        trace = ParityTrace(
            steps,
            frozenset(local[v] for v in data.get("odd", [])),
            frozenset(local[v] for v in data.get("even", [])),
        )
        vertex = data.get("vertex")
        cert = Certificate(
            CertificateKind(data["kind"]),
            data["digest"],
            trace,
            None if vertex is None else local[vertex],
            data.get("low"),
            data.get("high"),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedInstance(f"malformed certificate: {exc!r}") from None
    return cert, component


def _verdict_json(r: ComponentResult) -> dict:
    v = r.verdict
    out = {"vertices": r.vertices, "exists": v.exists}
    if v.exists:
        out["witness"] = None if v.witness is None else r.vertices[v.witness]
        out["reason"] = v.reason.value if v.reason else None
        if v.reason is Reason.MIXED_WINDOW and v.step is not None:
            out["step"] = _step_json(v.step, r.vertices)
        out["trace_length"] = len(v.trace.steps)
    else:
        out["certificate_kind"] = v.certificate.kind.value
    return out


def verdict_json(sol: Solution) -> dict:
    return {
        "version": FORMAT_VERSION,
        "verdict": "EXISTS" if sol.exists else "NOT_EXISTS",
        "components": [_verdict_json(r) for r in sol.components],
    }


def result_json(g: MultiGraph, sol: Solution) -> dict:
    data = {"version": FORMAT_VERSION, "verdict": "EXISTS" if sol.exists else "NOT_EXISTS"}
    if sol.exists:
        data["orientation"] = [
            {"edge": e, "tail": t, "head": g.other(e, t)} for e, t in enumerate(sol.tails)
        ]
    else:
        data["certificate"] = certificate_json(sol.failing.verdict.certificate, sol.failing.vertices)
    return data


def orientation_from_result(g: MultiGraph, data: dict) -> Orientation:
    """Rebuild an orientation from result records; every edge exactly once with its true endpoints."""
    records = data.get("orientation")
    if not isinstance(records, list):
        raise MalformedInstance("result has no orientation list")
    tails = [None] * g.m
    for rec in records:
        try:
            e, t, hd = int(rec["edge"]), int(rec["tail"]), int(rec["head"])
        except (KeyError, TypeError, ValueError):
            raise MalformedInstance(f"bad orientation record {rec!r}") from None
        if not 0 <= e < g.m:
            raise ValueError(f"edge {e} does not exist")
        if tails[e] is not None:
            raise ValueError(f"edge {e} oriented twice")
        if sorted((t, hd)) != sorted(g.edges[e]):
            raise ValueError(f"edge {e} does not join {t} and {hd}")
        tails[e] = t
    missing = [e for e, t in enumerate(tails) if t is None]
    if missing:
        raise ValueError(f"edges {missing} are not oriented")
    return Orientation.from_tails(g, tails)


def to_dot(g: MultiGraph, tails) -> str:
    lines = ["digraph G {"]
    lines += [f"  {v};" for v in range(g.n) if g.degree(v) == 0]
    lines += [f"  {t} -> {g.other(e, t)};" for e, t in enumerate(tails)]
    lines.append("}")
    return "\n".join(lines) + "\n"
