"""Data dependences read off the DDI graph."""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from itertools import combinations

from .classifier import MemLocation
from .errors import PathExplosion
from .expander import Label
from .graph import DdiGraph

FLOW, ANTI, OUTPUT, INPUT = "flow", "anti", "output", "input"
KINDS = (FLOW, ANTI, OUTPUT, INPUT)
DEFAULT_CLOSURE_CAP = 10**6


@dataclass(frozen=True)
class Dependence:
    kind: str
    earlier: Label
    later: Label
    location: MemLocation
    carried: bool = False
    loop: int | None = None  # id of the loop that carries it

    def key(self) -> tuple:
        return (self.kind, str(self.earlier), str(self.later), str(self.location))

    def sort_key(self) -> tuple:
        return (self.location, self.earlier.seq, self.later.seq, KINDS.index(self.kind))

    def to_dict(self) -> dict:
        return {
            "kind": self.kind, "earlier": str(self.earlier), "later": str(self.later),
            "location": str(self.location), "carried": self.carried, "loop": self.loop,
        }

    def __str__(self) -> str:
        tag = " [carried]" if self.carried else ""
        return f"{self.kind.upper()} {self.earlier} -> {self.later} on {self.location}{tag}"


def carrier(a: Label, b: Label) -> int | None:
    """Outermost common loop in which the two instances sit in different iterations."""
    if not (a.in_body and b.in_body):
        return None
    for la, lb, ia, ib in zip(a.loops, b.loops, a.iters, b.iters):
        if la != lb:
            return None
        if ia != ib:
            return la
    return None


def classify_carried(d: Dependence) -> Dependence:
    lid = carrier(d.earlier, d.later)
    return replace(d, carried=lid is not None, loop=lid)


def _labels(edges) -> list:
    return list(dict.fromkeys(e.label for e in edges))


def find_dependences(g: DdiGraph) -> list:
    """All four dependence kinds, via in/out label pairings at each variable node."""
    found: dict = {}

    def add(kind, a, b, loc):
        if a.seq > b.seq:
            a, b = b, a
        d = Dependence(kind, a, b, loc)
        found.setdefault(d.key(), d)

    for v in g.nodes:
        if v.is_sentinel:
            continue
        ins = _labels(g.in_edges(v))
        outs = _labels(g.out_edges(v))
        for w in ins:
            for r in outs:
                if w != r:
                    add(FLOW if w.seq < r.seq else ANTI, w, r, v)
        for a, b in combinations(ins, 2):
            add(OUTPUT, a, b, v)
        for a, b in combinations(outs, 2):
            add(INPUT, a, b, v)
    deps = [classify_carried(d) for d in found.values()]
    deps.sort(key=Dependence.sort_key)
    return deps


def dependence_closure(g: DdiGraph, cap: int = DEFAULT_CLOSURE_CAP) -> list:
    """Label pairs joined by a solid path whose interior avoids PR and HU."""
    if cap <= 0:
        raise ValueError("closure cap must be positive")
    reach_cache: dict = {}

    def downstream(v) -> list:
        # labels of every edge leaving a node reachable from v through non-sentinels
        if v in reach_cache:
            return reach_cache[v]
        seen = {v}
        stack = [v]
        labels: dict = {}
        while stack:
            u = stack.pop()
            for e in g.out_edges(u):
                labels.setdefault(e.label, None)
                if not e.dst.is_sentinel and e.dst not in seen:
                    seen.add(e.dst)
                    stack.append(e.dst)
        reach_cache[v] = list(labels)
        return reach_cache[v]

    pairs: dict = {}
    for v in g.nodes:
        if v.is_sentinel:
            continue
        later = downstream(v)
        for l in _labels(g.in_edges(v)):
            for m in later:
                if l == m:
                    continue
                pair = (l, m) if l.seq < m.seq else (m, l)
                if pair not in pairs:
                    pairs[pair] = None
                    if len(pairs) > cap:
                        raise PathExplosion(f"dependence closure exceeds {cap} pairs")
    return sorted(pairs, key=lambda p: (p[0].seq, p[1].seq))


@dataclass(frozen=True)
class LoopVerdict:
    loop_id: int
    var: str | None
    parallelizable: bool
    blockers: tuple

    def to_dict(self) -> dict:
        return {
            "id": self.loop_id, "var": self.var, "parallelizable": self.parallelizable,
            "blockers": [d.to_dict() for d in self.blockers],
        }


def parallelizability_report(deps, loops=None) -> list:
    """One verdict per loop: blocked by any flow dependence it carries.

    ``loops`` maps loop id to LoopInfo (``ExpandedProgram.loops``); without it
    only loops that carry some dependence are reported.
    """
    if loops is None:
        ids = sorted({d.loop for d in deps if d.loop is not None})
        loops = {lid: None for lid in ids}
    out = []
    for lid in sorted(loops):
        blockers = tuple(d for d in deps if d.kind == FLOW and d.carried and d.loop == lid)
        info = loops[lid]
        out.append(LoopVerdict(lid, getattr(info, "var", None), not blockers, blockers))
    return out


def report_dict(deps, verdicts) -> dict:
    return {"deps": [d.to_dict() for d in deps], "loops": [v.to_dict() for v in verdicts]}


def report_json(deps, verdicts) -> str:
    return json.dumps(report_dict(deps, verdicts), indent=2, sort_keys=True)
