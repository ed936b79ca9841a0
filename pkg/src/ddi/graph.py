"""The variable-node labelled multigraph and its renderings."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import NamedTuple

from .classifier import HU, NMAI, PR, MemLocation, classify_instruction
from .expander import ExpandedProgram, Label
from .syntax import Kind


class Edge(NamedTuple):
    src: MemLocation
    dst: MemLocation
    label: Label
    dashed: bool = False


class DdiGraph:
    """Nodes are memory locations plus the PR/HU sentinels.

    An edge ``r -> w`` labelled ``k`` means instance ``k`` reads ``r`` and
    writes ``w``. Dashed edges record pointer bindings (pointee -> pointer).
    """

    def __init__(self, nodes, edges, kinds=None):
        self.nodes = tuple(nodes)
        self.edges = tuple(edges)
        self.kinds = dict(kinds or {})  # instruction index -> Kind
        self._in: dict = {n: [] for n in self.nodes}
        self._out: dict = {n: [] for n in self.nodes}
        for e in self.edges:
            self._out[e.src].append(e)
            self._in[e.dst].append(e)

    def in_edges(self, node, dashed: bool = False) -> list:
        return [e for e in self._in.get(node, ()) if dashed or not e.dashed]

    def out_edges(self, node, dashed: bool = False) -> list:
        return [e for e in self._out.get(node, ()) if dashed or not e.dashed]

    @property
    def solid_edges(self) -> list:
        return [e for e in self.edges if not e.dashed]

    @property
    def dashed_edges(self) -> list:
        return [e for e in self.edges if e.dashed]

    def node(self, name: str) -> MemLocation:
        for n in self.nodes:
            if str(n) == name:
                return n
        raise KeyError(name)

    def triples(self, dashed: bool | None = False) -> set:
        """``(src, dst, label)`` string triples; ``dashed=None`` selects all edges."""
        return {(str(e.src), str(e.dst), str(e.label)) for e in self.edges
                if dashed is None or e.dashed == dashed}

    def to_dict(self) -> dict:
        return {
            "nodes": [str(n) for n in self.nodes],
            "edges": [
                {"src": str(e.src), "dst": str(e.dst), "label": str(e.label),
                 "seq": e.label.seq, "dashed": e.dashed}
                for e in sorted(self.edges, key=_edge_key)
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def __repr__(self) -> str:
        return f"DdiGraph(nodes={len(self.nodes)}, edges={len(self.edges)})"


def _edge_key(e: Edge):
    return (e.label.seq, e.src, e.dst, e.dashed)


def build_graph(xp: ExpandedProgram) -> DdiGraph:
    """One edge per (read, write) pair of every memory-access instance."""
    seen: dict = {}
    edges: dict = {}
    kinds: dict = {}

    def touch(loc):
        if not loc.is_sentinel:
            seen.setdefault(loc, None)

    for inst in xp.instances:
        if classify_instruction(inst.instr) == NMAI:
            continue
        kinds.setdefault(inst.base_index, inst.instr.kind)
        access = inst.access
        dashed = inst.instr.kind is Kind.POINTER_ASSIGN
        for loc in access.reads + access.writes:
            touch(loc)
        for r in access.reads:
            for w in access.writes:
                edges.setdefault((r, w, inst.label, dashed), Edge(r, w, inst.label, dashed))

    for name, d in xp.program.declared.items():
        if d.kind == "scalar":
            touch(MemLocation.scalar(name))
        elif d.kind == "pointer":
            touch(MemLocation.pointer(name))
    nodes = list(seen) + [PR, HU]
    return DdiGraph(nodes, edges.values(), kinds)


@dataclass(frozen=True)
class AdjacencyMatrix:
    nodes: tuple  # row and column order
    cells: tuple  # cells[r][c] = labels of solid edges r -> c, in execution order

    def cell(self, src: str, dst: str) -> tuple:
        return self.cells[self.nodes.index(src)][self.nodes.index(dst)]

    def render(self) -> str:
        text = [[""] + list(self.nodes)]
        for name, row in zip(self.nodes, self.cells):
            text.append([name] + [",".join(c) for c in row])
        widths = [max(len(r[i]) for r in text) for i in range(len(text[0]))]
        return "\n".join(
            " | ".join(v.ljust(w) for v, w in zip(r, widths)).rstrip() for r in text
        ) + "\n"


def to_adjacency_matrix(g: DdiGraph) -> AdjacencyMatrix:
    pos = {n: i for i, n in enumerate(g.nodes)}
    size = len(g.nodes)
    cells = [[[] for _ in range(size)] for _ in range(size)]
    for e in sorted(g.solid_edges, key=_edge_key):
        cell = cells[pos[e.src]][pos[e.dst]]
        if str(e.label) not in cell:
            cell.append(str(e.label))
    return AdjacencyMatrix(
        tuple(str(n) for n in g.nodes),
        tuple(tuple(tuple(c) for c in row) for row in cells),
    )


def _quote(s: str) -> str:
    return '"' + s.replace('"', '\\"') + '"'


def to_dot(g: DdiGraph, name: str = "DDI") -> str:
    lines = [f"digraph {name} {{"]
    for n in sorted(g.nodes, key=str):
        lines.append(f"  {_quote(str(n))};")
    for e in sorted(g.edges, key=lambda e: (str(e.src), str(e.dst), e.label.seq, e.dashed)):
        attrs = f"label={_quote(str(e.label))}"
        if e.dashed:
            attrs += ", style=dashed"
        lines.append(f"  {_quote(str(e.src))} -> {_quote(str(e.dst))} [{attrs}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
