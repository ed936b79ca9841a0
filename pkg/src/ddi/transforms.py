"""Graph-driven dead-code elimination, constant propagation and
induction-variable detection."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace

from .classifier import PR, MemLocation, affine_form, points_to, value_nodes
from .expander import DEFAULT_UNROLL_CAP, expand_loops
from .graph import DdiGraph, build_graph
from .syntax import (
    Assign, BinOp, Cond, Const, Decl, Deref, For, If, Index, Jump, Kind, Label, Neg,
    Print, Program, PtrAssign, Read, Var, map_expr, walk_expr,
)

_REMOVABLE = (Kind.ASSIGNMENT, Kind.ARITHMETIC, Kind.DECLARATION)
_DEFINITE = (Kind.ASSIGNMENT, Kind.ARITHMETIC, Kind.DECLARATION, Kind.INPUT)


@dataclass
class TransformReport:
    removed_instructions: set = field(default_factory=set)
    removed_variables: set = field(default_factory=set)
    removed_initializers: set = field(default_factory=set)  # (index, variable)
    rewritten_reads: list = field(default_factory=list)  # (index, location, constant)
    induction_basic: set = field(default_factory=set)  # refined rule
    paper_rule_basic: set = field(default_factory=set)  # every self-loop node
    induction_derived: set = field(default_factory=set)
    flagged: set = field(default_factory=set)

    def merge(self, other: "TransformReport") -> "TransformReport":
        return TransformReport(
            self.removed_instructions | other.removed_instructions,
            self.removed_variables | other.removed_variables,
            self.removed_initializers | other.removed_initializers,
            self.rewritten_reads + other.rewritten_reads,
            self.induction_basic | other.induction_basic,
            self.paper_rule_basic | other.paper_rule_basic,
            self.induction_derived | other.induction_derived,
            self.flagged | other.flagged,
        )

    def to_dict(self) -> dict:
        return {
            "removed_instructions": sorted(self.removed_instructions),
            "removed_variables": sorted(self.removed_variables),
            "removed_initializers": [list(x) for x in sorted(self.removed_initializers)],
            "rewritten_reads": [list(x) for x in self.rewritten_reads],
            "induction_basic": sorted(self.induction_basic),
            "paper_rule_basic": sorted(self.paper_rule_basic),
            "induction_derived": sorted(self.induction_derived),
            "flagged": sorted(self.flagged),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


# --- shared helpers ----------------------------------------------------------

def _labels(edges) -> list:
    return list(dict.fromkeys(e.label for e in edges))


def _by_label(xp) -> dict:
    out: dict = {}
    for inst in xp.instances:
        out.setdefault(inst.label, []).append(inst)
    return out


def _by_index(xp) -> dict:
    out: dict = {}
    for inst in xp.instances:
        out.setdefault(inst.base_index, []).append(inst)
    return out


def _writer(instances, loc):
    for inst in instances:
        if loc in inst.access.writes:
            return inst
    return None


def _map_statements(body, fn) -> tuple:
    """Rebuild a statement list; ``fn`` returns a replacement, or None to drop."""
    out = []
    for stmt in body:
        if isinstance(stmt, For):
            stmt = replace(stmt, body=_map_statements(stmt.body, fn))
        elif isinstance(stmt, If) and stmt.body is not None:
            inner = _map_statements((stmt.body,), fn)
            stmt = replace(stmt, body=inner[0] if inner else None)
        stmt = fn(stmt)
        if stmt is not None:
            out.append(stmt)
    return tuple(out)


def _goto_seqs(xp) -> list:
    return [i.seq for i in xp.instances
            if i.instr.kind is Kind.CONTROL_TRANSFER and i.instr.ast.kind == "goto"]


def _label_positions(body) -> list:
    """Index of the first instruction following each goto label."""
    flat: list = []

    def walk(stmts):
        for stmt in stmts:
            if isinstance(stmt, Label):
                flat.append(stmt)
            elif isinstance(stmt, For):
                flat.append(stmt.init.index)
                walk(stmt.body)
            elif isinstance(stmt, Decl):
                if stmt.index is not None:
                    flat.append(stmt.index)
            elif isinstance(stmt, If):
                flat.append(stmt.index)
                if stmt.body is not None:
                    walk((stmt.body,))
            else:
                flat.append(stmt.index)

    walk(body)
    positions = []
    for n, item in enumerate(flat):
        if isinstance(item, Label):
            nxt = next((x for x in flat[n + 1:] if not isinstance(x, Label)), math.inf)
            positions.append(nxt)
    return positions


def referenced_names(prog: Program) -> set:
    """Names mentioned by any instruction (declarations of them excluded)."""
    names: set = set()

    def expr_names(e):
        for n in walk_expr(e):
            if hasattr(n, "name"):
                names.add(n.name)

    for ins in prog.instructions:
        ast = ins.ast
        if ins.kind is Kind.DECLARATION:
            expr_names(ast.init)
        elif ins.kind is Kind.INPUT:
            expr_names(ast)
        elif isinstance(ast, Assign):
            expr_names(ast.target)
            expr_names(ast.value)
        elif isinstance(ast, PtrAssign):
            names.update((ast.pointer, ast.target))
        elif ins.kind in (Kind.CONDITIONAL, Kind.LOOP_COND):
            expr_names(ast.cond)
        elif isinstance(ast, Print):
            for a in ast.args:
                expr_names(a)
    return names


# --- dead-code elimination ---------------------------------------------------

def _dead_writes(g: DdiGraph, xp) -> list:
    """``(label, location)`` of top-level writes whose value is never read."""
    by_label = _by_label(xp)
    gotos = _goto_seqs(xp)
    dead = []
    for v in g.nodes:
        if v.is_sentinel:
            continue
        writers = sorted(_labels(g.in_edges(v)), key=lambda l: l.seq)
        read_seqs = [l.seq for l in _labels(g.out_edges(v))]
        for n, k in enumerate(writers):
            inst = _writer(by_label[k], v)
            if k.in_body or inst is None or inst.instr.kind not in _REMOVABLE:
                continue
            end = math.inf
            for m in writers[n + 1:]:
                w = _writer(by_label[m], v)
                if not m.in_body and not w.instr.guarded and w.instr.kind in _DEFINITE:
                    if not any(k.seq < s < m.seq for s in gotos):
                        end = m.seq
                    break
            if not any(k.seq < s <= end for s in read_seqs):
                dead.append((k, v))
    return dead


def _dce_pass(g: DdiGraph, prog: Program, cap: int, report: TransformReport):
    xp = expand_loops(prog, cap)
    by_label = _by_label(xp)
    drop_stmt = set()
    drop_init: dict = {}
    for k, v in _dead_writes(g, xp):
        instr = _writer(by_label[k], v).instr
        if instr.kind is Kind.DECLARATION:
            drop_init.setdefault(k.index, set()).add(v.name)
        else:
            drop_stmt.add(k.index)

    used = referenced_names(prog)
    touched = {n.name for n in g.nodes if not n.is_sentinel and (g.in_edges(n, True) or g.out_edges(n, True))}
    unused = [name for name in prog.declared if name not in used and name not in touched]
    if not (drop_stmt or drop_init or unused):
        return None

    def edit(stmt):
        if isinstance(stmt, Decl):
            decls = []
            for d in stmt.declarators:
                if d.name in unused:
                    report.removed_variables.add(d.name)
                    continue
                if d.name in drop_init.get(stmt.index, ()):
                    report.removed_initializers.add((stmt.index, d.name))
                    d = replace(d, init=None)
                decls.append(d)
            if not decls:
                if stmt.index is not None:
                    report.removed_instructions.add(stmt.index)
                return None
            index = stmt.index
            if index is not None and all(d.init is None for d in decls):
                report.removed_instructions.add(index)
                index = None
            return replace(stmt, index=index, declarators=tuple(decls))
        if isinstance(stmt, Assign) and stmt.index in drop_stmt:
            report.removed_instructions.add(stmt.index)
            return None
        return stmt

    body = _map_statements(prog.body, edit)
    return Program.from_body(body, prog.origin)


def eliminate_dead_code(g: DdiGraph, prog: Program,
                        unroll_cap: int = DEFAULT_UNROLL_CAP) -> tuple:
    """Remove top-level writes that never reach a read, and variables left
    without any access, repeating until nothing changes.

    Writes inside loop bodies, ``read``, ``print``, conditionals, pointer
    bindings and jumps are never removed. A dead write guarded by an ``if``
    leaves the condition in place with an empty body.
    """
    report = TransformReport()
    while True:
        nxt = _dce_pass(g, prog, unroll_cap, report)
        if nxt is None:
            return prog, report
        prog = nxt
        g = build_graph(expand_loops(prog, unroll_cap))


# --- constant propagation ----------------------------------------------------

def _static_location(node) -> MemLocation | None:
    if isinstance(node, Var):
        return MemLocation.scalar(node.name)
    if isinstance(node, Index):
        subs = []
        for s in node.subscripts:
            coeffs, const = affine_form(s)
            if coeffs:
                return None
            subs.append(const)
        return MemLocation.elem(node.name, subs)
    return None


def _constant_source(inst):
    """Constant written by a top-level unguarded ``v = literal``, else None."""
    ins = inst.instr
    if inst.label.in_body or ins.guarded or ins.is_header:
        return None
    if ins.kind is Kind.DECLARATION:
        value = ins.ast.init
    elif ins.kind is Kind.ASSIGNMENT and _static_location(ins.ast.target) is not None:
        value = ins.ast.value
    else:
        return None
    return value.value if isinstance(value, Const) else None


def _rewrite_expr(expr, table: dict):
    def sub(node):
        loc = _static_location(node)
        if loc is not None and loc in table:
            return Const(table[loc])
        return None
    return map_expr(expr, sub)


def propagate_constants(g: DdiGraph, prog: Program,
                        unroll_cap: int = DEFAULT_UNROLL_CAP) -> tuple:
    """Replace reads of a variable by the literal it was last assigned.

    A read at instruction ``s`` is rewritten when every instance of ``s``
    falls after the constant write at ``k`` and no later than the next write
    of the same location, and no goto label lies in ``(k, s]``. One pass;
    chained constants need repeated calls.
    """
    xp = expand_loops(prog, unroll_cap)
    by_label = _by_label(xp)
    by_index = _by_index(xp)
    labels_at = _label_positions(prog.body)
    table: dict = {}  # instruction index -> {location: constant}

    for v in g.nodes:
        if v.is_sentinel or v.kind == "pointer":
            continue
        writers = sorted(_labels(g.in_edges(v)), key=lambda l: l.seq)
        readers = _labels(g.out_edges(v))
        for n, k in enumerate(writers):
            inst = _writer(by_label[k], v)
            if inst is None or PR not in inst.access.reads:
                continue
            c = _constant_source(inst)
            if c is None:
                continue
            end = writers[n + 1].seq if n + 1 < len(writers) else math.inf
            for s in dict.fromkeys(r.index for r in readers if k.seq < r.seq <= end):
                instances = by_index[s]
                if instances[0].instr.is_header:
                    continue
                if not all(k.seq < i.seq <= end for i in instances):
                    continue
                if any(k.index < p <= s for p in labels_at):
                    continue
                table.setdefault(s, {})[v] = c

    report = TransformReport()
    if not table:
        return prog, report

    def reads_in(expr, s):
        found = table[s]
        parts = (expr.left, expr.right) if isinstance(expr, Cond) else (expr,)
        for node in (n for e in parts for n in value_nodes(e)):
            loc = _static_location(node)
            if loc in found:
                report.rewritten_reads.append((s, str(loc), found[loc]))

    def edit(stmt):
        if isinstance(stmt, (For, Label, Jump, Read, PtrAssign)) or getattr(stmt, "index", None) not in table:
            return stmt
        s, t = stmt.index, table[stmt.index]
        if isinstance(stmt, Decl):
            decls = []
            for d in stmt.declarators:
                if d.init is not None:
                    reads_in(d.init, s)
                    d = replace(d, init=_rewrite_expr(d.init, t))
                decls.append(d)
            return replace(stmt, declarators=tuple(decls))
        if isinstance(stmt, Assign):
            reads_in(stmt.value, s)
            return replace(stmt, value=_rewrite_expr(stmt.value, t))
        if isinstance(stmt, If):
            reads_in(stmt.cond, s)
            return replace(stmt, cond=_rewrite_expr(stmt.cond, t))
        if isinstance(stmt, Print):
            for a in stmt.args:
                reads_in(a, s)
            return replace(stmt, args=tuple(_rewrite_expr(a, t) for a in stmt.args))
        return stmt

    body = _map_statements(prog.body, edit)
    report.rewritten_reads = list(dict.fromkeys(report.rewritten_reads))
    report.rewritten_reads.sort(key=lambda x: (x[0], x[1]))
    return Program.from_body(body, prog.origin), report


def propagate_constants_fixpoint(g: DdiGraph, prog: Program,
                                 unroll_cap: int = DEFAULT_UNROLL_CAP,
                                 max_rounds: int = 100) -> tuple:
    report = TransformReport()
    for _ in range(max_rounds):
        prog, step = propagate_constants(g, prog, unroll_cap)
        if not step.rewritten_reads:
            break
        report = report.merge(step)
        g = build_graph(expand_loops(prog, unroll_cap))
    return prog, report


# --- induction variables -----------------------------------------------------

def _degree(expr, var: str, pts, position: int) -> float:
    """Polynomial degree of ``expr`` in ``var``; inf for division by it."""
    if isinstance(expr, Var):
        return 1 if expr.name == var else 0
    if isinstance(expr, Deref):
        return 1 if pts.lookup(expr.name, position) == var else 0
    if isinstance(expr, Neg):
        return _degree(expr.operand, var, pts, position)
    if isinstance(expr, BinOp):
        a = _degree(expr.left, var, pts, position)
        b = _degree(expr.right, var, pts, position)
        if expr.op in "+-":
            return max(a, b)
        if expr.op == "*":
            return a + b
        return a if b == 0 else math.inf
    return 0


def detect_induction_variables(g: DdiGraph, prog: Program | None = None) -> TransformReport:
    """Self-loop nodes as basic induction variables, plus those derived from them.

    ``paper_rule_basic`` is every node with a solid self-loop. ``induction_basic``
    keeps those whose self-loop instructions read only the node and constants
    (``x = x + c``), inside a loop body or as a loop increment; the rest are
    ``flagged``. A derived variable is written in a loop body from a single
    self-loop node and constants; given ``prog``, the expression must also be
    linear in that node.
    """
    report = TransformReport()
    pts = points_to(prog.instructions) if prog is not None else None
    instr_of = {}
    if prog is not None:
        for ins in prog.instructions:
            instr_of.setdefault(ins.index, ins)

    for v in g.nodes:
        if v.is_sentinel:
            continue
        self_loops = [e for e in g.in_edges(v) if e.src == v]
        if not self_loops:
            continue
        name = str(v)
        report.paper_rule_basic.add(name)
        ok = True
        for lab in _labels(self_loops):
            sources = {e.src for e in g.in_edges(v) if e.label == lab}
            in_loop = lab.in_body or g.kinds.get(lab.index) is Kind.LOOP_INCR
            ok = ok and in_loop and sources <= {v, PR}
        (report.induction_basic if ok else report.flagged).add(name)

    basic_nodes = [n for n in g.nodes if str(n) in report.paper_rule_basic]
    for v in g.nodes:
        if v.is_sentinel or str(v) in report.paper_rule_basic:
            continue
        for e in g.in_edges(v):
            if e.src not in basic_nodes or not e.label.in_body:
                continue
            others = {x.src for x in g.in_edges(v) if x.label == e.label} - {e.src}
            if not others <= {PR}:
                continue
            if prog is not None:
                ins = instr_of.get(e.label.index)
                if ins is None or ins.kind not in (Kind.ASSIGNMENT, Kind.ARITHMETIC):
                    continue
                if _degree(ins.ast.value, str(e.src), pts, ins.index) > 1:
                    continue
            report.induction_derived.add(str(v))
            break
    return report
