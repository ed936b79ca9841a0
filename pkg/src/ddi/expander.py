"""Loop unrolling into labelled instruction instances."""

from __future__ import annotations

import operator
from dataclasses import dataclass, field, replace

from .classifier import AccessPair, PointsToMap, extract_access_pair, points_to
from .errors import SymbolicBound, UnrollCapExceeded, UnsupportedConstruct
from .syntax import (
    BinOp, Const, Decl, For, If, Instruction, Label as LabelStmt, Neg, Program, Var,
)

DEFAULT_UNROLL_CAP = 10_000

_REL = {
    "<": operator.lt, "<=": operator.le, ">": operator.gt,
    ">=": operator.ge, "==": operator.eq, "!=": operator.ne,
}
_FLIP = {"<": ">", "<=": ">=", ">": "<", ">=": "<=", "==": "==", "!=": "!="}


@dataclass(frozen=True)
class Label:
    """Instance label ``s.k`` (bare ``s`` outside loops) with its execution position."""

    index: int
    instance: int | None
    seq: int
    loops: tuple = field(default=(), compare=False)
    iters: tuple = field(default=(), compare=False)

    def __str__(self) -> str:
        return str(self.index) if self.instance is None else f"{self.index}.{self.instance}"

    @property
    def in_body(self) -> bool:
        return self.instance is not None


@dataclass(frozen=True)
class InstructionInstance:
    instr: Instruction
    label: Label
    env: tuple = ()  # ((loop variable, value), ...)
    access: AccessPair | None = None

    @property
    def base_index(self) -> int:
        return self.instr.index

    @property
    def instance(self) -> int | None:
        return self.label.instance

    @property
    def seq(self) -> int:
        return self.label.seq


@dataclass(frozen=True)
class LoopInfo:
    loop_id: int
    var: str
    parent: int | None
    trips: int  # body executions summed over every entry


@dataclass(frozen=True)
class ExpandedProgram:
    program: Program
    instances: tuple
    unroll_cap: int
    loops: dict
    pts: PointsToMap


def const_value(expr) -> int | None:
    """Value of an expression built only from literals, else None."""
    if isinstance(expr, Const):
        return expr.value
    if isinstance(expr, Neg):
        v = const_value(expr.operand)
        return None if v is None else -v
    if isinstance(expr, BinOp):
        a, b = const_value(expr.left), const_value(expr.right)
        if a is None or b is None:
            return None
        if expr.op == "+":
            return a + b
        if expr.op == "-":
            return a - b
        if expr.op == "*":
            return a * b
    return None


def loop_bounds(loop: For) -> tuple:
    """``(var, start, relop, bound, step)`` of a constant-stride loop header."""
    var = loop.var
    start = const_value(loop.init.value)
    if start is None:
        raise SymbolicBound(f"loop {loop.loop_id}: initial value of '{var}' is not a constant")
    cond = loop.test.cond
    if cond.left == Var(var) and const_value(cond.right) is not None:
        op, bound = cond.op, const_value(cond.right)
    elif cond.right == Var(var) and const_value(cond.left) is not None:
        op, bound = _FLIP[cond.op], const_value(cond.left)
    else:
        raise SymbolicBound(f"loop {loop.loop_id}: condition does not compare '{var}' with a constant")
    incr = loop.incr
    step = None
    if incr.target == Var(var) and isinstance(incr.value, BinOp):
        v = incr.value
        if v.left == Var(var) and v.op in "+-" and const_value(v.right) is not None:
            step = const_value(v.right) * (1 if v.op == "+" else -1)
        elif v.right == Var(var) and v.op == "+" and const_value(v.left) is not None:
            step = const_value(v.left)
    if step is None:
        raise SymbolicBound(f"loop {loop.loop_id}: increment of '{var}' is not a constant stride")
    return var, start, op, bound, step


def iteration_values(loop: For, cap: int = DEFAULT_UNROLL_CAP) -> list:
    var, x, op, bound, step = loop_bounds(loop)
    rel = _REL[op]
    values = []
    while rel(x, bound):
        values.append(x)
        if len(values) > cap:
            raise UnrollCapExceeded(f"loop {loop.loop_id} runs more than {cap} iterations")
        x += step
    return values


def resolve_subscripts(inst: InstructionInstance, pts: PointsToMap = PointsToMap()) -> InstructionInstance:
    """Attach the concrete access pair of ``inst`` under its loop environment."""
    access = extract_access_pair(inst.instr, pts, dict(inst.env), owner=inst.label)
    return replace(inst, access=access)


def expand_loops(prog: Program, cap: int = DEFAULT_UNROLL_CAP) -> ExpandedProgram:
    """Unroll every loop; instance ``k`` of a body instruction is the k-th
    iteration (flat, across entries) of its innermost loop."""
    if cap <= 0:
        raise ValueError("unroll cap must be positive")
    pts = points_to(prog.instructions)
    by_index: dict = {}
    for ins in prog.instructions:
        by_index.setdefault(ins.index, []).append(ins)

    instances: list = []
    counters: dict = {}
    trips: dict = {}
    headers_done: set = set()
    seq = 0

    def emit(index, loop_stack, iters, env, bare=False):
        nonlocal seq
        if index not in by_index:  # removed by a transform
            return
        seq += 1
        instance = None if bare or not loop_stack else counters[loop_stack[-1]]
        label = Label(index, instance, seq, loop_stack, iters)
        env_t = tuple(sorted(env.items()))
        for ins in by_index[index]:
            inst = resolve_subscripts(InstructionInstance(ins, label, env_t), pts)
            if instance is not None:
                for w in inst.access.writes:
                    if w.kind == "scalar" and w.name in env:
                        raise UnsupportedConstruct(
                            f"instruction {label} writes loop variable '{w.name}'")
            instances.append(inst)
        if len(instances) > cap:
            raise UnrollCapExceeded(f"expansion exceeds {cap} instances")

    def walk(stmts, loop_stack, iters, env):
        for stmt in stmts:
            if isinstance(stmt, LabelStmt) or (isinstance(stmt, Decl) and stmt.index is None):
                continue
            if isinstance(stmt, For):
                lid = stmt.loop_id
                if lid not in headers_done:
                    headers_done.add(lid)
                    for idx in (stmt.init.index, stmt.test.index, stmt.incr.index):
                        emit(idx, loop_stack, iters, env, bare=True)
                values = iteration_values(stmt, cap)
                counters.setdefault(lid, 0)
                trips[lid] = trips.get(lid, 0) + len(values)
                for ordinal, v in enumerate(values, 1):
                    counters[lid] += 1
                    walk(stmt.body, loop_stack + (lid,), iters + (ordinal,), {**env, stmt.var: v})
            elif isinstance(stmt, If):
                emit(stmt.index, loop_stack, iters, env)
                if stmt.body is not None:
                    walk((stmt.body,), loop_stack, iters, env)
            else:
                emit(stmt.index, loop_stack, iters, env)

    walk(prog.body, (), (), {})
    info = {lid: LoopInfo(lid, var, parent, trips.get(lid, 0))
            for lid, var, parent in _loop_tree(prog.body, None)}
    return ExpandedProgram(prog, tuple(instances), cap, info, pts)


def _loop_tree(stmts, parent):
    for stmt in stmts:
        if isinstance(stmt, For):
            yield stmt.loop_id, stmt.var, parent
            yield from _loop_tree(stmt.body, stmt.loop_id)
