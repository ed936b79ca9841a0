"""Memory-access classification and (reads, writes) extraction."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import NonAffineSubscript, UnboundPointer
from .syntax import (
    BinOp, Const, Deref, Index, Instruction, Kind, Neg, PtrRef, Var,
)

NMAI, MAR, MAW, MARW = "NMAI", "MAR", "MAW", "MARW"


@dataclass(frozen=True, order=True)
class MemLocation:
    name: str
    subscripts: tuple = ()
    kind: str = "scalar"  # scalar | elem | pointer | PR | HU

    def __str__(self) -> str:
        return self.name + "".join(f"[{s}]" for s in self.subscripts)

    @property
    def is_sentinel(self) -> bool:
        return self.kind in ("PR", "HU")

    @classmethod
    def scalar(cls, name: str) -> "MemLocation":
        return cls(name)

    @classmethod
    def elem(cls, name: str, subscripts) -> "MemLocation":
        return cls(name, tuple(subscripts), "elem")

    @classmethod
    def pointer(cls, name: str) -> "MemLocation":
        return cls(name, (), "pointer")


PR = MemLocation("PR", (), "PR")
HU = MemLocation("HU", (), "HU")


@dataclass(frozen=True)
class AccessPair:
    """Ordered read and write locations of one instruction (duplicates dropped)."""

    reads: tuple
    writes: tuple
    owner: object = None

    @property
    def read_set(self) -> frozenset:
        return frozenset(self.reads)

    @property
    def write_set(self) -> frozenset:
        return frozenset(self.writes)

    def __str__(self) -> str:
        r = ",".join(map(str, self.reads))
        w = ",".join(map(str, self.writes))
        return f"[{{{r}}},{{{w}}}]"


@dataclass(frozen=True)
class PointsToMap:
    """Flow-sensitive pointer targets: ``(pointer, index, target)`` bindings."""

    bindings: tuple = field(default=())

    def lookup(self, pointer: str, position: int) -> str | None:
        """Target of ``pointer`` as seen by the instruction at ``position``."""
        best = None
        for p, index, target in self.bindings:
            if p == pointer and index < position and (best is None or index > best[0]):
                best = (index, target)
        return None if best is None else best[1]


def record_pointer_assign(instr: Instruction, pts: PointsToMap) -> PointsToMap:
    if instr.kind is not Kind.POINTER_ASSIGN:
        raise ValueError(f"instruction {instr.index} is not a pointer assignment")
    a = instr.ast
    return PointsToMap(pts.bindings + ((a.pointer, instr.index, a.target),))


def points_to(instructions) -> PointsToMap:
    pts = PointsToMap()
    for ins in instructions:
        if ins.kind is Kind.POINTER_ASSIGN:
            pts = record_pointer_assign(ins, pts)
    return pts


def value_nodes(expr):
    """Leaves of ``expr`` that read a value, left to right; subscripts excluded."""
    if isinstance(expr, (Const, Var, Index, Deref, PtrRef)):
        yield expr
    elif isinstance(expr, Neg):
        yield from value_nodes(expr.operand)
    elif isinstance(expr, BinOp):
        yield from value_nodes(expr.left)
        yield from value_nodes(expr.right)
    else:
        raise TypeError(f"not an expression: {expr!r}")


def _reads_memory(expr) -> bool:
    return any(not isinstance(n, Const) for n in value_nodes(expr))


def classify_instruction(instr: Instruction) -> str:
    kind = instr.kind
    if kind is Kind.CONTROL_TRANSFER:
        return NMAI
    if kind in (Kind.CONDITIONAL, Kind.OUTPUT, Kind.LOOP_COND):
        return MAR
    if kind in (Kind.INPUT, Kind.POINTER_ASSIGN):
        return MAW
    value = instr.ast.init if kind is Kind.DECLARATION else instr.ast.value
    return MARW if _reads_memory(value) else MAW


def affine_form(expr) -> tuple:
    """``(coefficients, constant)`` of an affine subscript expression."""
    if isinstance(expr, Const):
        return {}, expr.value
    if isinstance(expr, Var):
        return {expr.name: 1}, 0
    if isinstance(expr, Neg):
        c, k = affine_form(expr.operand)
        return {v: -a for v, a in c.items()}, -k
    if isinstance(expr, BinOp):
        lc, lk = affine_form(expr.left)
        rc, rk = affine_form(expr.right)
        if expr.op in "+-":
            sign = 1 if expr.op == "+" else -1
            out = dict(lc)
            for v, a in rc.items():
                out[v] = out.get(v, 0) + sign * a
            return out, lk + sign * rk
        if expr.op == "*":
            if lc and rc:
                raise NonAffineSubscript("product of loop variables in subscript")
            if lc:
                return {v: a * rk for v, a in lc.items()}, lk * rk
            return {v: a * lk for v, a in rc.items()}, lk * rk
        raise NonAffineSubscript(f"operator '{expr.op}' in subscript")
    raise NonAffineSubscript(f"{type(expr).__name__} in subscript")


def eval_subscript(expr, env: dict) -> int:
    coeffs, const = affine_form(expr)
    total = const
    for v, a in coeffs.items():
        if v not in env:
            raise NonAffineSubscript(f"subscript uses '{v}', which is not an enclosing loop variable")
        total += a * env[v]
    return total


def locate(node, pts: PointsToMap, position: int, env: dict) -> MemLocation:
    """Memory location denoted by a leaf expression or lvalue."""
    if isinstance(node, Const):
        return PR
    if isinstance(node, Var):
        return MemLocation.scalar(node.name)
    if isinstance(node, PtrRef):
        return MemLocation.pointer(node.name)
    if isinstance(node, Index):
        return MemLocation.elem(node.name, [eval_subscript(s, env) for s in node.subscripts])
    if isinstance(node, Deref):
        target = pts.lookup(node.name, position)
        if target is None:
            raise UnboundPointer(f"'*{node.name}' at instruction {position} before any '{node.name} = &x'")
        return MemLocation.scalar(target)
    raise TypeError(f"cannot locate {node!r}")


def _unique(locs) -> tuple:
    return tuple(dict.fromkeys(locs))


def extract_access_pair(instr: Instruction, pts: PointsToMap = PointsToMap(),
                        env: dict | None = None, owner=None) -> AccessPair:
    """(R, W) of ``instr``; ``env`` binds enclosing loop variables for subscripts."""
    env = env or {}
    k = instr.index
    ast = instr.ast

    def reads_of(*exprs):
        return _unique(locate(n, pts, k, env) for e in exprs for n in value_nodes(e))

    kind = instr.kind
    if kind is Kind.CONTROL_TRANSFER:
        return AccessPair((), (), owner)
    if kind is Kind.DECLARATION:
        return AccessPair(reads_of(ast.init), (MemLocation.scalar(ast.name),), owner)
    if kind in (Kind.ASSIGNMENT, Kind.ARITHMETIC, Kind.LOOP_INIT, Kind.LOOP_INCR):
        return AccessPair(reads_of(ast.value), (locate(ast.target, pts, k, env),), owner)
    if kind in (Kind.CONDITIONAL, Kind.LOOP_COND):
        return AccessPair(reads_of(ast.cond.left, ast.cond.right), (HU,), owner)
    if kind is Kind.OUTPUT:
        return AccessPair(reads_of(*ast.args), (HU,), owner)
    if kind is Kind.INPUT:
        return AccessPair((HU,), (locate(ast, pts, k, env),), owner)
    if kind is Kind.POINTER_ASSIGN:
        # address binding only; rendered as a dashed edge
        return AccessPair((MemLocation.scalar(ast.target),), (MemLocation.pointer(ast.pointer),), owner)
    raise TypeError(f"unknown instruction kind {kind}")
