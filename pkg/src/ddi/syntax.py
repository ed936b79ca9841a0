"""Syntax tree of the mini-language and the indexed instruction view over it."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, fields, is_dataclass
from typing import Iterator, Union


# --- expressions -----------------------------------------------------------

@dataclass(frozen=True)
class Const:
    value: int


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Index:
    name: str
    subscripts: tuple


@dataclass(frozen=True)
class Deref:
    name: str


@dataclass(frozen=True)
class PtrRef:
    """A pointer read by value, as in ``print p``."""

    name: str


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"


Expr = Union[Const, Var, Index, Deref, PtrRef, Neg, BinOp]
LValue = Union[Var, Index, Deref]

RELOPS = ("<", "<=", ">", ">=", "==", "!=")


@dataclass(frozen=True)
class Cond:
    op: str
    left: Expr
    right: Expr


# --- statements ------------------------------------------------------------

@dataclass(frozen=True)
class Declarator:
    name: str
    kind: str  # "scalar" | "array" | "pointer"
    dims: tuple = ()  # declared extents, None when omitted; arrays only
    init: Expr | None = None


@dataclass(frozen=True)
class Decl:
    index: int | None
    declarators: tuple
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Assign:
    index: int
    target: LValue
    value: Expr
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class PtrAssign:
    index: int
    pointer: str
    target: str
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class If:
    index: int
    cond: Cond
    body: "Stmt | None"
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class LoopTest:
    index: int
    cond: Cond


@dataclass(frozen=True)
class For:
    init: Assign
    test: LoopTest
    incr: Assign
    body: tuple
    line: int = field(default=0, compare=False)

    @property
    def loop_id(self) -> int:
        return self.init.index

    @property
    def var(self) -> str | None:
        t = self.init.target
        return t.name if isinstance(t, Var) else None


@dataclass(frozen=True)
class Read:
    index: int
    targets: tuple
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Print:
    index: int
    args: tuple
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Jump:
    index: int
    kind: str  # "break" | "continue" | "goto"
    label: str | None = None
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Label:
    name: str
    line: int = field(default=0, compare=False)


Stmt = Union[Decl, Assign, PtrAssign, If, For, Read, Print, Jump, Label]


# --- instruction view ------------------------------------------------------

class Kind(str, enum.Enum):
    DECLARATION = "declaration"
    ASSIGNMENT = "assignment"
    ARITHMETIC = "arithmetic"
    CONDITIONAL = "conditional"
    LOOP_INIT = "loop-init"
    LOOP_COND = "loop-cond"
    LOOP_INCR = "loop-incr"
    INPUT = "input"
    OUTPUT = "output"
    CONTROL_TRANSFER = "control-transfer"
    POINTER_ASSIGN = "pointer-assign"

    def __str__(self) -> str:
        return self.value


HEADER_KINDS = frozenset({Kind.LOOP_INIT, Kind.LOOP_COND, Kind.LOOP_INCR})


@dataclass(frozen=True)
class Instruction:
    """One indexed statement.

    ``loops`` lists the ids of enclosing loops, outermost first. For the three
    header instructions of a loop the loop itself is not included. Statements
    that write several variables at once (initialised declarations, multi-target
    ``read``) yield one Instruction per written variable, all sharing ``index``
    and distinguished by ``part``.
    """

    index: int
    kind: Kind
    ast: object
    loops: tuple = ()
    part: int = 0
    guarded: bool = False
    line: int = field(default=0, compare=False)

    @property
    def in_loop(self) -> bool:
        return bool(self.loops)

    @property
    def is_header(self) -> bool:
        return self.kind in HEADER_KINDS


@dataclass(frozen=True)
class Program:
    body: tuple
    instructions: tuple
    declared: dict = field(default_factory=dict)  # name -> Declarator, declaration order
    origin: str = field(default="<string>", compare=False)

    @classmethod
    def from_body(cls, body, origin: str = "<string>") -> "Program":
        declared = {}
        for stmt in body:
            if isinstance(stmt, Decl):
                for d in stmt.declarators:
                    declared[d.name] = d
        return cls(tuple(body), tuple(index_instructions(body)), declared, origin)

    @property
    def declared_vars(self) -> set:
        return set(self.declared)

    def kind_of(self, name: str) -> str:
        return self.declared[name].kind

    def loops(self) -> Iterator[For]:
        yield from iter_loops(self.body)

    def labels(self) -> list:
        return sorted({ins.index for ins in self.instructions})


def _assign_kind(value: Expr) -> Kind:
    return Kind.ARITHMETIC if isinstance(value, (BinOp, Neg)) else Kind.ASSIGNMENT


def index_instructions(body, loops: tuple = (), guarded: bool = False) -> Iterator[Instruction]:
    """Flatten a statement list into instructions in textual order."""
    for stmt in body:
        yield from _instructions_of(stmt, loops, guarded)


def _instructions_of(stmt, loops, guarded):
    if isinstance(stmt, Decl):
        if stmt.index is None:
            return
        part = 0
        for d in stmt.declarators:
            if d.init is not None:
                yield Instruction(stmt.index, Kind.DECLARATION, d, loops, part, guarded, stmt.line)
                part += 1
    elif isinstance(stmt, Assign):
        yield Instruction(stmt.index, _assign_kind(stmt.value), stmt, loops, 0, guarded, stmt.line)
    elif isinstance(stmt, PtrAssign):
        yield Instruction(stmt.index, Kind.POINTER_ASSIGN, stmt, loops, 0, guarded, stmt.line)
    elif isinstance(stmt, If):
        yield Instruction(stmt.index, Kind.CONDITIONAL, stmt, loops, 0, guarded, stmt.line)
        if stmt.body is not None:
            yield from _instructions_of(stmt.body, loops, True)
    elif isinstance(stmt, For):
        yield Instruction(stmt.init.index, Kind.LOOP_INIT, stmt.init, loops, 0, guarded, stmt.line)
        yield Instruction(stmt.test.index, Kind.LOOP_COND, stmt.test, loops, 0, guarded, stmt.line)
        yield Instruction(stmt.incr.index, Kind.LOOP_INCR, stmt.incr, loops, 0, guarded, stmt.line)
        yield from index_instructions(stmt.body, loops + (stmt.loop_id,), guarded)
    elif isinstance(stmt, Read):
        for part, target in enumerate(stmt.targets):
            yield Instruction(stmt.index, Kind.INPUT, target, loops, part, guarded, stmt.line)
    elif isinstance(stmt, Print):
        yield Instruction(stmt.index, Kind.OUTPUT, stmt, loops, 0, guarded, stmt.line)
    elif isinstance(stmt, Jump):
        yield Instruction(stmt.index, Kind.CONTROL_TRANSFER, stmt, loops, 0, guarded, stmt.line)


def iter_loops(body) -> Iterator[For]:
    for stmt in body:
        if isinstance(stmt, For):
            yield stmt
            yield from iter_loops(stmt.body)


def walk_expr(expr) -> Iterator:
    """Pre-order walk over an expression, subscripts included."""
    yield expr
    if isinstance(expr, Index):
        for s in expr.subscripts:
            yield from walk_expr(s)
    elif isinstance(expr, Neg):
        yield from walk_expr(expr.operand)
    elif isinstance(expr, (BinOp, Cond)):
        yield from walk_expr(expr.left)
        yield from walk_expr(expr.right)


def map_expr(expr, fn):
    """Rebuild ``expr`` bottom-up, letting ``fn`` replace any node.

    ``fn`` is called on each rebuilt node and returns a replacement or None.
    Subscripts are left alone: they are resolved statically, never read.
    """
    if isinstance(expr, Neg):
        expr = Neg(map_expr(expr.operand, fn))
    elif isinstance(expr, BinOp):
        expr = BinOp(expr.op, map_expr(expr.left, fn), map_expr(expr.right, fn))
    elif isinstance(expr, Cond):
        expr = Cond(expr.op, map_expr(expr.left, fn), map_expr(expr.right, fn))
    out = fn(expr)
    return expr if out is None else out


def to_data(obj):
    """Plain JSON-able structure for any syntax object (comparable fields only)."""
    if isinstance(obj, enum.Enum):
        return obj.value
    if is_dataclass(obj):
        out = {"node": type(obj).__name__}
        for f in fields(obj):
            if f.compare:
                out[f.name] = to_data(getattr(obj, f.name))
        return out
    if isinstance(obj, dict):
        return {k: to_data(v) for k, v in obj.items()}
    if isinstance(obj, (tuple, list)):
        return [to_data(x) for x in obj]
    return obj
