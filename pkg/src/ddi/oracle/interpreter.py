"""Reference interpreter for the mini-language."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..classifier import HU, PR, MemLocation
from ..errors import (
    DdiError, DivisionByZero, ExecutionLimit, InputExhausted, UnboundPointer,
)
from ..expander import iteration_values
from ..syntax import (
    Assign, BinOp, Cond, Const, Decl, Deref, For, If, Index, Jump, Label, Neg,
    Print, Program, PtrAssign, PtrRef, Read, Var,
)

DEFAULT_STEP_LIMIT = 1_000_000
_ADDRESS_BASE = 4096


def address_of(name: str) -> int:
    """Deterministic address of a named variable."""
    return _ADDRESS_BASE + int.from_bytes(name.encode(), "big")


@dataclass(frozen=True)
class AccessEvent:
    seq: int
    label: str
    location: MemLocation
    mode: str  # "read" | "write"


@dataclass
class ExecutionResult:
    printed: list
    final_store: dict
    trace: list = field(default_factory=list)


class _Break(Exception):
    pass


class _Continue(Exception):
    pass


class _Goto(Exception):
    def __init__(self, label: str):
        super().__init__(label)
        self.label = label


def _divide(a: int, b: int) -> int:
    if b == 0:
        raise DivisionByZero("division by zero")
    q = abs(a) // abs(b)
    return q if (a >= 0) == (b >= 0) else -q


_REL = {
    "<": lambda a, b: a < b, "<=": lambda a, b: a <= b, ">": lambda a, b: a > b,
    ">=": lambda a, b: a >= b, "==": lambda a, b: a == b, "!=": lambda a, b: a != b,
}


class Interpreter:
    def __init__(self, prog: Program, inputs=(), step_limit: int = DEFAULT_STEP_LIMIT,
                 record: bool = False):
        self.prog = prog
        self.inputs = list(inputs)
        self.cursor = 0
        self.step_limit = step_limit
        self.steps = 0
        self.store: dict = {}
        self.pointers: dict = {}
        self.printed: list = []
        self.record = record
        self.trace: list = []
        self.seq = 0
        self.counters: dict = {}
        self.loop_stack: list = []
        self.label = ""

    # -- bookkeeping --
    def begin(self, index: int, bare: bool = False):
        self.steps += 1
        if self.steps > self.step_limit:
            raise ExecutionLimit(f"more than {self.step_limit} steps")
        self.seq += 1
        if bare or not self.loop_stack:
            self.label = str(index)
        else:
            self.label = f"{index}.{self.counters[self.loop_stack[-1]]}"

    def event(self, loc: MemLocation, mode: str):
        if self.record:
            self.trace.append(AccessEvent(self.seq, self.label, loc, mode))

    # -- locations and values --
    def subscript(self, expr) -> int:
        # subscripts are computed, not recorded as reads
        if isinstance(expr, Const):
            return expr.value
        if isinstance(expr, Var):
            return self.store.get(MemLocation.scalar(expr.name), 0)
        if isinstance(expr, Neg):
            return -self.subscript(expr.operand)
        if isinstance(expr, BinOp):
            a, b = self.subscript(expr.left), self.subscript(expr.right)
            if expr.op == "/":
                return _divide(a, b)
            return a + b if expr.op == "+" else a - b if expr.op == "-" else a * b
        raise DdiError(f"unsupported subscript {expr!r}")

    def pointee(self, name: str) -> MemLocation:
        if name not in self.pointers:
            raise UnboundPointer(f"'*{name}' used before '{name}' is bound")
        return MemLocation.scalar(self.pointers[name])

    def lvalue(self, target) -> MemLocation:
        if isinstance(target, Var):
            return MemLocation.scalar(target.name)
        if isinstance(target, Index):
            return MemLocation.elem(target.name, [self.subscript(s) for s in target.subscripts])
        if isinstance(target, Deref):
            return self.pointee(target.name)
        raise DdiError(f"not assignable: {target!r}")

    def eval(self, expr) -> int:
        if isinstance(expr, Const):
            self.event(PR, "read")
            return expr.value
        if isinstance(expr, PtrRef):
            self.event(MemLocation.pointer(expr.name), "read")
            if expr.name not in self.pointers:
                return 0
            return address_of(self.pointers[expr.name])
        if isinstance(expr, (Var, Index, Deref)):
            loc = self.lvalue(expr)
            self.event(loc, "read")
            return self.store.get(loc, 0)
        if isinstance(expr, Neg):
            return -self.eval(expr.operand)
        if isinstance(expr, BinOp):
            a, b = self.eval(expr.left), self.eval(expr.right)
            if expr.op == "+":
                return a + b
            if expr.op == "-":
                return a - b
            if expr.op == "*":
                return a * b
            return _divide(a, b)
        if isinstance(expr, Cond):
            a, b = self.eval(expr.left), self.eval(expr.right)
            return int(_REL[expr.op](a, b))
        raise DdiError(f"cannot evaluate {expr!r}")

    def write(self, loc: MemLocation, value: int):
        self.event(loc, "write")
        self.store[loc] = value

    # -- statements --
    def run_list(self, stmts):
        n = 0
        while n < len(stmts):
            try:
                self.run(stmts[n])
                n += 1
            except _Goto as jump:
                for m in range(n + 1, len(stmts)):
                    if isinstance(stmts[m], Label) and stmts[m].name == jump.label:
                        n = m
                        break
                else:
                    raise

    def assign(self, stmt: Assign, bare: bool = False):
        self.begin(stmt.index, bare)
        value = self.eval(stmt.value)
        self.write(self.lvalue(stmt.target), value)

    def run(self, stmt):
        if isinstance(stmt, Label) or (isinstance(stmt, Decl) and stmt.index is None):
            return
        if isinstance(stmt, Decl):
            self.begin(stmt.index)
            for d in stmt.declarators:
                if d.init is not None:
                    self.write(MemLocation.scalar(d.name), self.eval(d.init))
        elif isinstance(stmt, Assign):
            self.assign(stmt)
        elif isinstance(stmt, PtrAssign):
            self.begin(stmt.index)
            self.event(MemLocation.scalar(stmt.target), "read")
            self.event(MemLocation.pointer(stmt.pointer), "write")
            self.pointers[stmt.pointer] = stmt.target
        elif isinstance(stmt, If):
            self.begin(stmt.index)
            taken = self.eval(stmt.cond)
            self.event(HU, "write")
            if taken and stmt.body is not None:
                self.run(stmt.body)
        elif isinstance(stmt, Read):
            self.begin(stmt.index)
            for target in stmt.targets:
                if self.cursor >= len(self.inputs):
                    raise InputExhausted(f"read at instruction {stmt.index}: no input left")
                self.event(HU, "read")
                self.write(self.lvalue(target), self.inputs[self.cursor])
                self.cursor += 1
        elif isinstance(stmt, Print):
            self.begin(stmt.index)
            values = [self.eval(a) for a in stmt.args]
            self.event(HU, "write")
            self.printed.extend(values)
        elif isinstance(stmt, Jump):
            self.begin(stmt.index)
            if stmt.kind == "break":
                raise _Break()
            if stmt.kind == "continue":
                raise _Continue()
            raise _Goto(stmt.label)
        elif isinstance(stmt, For):
            self.run_for(stmt)
        else:
            raise DdiError(f"cannot execute {stmt!r}")

    def run_for(self, loop: For):
        lid = loop.loop_id
        base = self.counters.setdefault(lid, 0)
        try:
            trips = len(iteration_values(loop, cap=self.step_limit))
        except DdiError:
            trips = None
        self.assign(loop.init, bare=True)
        done = 0
        self.loop_stack.append(lid)
        try:
            while True:
                self.begin(loop.test.index, bare=True)
                ok = self.eval(loop.test.cond)
                self.event(HU, "write")
                if not ok:
                    break
                done += 1
                self.counters[lid] = base + done
                try:
                    self.run_list(loop.body)
                except _Break:
                    break
                except _Continue:
                    pass
                self.assign(loop.incr, bare=True)
        finally:
            self.loop_stack.pop()
        self.counters[lid] = base + (trips if trips is not None else done)

    def execute(self) -> ExecutionResult:
        self.run_list(self.prog.body)
        store = dict(sorted(self.store.items()))
        for p, target in sorted(self.pointers.items()):
            store[MemLocation.pointer(p)] = address_of(target)
        return ExecutionResult(list(self.printed), store, self.trace)


def interpret(prog: Program, inputs=(), step_limit: int = DEFAULT_STEP_LIMIT,
              trace: bool = False) -> ExecutionResult:
    """Run ``prog``; uninitialised variables read as 0, division truncates."""
    return Interpreter(prog, inputs, step_limit, trace).execute()
