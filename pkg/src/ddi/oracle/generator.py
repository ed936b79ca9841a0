"""Seeded random programs for differential testing.

Bounds: at most 8 variables (loop variables included), 2 arrays, 1 pointer,
loops nested at most 2 deep with at most 6 iterations, 20 statements.
Divisors are nonzero literals and subscripts are affine in the enclosing
loop variables, so every program expands and runs without error.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from ..expander import expand_loops
from ..frontend import parse_program
from ..syntax import Kind, Program

MAX_VARIABLES = 8
MAX_ARRAYS = 2
MAX_POINTERS = 1
MAX_DEPTH = 2
MAX_TRIPS = 6
MAX_STATEMENTS = 20

_SCALARS = "abcdefgh"
_LOOP_VARS = "ij"
_ARRAYS = "xy"


@dataclass(frozen=True)
class GeneratedProgram:
    seed: int
    source: str
    program: Program
    input_count: int  # read instances in the unrolled program

    def random_inputs(self, rng: random.Random) -> list:
        return [rng.randint(-9, 9) for _ in range(self.input_count)]


class ProgramGenerator:
    def __init__(self, rng: random.Random):
        self.rng = rng
        n_loop = rng.randint(0, 2)
        n_scalar = rng.randint(2, MAX_VARIABLES - n_loop)
        self.loop_vars = list(_LOOP_VARS[:n_loop])
        self.scalars = list(_SCALARS[:n_scalar])
        self.arrays = list(_ARRAYS[:rng.randint(0, MAX_ARRAYS)])
        self.pointer = "p" if rng.random() < 0.4 else None
        # the pointer binding and the closing print take two slots
        self.budget = rng.randint(4, MAX_STATEMENTS - 2)
        self.label_name = "done" if rng.random() < 0.2 else None
        self.label_placed = False

    # -- expressions --
    def const(self) -> str:
        v = self.rng.randint(-5, 9)
        return f"({v})" if v < 0 else str(v)

    def subscript(self, scope) -> str:
        r = self.rng
        if not scope or r.random() < 0.25:
            return str(r.randint(0, 6))
        v = r.choice(scope)
        form = r.randrange(4)
        if form == 0:
            return v
        if form == 1:
            return f"{v} + {r.randint(1, 2)}"
        if form == 2:
            return f"{v} - {r.randint(1, 2)}"
        return f"2 * {v}"

    def operand(self, scope) -> str:
        r = self.rng
        choices = ["const", "scalar", "scalar"]
        if self.arrays:
            choices.append("array")
        if self.pointer:
            choices.append("deref")
        if scope:
            choices.append("loopvar")
        kind = r.choice(choices)
        if kind == "const":
            return self.const()
        if kind == "scalar":
            return r.choice(self.scalars)
        if kind == "array":
            return f"{r.choice(self.arrays)}[{self.subscript(scope)}]"
        if kind == "deref":
            return "*p"
        return r.choice(scope)

    def expr(self, scope) -> str:
        r = self.rng
        shape = r.randrange(6)
        a = self.operand(scope)
        if shape == 0:
            return a
        if shape in (1, 2):
            return f"{a} {r.choice('+-')} {self.operand(scope)}"
        if shape == 3:
            k = r.randint(-3, 4)
            return f"{a} * ({k})" if k < 0 else f"{a} * {k}"
        if shape == 4:
            d = r.choice([-3, -2, 2, 3, 5])
            return f"{a} / {d}"
        return f"{a} + {self.operand(scope)} - {self.operand(scope)}"

    def lvalue(self, scope) -> str:
        r = self.rng
        choices = ["scalar", "scalar"]
        if self.arrays:
            choices.append("array")
        if self.pointer:
            choices.append("deref")
        kind = r.choice(choices)
        if kind == "scalar":
            return r.choice(self.scalars)
        if kind == "array":
            return f"{r.choice(self.arrays)}[{self.subscript(scope)}]"
        return "*p"

    def cond(self, scope) -> str:
        op = self.rng.choice(["<", "<=", ">", ">=", "==", "!="])
        return f"{self.operand(scope)} {op} {self.operand(scope)}"

    # -- statements --
    def simple(self, scope, in_loop: bool) -> str:
        r = self.rng
        roll = r.random()
        if roll < 0.55:
            return f"{self.lvalue(scope)} = {self.expr(scope)};"
        if roll < 0.65:
            targets = [self.lvalue(scope) for _ in range(r.randint(1, 2))]
            return "read " + ", ".join(targets) + ";"
        if roll < 0.8:
            args = [self.expr(scope) for _ in range(r.randint(1, 2))]
            if self.pointer and r.random() < 0.1:
                args.append("p")
            return "print " + ", ".join(args) + ";"
        if roll < 0.88:
            return f"{self.lvalue(scope)} = {r.randint(-5, 9)};"
        return ";"

    def guarded(self, scope, in_loop: bool) -> str:
        r = self.rng
        roll = r.random()
        if in_loop and roll < 0.15:
            body = r.choice(["break;", "continue;"])
        elif self.label_name and not in_loop and not self.label_placed and roll < 0.3:
            body = f"goto {self.label_name};"
        else:
            body = self.simple(scope, in_loop)
        return f"if ({self.cond(scope)}) {body}"

    def loop(self, scope, depth: int, indent: str) -> list:
        r = self.rng
        var = self.loop_vars[len(scope)]
        lo = r.randint(0, 3)
        trips = r.randint(0, MAX_TRIPS)
        if r.random() < 0.25:
            hi = lo + trips
            header = f"for ({var} = {hi}; {var} > {lo}; {var}--)"
        elif r.random() < 0.3:
            header = f"for ({var} = {lo}; {var} <= {lo + trips - 1}; {var}++)"
        else:
            header = f"for ({var} = {lo}; {var} < {lo + trips}; {var}++)"
        inner = scope + [var]
        lines = [indent + header + " {"]
        for _ in range(r.randint(1, 4)):
            if self.budget <= 0:
                break
            lines += self.statement(inner, depth + 1, indent + "    ")
        lines.append(indent + "}")
        return lines

    def statement(self, scope, depth: int, indent: str) -> list:
        r = self.rng
        self.budget -= 1
        in_loop = bool(scope)
        roll = r.random()
        if roll < 0.2 and depth < len(self.loop_vars) and depth < MAX_DEPTH:
            return self.loop(scope, depth, indent)
        if roll < 0.4:
            return [indent + self.guarded(scope, in_loop)]
        return [indent + self.simple(scope, in_loop)]

    def declaration(self) -> str:
        r = self.rng
        parts = []
        for s in self.scalars:
            parts.append(f"{s} = {r.randint(-5, 9)}" if r.random() < 0.4 else s)
        parts += self.loop_vars
        parts += [f"{a}[]" for a in self.arrays]
        if self.pointer:
            parts.append("*p")
        return "int " + ", ".join(parts) + ";"

    def source(self) -> str:
        lines = [self.declaration()]
        if self.pointer:
            lines.append(f"p = &{self.rng.choice(self.scalars)};")
        while self.budget > 0:
            if self.label_name and not self.label_placed and self.rng.random() < 0.1:
                lines.append(f"{self.label_name}:")
                self.label_placed = True
            lines += self.statement([], 0, "")
        if self.label_name and not self.label_placed:
            lines.append(f"{self.label_name}:")
        lines.append("print " + ", ".join(self.scalars) + ";")
        return "\n".join(lines) + "\n"


def input_count(prog: Program) -> int:
    xp = expand_loops(prog)
    return sum(1 for i in xp.instances if i.instr.kind is Kind.INPUT)


def generate(seed: int, index: int = 0) -> GeneratedProgram:
    """The ``index``-th program of stream ``seed``; identical across runs."""
    rng = random.Random(seed * 1_000_003 + index)
    src = ProgramGenerator(rng).source()
    prog = parse_program(src)
    return GeneratedProgram(seed * 1_000_003 + index, src, prog, input_count(prog))


def generate_many(count: int, seed: int = 0):
    for n in range(count):
        yield generate(seed, n)
