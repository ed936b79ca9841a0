"""Render programs back to mini-language source."""

from __future__ import annotations

from .syntax import (
    Assign, BinOp, Cond, Const, Decl, Deref, For, If, Index, Jump, Label, Neg,
    Print, PtrAssign, PtrRef, Read, Var,
)

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def format_expr(e, parent: int = 0, right: bool = False) -> str:
    if isinstance(e, Const):
        return f"({e.value})" if e.value < 0 else str(e.value)
    if isinstance(e, (Var, PtrRef)):
        return e.name
    if isinstance(e, Deref):
        return f"*{e.name}"
    if isinstance(e, Index):
        return e.name + "".join(f"[{format_expr(s)}]" for s in e.subscripts)
    if isinstance(e, Neg):
        if isinstance(e.operand, (Var, Index, Deref)):
            return f"-{format_expr(e.operand)}"
        # "-5" would re-parse as a literal and "--" lexes as decrement
        return f"-({format_expr(e.operand)})"
    if isinstance(e, BinOp):
        p = _PREC[e.op]
        text = f"{format_expr(e.left, p)} {e.op} {format_expr(e.right, p, right=True)}"
        if p < parent or (right and p == parent):
            return f"({text})"
        return text
    if isinstance(e, Cond):
        return f"{format_expr(e.left)} {e.op} {format_expr(e.right)}"
    raise TypeError(f"not an expression: {e!r}")


def _assign(a: Assign) -> str:
    v = a.value
    if (isinstance(a.target, Var) and isinstance(v, BinOp) and v.op in "+-"
            and v.left == a.target and v.right == Const(1)):
        return f"{a.target.name}{v.op * 2}"
    return f"{format_expr(a.target)} = {format_expr(v)}"


def _declarator(d) -> str:
    if d.kind == "pointer":
        return f"*{d.name}"
    if d.kind == "array":
        return d.name + "".join(f"[{'' if n is None else n}]" for n in d.dims)
    if d.init is not None:
        return f"{d.name} = {format_expr(d.init)}"
    return d.name


def _simple(stmt) -> str:
    if stmt is None:
        return ";"
    if isinstance(stmt, Assign):
        return _assign(stmt) + ";"
    if isinstance(stmt, PtrAssign):
        return f"{stmt.pointer} = &{stmt.target};"
    if isinstance(stmt, Read):
        return "read " + ", ".join(format_expr(t) for t in stmt.targets) + ";"
    if isinstance(stmt, Print):
        return "print " + ", ".join(format_expr(a) for a in stmt.args) + ";"
    if isinstance(stmt, Jump):
        return f"goto {stmt.label};" if stmt.kind == "goto" else f"{stmt.kind};"
    if isinstance(stmt, If):
        return f"if ({format_expr(stmt.cond)}) {_simple(stmt.body)}"
    raise TypeError(f"not a simple statement: {stmt!r}")


def _indices(stmt) -> list:
    if isinstance(stmt, If):
        return [stmt.index] + (_indices(stmt.body) if stmt.body is not None else [])
    if isinstance(stmt, Decl):
        return [] if stmt.index is None else [stmt.index]
    if isinstance(stmt, Label) or stmt is None:
        return []
    return [stmt.index]


def pretty_print(prog, show_indices: bool = False, indent: str = "    ") -> str:
    """Source text for ``prog``; ``show_indices`` appends ``// k`` comments."""
    lines = []

    def note(idx):
        if show_indices and idx:
            return "  // " + ",".join(str(i) for i in idx)
        return ""

    def emit(stmts, depth):
        pad = indent * depth
        for stmt in stmts:
            if isinstance(stmt, Label):
                lines.append(f"{pad}{stmt.name}:")
            elif isinstance(stmt, Decl):
                text = "int " + ", ".join(_declarator(d) for d in stmt.declarators) + ";"
                lines.append(pad + text + note(_indices(stmt)))
            elif isinstance(stmt, For):
                header = (f"for ({_assign(stmt.init)}; {format_expr(stmt.test.cond)}; "
                          f"{_assign(stmt.incr)}) {{")
                idx = [stmt.init.index, stmt.test.index, stmt.incr.index]
                lines.append(pad + header + note(idx))
                emit(stmt.body, depth + 1)
                lines.append(pad + "}")
            else:
                lines.append(pad + _simple(stmt) + note(_indices(stmt)))

    emit(prog.body, 0)
    return "\n".join(lines) + ("\n" if lines else "")
