"""Lexer and recursive-descent parser for the mini-language.

Grammar summary (full EBNF in docs/grammar.md)::

    program   := stmt*
    stmt      := decl | simple ';' | if | for | label
    decl      := 'int' declarator (',' declarator)* ';'
    declarator:= '*' ID | ID ('[' INT? ']')+ | ID ('=' expr)?
    simple    := lvalue '=' expr | ID '=' '&' ID | ID ('++'|'--') | ID ('+='|'-=') expr
               | 'read' lvalue (',' lvalue)* | 'print' expr (',' expr)*
               | 'break' | 'continue' | 'goto' ID
    if        := 'if' '(' expr relop expr ')' stmt
    for       := 'for' '(' simple ';' expr relop expr ';' simple ')' (stmt | '{' stmt* '}')

Every indexed statement receives the next instruction index in textual order;
a for-header takes three consecutive indices.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import NamedTuple

from .errors import ParseError, UnknownIdentifier, UnsupportedConstruct
from .syntax import (
    RELOPS, Assign, BinOp, Cond, Const, Decl, Declarator, Deref, For, If, Index,
    Jump, Label, LoopTest, Neg, Print, Program, PtrAssign, PtrRef, Read, Var,
)

KEYWORDS = {"int", "if", "for", "read", "print", "break", "continue", "goto"}
UNSUPPORTED_KEYWORDS = {"while", "do", "else", "return", "switch", "void", "float", "char"}
RESERVED = {"PR", "HU"}


@dataclass(frozen=True)
class SourceProgram:
    text: str
    origin: str = "<stdin>"


class Token(NamedTuple):
    kind: str
    value: str
    line: int
    col: int


_TOKEN_SPEC = [
    ("COMMENT", r"//[^\n]*|/\*(?s:.*?)\*/"),
    ("NUMBER", r"\d+"),
    ("ID", r"[A-Za-z_]\w*"),
    ("OP", r"\+\+|--|\+=|-=|<=|>=|==|!=|[-+*/<>=&()\[\]{};,:]"),
    ("NEWLINE", r"\n"),
    ("SKIP", r"[ \t\r]+"),
    ("MISMATCH", r"."),
]
_MASTER = re.compile("|".join(f"(?P<{n}>{p})" for n, p in _TOKEN_SPEC))


def tokenize(text: str) -> list:
    tokens = []
    line, line_start = 1, 0
    for mo in _MASTER.finditer(text):
        kind, value = mo.lastgroup, mo.group()
        col = mo.start() - line_start + 1
        if kind == "NEWLINE":
            line, line_start = line + 1, mo.end()
        elif kind == "COMMENT":
            if "\n" in value:
                line += value.count("\n")
                line_start = mo.start() + value.rfind("\n") + 1
        elif kind == "SKIP":
            pass
        elif kind == "MISMATCH":
            raise ParseError(f"unexpected character {value!r}", line, col)
        else:
            if kind == "ID" and value in KEYWORDS:
                kind = value
            tokens.append(Token(kind, value, line, col))
    tokens.append(Token("EOF", "", line, len(text) - line_start + 1))
    return tokens


class Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0
        self.next_index = 1
        self.declared: dict = {}
        self.loop_vars: list = []
        self.in_if = False

    # -- token helpers -------------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, offset: int = 1) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def advance(self) -> Token:
        t = self.tok
        self.pos += 1
        return t

    def expect(self, value: str) -> Token:
        if self.tok.value != value or self.tok.kind == "EOF":
            self.fail(f"expected {value!r}, found {self.tok.value or 'end of input'!r}")
        return self.advance()

    def fail(self, message: str, tok: Token | None = None, exc=ParseError):
        tok = tok or self.tok
        raise exc(message, tok.line, tok.col)

    def take_index(self) -> int:
        k = self.next_index
        self.next_index += 1
        return k

    # -- program -------------------------------------------------------------

    def parse(self) -> list:
        body = []
        while self.tok.kind != "EOF":
            stmt = self.statement(top=True)
            if stmt is not None:
                body.append(stmt)
        return body

    def statement(self, top: bool = False):
        t = self.tok
        if t.kind == "ID" and t.value in UNSUPPORTED_KEYWORDS:
            self.fail(f"'{t.value}' is not supported", exc=UnsupportedConstruct)
        if t.value == ";" and t.kind == "OP":
            self.advance()
            return None
        if t.value == "{" and t.kind == "OP":
            self.fail("nested blocks are only allowed as loop bodies")
        if t.kind == "int":
            if not top:
                self.fail("declarations are only allowed at top level", exc=UnsupportedConstruct)
            return self.declaration()
        if t.kind == "if":
            return self.if_stmt()
        if t.kind == "for":
            return self.for_stmt()
        if t.kind == "ID" and self.peek().value == ":":
            self.advance()
            self.advance()
            if t.value in RESERVED:
                self.fail(f"'{t.value}' is reserved", t)
            return Label(t.value, t.line)
        stmt = self.simple()
        self.expect(";")
        return stmt

    def declaration(self) -> Decl:
        start = self.advance()
        decls = []
        while True:
            decls.append(self.declarator())
            if self.tok.value != ",":
                break
            self.advance()
        self.expect(";")
        index = self.take_index() if any(d.init is not None for d in decls) else None
        return Decl(index, tuple(decls), start.line)

    def declarator(self) -> Declarator:
        if self.tok.value == "*":
            self.advance()
            if self.tok.value == "*":
                self.fail("pointers to pointers are not supported", exc=UnsupportedConstruct)
            name = self.new_name()
            if self.tok.value == "=":
                self.fail("pointer initialisers are not supported; use p = &x;", exc=UnsupportedConstruct)
            return self.declare(Declarator(name, "pointer"))
        name = self.new_name()
        if self.tok.value == "[":
            dims = []
            while self.tok.value == "[":
                self.advance()
                extent = None
                if self.tok.kind == "NUMBER":
                    extent = int(self.advance().value)
                self.expect("]")
                dims.append(extent)
            if self.tok.value == "=":
                self.fail("array initialisers are not supported", exc=UnsupportedConstruct)
            return self.declare(Declarator(name, "array", tuple(dims)))
        init = None
        if self.tok.value == "=":
            self.advance()
            init = self.expr()
        return self.declare(Declarator(name, "scalar", (), init))

    def new_name(self) -> str:
        t = self.tok
        if t.kind != "ID":
            self.fail(f"expected identifier, found {t.value or 'end of input'!r}")
        if t.value in RESERVED:
            self.fail(f"'{t.value}' is reserved")
        if t.value in self.declared:
            self.fail(f"'{t.value}' is already declared")
        self.advance()
        return t.value

    def declare(self, d: Declarator) -> Declarator:
        self.declared[d.name] = d
        return d

    # -- statements ----------------------------------------------------------

    def if_stmt(self) -> If:
        start = self.advance()
        self.expect("(")
        cond = self.condition()
        self.expect(")")
        index = self.take_index()
        body_tok = self.tok
        if body_tok.kind in ("for", "int") or body_tok.value == "{":
            self.fail("an if guards exactly one simple statement", exc=UnsupportedConstruct)
        outer, self.in_if = self.in_if, True
        try:
            body = self.statement()
        finally:
            self.in_if = outer
        if isinstance(body, Label):
            self.fail("a label cannot be the guarded statement", body_tok)
        return If(index, cond, body, start.line)

    def for_stmt(self) -> For:
        start = self.advance()
        self.expect("(")
        init_tok = self.tok
        init = self.simple(header=True)
        if not isinstance(init, Assign) or not isinstance(init.target, Var):
            self.fail("loop initialiser must assign a scalar", init_tok, UnsupportedConstruct)
        var = init.target.name
        if var in self.loop_vars:
            self.fail(f"loop variable '{var}' reused by a nested loop", init_tok, UnsupportedConstruct)
        self.expect(";")
        test = LoopTest(self.take_index(), self.condition())
        self.expect(";")
        incr_tok = self.tok
        incr = self.simple(header=True)
        if not isinstance(incr, Assign):
            self.fail("loop increment must be an assignment", incr_tok, UnsupportedConstruct)
        self.expect(")")
        self.loop_vars.append(var)
        try:
            body = []
            if self.tok.value == "{":
                self.advance()
                while self.tok.value != "}":
                    if self.tok.kind == "EOF":
                        self.fail("unterminated loop body")
                    stmt = self.statement()
                    if stmt is not None:
                        body.append(stmt)
                self.advance()
            else:
                stmt = self.statement()
                if stmt is not None:
                    body.append(stmt)
        finally:
            self.loop_vars.pop()
        return For(init, test, incr, tuple(body), start.line)

    def simple(self, header: bool = False):
        t = self.tok
        if t.kind == "read":
            self.advance()
            index = self.take_index()
            targets = [self.lvalue()]
            while self.tok.value == ",":
                self.advance()
                targets.append(self.lvalue())
            for target in targets:
                self.check_write(target, t)
            return Read(index, tuple(targets), t.line)
        if t.kind == "print":
            self.advance()
            index = self.take_index()
            args = [self.print_arg()]
            while self.tok.value == ",":
                self.advance()
                args.append(self.print_arg())
            return Print(index, tuple(args), t.line)
        if t.kind in ("break", "continue"):
            self.advance()
            if not self.loop_vars:
                self.fail(f"'{t.value}' outside a loop", t)
            return Jump(self.take_index(), t.kind, None, t.line)
        if t.kind == "goto":
            self.advance()
            name = self.tok
            if name.kind != "ID":
                self.fail("expected label after goto")
            self.advance()
            return Jump(self.take_index(), "goto", name.value, t.line)
        is_deref = t.kind == "OP" and t.value == "*"
        if t.kind != "ID" and not is_deref:
            self.fail(f"expected statement, found {t.value or 'end of input'!r}")

        # pointer assignment p = &x
        if not is_deref and self.peek().value == "=" and self.peek(2).value == "&":
            return self.pointer_assign()
        if not is_deref and self.peek().value in ("++", "--"):
            name = self.advance().value
            op = self.advance().value
            target = self.scalar_ref(name, t)
            index = self.take_index()
            self.check_write(target, t, header)
            return Assign(index, target, BinOp(op[0], target, Const(1)), t.line)

        target = self.lvalue()
        op_tok = self.tok
        if op_tok.value in ("+=", "-="):
            self.advance()
            index = self.take_index()
            value = BinOp(op_tok.value[0], target, self.expr())
        else:
            self.expect("=")
            index = self.take_index()
            value = self.expr()
        self.check_write(target, t, header)
        return Assign(index, target, value, t.line)

    def pointer_assign(self) -> PtrAssign:
        t = self.advance()
        self.advance()
        self.advance()
        d = self.lookup(t.value, t)
        if d.kind != "pointer":
            self.fail(f"'{t.value}' is not a pointer", t)
        x = self.tok
        if x.kind != "ID":
            self.fail("expected identifier after '&'")
        self.advance()
        target = self.lookup(x.value, x)
        if target.kind != "scalar":
            self.fail(f"pointers may only refer to scalars, not '{x.value}'", x, UnsupportedConstruct)
        if self.loop_vars or self.in_if:
            self.fail("pointer assignment inside a loop or if is not supported", t, UnsupportedConstruct)
        return PtrAssign(self.take_index(), t.value, x.value, t.line)

    def check_write(self, target, tok: Token, header: bool = False):
        if isinstance(target, Var):
            d = self.declared[target.name]
            if d.kind == "pointer":
                self.fail(f"pointer '{target.name}' may only be assigned an address", tok, UnsupportedConstruct)
            if target.name in self.loop_vars and not header:
                self.fail(f"loop variable '{target.name}' is written inside its loop", tok, UnsupportedConstruct)

    # -- expressions ---------------------------------------------------------

    def lookup(self, name: str, tok: Token) -> Declarator:
        if name in RESERVED:
            self.fail(f"'{name}' is reserved", tok)
        d = self.declared.get(name)
        if d is None:
            self.fail(f"undeclared identifier '{name}'", tok, UnknownIdentifier)
        return d

    def scalar_ref(self, name: str, tok: Token) -> Var:
        d = self.lookup(name, tok)
        if d.kind == "array":
            self.fail(f"array '{name}' used without subscript", tok)
        if d.kind == "pointer":
            self.fail(f"pointer '{name}' used by value", tok, UnsupportedConstruct)
        return Var(name)

    def lvalue(self):
        t = self.tok
        if t.value == "*" and t.kind == "OP":
            return self.deref()
        if t.kind != "ID":
            self.fail(f"expected assignable location, found {t.value or 'end of input'!r}")
        return self.reference()

    def deref(self) -> Deref:
        self.advance()
        t = self.tok
        if t.value == "*":
            self.fail("multi-level dereference is not supported", exc=UnsupportedConstruct)
        if t.kind != "ID":
            self.fail("expected pointer name after '*'")
        self.advance()
        if self.lookup(t.value, t).kind != "pointer":
            self.fail(f"'{t.value}' is not a pointer", t)
        return Deref(t.value)

    def reference(self, allow_pointer: bool = False):
        t = self.advance()
        if t.value in UNSUPPORTED_KEYWORDS:
            self.fail(f"'{t.value}' is not supported", t, UnsupportedConstruct)
        if self.tok.value == "(":
            self.fail(f"function call '{t.value}(...)' is not supported", t, UnsupportedConstruct)
        d = self.lookup(t.value, t)
        if self.tok.value == "[":
            if d.kind != "array":
                self.fail(f"'{t.value}' is not an array", t)
            subs = []
            while self.tok.value == "[":
                self.advance()
                subs.append(self.expr())
                self.expect("]")
            if len(subs) != len(d.dims):
                self.fail(f"'{t.value}' has {len(d.dims)} dimension(s), got {len(subs)} subscript(s)", t)
            return Index(t.value, tuple(subs))
        if d.kind == "pointer" and allow_pointer:
            return PtrRef(t.value)
        return self.scalar_ref(t.value, t)

    def print_arg(self):
        if self.tok.kind == "ID" and self.peek().value in (",", ";"):
            return self.reference(allow_pointer=True)
        return self.expr()

    def condition(self) -> Cond:
        left = self.expr()
        op = self.tok
        if op.value not in RELOPS:
            self.fail(f"expected relational operator, found {op.value or 'end of input'!r}")
        self.advance()
        return Cond(op.value, left, self.expr())

    def expr(self):
        node = self.term()
        while self.tok.value in ("+", "-") and self.tok.kind == "OP":
            op = self.advance().value
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.tok.value in ("*", "/") and self.tok.kind == "OP":
            op = self.advance().value
            node = BinOp(op, node, self.unary())
        return node

    def unary(self):
        t = self.tok
        if t.value == "-" and t.kind == "OP":
            self.advance()
            if self.tok.kind == "NUMBER":
                return Const(-int(self.advance().value))
            return Neg(self.unary())
        if t.value == "*" and t.kind == "OP":
            return self.deref()
        if t.value == "&":
            self.fail("address-of is only allowed as 'p = &x;'", exc=UnsupportedConstruct)
        return self.primary()

    def primary(self):
        t = self.tok
        if t.kind == "NUMBER":
            self.advance()
            return Const(int(t.value))
        if t.value == "(" and t.kind == "OP":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        if t.kind == "ID":
            return self.reference()
        self.fail(f"expected expression, found {t.value or 'end of input'!r}")


def check_gotos(body) -> None:
    """Gotos must jump forward to a label in the same or an enclosing list."""
    labels = set()

    def collect(stmts):
        for s in stmts:
            if isinstance(s, Label):
                if s.name in labels:
                    raise ParseError(f"duplicate label '{s.name}'", s.line, 1)
                labels.add(s.name)
            elif isinstance(s, For):
                collect(s.body)

    def gotos_in(stmt):
        if isinstance(stmt, Jump) and stmt.kind == "goto":
            yield stmt
        elif isinstance(stmt, If) and stmt.body is not None:
            yield from gotos_in(stmt.body)
        elif isinstance(stmt, For):
            for s in stmt.body:
                yield from gotos_in(s)

    def check(stmts, visible):
        # visible: labels reachable forward from enclosing lists
        for i, stmt in enumerate(stmts):
            ahead = visible | {s.name for s in stmts[i + 1:] if isinstance(s, Label)}
            if isinstance(stmt, For):
                check(stmt.body, ahead)
                continue
            for g in gotos_in(stmt):
                if g.label not in labels:
                    raise UnknownIdentifier(f"undefined label '{g.label}'", g.line, 1)
                if g.label not in ahead:
                    raise UnsupportedConstruct(
                        f"goto '{g.label}' must jump forward within the same or an enclosing block",
                        g.line, 1)

    collect(body)
    check(list(body), frozenset())


def parse_program(src: SourceProgram | str) -> Program:
    """Parse source text into an indexed Program."""
    if isinstance(src, str):
        src = SourceProgram(src, "<string>")
    parser = Parser(src.text)
    body = parser.parse()
    check_gotos(body)
    return Program.from_body(body, src.origin)


def parse_file(path: str) -> Program:
    with open(path, encoding="utf-8") as fh:
        return parse_program(SourceProgram(fh.read(), path))
