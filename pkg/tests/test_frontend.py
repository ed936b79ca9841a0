import pytest
from hypothesis import given, settings, strategies as st

from ddi import load_example, parse_program, pretty_print
from ddi.errors import ParseError, UnknownIdentifier, UnsupportedConstruct
from ddi.oracle import generate
from ddi.syntax import Assign, BinOp, Const, Decl, Deref, For, If, Kind, Neg, Var

from util import EXAMPLES


@pytest.mark.parametrize("name", EXAMPLES)
def test_examples_parse(name):
    prog = load_example(name)
    assert prog.instructions


def test_example1_indices():
    prog = load_example("ex1")
    assert prog.labels() == [1, 2, 3, 4]
    assert [i.kind for i in prog.instructions] == [
        Kind.ARITHMETIC, Kind.ARITHMETIC, Kind.CONDITIONAL, Kind.ARITHMETIC]
    assert prog.instructions[-1].guarded


def test_for_header_takes_three_indices():
    prog = load_example("ex2")
    loop = next(prog.loops())
    assert (loop.init.index, loop.test.index, loop.incr.index) == (1, 2, 3)
    assert [i.index for i in prog.instructions if not i.is_header] == [4, 5, 6]
    assert all(i.loops == (1,) for i in prog.instructions if not i.is_header)


def test_initialised_declaration_shares_one_index():
    prog = load_example("ex5")
    decl = [i for i in prog.instructions if i.kind is Kind.DECLARATION]
    assert [(i.index, i.part, i.ast.name) for i in decl] == [(1, 0, "b"), (1, 1, "c")]


def test_sugar_is_normalised():
    prog = parse_program("int x; x++; x -= 2;")
    a, b = prog.body[1:]
    assert a == Assign(1, Var("x"), BinOp("+", Var("x"), Const(1)))
    assert b == Assign(2, Var("x"), BinOp("-", Var("x"), Const(2)))


def test_negative_literal_and_negation():
    prog = parse_program("int x, y; x = -3; y = -x;")
    assert prog.body[1].value == Const(-3)
    assert prog.body[2].value == Neg(Var("x"))


def test_deref_statement():
    prog = parse_program("int a, *p; p = &a; *p = 4;")
    assert prog.body[-1].target == Deref("p")


def test_empty_guard_and_nested_guard():
    prog = parse_program("int a, b; if (a < b) ; if (a < 1) if (b < 2) a = 1;")
    assert prog.body[1] == If(1, prog.body[1].cond, None)
    assert isinstance(prog.body[2].body, If)
    assert prog.labels() == [1, 2, 3, 4]


def test_comments_ignored():
    prog = parse_program("int a; /* block\n comment */ a = 1; // tail\n")
    assert prog.labels() == [1]


@pytest.mark.parametrize("src, exc", [
    ("int a; b = 1;", UnknownIdentifier),
    ("int a; while (a < 1) a = 1;", UnsupportedConstruct),
    ("int a; if (a < 1) a = 1; else a = 2;", UnsupportedConstruct),
    ("int a; a = f(1);", UnsupportedConstruct),
    ("int **p;", UnsupportedConstruct),
    ("int a, *p = &a;", UnsupportedConstruct),
    ("int a, i, *p; for (i = 0; i < 2; i++) p = &a;", UnsupportedConstruct),
    ("int a, *p; if (a < 1) p = &a;", UnsupportedConstruct),
    ("int i; for (i = 0; i < 2; i++) i = 3;", UnsupportedConstruct),
    ("int i; for (i = 0; i < 2; i++) for (i = 0; i < 2; i++) ;", UnsupportedConstruct),
    ("int a; break;", ParseError),
    ("int a; a = 1 +;", ParseError),
    ("int a; a = 1 @ 2;", ParseError),
    ("int PR;", ParseError),
    ("int a, a;", ParseError),
    ("int a; L: a = 1; goto L;", UnsupportedConstruct),
    ("int a; goto M;", UnknownIdentifier),
    ("int a; goto L; L: a = 1; L: a = 2;", ParseError),
    ("int a[]; a = 1;", ParseError),
    ("int a; if (a < 1) { a = 1; }", UnsupportedConstruct),
])
def test_rejected(src, exc):
    with pytest.raises(exc):
        parse_program(src)


def test_error_carries_position():
    with pytest.raises(ParseError) as info:
        parse_program("int a;\na = 1 +;")
    assert str(info.value).startswith("2:")
    assert info.value.category == "parse"


def test_decl_only_inside_top_level():
    with pytest.raises(UnsupportedConstruct):
        parse_program("int i; for (i = 0; i < 1; i++) { int b; }")


@pytest.mark.parametrize("name", EXAMPLES)
def test_round_trip_examples(name):
    prog = load_example(name)
    again = parse_program(pretty_print(prog))
    assert again.body == prog.body


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**6))
def test_round_trip_generated(seed):
    prog = generate(seed).program
    text = pretty_print(prog)
    again = parse_program(text)
    assert again.body == prog.body
    assert pretty_print(again) == text


def test_pretty_print_indices():
    text = pretty_print(load_example("ex2"), show_indices=True)
    assert "for (i = 2; i < 5; i++) {  // 1,2,3" in text
    assert "a[i + 1] = a[i - 1] + c[i - 1];  // 5" in text


def test_negation_prints_unambiguously():
    prog = parse_program("int a, b; a = -(b - 1); b = a - (-2);")
    assert parse_program(pretty_print(prog)).body == prog.body


def test_for_body_single_statement():
    prog = parse_program("int s, i; for (i = 0; i < 3; i++) s = s + i;")
    loop = prog.body[1]
    assert isinstance(loop, For) and len(loop.body) == 1
    assert isinstance(prog.body[0], Decl) and prog.body[0].index is None
