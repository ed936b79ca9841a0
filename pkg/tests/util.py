"""Shared helpers for the test modules."""

from __future__ import annotations

import re

from ddi import build_graph, expand_loops, load_example, parse_program

EXAMPLES = [f"ex{n}" for n in range(1, 10)]


def pipeline(src_or_prog):
    prog = parse_program(src_or_prog) if isinstance(src_or_prog, str) else src_or_prog
    xp = expand_loops(prog)
    return prog, xp, build_graph(xp)


def example(name):
    return pipeline(load_example(name))


def keys(deps) -> set:
    return {d.key() for d in deps}


def rename_source(src: str, mapping: dict) -> str:
    """Rename whole-word identifiers; keywords never appear in ``mapping``."""
    if not mapping:
        return src
    pattern = re.compile(r"\b(" + "|".join(map(re.escape, mapping)) + r")\b")
    return pattern.sub(lambda m: mapping[m.group(1)], src)


ACCEPTANCE_LINES: list = []


def criterion(number: int, title: str, ok: bool, detail: str = "") -> None:
    """Record and print one acceptance line, then fail the test if ``ok`` is false."""
    line = f"{'PASS' if ok else 'FAIL'} criterion {number:>2}: {title}"
    if detail:
        line += f" ({detail})"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line
