"""Analyzer-versus-oracle comparison."""

from __future__ import annotations

from dataclasses import dataclass

from ..analyzer import find_dependences
from ..expander import DEFAULT_UNROLL_CAP, expand_loops
from ..graph import build_graph
from ..syntax import Program
from .brute import brute_force_dependences


@dataclass(frozen=True)
class Verdict:
    passed: bool
    analyzer_count: int
    oracle_count: int
    missing: tuple  # found by the oracle only
    extra: tuple  # found by the analyzer only

    @property
    def diff(self) -> list:
        return [f"- {' '.join(k)}" for k in self.missing] + [f"+ {' '.join(k)}" for k in self.extra]

    def __str__(self) -> str:
        head = "PASS" if self.passed else "FAIL"
        return f"{head} ({self.analyzer_count} analyzer, {self.oracle_count} oracle)"


def verify_equivalence(prog: Program, analyzer=find_dependences,
                       unroll_cap: int = DEFAULT_UNROLL_CAP) -> Verdict:
    """Compare ``analyzer`` (graph -> dependences) with the brute-force oracle."""
    xp = expand_loops(prog, unroll_cap)
    got = {d.key() for d in analyzer(build_graph(xp))}
    want = {d.key() for d in brute_force_dependences(xp)}
    return Verdict(got == want, len(got), len(want),
                   tuple(sorted(want - got)), tuple(sorted(got - want)))
