"""Data dependence identification over a small C-like language.

Typical pipeline::

    prog = parse_program(text)
    xp = expand_loops(prog)
    g = build_graph(xp)
    deps = find_dependences(g)
"""

from importlib import resources

from .analyzer import (
    Dependence, dependence_closure, find_dependences, parallelizability_report,
)
from .classifier import HU, PR, MemLocation, classify_instruction, extract_access_pair
from .errors import DdiError
from .expander import expand_loops
from .frontend import SourceProgram, parse_file, parse_program
from .graph import DdiGraph, build_graph, to_adjacency_matrix, to_dot
from .printer import pretty_print
from .transforms import (
    TransformReport, detect_induction_variables, eliminate_dead_code, propagate_constants,
    propagate_constants_fixpoint,
)

__version__ = "0.1.0"


def example_source(name: str) -> str:
    """Text of a bundled example, e.g. ``example_source("ex1")``."""
    return resources.files(__package__).joinpath("examples", f"{name}.ddi").read_text()


def load_example(name: str):
    return parse_program(SourceProgram(example_source(name), f"{name}.ddi"))


def analyze(source: str):
    """Parse, expand, build the graph and find dependences in one call."""
    xp = expand_loops(parse_program(source))
    g = build_graph(xp)
    deps = find_dependences(g)
    return g, deps, parallelizability_report(deps, xp.loops)


__all__ = [
    "HU", "PR", "DdiError", "DdiGraph", "Dependence", "MemLocation", "SourceProgram",
    "TransformReport", "analyze", "build_graph", "classify_instruction",
    "dependence_closure", "detect_induction_variables", "eliminate_dead_code",
    "example_source", "expand_loops", "extract_access_pair", "find_dependences",
    "load_example", "parallelizability_report", "parse_file", "parse_program",
    "pretty_print", "propagate_constants", "propagate_constants_fixpoint",
    "to_adjacency_matrix", "to_dot",
]
