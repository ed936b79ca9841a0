"""Ground truth for the analyzer and transforms: an interpreter, a
brute-force dependence finder and a random program generator."""

from .brute import access_events, brute_force_dependences
from .generator import GeneratedProgram, generate, generate_many
from .interpreter import AccessEvent, ExecutionResult, address_of, interpret
from .verify import Verdict, verify_equivalence

__all__ = [
    "AccessEvent", "ExecutionResult", "GeneratedProgram", "Verdict", "access_events",
    "address_of", "brute_force_dependences", "generate", "generate_many", "interpret",
    "verify_equivalence",
]
