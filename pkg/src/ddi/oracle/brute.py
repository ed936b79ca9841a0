"""Dependences by exhaustive pairing of access events over the unrolled program.

This path never builds the DDI graph: it walks the instance stream directly.
"""

from __future__ import annotations

from itertools import combinations

from ..analyzer import ANTI, FLOW, INPUT, OUTPUT, Dependence, classify_carried
from ..classifier import NMAI, classify_instruction
from ..expander import ExpandedProgram
from ..syntax import Kind
from .interpreter import AccessEvent

_PAIR_KIND = {
    ("write", "read"): FLOW,
    ("read", "write"): ANTI,
    ("write", "write"): OUTPUT,
    ("read", "read"): INPUT,
}


def access_events(xp: ExpandedProgram) -> list:
    """Static access events of every memory-access instance, in execution order."""
    events = []
    for inst in xp.instances:
        if classify_instruction(inst.instr) == NMAI or inst.instr.kind is Kind.POINTER_ASSIGN:
            continue
        label = str(inst.label)
        for loc in inst.access.reads:
            events.append(AccessEvent(inst.seq, label, loc, "read"))
        for loc in inst.access.writes:
            events.append(AccessEvent(inst.seq, label, loc, "write"))
    return events


def brute_force_dependences(xp: ExpandedProgram) -> list:
    labels = {str(i.label): i.label for i in xp.instances}
    by_loc: dict = {}
    for ev in access_events(xp):
        if not ev.location.is_sentinel:
            by_loc.setdefault(ev.location, []).append(ev)

    found: dict = {}
    for loc, events in by_loc.items():
        events = list(dict.fromkeys(events))
        for e1, e2 in combinations(events, 2):
            if e1.label == e2.label:
                continue
            if e1.seq > e2.seq:
                e1, e2 = e2, e1
            d = Dependence(_PAIR_KIND[e1.mode, e2.mode], labels[e1.label], labels[e2.label], loc)
            found.setdefault(d.key(), d)
    deps = [classify_carried(d) for d in found.values()]
    deps.sort(key=Dependence.sort_key)
    return deps
