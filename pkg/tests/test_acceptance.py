"""Acceptance criteria, one test per criterion at its stated tolerance.

Each test prints a single PASS/FAIL line; the lines are repeated in the
pytest terminal summary.
"""

import random
import statistics
import time

from ddi import (
    build_graph, detect_induction_variables, eliminate_dead_code, expand_loops, find_dependences,
    load_example, parallelizability_report, parse_program, propagate_constants,
    propagate_constants_fixpoint, to_adjacency_matrix,
)
from ddi.oracle import generate, interpret, verify_equivalence

from util import EXAMPLES, criterion, example, pipeline, rename_source

EXAMPLE1_MATRIX = {
    ("a", "b"): ["4"], ("a", "c"): ["1"], ("a", "d"): ["2"], ("b", "c"): ["1"],
    ("c", "HU"): ["3"], ("d", "HU"): ["3"], ("PR", "b"): ["4"], ("PR", "d"): ["2"],
}

EXAMPLE2_INSTANCES = [
    ("4.1", "[{b[2],c[2]},{a[2]}]"), ("5.1", "[{a[1],c[1]},{a[3]}]"), ("6.1", "[{b[2]},{c[1]}]"),
    ("4.2", "[{b[3],c[3]},{a[3]}]"), ("5.2", "[{a[2],c[2]},{a[4]}]"), ("6.2", "[{b[3]},{c[2]}]"),
    ("4.3", "[{b[4],c[4]},{a[4]}]"), ("5.3", "[{a[3],c[3]},{a[5]}]"), ("6.3", "[{b[4]},{c[3]}]"),
]

# body statements are instructions 7 and 8 once the two loop headers are numbered
EXAMPLE3_BODY_EDGES = {
    ("c[0][0]", "a[1][1]", "7.1"), ("c[0][1]", "a[1][2]", "7.2"),
    ("c[1][0]", "a[2][1]", "7.3"), ("c[1][1]", "a[2][2]", "7.4"),
    ("a[0][1]", "c[1][1]", "8.1"), ("a[0][2]", "c[1][2]", "8.2"),
    ("a[1][1]", "c[2][1]", "8.3"), ("a[1][2]", "c[2][2]", "8.4"),
}
EXAMPLE3_HEADER_EDGES = {
    ("PR", "i", "1"), ("PR", "HU", "2"), ("i", "HU", "2"), ("PR", "i", "3"), ("i", "i", "3"),
    ("PR", "j", "4"), ("PR", "HU", "5"), ("j", "HU", "5"), ("PR", "j", "6"), ("j", "j", "6"),
}


def test_criterion_01_example1_matrix():
    start = time.perf_counter()
    _, _, g = example("ex1")
    m = to_adjacency_matrix(g)
    cells = {(r, c): sorted(m.cell(r, c)) for r in m.nodes for c in m.nodes if m.cell(r, c)}
    elapsed = time.perf_counter() - start
    ok = cells == EXAMPLE1_MATRIX and len(g.edges) == 8 and elapsed < 1
    criterion(1, "Example 1 adjacency matrix", ok, f"{len(g.edges)} edges, {elapsed:.3f}s")


def test_criterion_02_example2_carried_flow():
    start = time.perf_counter()
    _, xp, g = example("ex2")
    instances = [(str(i.label), str(i.access)) for i in xp.instances if i.label.in_body]
    deps = find_dependences(g)
    carried = {(str(d.earlier), str(d.later), str(d.location))
               for d in deps if d.kind == "flow" and d.carried}
    verdicts = parallelizability_report(deps, xp.loops)
    elapsed = time.perf_counter() - start
    ok = (instances == EXAMPLE2_INSTANCES
          and {("4.1", "5.2", "a[2]"), ("4.2", "5.3", "a[3]")} <= carried
          and [v.parallelizable for v in verdicts] == [False]
          and elapsed < 1)
    criterion(2, "Example 2 instances, carried flow, verdict", ok, f"{elapsed:.3f}s")


def test_criterion_03_example3_edges():
    _, _, g = example("ex3")
    triples = set(g.triples())
    body = {t for t in triples if "." in t[2]}
    header = triples - body
    ok = body == EXAMPLE3_BODY_EDGES and header == EXAMPLE3_HEADER_EDGES
    criterion(3, "Example 3 labelled edges", ok, f"{len(body)} body, {len(header)} header")


def test_example3_unshifted_row_variant_differs():
    # reading c[i][j-1] instead of c[i-1][j-1] moves every 7.k source
    _, _, g = pipeline("""int a[][], c[][], i, j;
        for (i = 1; i < 3; i++) for (j = 1; j < 3; j++) { a[i][j] = c[i][j-1]; c[i][j] = a[i-1][j]; }""")
    body = {t for t in g.triples() if "." in t[2]}
    assert ("c[1][0]", "a[1][1]", "7.1") in body
    assert body != EXAMPLE3_BODY_EDGES


def _dce_case(name):
    prog = load_example(name)
    out, report = eliminate_dead_code(build_graph(expand_loops(prog)), prog)
    return report, interpret(prog).printed == interpret(out).printed


def test_criterion_04_dead_code():
    r5, same5 = _dce_case("ex5")
    r6, same6 = _dce_case("ex6")
    ok = (2 in r5.removed_instructions and "c" in r5.removed_variables and same5
          and r6.removed_instructions == {2} and same6)
    criterion(4, "Examples 5 and 6 dead code", ok,
              f"ex5 removed {sorted(r5.removed_instructions)} {sorted(r5.removed_variables)}, "
              f"ex6 removed {sorted(r6.removed_instructions)}")


def test_criterion_05_constant_propagation():
    prog = load_example("ex7")
    out, report = propagate_constants(build_graph(expand_loops(prog)), prog)
    before, after = interpret(prog).printed, interpret(out).printed
    ok = report.rewritten_reads == [(2, "b", 3)] and before == after == [8]
    criterion(5, "Example 7 constant propagation", ok, f"printed {after}")


def test_criterion_06_induction_variables():
    prog = load_example("ex8")
    report = detect_induction_variables(build_graph(expand_loops(prog)), prog)
    ok = (report.paper_rule_basic == {"i", "s"} and report.induction_basic == {"i"}
          and report.induction_derived == {"c"} and report.flagged == {"s"})
    criterion(6, "Example 8 induction variables", ok)


def test_criterion_07_pointers():
    _, _, g = example("ex9")
    dashed = set(g.triples(dashed=True))
    solid = set(g.triples(dashed=False))
    deps = find_dependences(g)
    keys = {(d.kind, str(d.earlier), str(d.later), str(d.location)) for d in deps}
    through_dashed = {d for d in deps if str(d.earlier) == "2" or str(d.later) == "2"}
    ok = (dashed == {("a", "p", "2")} and ("a", "c", "3") in solid
          and ("flow", "1", "3", "a") in keys and not through_dashed)
    criterion(7, "Example 9 pointer edges", ok)


def test_criterion_08_oracle_equivalence():
    start = time.perf_counter()
    mismatches = [gp.seed for gp in (generate(8, n) for n in range(1000))
                  if not verify_equivalence(gp.program).passed]
    elapsed = time.perf_counter() - start
    ok = not mismatches and elapsed < 60
    criterion(8, "analyzer equals brute-force oracle on 1000 programs", ok,
              f"{len(mismatches)} mismatches, {elapsed:.1f}s")


def test_criterion_09_semantic_preservation():
    failures = []
    for n in range(500):
        gp = generate(9, n)
        prog = gp.program
        g = build_graph(expand_loops(prog))
        variants = {
            "dce": eliminate_dead_code(g, prog)[0],
            "cp": propagate_constants(g, prog)[0],
            "cp-iterate": propagate_constants_fixpoint(g, prog)[0],
        }
        rng = random.Random(gp.seed)
        for _ in range(3):
            inputs = gp.random_inputs(rng)
            want = interpret(prog, inputs).printed
            for name, out in variants.items():
                if interpret(out, inputs).printed != want:
                    failures.append((gp.seed, name))
    criterion(9, "dead code and constant passes preserve output (500 programs x 3 inputs)",
              not failures, f"{len(failures)} differences")


def _renaming(prog, rng):
    names = sorted(prog.declared)
    fresh = rng.sample([f"v{k}" for k in range(100)], len(names))
    return dict(zip(names, fresh))


def test_criterion_10_determinism():
    repeat_ok = all(
        len({build_graph(expand_loops(load_example(name))).to_json() for _ in range(5)}) == 1
        for name in EXAMPLES
    )
    rng = random.Random(10)
    iso_failures = 0
    for n in range(100):
        gp = generate(10, n)
        mapping = _renaming(gp.program, rng)
        _, _, g1 = pipeline(gp.source)
        _, _, g2 = pipeline(rename_source(gp.source, mapping))
        mapped = {(rename_source(s, mapping), rename_source(d, mapping), l, dashed)
                  for s, d, l, dashed in ((str(e.src), str(e.dst), str(e.label), e.dashed) for e in g1.edges)}
        renamed = {(str(e.src), str(e.dst), str(e.label), e.dashed) for e in g2.edges}
        if mapped != renamed or len(g1.nodes) != len(g2.nodes):
            iso_failures += 1
    criterion(10, "byte-identical rebuilds and rename isomorphism", repeat_ok and not iso_failures,
              f"{iso_failures} of 100 rename tests failed")


def _straight_line(n: int) -> str:
    names = [f"v{k}" for k in range(n)]
    lines = ["int " + ", ".join(names) + ";"]
    lines += [f"{v} = {k};" for k, v in enumerate(names[:2])]
    for k in range(2, n):
        lines.append(f"{names[k]} = {names[k - 1]} + {names[k - 2]};")
    for k in range(0, n - 2, 1):
        lines.append(f"{names[k]} = {names[k + 2]} - {names[k + 1]};")
    lines.append("print " + ", ".join(names[-2:]) + ";")
    return "\n".join(lines) + "\n"


def _median_time(n: int, runs: int = 7, batch: int = 5) -> float:
    xp = expand_loops(parse_program(_straight_line(n)))
    times = []
    for _ in range(runs):
        start = time.perf_counter()
        for _ in range(batch):
            find_dependences(build_graph(xp))
        times.append((time.perf_counter() - start) / batch)
    return statistics.median(times)


def test_criterion_11_scaling():
    _median_time(100, runs=2)  # warm-up
    t = {n: _median_time(n) for n in (100, 200, 400)}
    ratios = [t[200] / t[100], t[400] / t[200]]
    ok = max(ratios) <= 4.5
    criterion(11, "analyzer time per doubling of N", ok,
              "ratios " + ", ".join(f"{r:.2f}" for r in ratios))
