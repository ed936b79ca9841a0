import io
import json
import os
import subprocess
import sys

import pytest

from ddi import example_source
from ddi.cli import run

from util import EXAMPLES


def ddi(*argv, stdin=None, env=None, monkeypatch=None):
    out, err = io.StringIO(), io.StringIO()
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def example_file(tmp_path):
    def write(name):
        path = tmp_path / f"{name}.ddi"
        path.write_text(example_source(name))
        return str(path)
    return write


COMMANDS = [
    ["graph"], ["graph", "--dot"], ["graph", "--matrix"], ["graph", "--json"],
    ["deps"], ["deps", "--json"], ["deps", "--closure"],
    ["transform", "--dce"], ["transform", "--cp", "--dce", "--ivd", "--json"],
    ["transform", "--cp-iterate"],
    ["verify"], ["verify", "--json"], ["fmt"], ["fmt", "--indices"],
]


@pytest.mark.parametrize("name", EXAMPLES)
@pytest.mark.parametrize("command", COMMANDS, ids=" ".join)
def test_every_command_on_every_example(example_file, name, command):
    code, out, err = ddi(command[0], example_file(name), *command[1:])
    assert code == 0, err
    assert out and not err


def test_graph_text(example_file):
    _, out, _ = ddi("graph", example_file("ex9"))
    assert "a -> p [2] (dashed)" in out.splitlines()
    assert "PR -> a [1]" in out.splitlines()


def test_graph_matrix(example_file):
    _, out, _ = ddi("graph", example_file("ex1"), "--matrix")
    header = [c.strip() for c in out.splitlines()[0].split("|") if c.strip()]
    assert header == ["a", "b", "c", "d", "PR", "HU"]


def test_graph_dot(example_file):
    _, out, _ = ddi("graph", example_file("ex9"), "--dot")
    assert out.startswith("digraph")
    assert "style=dashed" in out


def test_deps_verdict_lines(example_file, monkeypatch):
    monkeypatch.setenv("DDI_COLOR", "0")
    _, out, _ = ddi("deps", example_file("ex2"))
    assert "loop 1 (i): not parallelizable" in out
    assert "FLOW 4.1 -> 5.2 on a[2] [carried]" in out
    assert "\033[" not in out


def test_deps_color(example_file, monkeypatch):
    monkeypatch.setenv("DDI_COLOR", "1")
    _, out, _ = ddi("deps", example_file("ex1"))
    assert "\033[31mFLOW 1 -> 3 on c\033[0m" in out


def test_deps_json(example_file):
    _, out, _ = ddi("deps", example_file("ex2"), "--json", "--closure")
    data = json.loads(out)
    assert data["loops"][0]["parallelizable"] is False
    assert "closure" in data


def test_transform_output(example_file):
    _, out, _ = ddi("transform", example_file("ex7"), "--cp", "--json")
    data = json.loads(out)
    assert data["report"]["rewritten_reads"]
    _, text, _ = ddi("transform", example_file("ex5"), "--dce")
    assert "// removed instructions: [2]" in text


def test_stdin(monkeypatch):
    code, out, _ = ddi("deps", "-", stdin="int a, b; a = 1; b = a;", monkeypatch=monkeypatch)
    assert code == 0
    assert "FLOW 1 -> 2 on a" in out


def test_verify_random():
    code, out, _ = ddi("verify", "--random", "20", "--seed", "3")
    assert code == 0
    assert out.strip() == "PASS: 20/20 programs agree"


def test_verify_failure_exit_code(example_file, monkeypatch):
    import ddi.oracle.verify as verify

    real = verify.find_dependences
    monkeypatch.setattr(verify, "find_dependences", lambda g: real(g)[1:])
    monkeypatch.setattr(verify.verify_equivalence, "__defaults__",
                        (verify.find_dependences,) + verify.verify_equivalence.__defaults__[1:])
    code, out, _ = ddi("verify", example_file("ex1"))
    assert code == 1
    assert "FAIL" in out


@pytest.mark.parametrize("argv", [
    [], ["bogus"], ["graph"], ["transform", "x.ddi"], ["verify"],
    ["graph", "/nonexistent/file.ddi"], ["deps", "x.ddi", "--unroll-cap", "0"],
])
def test_usage_errors(argv):
    code, out, err = ddi(*argv)
    assert code == 2
    assert err.startswith("error: usage:")
    assert err.count("\n") == 1


@pytest.mark.parametrize("source, category", [
    ("int a; a = ;", "parse"),
    ("int a; b = 1;", "unknown-identifier"),
    ("int a, i, n; for (i = 0; i < n; i++) a = i;", "symbolic-bound"),
    ("int a, i; for (i = 0; i < 100000; i++) a = i;", "unroll-cap"),
])
def test_analysis_errors(monkeypatch, source, category):
    code, out, err = ddi("deps", "-", stdin=source, monkeypatch=monkeypatch)
    assert code == 3
    assert err.startswith(f"error: {category}:")
    assert err.count("\n") == 1


def test_closure_cap(example_file):
    code, _, err = ddi("deps", example_file("ex3"), "--closure", "--closure-cap", "1")
    assert code == 3
    assert err.startswith("error: path-explosion:")


@pytest.mark.parametrize("command", [["graph", "--json"], ["deps", "--json"], ["transform", "--dce", "--ivd", "--json"]])
def test_json_is_deterministic_across_hash_seeds(command):
    path = os.path.join(os.path.dirname(__file__), "..", "src", "ddi", "examples", "ex3.ddi")
    outputs = set()
    for seed in ("0", "1", "12345"):
        env = dict(os.environ, PYTHONHASHSEED=seed)
        proc = subprocess.run([sys.executable, "-m", "ddi", command[0], path, *command[1:]],
                              capture_output=True, text=True, env=env, check=True)
        outputs.add(proc.stdout)
    assert len(outputs) == 1
