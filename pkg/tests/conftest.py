from __future__ import annotations

import sys
from importlib import resources

import pytest

from eqsem.coretype import builtin_core
from eqsem.equations import parse_program
from eqsem.terms import parse_term

# diverging eager runs build deeply nested terms; comparing them recurses
sys.setrecursionlimit(max(sys.getrecursionlimit(), 20_000))

CORPUS = resources.files("eqsem") / "corpus"
PROGRAMS = ("sqs", "map", "fst", "ones")


def corpus_text(name: str) -> str:
    return (CORPUS / name).read_text(encoding="utf-8")


def load(name: str):
    """(signature, system) of a corpus program, by stem."""
    return parse_program(corpus_text(f"{name}.eq"))


def term_in(system, text: str):
    return parse_term(text, system.env, system.signature)


@pytest.fixture(scope="session")
def sqs():
    return load("sqs")[1]


@pytest.fixture(scope="session")
def mapping():
    return load("map")[1]


@pytest.fixture(scope="session")
def fst():
    return load("fst")[1]


@pytest.fixture(scope="session")
def ones():
    return load("ones")[1]


@pytest.fixture(scope="session")
def cores(sqs):
    sig = sqs.signature
    return {m: builtin_core(m, sig) for m in ("eager", "lazy", "miranda")}


@pytest.fixture
def corpus_path():
    def path(name):
        with resources.as_file(CORPUS / name) as p:
            return str(p)
    return path


# acceptance summary: one line per criterion, printed after the run

ACCEPTANCE: dict = {}  # number -> [title, [(ok, detail), ...]]


def record(number: int, title: str, ok: bool, detail: str = "") -> str:
    entry = ACCEPTANCE.setdefault(number, [title, []])
    entry[1].append((ok, detail))
    return f"criterion {number}: {'PASS' if ok else 'FAIL'} - {title}" + (f" ({detail})" if detail else "")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        title, parts = ACCEPTANCE[number]
        ok = all(p for p, _ in parts)
        failed = [d for p, d in parts if not p and d]
        detail = "; ".join(failed) if failed else "; ".join(d for _, d in parts if d)
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'} - {title}"
        terminalreporter.write_line(line + (f" ({detail})" if detail else ""))
