from pathlib import Path

import pytest

from sctlint.parser import build_signature, parse
from sctlint.rules import validate_rule

CORPUS = Path(__file__).resolve().parent.parent / "corpus"
GOLDEN = Path(__file__).resolve().parent / "golden"

NAT = """
Nat : Type.
0 : Nat.
S : Nat -> Nat.
"""


def load(text):
    """Parse text, build its signature and validate its rules."""
    source = parse(text)
    sig = build_signature(source)
    rules = [validate_rule(r, sig, i) for i, r in enumerate(source.rules)]
    return source, sig, rules


def corpus_text(name):
    return (CORPUS / name).read_text()


def corpus_files():
    return sorted(CORPUS.glob("*.dk"))


@pytest.fixture
def peano():
    return load(corpus_text("peano.dk"))


@pytest.fixture
def int_zero():
    return load(corpus_text("int_return_zero.dk"))


def pytest_terminal_summary(terminalreporter):
    lines = []
    for outcome in ("passed", "failed"):
        for rep in terminalreporter.stats.get(outcome, []):
            if rep.when == "call" and "test_acceptance.py::test_criterion_" in rep.nodeid:
                name = rep.nodeid.split("::test_criterion_")[1]
                lines.append((name, outcome))
    if lines:
        terminalreporter.section("acceptance criteria")
        for name, outcome in sorted(lines):
            num, _, title = name.partition("_")
            terminalreporter.write_line(f"criterion {int(num):2d} {title:<22} {'PASS' if outcome == 'passed' else 'FAIL'}")
