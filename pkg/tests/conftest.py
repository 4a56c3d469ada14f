from pathlib import Path

import pytest

from raagmm.graph import SimplicialGraph, parse_graph
from raagmm.reductivity import WordSet

FIXTURES = Path(__file__).parent / "fixtures"

# criterion number -> (passed, message); filled by tests/test_acceptance.py
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def record(criterion: int, ok: bool, message: str) -> None:
    prev = ACCEPTANCE.get(criterion)
    if prev is not None:
        ok = ok and prev[0]
        message = f"{prev[1]}; {message}"
    ACCEPTANCE[criterion] = (ok, message)
    print(f"[criterion {criterion:2d}] {'PASS' if ok else 'FAIL'}: {message}")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, msg = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'} - {msg}")


@pytest.fixture(scope="session")
def free4():
    """Edgeless graph on x, y, b, c."""
    return parse_graph((FIXTURES / "free4.json").read_text())


@pytest.fixture(scope="session")
def issue_words(free4):
    return WordSet.parse(free4, (FIXTURES / "issue_words.txt").read_text())


@pytest.fixture(scope="session")
def fig3():
    """Eleven vertices labelled 1..11 used for the crossing examples."""
    return parse_graph((FIXTURES / "figure3.dot").read_text())


@pytest.fixture(scope="session")
def comps():
    """Component-classification picture; b is C and a is E."""
    return parse_graph((FIXTURES / "components.json").read_text())


@pytest.fixture
def path_plus_d():
    # a - c - b path plus an isolated d
    return SimplicialGraph.from_labels("acbd", [("a", "c"), ("c", "b")])
