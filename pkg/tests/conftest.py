import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from elemsym.polytope import BoxDomain  # noqa: E402
from elemsym.symfun import SymCombo  # noqa: E402


@pytest.fixture
def foregger():
    phi = SymCombo(3, (0.0, 0.0, -0.5, 1.0))
    dom = BoxDomain((0.375, 0.375, 0.125), (0.625, 0.625, 0.375), 1.25)
    return dom, phi


ACCEPTANCE: list[str] = []


@pytest.fixture
def record():
    """Log one PASS/FAIL line for an acceptance criterion."""

    def _record(name: str, ok: bool, detail: str = ""):
        line = f"{'PASS' if ok else 'FAIL'}  {name}" + (f"  [{detail}]" if detail else "")
        ACCEPTANCE.append(line)
        print(line)
        return ok

    return _record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
