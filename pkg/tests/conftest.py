import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from multicut_lab import build_graph  # noqa: E402


@pytest.fixture
def triangle():
    # edges e01, e12, e02
    return build_graph(3, [(0, 1, -5.0), (1, 2, -5.0), (0, 2, 4.0)])


@pytest.fixture
def path3():
    return build_graph(3, [(0, 1, -1.0), (1, 2, -1.0)])


def pytest_terminal_summary(terminalreporter):
    from helpers import ACCEPTANCE

    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
