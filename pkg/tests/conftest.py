from __future__ import annotations

import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from gkzherm.fan import adjacency_graph, enumerate_chambers  # noqa: E402
from gkzherm.ratlin import build_system  # noqa: E402

ROOT = Path(__file__).resolve().parent.parent
PROBLEMS = ROOT / "problems"

B_2F1 = [[1, 1, -1, -1]]
G_2F1 = ["-1/2", "-1/3", "-4/5", "0"]
B_F4 = [[-1, -1, 1, 0, 1, 0], [-1, -1, 0, 1, 0, 1]]
G_F4 = ["-1/2", "-1/3", "-4/5", "-6/7", "0", "0"]

HALF = Fraction(1, 2)
TAU_2F1 = [(-HALF,), (HALF,)]
TAU_F4 = [(-HALF, -HALF), (-HALF, HALF), (HALF, -HALF), (HALF, HALF)]


@pytest.fixture(scope="session")
def sys_2f1():
    return build_system(B_2F1, G_2F1)


@pytest.fixture(scope="session")
def sys_f4():
    return build_system(B_F4, G_F4)


@pytest.fixture(scope="session")
def fan_2f1(sys_2f1):
    ch = enumerate_chambers(sys_2f1.B)
    return ch, adjacency_graph(sys_2f1.B, ch)


@pytest.fixture(scope="session")
def fan_f4(sys_f4):
    ch = enumerate_chambers(sys_f4.B)
    return ch, adjacency_graph(sys_f4.B, ch)


_ACCEPTANCE: list[str] = []


def record_acceptance(line: str) -> None:
    _ACCEPTANCE.append(line)


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
