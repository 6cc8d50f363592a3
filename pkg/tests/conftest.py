import random

import pytest


@pytest.fixture
def rng():
    return random.Random(20240601)


def bits(s: str, n: int) -> tuple:
    """'13' -> (1, 0, 1) for n = 3; the empty string is the zero point."""
    return tuple(1 if str(i) in s else 0 for i in range(1, n + 1))


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.report_lines():
        terminalreporter.write_line(line)
