import pytest

from qmodular.qforms import Params

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def p5():
    return Params(5, 2)


@pytest.fixture(scope="session")
def p8():
    return Params(8, 2)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
