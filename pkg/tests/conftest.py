import pytest

from hslab.cylinder import default_grid
from hslab.params import make_params

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def p4():
    return make_params(4, 0.75)


@pytest.fixture(scope="session")
def g4(p4):
    return default_grid(p4)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("[")[1].split("]")[0])):
            terminalreporter.write_line(line)
