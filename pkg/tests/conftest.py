import pytest

from bistellar import catalog


@pytest.fixture
def five():
    return catalog.five_points()


@pytest.fixture
def moae():
    return catalog.moae()


def pytest_terminal_summary(terminalreporter):
    from tests import acceptance_log

    if acceptance_log.LINES:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_log.LINES:
            terminalreporter.write_line(line)
