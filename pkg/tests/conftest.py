import pytest

from selcat.numbering import Horizon


@pytest.fixture
def h():
    return Horizon(64, 32)


@pytest.fixture
def small():
    return Horizon(16, 8)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for key in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[key])
