import pytest

from relaystab.scenario import PRESETS


@pytest.fixture
def fig2():
    return PRESETS["fig2"]


@pytest.fixture
def fig3():
    return PRESETS["fig3"]


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
