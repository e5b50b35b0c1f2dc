import pytest

from taylorshift.laurent import DEFAULT_PRECISION, precision


@pytest.fixture(autouse=True)
def working_precision():
    """Library calls use the active gmpy2 context; tests run at 256 bits."""
    with precision(DEFAULT_PRECISION):
        yield


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
