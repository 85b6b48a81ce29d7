import warnings

import pytest

from rounddist.minifloat import FloatFormat


@pytest.fixture(scope="session")
def half():
    return FloatFormat.half_precision()


@pytest.fixture(scope="session")
def p3():
    return FloatFormat(precision=3, e_min=-3, e_max=4)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """Echo the acceptance scorecard lines even when capture is on."""
    import sys

    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(mod, "SCORECARD", None)
    if lines:
        terminalreporter.section("acceptance scorecard")
        for line in lines:
            terminalreporter.write_line(line)


@pytest.fixture(autouse=True)
def _quiet_diagnostics():
    """Silence advisory warnings (edge-band mass etc.) during tests."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UserWarning)
        yield
