import math

import pytest

from lqom import SystemParams

# filled by test_acceptance; printed once at the end of the run
ACCEPTANCE_RESULTS = {}


@pytest.fixture
def lq():
    """Linear-quadratic couplings of the figure regimes."""
    return SystemParams(omega_c=1.0, omega_m=1.0, g_l=1.0, g_q=1.0, gamma=2.0)


@pytest.fixture
def lin():
    return SystemParams(omega_c=1.0, omega_m=1.0, g_l=1.0, g_q=0.0, gamma=1.0)


@pytest.fixture
def quad():
    return SystemParams(omega_c=1.0, omega_m=1.0, g_l=0.0, g_q=1.0, gamma=1.0)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_RESULTS):
        ok, detail = ACCEPTANCE_RESULTS[key]
        terminalreporter.write_line(f"criterion {key}: {'PASS' if ok else 'FAIL'}  {detail}")
