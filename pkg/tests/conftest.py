import numpy as np
import pytest

# filled by tests/test_acceptance.py, echoed after the run
ACCEPTANCE_RESULTS = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_RESULTS):
        ok, label = ACCEPTANCE_RESULTS[key]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {key}: {label}")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def a7():
    """7x7 skew matrix with two unit rotations coupling (1,3) and (2,4)."""
    A = np.zeros((7, 7))
    A[0, 2] = A[1, 3] = 1.0
    A[2, 0] = A[3, 1] = -1.0
    return A


@pytest.fixture
def g_sl3():
    return np.array([[-1.0, 1.0, 1.0], [1.0, 1.0, -1.0], [-1.5, 1.5, 1.0]])


@pytest.fixture
def g_prime():
    return np.array([[2.5, 0.5, -2.0], [0.5, 0.5, 0.0], [3.0, 0.0, -2.0]])
