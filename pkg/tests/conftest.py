import numpy as np
import pytest

from grasspenta.core import InvariantChain, TwistedLift

ACCEPTANCE_LINES = []


@pytest.fixture(autouse=True)
def _clean_tolerance_env(monkeypatch):
    monkeypatch.delenv("GRASSPENTA_TOL", raising=False)


def lift_from_columns(columns, m, M=None):
    """n = 1 lift with the given vertices as one period."""
    cols = [np.asarray(c, dtype=complex).reshape(-1, 1) for c in columns]
    N = len(cols)
    M = np.eye(m) if M is None else M
    return TwistedLift(1, m, N, np.stack(cols), M)


def scalar_chain(rows):
    """n = 1 chain from a list of per-k coefficient tuples."""
    a = np.array(rows, dtype=complex)
    N, m = a.shape
    return InvariantChain(1, m, N, a.reshape(N, m, 1, 1))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

