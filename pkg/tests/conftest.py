import numpy as np
import pytest

from cswatermark import cameraman

_CRITERIA = []


@pytest.fixture(scope="session")
def camera():
    return cameraman()


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def criterion():
    """Record an acceptance criterion outcome; the summary prints at the end."""
    def record(name, passed, detail=""):
        _CRITERIA.append((name, bool(passed), detail))
        assert passed, f"{name}: {detail}"
    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in _CRITERIA:
        terminalreporter.write_line(f"[{'PASS' if passed else 'FAIL'}] {name}  {detail}")
