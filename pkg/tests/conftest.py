import numpy as np
import pytest

from texqc import _pure

try:
    from texqc import _core
    _BACKENDS = [("pure", _pure), ("compiled", _core)]
except ImportError:
    _BACKENDS = [("pure", _pure)]


@pytest.fixture(params=_BACKENDS, ids=lambda b: b[0])
def backend(request):
    """Kernel backend module; oracle tests run against every build."""
    return request.param[1]


@pytest.fixture
def rng():
    return np.random.default_rng(42)


# one line per acceptance criterion, filled in by tests/test_acceptance.py
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
