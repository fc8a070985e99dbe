import numpy as np
import pytest

from nmecut.entangle import haar_random_unitary
from nmecut.qmath import PureState

_ACCEPTANCE_KEY = pytest.StashKey[list]()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def haar_states(n, seed, dim=2):
    gen = np.random.default_rng(seed)
    return [PureState.normalized(haar_random_unitary(dim, gen)[:, 0]) for _ in range(n)]


@pytest.fixture
def report(request):
    """Record one acceptance line; printed in the terminal summary."""
    results = request.config.stash.setdefault(_ACCEPTANCE_KEY, [])

    def _report(criterion, passed, detail):
        results.append((criterion, bool(passed), detail))
        return passed

    return _report


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = config.stash.get(_ACCEPTANCE_KEY, [])
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for criterion, passed, detail in sorted(results, key=lambda r: r[0]):
        terminalreporter.write_line(f"[{'PASS' if passed else 'FAIL'}] AC{criterion}: {detail}")
