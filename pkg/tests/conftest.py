import math

import numpy as np
import pytest

from socentropy.distribution import BenefitDistribution


def make_dist(omega, nu, g=None, w_bar=1.0) -> BenefitDistribution:
    """Distribution built straight from arrays (no unit-mean requirement)."""
    omega = np.asarray(omega, dtype=float)
    nu = np.asarray(nu, dtype=float)
    g = np.ones_like(omega) if g is None else np.asarray(g, dtype=float)
    n = math.fsum(g * nu)
    return BenefitDistribution(omega=omega, nu=nu, g=g, n_total=n, w_total=n * w_bar, w_bar=w_bar)


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


_ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture
def acceptance_log(request):
    """Collects ``(number, line)`` pairs printed after the run."""
    return request.config.stash.setdefault(_ACCEPTANCE, [])


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    rows = config.stash.get(_ACCEPTANCE, None)
    if rows:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(rows):
            terminalreporter.write_line(line)
