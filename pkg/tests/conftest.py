import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from deltashell.model import make_config

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("thorough", max_examples=500, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def random_config(rng: np.random.Generator, n: int, r_lo=0.2, r_hi=5.0, a_lim=10.0):
    """Increasing radii with gaps of at least 0.1 and uniform couplings."""
    first = rng.uniform(r_lo, r_hi)
    gaps = rng.uniform(0.1, 3.0, size=n - 1)
    radii = np.concatenate([[first], first + np.cumsum(gaps)])
    alphas = rng.uniform(-a_lim, a_lim, size=n)
    return make_config(radii.tolist(), alphas.tolist())


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("tests.test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
