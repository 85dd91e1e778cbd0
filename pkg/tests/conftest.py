import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from helixsub.catalog import catalog_get

settings.register_profile(
    "repo",
    deadline=None,
    derandomize=True,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")


@pytest.fixture(scope="session")
def cylinder():
    return catalog_get("cylinder")


@pytest.fixture(scope="session")
def cone():
    return catalog_get("cone")


@pytest.fixture(scope="session")
def sphere():
    return catalog_get("sphere")


@pytest.fixture(scope="session")
def plane():
    return catalog_get("plane")


def unit(v):
    v = np.asarray(v, dtype=float)
    return v / np.linalg.norm(v)


# One PASS/FAIL line per acceptance criterion, repeated in the terminal summary.
ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for key in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[key])
