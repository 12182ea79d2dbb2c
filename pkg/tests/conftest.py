import functools

import pytest
from hypothesis import HealthCheck, settings

from osht.sampling import design_ascending, design_elimination

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES = []


@functools.lru_cache(maxsize=None)
def elimination_scheme(L):
    return design_elimination(L)


@functools.lru_cache(maxsize=None)
def ascending_scheme(L):
    return design_ascending(L)


@pytest.fixture
def elim():
    return elimination_scheme


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
