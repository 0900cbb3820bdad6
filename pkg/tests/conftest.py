import pytest
from hypothesis import settings

from curveinterp import FieldSpec, Rng

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

# criterion lines collected by test_acceptance, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def F():
    return FieldSpec()


@pytest.fixture
def F7():
    return FieldSpec(7)


@pytest.fixture
def rng(F):
    return Rng(12345, F)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
