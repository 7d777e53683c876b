import pytest

from nanorabi import Params

# working point: resonant detunings, g = 0.2, kappa = gamma = 0.004 (GHz)
REFERENCE = dict(delta_a=1.0, delta_c=1.0, g=0.2, kappa=0.004, gamma=0.004)


def reference_params(**overrides):
    kw = dict(REFERENCE, xi=0.0, chi=0.0, n_fock=10)
    kw.update(overrides)
    return Params(**kw)


@pytest.fixture
def reference():
    return reference_params()


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
