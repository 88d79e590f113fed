import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

settings.register_profile("default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def disc_numbers(radius=0.95):
    """Complex numbers with modulus at most ``radius``."""
    return st.builds(
        lambda r, th: radius * np.sqrt(r) * np.exp(2j * np.pi * th),
        st.floats(0.0, 1.0),
        st.floats(0.0, 1.0),
    ).map(complex)


def circle_numbers():
    return st.floats(0.0, 1.0).map(lambda th: complex(np.exp(2j * np.pi * th)))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def uniform_disc(rng, n, radius=0.95):
    return radius * np.sqrt(rng.random(n)) * np.exp(2j * np.pi * rng.random(n))


ACCEPTANCE_LINES = []


@pytest.fixture
def record():
    """Log a one-line verdict for an acceptance criterion."""

    def _record(label, ok, detail):
        ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'}  {label}: {detail}")
        return ok

    return _record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
