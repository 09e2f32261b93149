import numpy as np
import pytest
from hypothesis import settings
from hypothesis import strategies as st

from unwinding import AnalyticCoeffs

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":").split("(")[0])):
        terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


def random_poly(rng, degree, M=256, scale=1.0):
    c = rng.uniform(-scale, scale, degree + 1) + 1j * rng.uniform(-scale, scale, degree + 1)
    return AnalyticCoeffs.from_values(c, M)


def random_disc_point(rng, r_max=0.9):
    return r_max * np.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform())


finite = st.floats(-1.0, 1.0, allow_nan=False, allow_infinity=False)
complex_box = st.builds(complex, finite, finite)
disc_points = st.builds(
    lambda r, t: r * np.exp(2j * np.pi * t),
    st.floats(0.0, 0.85),
    st.floats(0.0, 1.0),
)


def polys(max_degree=12, M=64):
    return st.lists(complex_box, min_size=1, max_size=max_degree + 1).map(
        lambda c: AnalyticCoeffs.from_values(c, M)
    )
