from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from semisnc.algebra import Poly
from semisnc.scene import Scene

FIXTURES = Path(__file__).parent / "fixtures"
GOLDEN = FIXTURES / "golden"
FIXTURE_NAMES = sorted(p.stem for p in FIXTURES.glob("*.scene"))

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def load(name: str) -> Scene:
    return Scene.load(FIXTURES / f"{name}.scene")


@pytest.fixture
def fixture_scene():
    return load


def polys(chart, max_terms=4, max_exp=2, coeffs=(-3, 3)):
    """Sparse polynomials with small integer coefficients."""
    n = len(chart)
    mono = st.tuples(*[st.integers(0, max_exp)] * n)
    coef = st.integers(*coeffs).filter(bool).map(Fraction)
    return st.dictionaries(mono, coef, max_size=max_terms).map(lambda d: Poly(chart, d))


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[n][1])
