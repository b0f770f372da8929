"""Shared fixtures and hypothesis strategies."""

from fractions import Fraction

import pytest
from hypothesis import settings, strategies as st

from lgmf.expr import PolyRing, Polynomial
from lgmf.mfcore import LGModel

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

RING3 = PolyRing(["x", "y", "z"])

small_rationals = st.builds(Fraction, st.integers(-5, 5), st.integers(1, 4))


def polynomials(ring=RING3, max_terms=4, max_exp=2):
    """Random sparse polynomials with small rational coefficients."""
    mono = st.tuples(*[st.integers(0, max_exp) for _ in ring.names])
    return st.dictionaries(mono, small_rationals, max_size=max_terms).map(
        lambda d: Polynomial(ring, d))


def points(ring=RING3):
    return st.lists(small_rationals, min_size=ring.nvars, max_size=ring.nvars)


@pytest.fixture
def cone_lg():
    """R = Q[x,y,z,w]/(xy - zw) with potential w."""
    return LGModel.parse(["x", "y", "z", "w"], ["x*y - z*w"], "w")


@pytest.fixture
def plane():
    """Q[x,y] with zero potential and no relations."""
    return LGModel.parse(["x", "y"], [], "0")


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        ok, elapsed, limit, title = results[number]
        terminalreporter.write_line(
            f"AC{number} {'PASS' if ok else 'FAIL'}  {elapsed:6.2f}s (limit {limit}s)  {title}")
