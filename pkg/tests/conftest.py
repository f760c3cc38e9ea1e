import os
from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from ellsurf.qpoly import Poly
from ellsurf.weierstrass import WeierstrassPair

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile(
    "thorough", max_examples=500, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

t = sp.Symbol("t")


def to_sympy(f: Poly) -> sp.Poly:
    coeffs = [sp.Rational(c.numerator, c.denominator) for c in reversed(f.coeffs)]
    return sp.Poly(coeffs or [0], t, domain="QQ")


def from_sympy(g) -> Poly:
    g = sp.Poly(g, t, domain="QQ")
    return Poly([Fraction(int(c.p), int(c.q)) for c in reversed(g.all_coeffs())])


def int_polys(max_degree: int = 6, bound: int = 9, nonzero: bool = False):
    s = st.lists(st.integers(-bound, bound), min_size=1, max_size=max_degree + 1).map(Poly)
    return s.filter(bool) if nonzero else s


def rat_polys(max_degree: int = 5):
    coeff = st.fractions(min_value=-20, max_value=20, max_denominator=12)
    return st.lists(coeff, min_size=1, max_size=max_degree + 1).map(Poly)


@st.composite
def pairs(draw, m=None, n=None, bound=6):
    m = m if m is not None else draw(st.integers(1, 6))
    n = n if n is not None else draw(st.integers(1, 8))
    a = draw(st.lists(st.integers(-bound, bound), min_size=m + 1, max_size=m + 1))
    b = draw(st.lists(st.integers(-bound, bound), min_size=n + 1, max_size=n + 1))
    return WeierstrassPair(Poly(a), Poly(b), m, n)


@pytest.fixture
def example_family() -> WeierstrassPair:
    return WeierstrassPair.parse("0", "-7*t^6 + 2*t^3 + 1", 4, 6)


# --- acceptance reporting ----------------------------------------------------

ACCEPTANCE = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[ACCEPTANCE] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(ACCEPTANCE, [])
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(lines):
        terminalreporter.write_line(line[1])


@pytest.fixture
def acceptance_log(request):
    return request.config.stash[ACCEPTANCE]
