import random

import sympy as sp
from hypothesis import HealthCheck, settings, strategies as st

from isospectra.polycore import ExactPoly

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

small_int = st.integers(-5, 5)


def int_matrix(n, lo=-5, hi=5):
    return st.lists(st.lists(st.integers(lo, hi), min_size=n, max_size=n), min_size=n, max_size=n)


@st.composite
def exact_polys(draw, nvars=3, max_terms=5, max_deg=3):
    terms = draw(st.dictionaries(
        st.tuples(*[st.integers(0, max_deg)] * nvars), st.integers(-4, 4), max_size=max_terms))
    return ExactPoly(nvars, terms)


def to_sympy(p, syms):
    return sp.Add(*[sp.Rational(int(c.numerator), int(c.denominator)) * sp.prod([s**e for s, e in zip(syms, m)])
                    for m, c in p.terms.items()])


def rng(seed=0):
    return random.Random(seed)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", [])
    if results:
        terminalreporter.section("acceptance criteria")
        for r in sorted(results, key=lambda r: r.criterion):
            terminalreporter.write_line(r.line())
