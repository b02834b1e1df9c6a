import math
from fractions import Fraction

import pytest
import sympy as sp
from gmpy2 import mpq
from hypothesis import given, strategies as st

from isospectra.errors import ResourceLimitError
from isospectra.polycore import (
    ExactPoly, GroebnerConfig, MonomialOrder, buchberger, complete_homogeneous, elementary_symmetric,
    normal_form, quotient_dimension, standard_monomials, to_rational, vanishes_only_at_origin,
)

from conftest import exact_polys, to_sympy


def test_to_rational_literals():
    assert to_rational("-2/4") == mpq(-1, 2)
    assert to_rational(0.25) == mpq(1, 4)
    assert to_rational(0.1) == mpq(1, 10)
    assert to_rational(Fraction(3, 6)) == mpq(1, 2)
    with pytest.raises(TypeError):
        to_rational(True)


def test_zero_coefficients_not_stored():
    p = ExactPoly(2, {(1, 0): 1, (0, 1): 0})
    assert list(p.terms) == [(1, 0)]
    assert (p - p).is_zero()
    with pytest.raises(ValueError):
        ExactPoly(2, {(1,): 1})


def test_elementary_and_complete():
    assert elementary_symmetric(3, 0) == ExactPoly.constant(3)
    e2 = elementary_symmetric(3, 2)
    assert set(e2.terms) == {(1, 1, 0), (1, 0, 1), (0, 1, 1)}
    with pytest.raises(ValueError):
        elementary_symmetric(3, 4)
    assert complete_homogeneous(2, 1, 3) == ExactPoly(3, {(2, 0, 0): 1})
    with pytest.raises(ValueError):
        complete_homogeneous(1, 4, 3)
    h2 = complete_homogeneous(2, 2, 3)  # h_2 in the first two of three variables
    assert h2 == ExactPoly(3, {(2, 0, 0): 1, (1, 1, 0): 1, (0, 2, 0): 1})


@given(st.integers(1, 5), st.integers(1, 4))
def test_newton_identity_e_h(n, k):
    # sum_i (-1)^i e_i h_{k-i} = 0 for k >= 1
    total = ExactPoly.zero(n)
    for i in range(min(k, n) + 1):
        total = total + (-1) ** i * elementary_symmetric(n, i) * complete_homogeneous(k - i, n, n)
    assert total.is_zero()


@given(exact_polys(), exact_polys(), exact_polys())
def test_ring_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert a - a == ExactPoly.zero(3)


@given(exact_polys(), exact_polys())
def test_multiplication_matches_sympy(a, b):
    x = sp.symbols("x0:3")
    assert sp.expand(to_sympy(a * b, x) - to_sympy(a, x) * to_sympy(b, x)) == 0


@given(exact_polys(nvars=3, max_deg=3))
def test_homogenize_roundtrip(p):
    h = p.homogenize()
    assert h.nvars == 4
    assert h.is_homogeneous()
    assert h.dehomogenize() == p


@given(st.lists(st.tuples(st.integers(0, 4), st.integers(0, 4), st.integers(0, 4)), min_size=2, max_size=8, unique=True))
def test_orders_refine_divisibility(monos):
    for order in MonomialOrder:
        for a in monos:
            for b in monos:
                if a != b and all(x <= y for x, y in zip(a, b)):
                    assert order.key(a) < order.key(b)


def _check_groebner_invariants(gb):
    lms = gb.leading_monomials()
    for g, lm in zip(gb.generators, lms):
        assert g.leading_term(gb.order)[1] == 1
        for m in g.terms:
            for other in lms:
                if other != lm:
                    assert not all(x >= y for x, y in zip(m, other))
    # every S-polynomial reduces to zero
    gens = gb.generators
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            a, b = lms[i], lms[j]
            l = tuple(map(max, a, b))
            s = gens[i].mul_monomial(tuple(x - y for x, y in zip(l, a))) - gens[j].mul_monomial(
                tuple(x - y for x, y in zip(l, b)))
            assert normal_form(s, gb).is_zero()


@given(st.lists(exact_polys(nvars=3, max_terms=4, max_deg=2), min_size=1, max_size=3),
       st.sampled_from(list(MonomialOrder)))
def test_groebner_basis_invariants(gens, order):
    gens = [g for g in gens if g]
    if not gens:
        return
    gb = buchberger(gens, order=order, config=GroebnerConfig(max_reductions=5000))
    _check_groebner_invariants(gb)
    for g in gens:
        assert gb.contains(g)


@given(st.lists(exact_polys(nvars=3, max_terms=3, max_deg=2), min_size=1, max_size=3))
def test_groebner_matches_sympy(gens):
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return
    x = sp.symbols("x0:3")
    ours = buchberger(gens, order=MonomialOrder.GREVLEX)
    theirs = sp.groebner([to_sympy(g, x) for g in gens], *x, order="grevlex", domain="QQ")
    assert len(ours) == len(theirs.exprs)
    assert {sp.expand(to_sympy(g, x)) for g in ours.generators} == {sp.expand(e) for e in theirs.exprs}


def test_homogenized_route_agrees_with_affine_route():
    x = [ExactPoly.variable(3, i) for i in range(3)]
    gens = [x[0] ** 2 + x[1] - 1, x[1] ** 2 - x[2] + 3, x[0] * x[2] + x[0] - 2]
    a = buchberger(gens, config=GroebnerConfig(homogenize=True))
    b = buchberger(gens, config=GroebnerConfig(homogenize=False))
    assert a.generators == b.generators


def test_coinvariant_dimensions_small():
    for n in range(1, 5):
        gb = buchberger([elementary_symmetric(n, i) for i in range(1, n + 1)])
        assert quotient_dimension(gb) == math.factorial(n)
        assert vanishes_only_at_origin(gb)
        assert len(standard_monomials(gb)) == math.factorial(n)


def test_only_origin_edge_cases():
    x, y = ExactPoly.variable(2, 0), ExactPoly.variable(2, 1)
    assert quotient_dimension(buchberger([x * y])) == math.inf
    assert not vanishes_only_at_origin(buchberger([x * y]))
    unit = buchberger([x, x - 1])
    assert unit.is_unit()
    assert not vanishes_only_at_origin(unit)
    # finite but with a nonzero point
    assert not vanishes_only_at_origin(buchberger([x ** 2 - x, y]))
    assert vanishes_only_at_origin(buchberger([x ** 3, y ** 2 - x]))


def test_budget_raises():
    gens = [elementary_symmetric(5, i) for i in range(1, 6)]
    with pytest.raises(ResourceLimitError):
        buchberger(gens, config=GroebnerConfig(max_reductions=2))
