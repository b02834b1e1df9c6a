import itertools
import math

import pytest
import sympy as sp
from gmpy2 import mpq
from hypothesis import given, strategies as st

from isospectra.invariants import (
    PerturbationTable, SpectralIdeal, elementary_ideal, equals_elementary_ideal, ideal_from_polys,
    ideal_from_table, scale_ideal, spectral_invariant_polys, spectral_invariants,
)
from isospectra.minors import has_symmetrized_principal_minors
from isospectra.polycore import ExactPoly, elementary_symmetric, quotient_dimension, vanishes_only_at_origin

from conftest import int_matrix, to_sympy

P3 = [[0, 1, 0], [1, 0, 1], [0, 1, 0]]


@st.composite
def tables(draw, n=None):
    n = n or draw(st.integers(1, 4))
    cells = []
    for i in range(1, n + 1):
        for size in range(i):
            for J in itertools.combinations(range(n), size):
                if draw(st.booleans()):
                    cells.append((i, J, draw(st.integers(-3, 3))))
    return PerturbationTable.from_cells(n, cells)


def test_table_validation():
    with pytest.raises(ValueError):
        PerturbationTable.from_cells(2, [(1, [0], 1)])  # auxiliary degree 0
    with pytest.raises(ValueError):
        PerturbationTable.from_cells(2, [(3, [], 1)])
    with pytest.raises(ValueError):
        SpectralIdeal(2, (ExactPoly.zero(2), elementary_symmetric(2, 2)))


@given(tables())
def test_table_json_roundtrip(table):
    again = PerturbationTable.from_json(table.to_json())
    assert again == table
    assert ideal_from_table(table).table == table


def test_json_uses_one_based_subsets():
    t = PerturbationTable.from_cells(3, [(2, [0], -2), (3, [0, 1], "1/2")])
    text = t.to_json()
    assert '"J": [1]' in text and '"J": [1, 2]' in text and '"a": "1/2"' in text


def test_p3_invariants():
    S = spectral_invariant_polys(P3)
    assert S[0].to_exact() == elementary_symmetric(3, 1)
    E = spectral_invariants(P3)
    # e_2 - 2 (off-diagonal products: minors -1, -1, 0 removed from constant)
    assert all(g.constant_term() == 0 for g in E.generators)
    v = [ExactPoly.variable(3, i) for i in range(3)]
    assert E.generators[1] == elementary_symmetric(3, 2)
    assert E.generators[2] == elementary_symmetric(3, 3) - v[0] - v[2]


@given(st.integers(1, 4).flatmap(lambda n: int_matrix(n, -3, 3)))
def test_invariants_match_symbolic_determinant(rows):
    n = len(rows)
    v = sp.symbols(f"v0:{n}")
    x = sp.Symbol("x")
    M = sp.Matrix(rows) + sp.diag(*v)
    cp = sp.Poly((x * sp.eye(n) - M).det(), x)
    cp0 = sp.Poly((x * sp.eye(n) - sp.Matrix(rows)).det(), x)
    S = spectral_invariant_polys(rows)
    for i in range(1, n + 1):
        # coefficient of x^(n-i) is (-1)^i E_i(A + V)
        want = sp.expand((-1) ** i * (cp.coeff_monomial(x ** (n - i)) - cp0.coeff_monomial(x ** (n - i))))
        assert sp.expand(to_sympy(S[i - 1].to_exact(), v) - want) == 0


@given(st.integers(1, 4).flatmap(lambda n: int_matrix(n, -3, 3)))
def test_quotient_degree_is_factorial_and_rigidity_matches_minors(rows):
    n = len(rows)
    E = spectral_invariants(rows)
    gb = E.groebner()
    assert quotient_dimension(gb) == math.factorial(n)
    assert vanishes_only_at_origin(gb) == bool(has_symmetrized_principal_minors(rows))


def test_elementary_ideal_equality():
    assert equals_elementary_ideal(elementary_ideal(3))
    assert equals_elementary_ideal(spectral_invariants([[1, 4, 4], [0, 1, -2], [0, 0, 1]]))
    assert not equals_elementary_ideal(spectral_invariants(P3))
    # symmetric perturbations leave the ideal unchanged
    e1 = elementary_symmetric(3, 1)
    E = SpectralIdeal(3, (ExactPoly.zero(3), 5 * e1, e1 * e1))
    assert equals_elementary_ideal(E)


def test_scale_examples():
    v1, v2 = ExactPoly.variable(3, 0), ExactPoly.variable(3, 1)
    e = [elementary_symmetric(3, i) for i in (1, 2, 3)]
    I1 = ideal_from_polys([e[0], e[1] - v1 - v2, e[2] + v1 * v2 - v1 - v2])
    assert scale_ideal(I1, 0) == elementary_ideal(3)
    assert scale_ideal(I1, 2).generators == [e[0], e[1] - 2 * v1 - 2 * v2, e[2] + 2 * v1 * v2 - 4 * v1 - 4 * v2]


@given(tables(), st.fractions(-3, 3, max_denominator=4), st.fractions(-3, 3, max_denominator=4))
def test_scaling_is_an_action(table, s, t):
    E = ideal_from_table(table)
    assert scale_ideal(E, mpq(s) * mpq(t)) == scale_ideal(scale_ideal(E, t), s)
    assert scale_ideal(E, 1) == E


def test_ideal_from_polys_rejects_wrong_top_part():
    with pytest.raises(ValueError):
        ideal_from_polys([ExactPoly.variable(2, 0), elementary_symmetric(2, 2)])
