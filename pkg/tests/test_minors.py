import itertools
import random

import pytest
import sympy as sp
from gmpy2 import mpq
from hypothesis import given, strategies as st

from isospectra.errors import ResourceLimitError
from isospectra.minors import (
    RationalMatrix, all_principal_minors, as_matrix, bareiss_det, graph_rigidity_class,
    has_symmetrized_principal_minors, minor_average_defect, principal_minor,
)

from conftest import int_matrix

P3 = [[0, 1, 0], [1, 0, 1], [0, 1, 0]]
J4 = [[int(i != j) for j in range(4)] for i in range(4)]


def cofactor_det(M):
    n = len(M)
    if n == 0:
        return 1
    return sum((-1) ** j * M[0][j] * cofactor_det([row[:j] + row[j + 1:] for row in M[1:]]) for j in range(n))


@given(st.integers(1, 6).flatmap(lambda n: int_matrix(n)))
def test_principal_minors_match_cofactor_expansion(rows):
    A = as_matrix(rows)
    n = A.n
    table = all_principal_minors(A)
    assert table[0] == 1
    assert len(table) == 2 ** n
    rng = random.Random(n)
    for mask in rng.sample(range(2 ** n), min(12, 2 ** n)):
        idx = [k for k in range(n) if mask >> k & 1]
        assert table[mask] == cofactor_det([[rows[i][j] for j in idx] for i in idx])
        assert principal_minor(A, idx) == table[mask]


def test_bareiss_zero_pivot_and_rationals():
    assert bareiss_det([[mpq(0), mpq(1)], [mpq(1), mpq(0)]]) == -1
    M = [[mpq(1, 2), mpq(1, 3)], [mpq(1, 4), mpq(1, 5)]]
    assert bareiss_det(M) == mpq(1, 10) - mpq(1, 12)
    assert bareiss_det([[mpq(1), mpq(2)], [mpq(2), mpq(4)]]) == 0


def test_matrix_validation():
    with pytest.raises(ValueError):
        as_matrix([[1, 2, 3], [4, 5, 6]])
    with pytest.raises(ValueError):
        principal_minor(P3, [3])
    with pytest.raises(ResourceLimitError):
        all_principal_minors(RationalMatrix.identity(5), cap=4)


def test_p3_verdict_and_defect():
    v = has_symmetrized_principal_minors(P3)
    assert not v
    assert v.k == 2
    assert {v.values[0], v.values[1]} == {mpq(-1), mpq(0)}
    assert minor_average_defect(P3, 2, [0, 2]) == mpq(2, 3)
    assert minor_average_defect(RationalMatrix.identity(4), 2, [1, 3]) == 0


def test_symmetrized_examples():
    assert has_symmetrized_principal_minors(J4)
    assert has_symmetrized_principal_minors([[2, 5, -1], [0, 2, 7], [0, 0, 2]])
    assert has_symmetrized_principal_minors(RationalMatrix.identity(3))
    assert not has_symmetrized_principal_minors([[1, 0], [0, 2]])


def test_graph_classes():
    assert graph_rigidity_class(RationalMatrix.zeros(3)) == "edgeless"
    assert graph_rigidity_class(J4) == "complete-equal-up-to-sign"
    assert graph_rigidity_class([[0, -1, 1], [-1, 0, 1], [1, 1, 0]]) == "complete-equal-up-to-sign"
    assert graph_rigidity_class(P3) == "other"
    with pytest.raises(ValueError):
        graph_rigidity_class([[1, 0], [0, 0]])


@given(st.integers(2, 5).flatmap(lambda n: st.tuples(int_matrix(n, -2, 2), st.permutations(list(range(n))))))
def test_verdict_invariant_under_permutation(data):
    rows, perm = data
    A = as_matrix(rows)
    assert bool(has_symmetrized_principal_minors(A)) == bool(has_symmetrized_principal_minors(A.conjugate_by(perm)))


@given(st.integers(2, 4).flatmap(lambda n: int_matrix(n, -1, 1)))
def test_defect_over_conjugates_characterizes_symmetrized(rows):
    A = as_matrix(rows)
    n = A.n
    all_zero = all(
        minor_average_defect(A.conjugate_by(p), m, list(range(m))) == 0
        for p in itertools.permutations(range(n)) for m in range(1, n + 1)
    )
    assert all_zero == bool(has_symmetrized_principal_minors(A))


@given(st.integers(2, 5).flatmap(lambda n: st.lists(st.integers(-2, 2), min_size=n * (n - 1) // 2,
                                                    max_size=n * (n - 1) // 2).map(lambda w: (n, w))))
def test_graph_class_matches_size_two_minors(data):
    n, w = data
    rows = [[0] * n for _ in range(n)]
    for (i, j), x in zip(itertools.combinations(range(n), 2), w):
        rows[i][j] = rows[j][i] = x
    v = has_symmetrized_principal_minors(rows)
    fails_at_two = (not v) and v.k == 2
    assert (graph_rigidity_class(rows) == "other") == fails_at_two


def test_determinant_matches_sympy():
    rng = random.Random(3)
    for n in range(1, 7):
        rows = [[sp.Rational(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(n)] for _ in range(n)]
        A = as_matrix([[str(x) for x in r] for r in rows])
        got = principal_minor(A, range(n))
        want = sp.Matrix(rows).det()
        assert sp.Rational(int(got.numerator), int(got.denominator)) == want
