"""Acceptance criteria 1-10 at full scale.

Each test prints one ``[PASS]``/``[FAIL]``/``[INCONCLUSIVE]`` line; the
lines are repeated in the terminal summary by ``conftest.py``.  Criterion 10 is a stretch
goal: running out of Groebner budget reports inconclusive and still passes.
"""

import pytest

from isospectra import checks

_instances = None
RESULTS = []


def instances():
    global _instances
    if _instances is None:
        _instances = checks.rigidity_instances(sizes=(2, 3, 4), random_count=50, constructed_count=50, seed=0)
    return _instances


def report(result):
    print(result.line())
    RESULTS.append(result)
    return result


def test_criterion_01_exact_rigidity_matches_minors():
    r = report(checks.criterion_1(instances()))
    assert r.status == "pass", r.detail


def test_criterion_02_numeric_witnesses():
    r = report(checks.criterion_2(instances()))
    assert r.status == "pass", r.detail


def test_criterion_03_perturbed_ideals():
    r = report(checks.criterion_3())
    assert r.status == "pass", r.detail


def test_criterion_04_lambda_coefficients():
    r = report(checks.criterion_4(exhaustive_n=4, n5_samples=30, identity_n=8, seed=0))
    assert r.status == "pass", r.detail


def test_criterion_05_coinvariant_dimensions():
    r = report(checks.criterion_5(dim_n=6, artin_n=7))
    assert r.status == "pass", r.detail


def test_criterion_06_small_periods():
    r = report(checks.criterion_6())
    assert r.status == "pass", r.detail


def test_criterion_07_existence_for_periods_4_to_7():
    r = report(checks.criterion_7(qs=(4, 5, 6, 7), points=32))
    assert r.status == "pass", r.detail


def test_criterion_08_rigidity_3_2_and_membership():
    r = report(checks.criterion_8(qs=(4, 5, 6)))
    assert r.status == "pass", r.detail


def test_criterion_09_product_formula_and_lifts():
    r = report(checks.criterion_9(pairs=10, points=16, seed=0))
    assert r.status == "pass", r.detail


@pytest.mark.slow
def test_criterion_10_degrees_51_and_12():
    r = report(checks.criterion_10(seconds=1800.0, seed=0, include_generic=True))
    assert r.status in ("pass", "inconclusive"), r.detail
