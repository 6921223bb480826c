import numpy as np
import pytest

from numidx.errors import InvalidInputError
from numidx.geometry.validation import validate
from numidx.verify import (
    adjoint_suite,
    bounds_suite,
    isometry_suite,
    lemma1_suite,
    minimax_suite,
    random_lp_norm,
    random_polyhedral_norm,
    run_suite,
    sandwich_suite,
    theorem3_suite,
)


def test_random_norms_are_valid():
    rng = np.random.default_rng(0)
    for _ in range(10):
        assert validate(random_polyhedral_norm(rng)).passed
        assert 1.1 <= random_lp_norm(rng).p <= 10.0


def test_lemma1_full_size():
    result = lemma1_suite()
    assert result.passed, result.witness
    assert result.checks >= 10_000
    assert result.failures == 0


def test_minimax_suite_small():
    result = minimax_suite(count=4)
    assert result.passed, result.witness
    assert result.checks == 8


def test_minimax_suite_full_size():
    result = minimax_suite()
    assert result.passed, result.witness
    assert result.checks == 200


def test_theorem3_suite():
    result = theorem3_suite(samples=10)
    assert result.passed, result.witness


def test_sandwich_suite_single_exponent():
    result = sandwich_suite(exponents=(8.0,), resolution=12)
    assert result.passed, result.witness


def test_sandwich_suite_full_size():
    result = sandwich_suite()
    assert result.passed, result.witness
    assert result.checks == 4


def test_isometry_suite_small():
    result = isometry_suite(operators=40)
    assert result.passed, result.witness
    assert result.checks == 5 * 8 * 40


def test_isometry_suite_full_size():
    result = isometry_suite()
    assert result.passed, result.witness
    assert result.checks == 5 * 8 * 1000


def test_bounds_suite_small():
    result = bounds_suite(norms=3, resolution=12)
    assert result.passed, result.witness


def test_bounds_suite_full_size():
    result = bounds_suite()
    assert result.passed, result.witness
    assert result.checks == 20


def test_adjoint_suite_small():
    result = adjoint_suite(norms=2, operators=30)
    assert result.passed, result.witness


def test_run_suite_filters_options():
    (result,) = run_suite("minimax", count=2, resolution=12)
    assert result.name == "minimax"
    with pytest.raises(InvalidInputError):
        run_suite("nope")
