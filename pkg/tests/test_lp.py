import numpy as np
import pytest

from numidx.errors import InvalidInputError, OutOfCertificationError
from numidx.geometry.norms import lp_norm
from numidx.geometry.operators import ROTATION_I4, numerical_radius
from numidx.index.lp import (
    c4_profile,
    certified_index_lp,
    conjugate_exponent,
    contact_profile,
    lp_condition_check,
    mp_constant,
)


def test_conjugate_exponent():
    assert conjugate_exponent(2.0) == 2.0
    assert conjugate_exponent(1.5) == pytest.approx(3.0)
    assert conjugate_exponent(3.0) == pytest.approx(1.5)
    with pytest.raises(InvalidInputError):
        conjugate_exponent(1.0)


def test_mp_at_two_is_exactly_zero():
    result = mp_constant(2.0)
    assert result.value == 0.0
    assert result.t0 == 0.0


def test_mp_three_against_dense_grid():
    result = mp_constant(3.0)
    t = np.linspace(0.0, 1.0, 1_000_001)
    oracle = float(np.max((t - t**2) / (1 + t**3)))
    assert result.value == pytest.approx(oracle, abs=1e-9)
    assert result.value == pytest.approx(0.2271, abs=1e-4)
    assert result.t0 == pytest.approx(0.435, abs=5e-3)


def test_mp_is_symmetric_in_conjugate_exponents():
    rng = np.random.default_rng(5)
    for p in rng.uniform(1.01, 20.0, size=50):
        assert mp_constant(p).value == pytest.approx(mp_constant(conjugate_exponent(p)).value, abs=1e-10)


def test_mp_matches_the_t_at_least_one_form():
    for p in (1.3, 2.5, 6.0):
        s = np.linspace(0.0, 1.0, 200_001)[1:]
        t = 1.0 / s
        tail = float(np.max(np.abs(t ** (p - 1) - t) / (1 + t**p)))
        assert mp_constant(p).value == pytest.approx(tail, abs=1e-7)


def test_contact_profile_matches_c4_profile():
    for t in (0.0, 0.25, 0.5, 1.0):
        c = contact_profile(1.7, t)
        assert c[0] == 1.0
        assert c[3] == pytest.approx(float(c4_profile(1.7, t)))
        assert c[3] <= min(c[:3]) + 1e-12


@pytest.mark.parametrize("p", [1.5, 1.7, 1.9, 1.99])
def test_condition_holds_on_the_certified_side(p):
    check = lp_condition_check(p)
    assert check.holds
    assert check.grid_size == 100_000


@pytest.mark.parametrize("p", [1.1, 1.2])
def test_condition_fails_for_small_exponents(p):
    check = lp_condition_check(p, 10_000)
    assert not check.holds
    assert check.min_value < 0.0


def test_condition_check_rejects_tiny_grid():
    with pytest.raises(InvalidInputError):
        lp_condition_check(1.5, 1)


def test_certified_index_examples():
    assert certified_index_lp(2.0) == 0.0
    m3 = certified_index_lp(3.0)
    assert m3 == pytest.approx(0.2271, abs=1e-4)
    assert certified_index_lp(1.5) == pytest.approx(m3, abs=1e-10)


@pytest.mark.parametrize("p", [1.4, 3.2])
def test_certified_index_outside_range(p):
    with pytest.raises(OutOfCertificationError):
        certified_index_lp(p)


def test_certified_index_equals_sampled_radius_of_rotation():
    for p in (1.5, 1.8, 2.4, 3.0):
        assert certified_index_lp(p) == pytest.approx(numerical_radius(lp_norm(p), ROTATION_I4), abs=1e-8)
