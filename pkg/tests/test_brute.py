import math

import pytest

from numidx.errors import InvalidDescriptorError, InvalidInputError
from numidx.geometry.norms import PolyhedralFamily, l1_norm, lp_norm, octagonal_norm
from numidx.geometry.operators import numerical_radius, operator_norm
from numidx.index.brute import brute_force_index, simplex_grid
from numidx.index.engine import index_report
from numidx.index.lp import conjugate_exponent, mp_constant


def test_simplex_grid_size():
    grid = simplex_grid(8)
    assert grid.shape == (math.comb(11, 3), 4)
    assert grid.sum(axis=1) == pytest.approx(1.0)
    assert grid.min() >= 0.0


def test_resolution_must_be_at_least_eight():
    with pytest.raises(InvalidInputError):
        brute_force_index(lp_norm(2.0), 4)


def test_invalid_norm_is_rejected():
    with pytest.raises(InvalidDescriptorError):
        brute_force_index(PolyhedralFamily(first_quadrant_vertices=((0.5, 0.0),)), 8)


def test_euclidean_plane_has_index_zero():
    estimate = brute_force_index(lp_norm(2.0), 16)
    assert estimate.value <= 1e-3
    assert estimate.grid_resolution == 16
    assert estimate.refined


def test_l1_plane_has_index_one():
    estimate = brute_force_index(l1_norm(), 16)
    assert estimate.value >= 0.999
    T = estimate.argmin
    assert operator_norm(l1_norm(), T) == pytest.approx(1.0, abs=1e-9)
    assert numerical_radius(l1_norm(), T) >= 0.999 * operator_norm(l1_norm(), T)


def test_without_refinement():
    estimate = brute_force_index(octagonal_norm(0.75), 8, pattern_rounds=0)
    assert not estimate.refined
    assert 0.0 <= estimate.value <= 1.0


@pytest.mark.parametrize("p", [1.25, 4.0])
def test_lp_estimate_sits_in_the_sandwich(p):
    mp = mp_constant(p).value
    lower = max(2 ** (-1 / p), 2 ** (-1 / conjugate_exponent(p))) * mp
    estimate = brute_force_index(lp_norm(p), 16)
    assert lower - 2e-3 <= estimate.value <= mp + 2e-3


def test_estimate_between_bound_and_radius_for_octagon():
    norm = octagonal_norm(0.8)
    report = index_report(norm)
    estimate = brute_force_index(norm, 16)
    assert report.lower_bound <= estimate.value + 2e-3
    assert estimate.value <= report.radius_i4 + 1e-6


def test_euclidean_plane_at_default_resolution():
    estimate = brute_force_index(lp_norm(2.0), 64)
    assert estimate.value <= 1e-3


def test_l1_plane_at_default_resolution():
    estimate = brute_force_index(l1_norm(), 64)
    assert estimate.value >= 1.0 - 1e-3
