import math

import numpy as np
import pytest

from numidx.errors import InconsistentContactError, InvalidDescriptorError, PreconditionError
from numidx.geometry.norms import (
    DualityPair,
    PolyhedralFamily,
    Vec2,
    l1_norm,
    lp_duality_pair,
    lp_norm,
    octagonal_norm,
)
from numidx.geometry.operators import ROTATION_I4, numerical_radius
from numidx.index.contact import ContactVector, condition_value, contact_vector
from numidx.index.engine import (
    index_report,
    radius_i4_maximizer,
    theorem2_bound,
    uniform_condition_check,
)
from numidx.index.lp import contact_profile, mp_constant


def test_contact_vector_examples():
    pair = DualityPair(Vec2(1.0, 0.0), Vec2(1.0, 0.0))
    assert contact_vector(pair).values == (1.0, 1.0, 0.0, 0.0)
    c = contact_vector(lp_duality_pair(2.0, 1.0), lp_norm(2.0))
    assert c.values == pytest.approx((1.0, 0.0, 1.0, 0.0), abs=1e-12)
    c = contact_vector(lp_duality_pair(1.5, 0.5), lp_norm(1.5))
    assert c.values == pytest.approx(contact_profile(1.5, 0.5), abs=1e-12)


def test_contact_vector_checks_the_pairing():
    with pytest.raises(PreconditionError):
        contact_vector(DualityPair(Vec2(1.0, 0.0), Vec2(0.5, 0.0)))


def test_vertex_pair_of_l1_has_full_contact():
    pair = DualityPair(Vec2(1.0, 0.0), Vec2(1.0, -1.0))
    assert contact_vector(pair, l1_norm()).values == pytest.approx((1.0, 1.0, 1.0, 1.0))


def test_contact_vector_bounds():
    with pytest.raises(ValueError):
        ContactVector(0.9, 0.5, 0.5, 0.1)
    with pytest.raises(ValueError):
        ContactVector(1.0, 1.5, 0.5, 0.1)


def test_theorem2_examples():
    zero = theorem2_bound(ContactVector(1.0, 1.0, 0.0, 0.0))
    assert (zero.lower_bound, zero.exact, zero.certified_index) == (0.0, True, 0.0)

    b = theorem2_bound(ContactVector(1.0, 0.5, 0.5, 0.25))
    assert b.condition_value == pytest.approx(1.25)
    assert b.lower_bound == pytest.approx(2 / 9)
    assert not b.exact
    assert b.certified_index is None


def test_theorem2_rejects_inconsistent_contact():
    with pytest.raises(InconsistentContactError):
        theorem2_bound(ContactVector(1.0, 0.0, 0.5, 0.1))


def test_condition_value_edges():
    assert condition_value(ContactVector(1.0, 0.0, 0.0, 0.0)) == 0.0
    assert math.isinf(condition_value(ContactVector(1.0, 0.0, 0.5, 0.1)))


def test_theorem2_at_lp_maximizer_is_exact():
    found = radius_i4_maximizer(lp_norm(1.5))
    bound = theorem2_bound(contact_vector(found.pair, lp_norm(1.5)))
    assert bound.exact
    assert bound.lower_bound == pytest.approx(mp_constant(1.5).value, abs=1e-10)


def test_maximizer_examples():
    pair, value = radius_i4_maximizer(lp_norm(2.0))
    assert value == 0.0
    assert tuple(pair.x) == (1.0, 0.0)

    found = radius_i4_maximizer(lp_norm(3.0))
    assert found.value == pytest.approx(0.2271, abs=1e-4)
    assert found.t0 == pytest.approx(0.435, abs=5e-3)

    pair, value = radius_i4_maximizer(l1_norm())
    assert value == pytest.approx(1.0)
    assert tuple(pair.x) == pytest.approx((1.0, 0.0))
    assert tuple(pair.xstar) == pytest.approx((1.0, -1.0))


@pytest.mark.parametrize("norm", [lp_norm(1.3), lp_norm(4.0), l1_norm(), octagonal_norm(0.7)])
def test_maximizer_value_is_the_radius_of_rotation(norm):
    assert radius_i4_maximizer(norm).value == pytest.approx(numerical_radius(norm, ROTATION_I4), abs=1e-9)


def test_index_report_l2():
    report = index_report(lp_norm(2.0))
    assert report.radius_i4 == 0.0
    assert report.lower_bound == 0.0
    assert report.exact
    assert report.certified_index == 0.0
    assert report.certified_by == "zero-contact"


def test_index_report_certified_lp():
    report = index_report(lp_norm(1.5))
    assert report.exact
    assert report.certified_index == pytest.approx(0.2271, abs=1e-4)
    assert report.certified_index == pytest.approx(report.radius_i4, abs=1e-10)
    assert report.lower_bound <= report.radius_i4 + 1e-10


def test_index_report_p3_uses_the_reduction_when_needed():
    report = index_report(lp_norm(3.0))
    assert report.exact
    assert report.certified_by in ("theorem2", "lp-reduction")
    assert report.certified_index == pytest.approx(report.radius_i4, abs=1e-10)


def test_index_report_l1_gives_a_bound_only():
    report = index_report(l1_norm())
    assert report.radius_i4 == pytest.approx(1.0)
    assert not report.exact
    assert report.certified_index is None
    assert report.lower_bound == pytest.approx(0.5)
    assert report.maximizers_checked >= 2


def test_index_report_rejects_invalid_norm():
    with pytest.raises(InvalidDescriptorError):
        index_report(PolyhedralFamily(first_quadrant_vertices=((0.5, 0.0),)))


def test_uniform_condition_check():
    assert uniform_condition_check(lp_norm(1.7)).holds
    assert uniform_condition_check(lp_norm(2.0)).pairs_checked == 0
    check = uniform_condition_check(l1_norm())
    assert not check.holds
    assert check.worst_value >= 3.0 - 1e-12


def test_index_report_lower_bound_never_exceeds_radius():
    rng = np.random.default_rng(9)
    for p in rng.uniform(1.05, 8.0, size=6):
        report = index_report(lp_norm(float(p)))
        assert report.lower_bound <= report.radius_i4 + 1e-10
