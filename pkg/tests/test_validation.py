import pytest

from numidx.geometry.norms import PolyhedralFamily, l1_norm, linf_norm, lp_norm, octagonal_norm, regular_polygon_norm
from numidx.geometry.validation import PROPERTIES, describe_validation, validate


@pytest.mark.parametrize(
    "norm",
    [lp_norm(3.0), lp_norm(1.05), lp_norm(50.0), l1_norm(), linf_norm(), octagonal_norm(0.6), regular_polygon_norm(16)],
)
def test_valid_norms_pass(norm):
    report = validate(norm)
    assert report.passed, report.reason


def test_normalization_failure_has_witness():
    report = validate(PolyhedralFamily(first_quadrant_vertices=((0.5, 0.0),)))
    assert not report.passed
    assert report.property == "normalization"
    assert report.witness == (1.0, 0.0)


def test_exponent_at_most_one_is_a_descriptor_failure():
    report = validate(lp_norm(1.0))
    assert not report.passed
    assert report.property == "descriptor"


def test_unordered_vertices_fail():
    report = validate(PolyhedralFamily(first_quadrant_vertices=((0.8, 0.8), (1.0, 0.0))))
    assert report.property == "ordering"


def test_duplicate_vertices_fail():
    report = validate(PolyhedralFamily(first_quadrant_vertices=((1.0, 0.0), (1.0, 0.0))))
    assert report.property == "ordering"


def test_interior_vertex_fails_convexity():
    # (0.4, 0.4) lies inside the l1 ball spanned by (1,0) and (0,1)
    report = validate(PolyhedralFamily(first_quadrant_vertices=((1.0, 0.0), (0.4, 0.4))))
    assert not report.passed
    assert report.property == "convexity"


def test_negative_coordinates_fail():
    report = validate(PolyhedralFamily(first_quadrant_vertices=((1.0, -0.1),)))
    assert report.property == "descriptor"


def test_describe_validation():
    data = describe_validation(validate(lp_norm(2.0)))
    assert data["passed"] is True
    assert data["property"] is None
    assert data["checks"] == list(PROPERTIES)
