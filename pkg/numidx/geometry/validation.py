from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.spatial import ConvexHull

from numidx.errors import InvalidDescriptorError
from numidx.geometry.norms import (
    LpFamily,
    PolyhedralFamily,
    check_descriptor,
    evaluate_many,
    polygon,
    polygon_ray_gauge,
)

# ---------------------------------------------------------------------------
# Validation goals
# - Reject anything that is not an absolute symmetric norm before the engines
#   touch it.
# - Report the first violated property together with a concrete witness.
# - Never raise: callers (CLI, suites) decide what a failure means.
# ---------------------------------------------------------------------------

PROPERTIES = (
    "descriptor",
    "ordering",
    "convexity",
    "normalization",
    "absoluteness",
    "symmetry",
    "sandwich",
    "triangle",
    "homogeneity",
    "gauge-consistency",
)

_EQ_TOL = 1e-12
_INEQ_TOL = 1e-12


@dataclass(frozen=True)
class ValidationReport:
    passed: bool
    reason: str
    property: str = ""
    witness: Optional[Tuple[float, ...]] = None


def _fail(prop: str, reason: str, witness: Optional[Tuple[float, ...]] = None) -> ValidationReport:
    return ValidationReport(False, f"{prop} violated: {reason}", property=prop, witness=witness)


def _rel(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.abs(a - b) / np.maximum(1.0, np.maximum(np.abs(a), np.abs(b)))


def _first(mask: np.ndarray) -> int:
    return int(np.argmax(mask))


def _check_polygon_shape(norm: PolyhedralFamily) -> Optional[ValidationReport]:
    pts = np.asarray(norm.first_quadrant_vertices, dtype=float)
    angles = np.arctan2(pts[:, 1], pts[:, 0])
    for i in range(1, len(pts)):
        if np.max(np.abs(pts[i] - pts[i - 1])) <= _EQ_TOL:
            return _fail("ordering", "duplicate vertex", tuple(pts[i]))
        if angles[i] < angles[i - 1]:
            return _fail("ordering", "vertices are not in counterclockwise order", tuple(pts[i]))

    poly = polygon(norm)
    closure = poly.closure
    if len(poly.vertices) < 3:
        return _fail("convexity", "vertex set spans no interior")
    hull = ConvexHull(closure)
    extreme = set(int(i) for i in hull.vertices)
    # a closure point may sit on an edge (it is pruned as collinear) but never inside
    gauges = evaluate_many(norm, closure)
    for i, point in enumerate(closure):
        if i not in extreme and gauges[i] < 1.0 - 1e-9:
            return _fail("convexity", "vertex lies inside the convex hull", tuple(point))
    incoming = poly.vertices - np.roll(poly.vertices, 1, axis=0)
    outgoing = np.roll(poly.vertices, -1, axis=0) - poly.vertices
    turns = incoming[:, 0] * outgoing[:, 1] - incoming[:, 1] * outgoing[:, 0]
    if np.any(turns <= 0.0):
        return _fail("convexity", "boundary is not convex", tuple(poly.vertices[_first(turns <= 0.0)]))
    return None


def validate(
    norm: LpFamily | PolyhedralFamily,
    *,
    samples: int = 1000,
    seed: int = 0,
) -> ValidationReport:
    """
    Check that ``norm`` describes an absolute symmetric norm.

    Checks run in the order of PROPERTIES and stop at the first failure.
    Sampled properties use a seeded generator, so reports are reproducible.
    """
    try:
        check_descriptor(norm)
    except InvalidDescriptorError as exc:
        return _fail("descriptor", str(exc))

    if isinstance(norm, PolyhedralFamily):
        shape = _check_polygon_shape(norm)
        if shape is not None:
            return shape

    for unit in ((1.0, 0.0), (0.0, 1.0)):
        value = float(evaluate_many(norm, np.asarray(unit)))
        if not math.isclose(value, 1.0, rel_tol=0.0, abs_tol=_EQ_TOL):
            return _fail("normalization", f"||{unit}|| = {value:.12g}, expected 1", unit)

    rng = np.random.default_rng(seed)
    x = rng.normal(size=(samples, 2)) * rng.choice([0.01, 1.0, 100.0], size=(samples, 1))
    y = rng.normal(size=(samples, 2))
    lam = rng.normal(scale=10.0, size=samples)

    nx = evaluate_many(norm, x)
    nabs = evaluate_many(norm, np.abs(x))
    bad = _rel(nx, nabs) > _EQ_TOL
    if bad.any():
        return _fail("absoluteness", "||(a,b)|| != ||(|a|,|b|)||", tuple(x[_first(bad)]))

    nswap = evaluate_many(norm, x[:, ::-1])
    bad = _rel(nx, nswap) > _EQ_TOL
    if bad.any():
        return _fail("symmetry", "||(a,b)|| != ||(b,a)||", tuple(x[_first(bad)]))

    lo = np.max(np.abs(x), axis=1)
    hi = np.sum(np.abs(x), axis=1)
    scale = np.maximum(1.0, hi)
    bad = (nx < lo - _INEQ_TOL * scale) | (nx > hi + _INEQ_TOL * scale)
    if bad.any():
        return _fail("sandwich", "max(|a|,|b|) <= ||(a,b)|| <= |a|+|b| fails", tuple(x[_first(bad)]))

    ny = evaluate_many(norm, y)
    nsum = evaluate_many(norm, x + y)
    bad = nsum > nx + ny + _INEQ_TOL * (nx + ny + 1.0)
    if bad.any():
        k = _first(bad)
        return _fail("triangle", "||x+y|| > ||x|| + ||y||", tuple(x[k]) + tuple(y[k]))

    nscaled = evaluate_many(norm, lam[:, None] * y)
    bad = _rel(nscaled, np.abs(lam) * ny) > 1e-11
    if bad.any():
        k = _first(bad)
        return _fail("homogeneity", "||l x|| != |l| ||x||", (float(lam[k]),) + tuple(y[k]))

    if isinstance(norm, PolyhedralFamily):
        ray = polygon_ray_gauge(norm, y)
        bad = _rel(ny, ray) > _EQ_TOL
        if bad.any():
            return _fail("gauge-consistency", "edge-normal and ray gauges disagree", tuple(y[_first(bad)]))

    return ValidationReport(True, "absolute symmetric norm")


def describe_validation(report: ValidationReport) -> dict:
    """Machine-readable form of a report, used by the CLI."""
    return {
        "passed": report.passed,
        "property": report.property or None,
        "reason": report.reason,
        "witness": list(report.witness) if report.witness is not None else None,
        "checks": list(PROPERTIES),
    }
