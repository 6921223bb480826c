"""
Property suites run by ``numidx verify``.

Each suite draws its inputs from a seeded generator, checks one family of
facts about numerical radii and indices, and returns a SuiteResult holding
the worst discrepancy seen and a witness for it.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Optional

import numpy as np
from scipy.spatial import ConvexHull

from numidx.errors import InvalidInputError
from numidx.geometry.norms import (
    TWO_PI,
    LpFamily,
    PolyhedralFamily,
    dual_descriptor,
    functional_field,
    l1_norm,
    lp_norm,
    norm_spec,
    octagonal_norm,
    polygon_duality_pairs,
    regular_polygon_norm,
    sphere_points,
)
from numidx.geometry.operators import (
    ISOMETRIES,
    ROTATION_I4,
    coords_to_matrices,
    numerical_radius,
    numerical_radius_batch,
    range_basis,
)
from numidx.geometry.validation import validate
from numidx.index.brute import DEFAULT_RESOLUTION, brute_force_index
from numidx.index.contact import LEMMA_TOL, ContactVector
from numidx.index.engine import index_report
from numidx.index.lp import certified_index_lp, conjugate_exponent, lp_condition_check, mp_constant
from numidx.index.minimax import (
    GRID_POINTS,
    minimax_simplex,
    minimax_simplex_grid,
    minimax_simplex_lp,
    minimax_simplex_oracle,
)

logger = logging.getLogger(__name__)

SUITES = ("lemma1", "minimax", "theorem3", "sandwich", "isometry", "bounds", "adjoint")
SANDWICH_EXPONENTS = (1.1, 1.25, 4.0, 8.0)
BRUTE_TOL = 2e-3


@dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: bool
    checks: int
    failures: int
    worst: float
    tolerance: float
    witness: Optional[Dict[str, Any]] = None
    details: Dict[str, Any] = field(default_factory=dict)


class _Tally:
    """Accumulates checks; ``worst`` is the largest excess over the tolerance seen."""

    def __init__(self, name: str, tolerance: float) -> None:
        self.name = name
        self.tolerance = tolerance
        self.checks = 0
        self.failures = 0
        self.worst = -math.inf
        self.witness: Optional[Dict[str, Any]] = None

    def add(self, excess: float, witness: Dict[str, Any]) -> None:
        """``excess`` <= 0 passes."""
        self.checks += 1
        if excess > 0.0 or math.isnan(excess):
            self.failures += 1
        if excess > self.worst or math.isnan(excess):
            self.worst = excess
            self.witness = witness

    def add_many(self, excess: np.ndarray, witness: Callable[[int], Dict[str, Any]]) -> None:
        excess = np.asarray(excess, dtype=float)
        if excess.size == 0:
            return
        self.checks += int(excess.size)
        bad = (excess > 0.0) | np.isnan(excess)
        self.failures += int(bad.sum())
        k = int(np.argmax(np.where(np.isnan(excess), np.inf, excess)))
        if excess[k] > self.worst or math.isnan(excess[k]):
            self.worst = float(excess[k])
            self.witness = witness(k)

    def result(self, **details: Any) -> SuiteResult:
        result = SuiteResult(
            name=self.name,
            passed=self.failures == 0,
            checks=self.checks,
            failures=self.failures,
            worst=self.worst if self.checks else 0.0,
            tolerance=self.tolerance,
            witness=self.witness,
            details=details,
        )
        logger.info("suite %s: %d checks, %d failures", self.name, self.checks, self.failures)
        return result


# ---------------------------------------------------------------------------
# Random inputs
# ---------------------------------------------------------------------------


def random_lp_norm(rng: np.random.Generator, low: float = 1.1, high: float = 10.0) -> LpFamily:
    """p log-uniform on [low, high]."""
    return lp_norm(float(np.exp(rng.uniform(math.log(low), math.log(high)))))


def random_polyhedral_norm(rng: np.random.Generator, *, max_points: int = 6) -> PolyhedralFamily:
    """
    Convex hull of random first-quadrant points between the l1 and l_inf
    spheres, plus (1, 0), closed under the absolute symmetries.
    """
    while True:
        k = int(rng.integers(1, max_points + 1))
        phi = rng.uniform(0.0, math.pi / 2, size=k)
        c, s = np.cos(phi), np.sin(phi)
        r1 = 1.0 / (c + s)
        rinf = 1.0 / np.maximum(c, s)
        r = r1 + rng.uniform(0.05, 0.95, size=k) * (rinf - r1)
        pts = np.vstack([[1.0, 0.0], np.column_stack([r * c, r * s])])

        closed = np.vstack([pts, pts[:, ::-1]])
        closed = np.vstack([closed * [sx, sy] for sx in (1.0, -1.0) for sy in (1.0, -1.0)])
        hull = ConvexHull(closed)
        verts = closed[hull.vertices]
        quad = verts[(verts[:, 0] >= 0.0) & (verts[:, 1] >= 0.0)]
        quad = quad[np.argsort(np.arctan2(quad[:, 1], quad[:, 0]), kind="stable")]
        keep = [quad[0]]
        for v in quad[1:]:
            if np.max(np.abs(v - keep[-1])) > 1e-12:
                keep.append(v)
        norm = PolyhedralFamily(first_quadrant_vertices=tuple((float(a), float(b)) for a, b in keep))
        if validate(norm).passed:
            return norm


def _matrices_to_coords(m: np.ndarray) -> np.ndarray:
    return np.stack(
        [
            (m[..., 0, 0] + m[..., 1, 1]) / 2,
            (m[..., 0, 0] - m[..., 1, 1]) / 2,
            (m[..., 0, 1] + m[..., 1, 0]) / 2,
            (m[..., 0, 1] - m[..., 1, 0]) / 2,
        ],
        axis=-1,
    )


# ---------------------------------------------------------------------------
# Suites
# ---------------------------------------------------------------------------


def lemma1_suite(*, seed: int = 0, norms: int = 20, pairs: int = 10_000) -> SuiteResult:
    """c4 <= min(c1, c2, c3) at random duality pairs of random norms (half lp, half polyhedral)."""
    rng = np.random.default_rng(seed)
    tally = _Tally("lemma1", LEMMA_TOL)
    per_norm = max(1, pairs // norms)
    for i in range(norms):
        norm = random_lp_norm(rng) if i % 2 == 0 else random_polyhedral_norm(rng)
        x = sphere_points(norm, rng.uniform(0.0, TWO_PI, size=per_norm))
        f = functional_field(norm, x)
        if isinstance(norm, PolyhedralFamily):
            vx, vf = polygon_duality_pairs(norm)
            x, f = np.vstack([x, vx]), np.vstack([f, vf])
        c = np.abs(range_basis(x, f))
        excess = np.maximum(c[3] - c[:3].min(axis=0), np.abs(c[0] - 1.0)) - LEMMA_TOL
        tally.add_many(
            excess,
            lambda k, norm=norm, x=x, f=f, c=c: {
                "norm": norm_spec(norm),
                "x": x[k].tolist(),
                "xstar": f[k].tolist(),
                "contact": c[:, k].tolist(),
            },
        )
    return tally.result(norms=norms)


def random_contact(rng: np.random.Generator) -> ContactVector:
    """c1 = 1, c2 and c3 in [0.05, 1], 0 < c4 <= min(c2, c3)."""
    c2, c3 = rng.uniform(0.05, 1.0, size=2)
    c4 = rng.uniform(0.01, 1.0) * min(c2, c3)
    return ContactVector(1.0, float(c2), float(c3), float(c4))


def minimax_suite(*, seed: int = 0, count: int = 100, grid_points: int = GRID_POINTS) -> SuiteResult:
    """
    Closed form against the K' vertex oracle and HiGHS (1e-9) and against the
    zoomed simplex grid (1e-6).
    """
    rng = np.random.default_rng(seed)
    tally = _Tally("minimax", 1e-9)
    for _ in range(count):
        contact = random_contact(rng)
        closed = minimax_simplex(contact)
        oracle = minimax_simplex_oracle(contact)
        lp = minimax_simplex_lp(contact)
        grid = minimax_simplex_grid(contact, points=grid_points)
        witness = {"contact": list(contact.values), "closed": closed, "oracle": oracle, "lp": lp, "grid": grid}
        tally.add(max(abs(closed - oracle), abs(closed - lp)) - 1e-9, witness)
        tally.add(abs(closed - grid) - 1e-6, witness)
    return tally.result(count=count, grid_points=grid_points)


def theorem3_suite(*, seed: int = 0, samples: int = 50) -> SuiteResult:
    """
    The certified lp index on [3/2, 3]: agreement with M_p and with the
    sampled v(I4), conjugate symmetry of M_p, and the condition check.
    """
    rng = np.random.default_rng(seed)
    tally = _Tally("theorem3", 1e-8)

    tally.add(abs(mp_constant(2.0).value), {"p": 2.0})
    for p in (round(1.5 + 0.1 * i, 12) for i in range(16)):
        certified = certified_index_lp(p)
        mp = mp_constant(min(p, conjugate_exponent(p))).value
        radius = numerical_radius(lp_norm(p), ROTATION_I4)
        witness = {"p": p, "certified": certified, "mp": mp, "radius_i4": radius}
        tally.add(max(abs(certified - mp), abs(certified - radius)) - 1e-8, witness)
        if p < 2.0:
            check = lp_condition_check(p)
            tally.add(0.0 if check.holds else -check.min_value, {"p": p, "argmin_t": check.argmin_t})

    for p in rng.uniform(1.0, 20.0, size=samples):
        p = float(max(p, 1.0 + 1e-3))
        a, b = mp_constant(p).value, mp_constant(conjugate_exponent(p)).value
        tally.add(abs(a - b) - 1e-10, {"p": p, "mp": a, "mq": b})
    return tally.result()


def sandwich_suite(*, exponents: tuple[float, ...] = SANDWICH_EXPONENTS, resolution: int = DEFAULT_RESOLUTION) -> SuiteResult:
    """max{2^(-1/p), 2^(-1/q)} M_p <= n(lp^2) <= M_p, with n estimated by brute force."""
    tally = _Tally("sandwich", BRUTE_TOL)
    for p in exponents:
        q = conjugate_exponent(p)
        mp = mp_constant(p).value
        lower = max(2.0 ** (-1.0 / p), 2.0 ** (-1.0 / q)) * mp
        estimate = brute_force_index(lp_norm(p), resolution).value
        witness = {"p": p, "lower": lower, "brute": estimate, "mp": mp}
        tally.add(max(lower - estimate, estimate - mp) - BRUTE_TOL, witness)
    return tally.result(resolution=resolution)


def isometry_suite(*, seed: int = 0, operators: int = 1000) -> SuiteResult:
    """v(T) = v(+-I_j^-1 T I_j) on five norms."""
    rng = np.random.default_rng(seed)
    tally = _Tally("isometry", 1e-8)
    norms = (lp_norm(1.5), lp_norm(3.0), l1_norm(), octagonal_norm(0.75), regular_polygon_norm(12))
    for norm in norms:
        coords = rng.normal(size=(operators, 4))
        base = numerical_radius_batch(norm, coords)
        mats = coords_to_matrices(coords)
        for j, S in enumerate(ISOMETRIES, start=1):
            conj = _matrices_to_coords(S.T @ mats @ S)
            for sign in (1.0, -1.0):
                values = numerical_radius_batch(norm, sign * conj)
                tally.add_many(
                    np.abs(values - base) - 1e-8,
                    lambda k, norm=norm, j=j, sign=sign, coords=coords, values=values, base=base: {
                        "norm": norm_spec(norm),
                        "isometry": j,
                        "sign": sign,
                        "coords": coords[k].tolist(),
                        "v": float(base[k]),
                        "v_conjugated": float(values[k]),
                    },
                )
    return tally.result(operators=operators, norms=len(norms))


def bounds_suite(*, seed: int = 0, norms: int = 20, resolution: int = DEFAULT_RESOLUTION) -> SuiteResult:
    """Contact bound <= brute-force index <= v(I4) on random polyhedral norms."""
    rng = np.random.default_rng(seed)
    tally = _Tally("bounds", BRUTE_TOL)
    for _ in range(norms):
        norm = random_polyhedral_norm(rng)
        report = index_report(norm)
        estimate = brute_force_index(norm, resolution).value
        witness = {
            "norm": norm_spec(norm),
            "bound": report.lower_bound,
            "brute": estimate,
            "radius_i4": report.radius_i4,
        }
        tally.add(max(report.lower_bound - estimate - BRUTE_TOL, estimate - report.radius_i4 - 1e-3), witness)
    return tally.result(norms=norms, resolution=resolution)


def adjoint_suite(*, seed: int = 0, norms: int = 6, operators: int = 200) -> SuiteResult:
    """v(T) on X equals v(T^t) on the dual plane."""
    rng = np.random.default_rng(seed)
    tally = _Tally("adjoint", 1e-8)
    for i in range(norms):
        norm = random_lp_norm(rng, 1.25, 5.0) if i % 2 == 0 else random_polyhedral_norm(rng)
        dual = dual_descriptor(norm)
        coords = rng.normal(size=(operators, 4))
        # transposing flips the sign of the I4 coefficient only
        transposed = coords * np.array([1.0, 1.0, 1.0, -1.0])
        primal = numerical_radius_batch(norm, coords)
        dualv = numerical_radius_batch(dual, transposed)
        tally.add_many(
            np.abs(primal - dualv) - 1e-8,
            lambda k, norm=norm, coords=coords, primal=primal, dualv=dualv: {
                "norm": norm_spec(norm),
                "coords": coords[k].tolist(),
                "v": float(primal[k]),
                "v_adjoint": float(dualv[k]),
            },
        )
    return tally.result(norms=norms, operators=operators)


_RUNNERS: Dict[str, Callable[..., SuiteResult]] = {
    "lemma1": lemma1_suite,
    "minimax": minimax_suite,
    "theorem3": theorem3_suite,
    "sandwich": sandwich_suite,
    "isometry": isometry_suite,
    "bounds": bounds_suite,
    "adjoint": adjoint_suite,
}


def run_suite(name: str, **options: Any) -> list[SuiteResult]:
    """Run one suite (or every suite for ``"all"``); options go to suites that accept them."""
    if name == "all":
        return [r for suite in SUITES for r in run_suite(suite, **options)]
    if name not in _RUNNERS:
        raise InvalidInputError(f"unknown suite {name!r}; choose from {', '.join(SUITES + ('all',))}")
    runner = _RUNNERS[name]
    accepted = runner.__kwdefaults__ or {}
    return [runner(**{k: v for k, v in options.items() if k in accepted})]
