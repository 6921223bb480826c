"""
Real 2x2 operators on an absolute symmetric plane.

Operators are decomposed in the basis of onto isometries

    I1 = [[1, 0], [0, 1]]    I2 = [[1, 0], [0, -1]]
    I3 = [[0, 1], [1, 0]]    I4 = [[0, 1], [-1, 0]]

which is what makes the numerical range cheap to sample: at a duality pair
(x, x*) the value x*(Tx) is the dot product of the coefficients a1..a4 with
the four numbers x*(I_j x).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Literal

import numpy as np

from numidx.errors import InvalidInputError
from numidx.geometry.norms import (
    TWO_PI,
    LpFamily,
    PolyhedralFamily,
    Vec2,
    check_descriptor,
    evaluate_many,
    functional_field,
    polygon,
    polygon_duality_pairs,
    sphere_point,
    sphere_points,
    supporting_functionals,
)
from numidx.search import grid_refine_max

logger = logging.getLogger(__name__)

THETA_GRID = 4096
REFINE_CANDIDATES = 8
GOLDEN_ITERATIONS = 60
BATCH_CHUNK = 2048

Method = Literal["auto", "sampled"]

ISOMETRIES = (
    np.array([[1.0, 0.0], [0.0, 1.0]]),
    np.array([[1.0, 0.0], [0.0, -1.0]]),
    np.array([[0.0, 1.0], [1.0, 0.0]]),
    np.array([[0.0, 1.0], [-1.0, 0.0]]),
)


@dataclass(frozen=True)
class Operator2x2:
    """(x, y) -> (t11 x + t12 y, t21 x + t22 y)."""

    t11: float
    t12: float
    t21: float
    t22: float

    def __post_init__(self) -> None:
        if not all(math.isfinite(t) for t in self.entries):
            raise InvalidInputError(f"operator entries must be finite, got {self.entries}")

    @property
    def entries(self) -> tuple[float, float, float, float]:
        return (self.t11, self.t12, self.t21, self.t22)

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.t11, self.t12], [self.t21, self.t22]], dtype=float)

    @classmethod
    def from_matrix(cls, m: np.ndarray | Iterable[Iterable[float]]) -> Operator2x2:
        m = np.asarray(m, dtype=float)
        if m.shape != (2, 2):
            raise InvalidInputError(f"expected a 2x2 matrix, got shape {m.shape}")
        return cls(float(m[0, 0]), float(m[0, 1]), float(m[1, 0]), float(m[1, 1]))

    @classmethod
    def parse(cls, literal: str) -> Operator2x2:
        """Parse the comma literal "t11,t12,t21,t22"."""
        parts = [p.strip() for p in literal.split(",")]
        if len(parts) != 4:
            raise InvalidInputError(f"operator literal needs 4 comma-separated entries, got {literal!r}")
        try:
            return cls(*(float(p) for p in parts))
        except ValueError as exc:
            raise InvalidInputError(f"operator literal {literal!r}: {exc}") from exc

    def apply(self, v: Vec2 | Iterable[float]) -> Vec2:
        x, y = Vec2.of(v)
        return Vec2(self.t11 * x + self.t12 * y, self.t21 * x + self.t22 * y)

    def scaled(self, factor: float) -> Operator2x2:
        return Operator2x2(*(factor * t for t in self.entries))


@dataclass(frozen=True)
class IsometryCoefficients:
    a1: float
    a2: float
    a3: float
    a4: float

    def as_array(self) -> np.ndarray:
        return np.array([self.a1, self.a2, self.a3, self.a4], dtype=float)

    @property
    def plus_norm(self) -> float:
        """||T||_+ = sum |a_k|, an upper bound for the operator norm."""
        return abs(self.a1) + abs(self.a2) + abs(self.a3) + abs(self.a4)


IDENTITY = Operator2x2(1.0, 0.0, 0.0, 1.0)
ROTATION_I4 = Operator2x2(0.0, 1.0, -1.0, 0.0)


def isometry(j: int) -> Operator2x2:
    if j not in (1, 2, 3, 4):
        raise InvalidInputError(f"isometry index must be 1..4, got {j}")
    return Operator2x2.from_matrix(ISOMETRIES[j - 1])


# ---------------------------------------------------------------------------
# Coordinates
# ---------------------------------------------------------------------------


def to_isometry_coords(T: Operator2x2) -> IsometryCoefficients:
    return IsometryCoefficients(
        a1=(T.t11 + T.t22) / 2,
        a2=(T.t11 - T.t22) / 2,
        a3=(T.t12 + T.t21) / 2,
        a4=(T.t12 - T.t21) / 2,
    )


def from_isometry_coords(c: IsometryCoefficients) -> Operator2x2:
    return Operator2x2(t11=c.a1 + c.a2, t12=c.a3 + c.a4, t21=c.a3 - c.a4, t22=c.a1 - c.a2)


def coords_to_matrices(coords: np.ndarray) -> np.ndarray:
    """(N, 4) isometry coordinates -> (N, 2, 2) matrices."""
    a = np.asarray(coords, dtype=float)
    out = np.empty(a.shape[:-1] + (2, 2))
    out[..., 0, 0] = a[..., 0] + a[..., 1]
    out[..., 1, 1] = a[..., 0] - a[..., 1]
    out[..., 0, 1] = a[..., 2] + a[..., 3]
    out[..., 1, 0] = a[..., 2] - a[..., 3]
    return out


def conjugate_by_isometry(T: Operator2x2, j: int, sign: int = 1) -> Operator2x2:
    """sign * I_j^{-1} T I_j; every I_j is orthogonal so I_j^{-1} = I_j^T."""
    if sign not in (1, -1):
        raise InvalidInputError(f"sign must be +1 or -1, got {sign}")
    S = isometry(j).matrix
    return Operator2x2.from_matrix(sign * (S.T @ T.matrix @ S))


def adjoint(T: Operator2x2) -> Operator2x2:
    """The adjoint acting on the dual plane (the transpose)."""
    return Operator2x2(T.t11, T.t21, T.t12, T.t22)


# ---------------------------------------------------------------------------
# Batched kernels
# ---------------------------------------------------------------------------


def range_basis(points: np.ndarray, functionals: np.ndarray) -> np.ndarray:
    """The four values f(I_j x) for arrays of points/functionals; shape (4, ...)."""
    x1, x2 = points[..., 0], points[..., 1]
    f1, f2 = functionals[..., 0], functionals[..., 1]
    return np.stack([f1 * x1 + f2 * x2, f1 * x1 - f2 * x2, f1 * x2 + f2 * x1, f1 * x2 - f2 * x1])


def _chunked(fn: Callable[[np.ndarray], np.ndarray], coords: np.ndarray, size: int = BATCH_CHUNK) -> np.ndarray:
    coords = np.atleast_2d(np.asarray(coords, dtype=float))
    if len(coords) <= size:
        return fn(coords)
    return np.concatenate([fn(coords[i : i + size]) for i in range(0, len(coords), size)])


def _sampled_radius(
    norm: LpFamily | PolyhedralFamily,
    coords: np.ndarray,
    theta_grid: int,
    candidates: int,
    iterations: int,
) -> np.ndarray:
    a = coords[:, :, None]

    def objective(thetas: np.ndarray) -> np.ndarray:
        x = sphere_points(norm, thetas)
        c = range_basis(x, functional_field(norm, x))
        return np.abs(a[:, 0] * c[0] + a[:, 1] * c[1] + a[:, 2] * c[2] + a[:, 3] * c[3])

    grid = np.linspace(0.0, TWO_PI, theta_grid, endpoint=False)
    return grid_refine_max(objective, grid, candidates=candidates, iterations=iterations, period=TWO_PI).value


def _sampled_norm(
    norm: LpFamily | PolyhedralFamily,
    coords: np.ndarray,
    theta_grid: int,
    candidates: int,
    iterations: int,
) -> np.ndarray:
    m = coords_to_matrices(coords)[:, :, :, None]

    def objective(thetas: np.ndarray) -> np.ndarray:
        x = sphere_points(norm, thetas)
        x1, x2 = x[..., 0], x[..., 1]
        y = np.stack([m[:, 0, 0] * x1 + m[:, 0, 1] * x2, m[:, 1, 0] * x1 + m[:, 1, 1] * x2], axis=-1)
        return evaluate_many(norm, y)

    grid = np.linspace(0.0, TWO_PI, theta_grid, endpoint=False)
    return grid_refine_max(objective, grid, candidates=candidates, iterations=iterations, period=TWO_PI).value


def _polygon_radius(norm: PolyhedralFamily, coords: np.ndarray) -> np.ndarray:
    # x -> f(Tx) is affine on each edge, so the sup sits at a (vertex, functional) pair
    points, functionals = polygon_duality_pairs(norm)
    basis = range_basis(points, functionals)  # (4, 2n)
    return np.max(np.abs(coords @ basis), axis=1)


def _polygon_norm(norm: PolyhedralFamily, coords: np.ndarray) -> np.ndarray:
    # a convex function on the ball peaks at a vertex
    poly = polygon(norm)
    images = coords_to_matrices(coords) @ poly.vertices.T  # (N, 2, n)
    return np.max(np.swapaxes(images, 1, 2) @ poly.normals.T, axis=(1, 2))


def numerical_radius_batch(
    norm: LpFamily | PolyhedralFamily,
    coords: np.ndarray,
    *,
    method: Method = "auto",
    theta_grid: int = THETA_GRID,
    candidates: int = REFINE_CANDIDATES,
    iterations: int = GOLDEN_ITERATIONS,
) -> np.ndarray:
    """Numerical radii of many operators given as (N, 4) isometry coordinates."""
    check_descriptor(norm)
    if isinstance(norm, PolyhedralFamily) and method == "auto":
        return _chunked(lambda c: _polygon_radius(norm, c), coords)
    return _chunked(lambda c: _sampled_radius(norm, c, theta_grid, candidates, iterations), coords)


def operator_norm_batch(
    norm: LpFamily | PolyhedralFamily,
    coords: np.ndarray,
    *,
    method: Method = "auto",
    theta_grid: int = THETA_GRID,
    candidates: int = REFINE_CANDIDATES,
    iterations: int = GOLDEN_ITERATIONS,
) -> np.ndarray:
    """Operator norms of many operators given as (N, 4) isometry coordinates."""
    check_descriptor(norm)
    if isinstance(norm, PolyhedralFamily) and method == "auto":
        return _chunked(lambda c: _polygon_norm(norm, c), coords, size=512)
    return _chunked(lambda c: _sampled_norm(norm, c, theta_grid, candidates, iterations), coords)


# ---------------------------------------------------------------------------
# Scalar operations
# ---------------------------------------------------------------------------


def operator_norm(
    norm: LpFamily | PolyhedralFamily,
    T: Operator2x2,
    *,
    method: Method = "auto",
    theta_grid: int = THETA_GRID,
    candidates: int = REFINE_CANDIDATES,
    iterations: int = GOLDEN_ITERATIONS,
) -> float:
    coords = to_isometry_coords(T).as_array()[None, :]
    value = operator_norm_batch(
        norm, coords, method=method, theta_grid=theta_grid, candidates=candidates, iterations=iterations
    )
    return float(value[0])


def numerical_range_values(norm: LpFamily | PolyhedralFamily, T: Operator2x2, theta: float) -> list[float]:
    """x*(Tx) for x = sphere_point(theta) and every extreme supporting functional x*."""
    x = sphere_point(norm, theta)
    tx = T.apply(x)
    return [f.dot(tx) for f in supporting_functionals(norm, x).functionals]


def numerical_radius(
    norm: LpFamily | PolyhedralFamily,
    T: Operator2x2,
    *,
    method: Method = "auto",
    theta_grid: int = THETA_GRID,
    candidates: int = REFINE_CANDIDATES,
    iterations: int = GOLDEN_ITERATIONS,
) -> float:
    """
    v(T) = sup |x*(Tx)| over duality pairs.

    Polyhedral norms are enumerated exactly unless ``method="sampled"``; lp
    norms use a theta grid with golden-section polishing, which reports a
    lower bound accurate to about 1e-10.
    """
    coords = to_isometry_coords(T).as_array()[None, :]
    value = numerical_radius_batch(
        norm, coords, method=method, theta_grid=theta_grid, candidates=candidates, iterations=iterations
    )
    logger.debug("numerical radius of %s: %.12g (%s)", T.entries, value[0], method)
    return float(value[0])
