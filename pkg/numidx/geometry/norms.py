"""
Absolute symmetric norms on the real plane.

Two families are supported: the smooth lp norms (1 < p < inf) and polyhedral
norms given by their first-quadrant vertices. Everything here is a pure
function of immutable inputs; the vectorised helpers (``*_many``) are what the
operator and index layers use for grid work.
"""

from __future__ import annotations

import json
import math
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from functools import lru_cache
from typing import Annotated, Any, Literal, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, TypeAdapter, ValidationError

from numidx.errors import InvalidDescriptorError, InvalidInputError, PreconditionError

TAU_PAIR = 1e-10
TAU_DUAL = 1e-10
DEDUP_TOL = 1e-12
COLLINEAR_TOL = 1e-12
VERTEX_ANGLE_TOL = 1e-9
TWO_PI = 2.0 * math.pi


# ---------------------------------------------------------------------------
# Types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Vec2:
    x: float
    y: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise InvalidInputError(f"Vec2 coordinates must be finite, got ({self.x}, {self.y})")

    @classmethod
    def of(cls, value: Vec2 | Iterable[float]) -> Vec2:
        if isinstance(value, Vec2):
            return value
        try:
            x, y = (float(c) for c in value)
        except (TypeError, ValueError) as exc:
            raise InvalidInputError(f"expected a pair of numbers, got {value!r}") from exc
        return cls(x, y)

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y], dtype=float)

    def dot(self, other: Vec2) -> float:
        return self.x * other.x + self.y * other.y

    def __iter__(self):
        yield self.x
        yield self.y


class LpFamily(BaseModel):
    model_config = ConfigDict(frozen=True)

    family: Literal["lp"] = "lp"
    p: float


class PolyhedralFamily(BaseModel):
    """
    Unit ball = convex hull of the given first-quadrant vertices closed under
    sign changes and the coordinate swap.
    """

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    family: Literal["polyhedral"] = "polyhedral"
    first_quadrant_vertices: tuple[tuple[float, float], ...] = Field(
        alias="firstQuadrantVertices", min_length=1
    )


NormDescriptor = Annotated[Union[LpFamily, PolyhedralFamily], Field(discriminator="family")]
_DESCRIPTOR_ADAPTER: TypeAdapter[LpFamily | PolyhedralFamily] = TypeAdapter(NormDescriptor)


@dataclass(frozen=True)
class SupportSet:
    """A point of the unit sphere and the extreme functionals supporting it there."""

    point: Vec2
    functionals: tuple[Vec2, ...]


@dataclass(frozen=True)
class DualityPair:
    x: Vec2
    xstar: Vec2

    @property
    def pairing(self) -> float:
        return self.xstar.dot(self.x)


@dataclass(frozen=True)
class Polygon:
    """Counterclockwise vertex/edge data of a polyhedral unit ball."""

    vertices: np.ndarray  # (n, 2), angles ascending in [0, 2pi)
    angles: np.ndarray  # (n,)
    normals: np.ndarray  # (n, 2); normals[i] . v == 1 on the edge vertices[i] -> vertices[i+1]
    closure: np.ndarray  # symmetric closure before collinear pruning


# ---------------------------------------------------------------------------
# Descriptor parsing / construction
# ---------------------------------------------------------------------------


def parse_norm_spec(spec: str | Mapping[str, Any]) -> LpFamily | PolyhedralFamily:
    """Parse a norm-spec JSON document (or an already decoded mapping)."""
    if isinstance(spec, str):
        try:
            spec = json.loads(spec)
        except json.JSONDecodeError as exc:
            raise InvalidInputError(f"norm spec is not valid JSON: {exc}") from exc
    try:
        return _DESCRIPTOR_ADAPTER.validate_python(spec)
    except ValidationError as exc:
        raise InvalidInputError(f"malformed norm spec: {exc.errors()[0]['msg']}") from exc


def norm_spec(norm: LpFamily | PolyhedralFamily) -> dict[str, Any]:
    """The JSON-ready norm-spec document for ``norm``."""
    if isinstance(norm, LpFamily):
        return {"family": "lp", "p": norm.p}
    return {
        "family": "polyhedral",
        "firstQuadrantVertices": [list(v) for v in norm.first_quadrant_vertices],
    }


def lp_norm(p: float) -> LpFamily:
    return LpFamily(p=p)


def l1_norm() -> PolyhedralFamily:
    return PolyhedralFamily(first_quadrant_vertices=((1.0, 0.0),))


def linf_norm() -> PolyhedralFamily:
    return PolyhedralFamily(first_quadrant_vertices=((1.0, 0.0), (1.0, 1.0)))


def octagonal_norm(s: float) -> PolyhedralFamily:
    """Octagon with vertices (1,0) and (s,s); needs 1/2 < s < 1."""
    if not 0.5 < s < 1.0:
        raise InvalidDescriptorError(f"octagonal norm needs 1/2 < s < 1, got {s}")
    return PolyhedralFamily(first_quadrant_vertices=((1.0, 0.0), (s, s)))


def regular_polygon_norm(sides: int) -> PolyhedralFamily:
    """Regular polygon with a vertex at (1,0); ``sides`` must be a multiple of 4."""
    if sides < 4 or sides % 4:
        raise InvalidDescriptorError(f"regular polygon norm needs a multiple of 4 sides, got {sides}")
    step = TWO_PI / sides
    vertices = []
    k = 0
    while k * step <= math.pi / 4 + 1e-12:
        vertices.append((math.cos(k * step), math.sin(k * step)))
        k += 1
    return PolyhedralFamily(first_quadrant_vertices=tuple(vertices))


def dual_descriptor(norm: LpFamily | PolyhedralFamily) -> LpFamily | PolyhedralFamily:
    """Descriptor of the dual norm: lp -> lq, polygon -> polar polygon."""
    check_descriptor(norm)
    if isinstance(norm, LpFamily):
        return LpFamily(p=norm.p / (norm.p - 1.0))
    normals = polygon(norm).normals
    quadrant = normals[(normals[:, 0] >= -DEDUP_TOL) & (normals[:, 1] >= -DEDUP_TOL)]
    quadrant = np.clip(quadrant, 0.0, None)
    order = np.argsort(np.arctan2(quadrant[:, 1], quadrant[:, 0]), kind="stable")
    return PolyhedralFamily(first_quadrant_vertices=tuple(map(tuple, quadrant[order].tolist())))


def check_descriptor(norm: LpFamily | PolyhedralFamily) -> None:
    """Raise InvalidDescriptorError unless ``norm`` can be evaluated."""
    if isinstance(norm, LpFamily):
        if not (math.isfinite(norm.p) and norm.p > 1.0):
            raise InvalidDescriptorError(f"lp family needs 1 < p < inf, got p={norm.p}")
        return
    if isinstance(norm, PolyhedralFamily):
        pts = np.asarray(norm.first_quadrant_vertices, dtype=float)
        if not np.all(np.isfinite(pts)):
            raise InvalidDescriptorError("polyhedral vertices must be finite")
        if np.any(pts < 0.0):
            raise InvalidDescriptorError("first-quadrant vertices need x >= 0 and y >= 0")
        if not np.any(pts > 0.0):
            raise InvalidDescriptorError("polyhedral vertex list spans no interior")
        return
    raise InvalidDescriptorError(f"unknown norm descriptor: {norm!r}")


# ---------------------------------------------------------------------------
# Polygon geometry
# ---------------------------------------------------------------------------


def symmetric_closure(first_quadrant: Iterable[Iterable[float]]) -> np.ndarray:
    """Close a vertex list under sign changes and the swap, dedupe, sort counterclockwise."""
    pts = []
    for a, b in first_quadrant:
        for u, v in ((a, b), (b, a)):
            for su in (1.0, -1.0):
                for sv in (1.0, -1.0):
                    pts.append((su * u, sv * v))
    arr = np.asarray(pts, dtype=float)
    arr = arr[np.hypot(arr[:, 0], arr[:, 1]) > DEDUP_TOL]

    unique: list[np.ndarray] = []
    for p in arr:
        if not any(np.max(np.abs(p - q)) <= DEDUP_TOL for q in unique):
            unique.append(p)
    out = np.asarray(unique)
    angles = np.mod(np.arctan2(out[:, 1], out[:, 0]), TWO_PI)
    return out[np.argsort(angles, kind="stable")]


def _cross(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]


def _prune_collinear(vertices: np.ndarray) -> np.ndarray:
    v = vertices
    while len(v) > 3:
        turn = _cross(v - np.roll(v, 1, axis=0), np.roll(v, -1, axis=0) - v)
        flat = np.abs(turn) <= COLLINEAR_TOL
        if not flat.any():
            break
        # drop one at a time so that runs of collinear points keep their ends
        v = np.delete(v, int(np.argmax(flat)), axis=0)
    return v


@lru_cache(maxsize=256)
def _polygon_from_vertices(first_quadrant: tuple[tuple[float, float], ...]) -> Polygon:
    closure = symmetric_closure(first_quadrant)
    vertices = _prune_collinear(closure)
    nxt = np.roll(vertices, -1, axis=0)
    cross = _cross(vertices, nxt)
    normals = np.column_stack([nxt[:, 1] - vertices[:, 1], vertices[:, 0] - nxt[:, 0]])
    normals = normals / cross[:, None]
    angles = np.mod(np.arctan2(vertices[:, 1], vertices[:, 0]), TWO_PI)
    for arr in (vertices, angles, normals, closure):
        arr.setflags(write=False)
    return Polygon(vertices=vertices, angles=angles, normals=normals, closure=closure)


def polygon(norm: PolyhedralFamily) -> Polygon:
    check_descriptor(norm)
    return _polygon_from_vertices(tuple(tuple(map(float, v)) for v in norm.first_quadrant_vertices))


# ---------------------------------------------------------------------------
# Vectorised evaluation
# ---------------------------------------------------------------------------


def _lp_values(p: float, xy: np.ndarray) -> np.ndarray:
    ax = np.abs(xy[..., 0])
    ay = np.abs(xy[..., 1])
    m = np.maximum(ax, ay)
    safe = np.where(m > 0.0, m, 1.0)
    # scale by the max coordinate so that large p cannot overflow
    return np.where(m > 0.0, m * ((ax / safe) ** p + (ay / safe) ** p) ** (1.0 / p), 0.0)


def evaluate_many(norm: LpFamily | PolyhedralFamily, xy: np.ndarray) -> np.ndarray:
    """Norms of an array of points shaped (..., 2)."""
    check_descriptor(norm)
    xy = np.asarray(xy, dtype=float)
    if isinstance(norm, LpFamily):
        return _lp_values(norm.p, xy)
    normals = polygon(norm).normals
    return np.max(xy @ normals.T, axis=-1)


def dual_evaluate_many(norm: LpFamily | PolyhedralFamily, f: np.ndarray) -> np.ndarray:
    """Dual norms of an array of functionals shaped (..., 2)."""
    check_descriptor(norm)
    f = np.asarray(f, dtype=float)
    if isinstance(norm, LpFamily):
        return _lp_values(norm.p / (norm.p - 1.0), f)
    vertices = polygon(norm).vertices
    return np.max(np.abs(f @ vertices.T), axis=-1)


def sphere_points(norm: LpFamily | PolyhedralFamily, thetas: np.ndarray) -> np.ndarray:
    """Unit-sphere points in the directions ``thetas``; shape thetas.shape + (2,)."""
    thetas = np.asarray(thetas, dtype=float)
    u = np.stack([np.cos(thetas), np.sin(thetas)], axis=-1)
    return u / evaluate_many(norm, u)[..., None]


def functional_field(norm: LpFamily | PolyhedralFamily, xy: np.ndarray) -> np.ndarray:
    """
    One supporting functional per unit-sphere point, vectorised.

    For polyhedral norms this is the normal of the edge attaining the gauge;
    at a vertex that is one of the two extreme functionals.
    """
    xy = np.asarray(xy, dtype=float)
    if isinstance(norm, LpFamily):
        return np.sign(xy) * np.abs(xy) ** (norm.p - 1.0)
    normals = polygon(norm).normals
    active = np.argmax(xy @ normals.T, axis=-1)
    return normals[active]


def polygon_ray_gauge(norm: PolyhedralFamily, xy: np.ndarray) -> np.ndarray:
    """Gauge through ray/boundary intersection; independent of the edge-normal route."""
    poly = polygon(norm)
    xy = np.asarray(xy, dtype=float)
    phi = np.mod(np.arctan2(xy[..., 1], xy[..., 0]), TWO_PI)
    n = len(poly.vertices)
    i = np.mod(np.searchsorted(poly.angles, phi, side="right") - 1, n)
    v = poly.vertices[i]
    e = poly.vertices[np.mod(i + 1, n)] - v
    return _cross(xy, e) / _cross(v, e)


# ---------------------------------------------------------------------------
# Scalar operations
# ---------------------------------------------------------------------------


def evaluate(norm: LpFamily | PolyhedralFamily, v: Vec2 | Iterable[float]) -> float:
    v = Vec2.of(v)
    return float(evaluate_many(norm, v.as_array()))


def dual_evaluate(norm: LpFamily | PolyhedralFamily, f: Vec2 | Iterable[float]) -> float:
    f = Vec2.of(f)
    return float(dual_evaluate_many(norm, f.as_array()))


def sphere_point(norm: LpFamily | PolyhedralFamily, theta: float) -> Vec2:
    if not math.isfinite(theta):
        raise InvalidInputError(f"theta must be finite, got {theta}")
    x, y = sphere_points(norm, np.asarray(theta))
    return Vec2(float(x), float(y))


def supporting_functionals(norm: LpFamily | PolyhedralFamily, x: Vec2 | Iterable[float]) -> SupportSet:
    x = Vec2.of(x)
    if x.x == 0.0 and x.y == 0.0:
        raise InvalidInputError("the origin has no supporting functionals")
    size = evaluate(norm, x)
    if abs(size - 1.0) > TAU_PAIR:
        raise PreconditionError(f"point {tuple(x)} is not on the unit sphere (norm {size!r})")

    if isinstance(norm, LpFamily):
        f = functional_field(norm, x.as_array())
        return SupportSet(point=x, functionals=(Vec2(float(f[0]), float(f[1])),))

    poly = polygon(norm)
    n = len(poly.vertices)
    phi = math.atan2(x.y, x.x) % TWO_PI
    gap = np.abs(poly.angles - phi)
    gap = np.minimum(gap, TWO_PI - gap)
    nearest = int(np.argmin(gap))
    if gap[nearest] <= VERTEX_ANGLE_TOL:
        # vertex: incoming then outgoing edge
        pair = (poly.normals[(nearest - 1) % n], poly.normals[nearest])
        return SupportSet(point=x, functionals=tuple(Vec2(float(a), float(b)) for a, b in pair))
    edge = int(np.searchsorted(poly.angles, phi, side="right") - 1) % n
    a, b = poly.normals[edge]
    return SupportSet(point=x, functionals=(Vec2(float(a), float(b)),))


def lp_duality_pair(p: float, t: float) -> DualityPair:
    """The parametrised lp duality pair x_t = (1,t)/|(1,t)|_p with its functional."""
    if not (math.isfinite(p) and p > 1.0):
        raise InvalidInputError(f"lp duality pair needs 1 < p < inf, got p={p}")
    if not (math.isfinite(t) and 0.0 <= t <= 1.0):
        raise InvalidInputError(f"lp duality pair needs t in [0, 1], got t={t}")
    s = 1.0 + t**p
    x = Vec2(1.0 / s ** (1.0 / p), t / s ** (1.0 / p))
    scale = s ** ((p - 1.0) / p)
    xstar = Vec2(1.0 / scale, t ** (p - 1.0) / scale)
    return DualityPair(x=x, xstar=xstar)


def check_duality_pair(norm: LpFamily | PolyhedralFamily | None, pair: DualityPair) -> None:
    """Raise PreconditionError unless ``pair`` is a normalised duality pair."""
    if abs(pair.pairing - 1.0) > TAU_PAIR:
        raise PreconditionError(f"x*(x) = {pair.pairing!r}, expected 1")
    if norm is None:
        return
    nx = evaluate(norm, pair.x)
    nf = dual_evaluate(norm, pair.xstar)
    if abs(nx - 1.0) > TAU_PAIR:
        raise PreconditionError(f"||x|| = {nx!r}, expected 1")
    if abs(nf - 1.0) > TAU_DUAL:
        raise PreconditionError(f"||x*||* = {nf!r}, expected 1")


def make_duality_pair(
    norm: LpFamily | PolyhedralFamily,
    x: Vec2 | Iterable[float],
    xstar: Vec2 | Iterable[float],
) -> DualityPair:
    pair = DualityPair(x=Vec2.of(x), xstar=Vec2.of(xstar))
    check_duality_pair(norm, pair)
    return pair


def polygon_duality_pairs(norm: PolyhedralFamily) -> tuple[np.ndarray, np.ndarray]:
    """
    Every (vertex, extreme functional) pair of a polyhedral sphere.

    Returns points and functionals shaped (2n, 2), ordered by vertex angle and,
    at each vertex, incoming edge first.
    """
    poly = polygon(norm)
    points = np.repeat(poly.vertices, 2, axis=0)
    functionals = np.empty_like(points)
    functionals[0::2] = np.roll(poly.normals, 1, axis=0)
    functionals[1::2] = poly.normals
    return points, functionals
