"""
Brute-force estimate of n(X) = inf { v(T) : ||T|| = 1 }.

Operators are written as T = a1 I1 + a2 I2 + a3 I3 + a4 I4 and scanned on the
unit sphere of ||T||_+ = |a1| + |a2| + |a3| + |a4|. The ratio v(T) / ||T|| is
invariant under T -> -T and under conjugation by I2, I3 and I4; together these
flip the signs of (a1..a4) by every even-weight pattern, so the two orthants
(+,+,+,+) and (+,+,+,-) cover all sixteen.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from numidx.errors import InvalidDescriptorError, InvalidInputError
from numidx.geometry.norms import LpFamily, PolyhedralFamily
from numidx.geometry.operators import (
    GOLDEN_ITERATIONS,
    REFINE_CANDIDATES,
    THETA_GRID,
    IsometryCoefficients,
    Operator2x2,
    from_isometry_coords,
    numerical_radius_batch,
    operator_norm_batch,
)
from numidx.geometry.validation import validate
from numidx.search import pattern_search_min

logger = logging.getLogger(__name__)

DEFAULT_RESOLUTION = 64
MIN_RESOLUTION = 8
COARSE_THETA_GRID = 512
PATTERN_ROUNDS = 40
SEEDS = 6

ORTHANTS = (
    np.array([1.0, 1.0, 1.0, 1.0]),
    np.array([1.0, 1.0, 1.0, -1.0]),
)


@dataclass(frozen=True)
class IndexEstimate:
    """Best ratio v(T)/||T|| found; ``argmin`` is scaled to operator norm 1."""

    value: float
    argmin: Operator2x2
    grid_resolution: int
    refined: bool


def simplex_grid(resolution: int) -> np.ndarray:
    """All (i, j, k, l) / resolution with nonnegative integers summing to resolution."""
    n = resolution
    i, j, k = np.meshgrid(np.arange(n + 1), np.arange(n + 1), np.arange(n + 1), indexing="ij")
    keep = i + j + k <= n
    i, j, k = i[keep], j[keep], k[keep]
    return np.column_stack([i, j, k, n - i - j - k]).astype(float) / n


def _ratios(norm: LpFamily | PolyhedralFamily, coords: np.ndarray, theta_grid: int, iterations: int) -> np.ndarray:
    coords = np.atleast_2d(coords)
    options = {"theta_grid": theta_grid, "candidates": REFINE_CANDIDATES, "iterations": iterations}
    radius = numerical_radius_batch(norm, coords, **options)
    size = operator_norm_batch(norm, coords, **options)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = radius / size
    return np.where(np.abs(coords).sum(axis=1) > 1e-12, ratio, np.inf)


def brute_force_index(
    norm: LpFamily | PolyhedralFamily,
    resolution: int = DEFAULT_RESOLUTION,
    *,
    coarse_theta_grid: int = COARSE_THETA_GRID,
    theta_grid: int = THETA_GRID,
    pattern_rounds: int = PATTERN_ROUNDS,
    seeds: int = SEEDS,
) -> IndexEstimate:
    """
    Grid scan of v(T)/||T|| over the ||.||_+ sphere, then compass search from
    the best grid points.

    The scan and the local search use unpolished theta grids; every candidate
    they produce is re-evaluated with the accurate radius and norm before the
    minimum is taken, and the result is clamped to [0, 1].
    """
    if resolution < MIN_RESOLUTION:
        raise InvalidInputError(f"resolution must be at least {MIN_RESOLUTION}, got {resolution}")
    verdict = validate(norm)
    if not verdict.passed:
        raise InvalidDescriptorError(verdict.reason)

    base = simplex_grid(resolution)
    coords = np.vstack([base * sign for sign in ORTHANTS])
    coarse = _ratios(norm, coords, coarse_theta_grid, 0)
    order = np.argsort(coarse, kind="stable")[: max(1, seeds)]
    logger.debug(
        "brute force: %d operators at resolution %d, coarse min %.6g", len(coords), resolution, coarse[order[0]]
    )

    # I4 has norm one and witnesses n(X) <= v(I4)
    candidates = [np.array([0.0, 0.0, 0.0, 1.0])] + [coords[k] for k in order]
    if pattern_rounds > 0:
        for k in order:
            x, fx = pattern_search_min(
                lambda pts: _ratios(norm, pts, theta_grid, 0),
                coords[k],
                step=1.0 / resolution,
                rounds=pattern_rounds,
            )
            candidates.append(x)
            logger.debug("pattern search from %s: %.9g", coords[k], fx)

    stacked = np.vstack(candidates)
    accurate = _ratios(norm, stacked, theta_grid, GOLDEN_ITERATIONS)
    best = int(np.argmin(accurate))
    value = float(np.clip(accurate[best], 0.0, 1.0))

    op = from_isometry_coords(IsometryCoefficients(*map(float, stacked[best])))
    size = float(operator_norm_batch(norm, stacked[best][None, :])[0])
    argmin = op.scaled(1.0 / size) if size > 0.0 and math.isfinite(size) else op
    return IndexEstimate(value=value, argmin=argmin, grid_resolution=resolution, refined=pattern_rounds > 0)
