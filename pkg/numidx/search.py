from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

INV_PHI = (math.sqrt(5) - 1) / 2  # 1 / phi
INV_PHI_SQUARE = (3 - math.sqrt(5)) / 2  # 1 / phi^2

Objective = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class GridMaximum:
    """Row-wise maxima found by grid_refine_max."""

    value: np.ndarray
    argmax: np.ndarray


def golden_section_max(
    f: Objective,
    a: np.ndarray,
    b: np.ndarray,
    *,
    iterations: int = 60,
) -> tuple[np.ndarray, np.ndarray]:
    """
    Vectorised golden-section search for a maximum.

    Every bracket [a[i], b[i]] is shrunk independently; ``f`` receives an array
    shaped like ``a`` and must return values of the same shape. Returns the best
    abscissae and values. Ties prefer the left point.
    """
    a = np.array(a, dtype=float)
    b = np.array(b, dtype=float)
    h = b - a
    c = a + INV_PHI_SQUARE * h
    d = a + INV_PHI * h
    yc = f(c)
    yd = f(d)

    for _ in range(iterations):
        left = yc >= yd
        a = np.where(left, a, c)
        b = np.where(left, d, b)
        h = b - a
        x_new = np.where(left, a + INV_PHI_SQUARE * h, a + INV_PHI * h)
        y_new = f(x_new)
        c, d = np.where(left, x_new, d), np.where(left, c, x_new)
        yc, yd = np.where(left, y_new, yd), np.where(left, yc, y_new)

    pick_c = yc >= yd
    return np.where(pick_c, c, d), np.where(pick_c, yc, yd)


def grid_refine_max(
    objective: Objective,
    grid: np.ndarray,
    *,
    candidates: int = 8,
    iterations: int = 60,
    period: float | None = None,
) -> GridMaximum:
    """
    Maximise ``objective`` on a uniform 1-D grid, then polish the best cells.

    ``objective`` takes abscissae shaped (1, m) or (rows, k) and returns values
    shaped (rows, m) / (rows, k); rows is fixed by whatever coefficients the
    objective closes over. The ``candidates`` largest grid values of each row
    are refined by golden-section search on the two adjacent cells.

    With ``period`` set the grid is treated as periodic and the returned
    abscissae are reduced modulo the period. Ties resolve to the smallest
    abscissa.
    """
    grid = np.asarray(grid, dtype=float)
    values = np.atleast_2d(objective(grid[None, :]))
    rows, m = values.shape
    k = max(1, min(candidates, m))

    # stable sort keeps the smallest index first among equal values
    order = np.argsort(-values, axis=1, kind="stable")[:, :k]
    best_grid_x = grid[order]
    best_grid_v = np.take_along_axis(values, order, axis=1)

    step = grid[1] - grid[0] if m > 1 else 0.0
    lo = best_grid_x - step
    hi = best_grid_x + step
    if period is None:
        lo = np.maximum(lo, grid[0])
        hi = np.minimum(hi, grid[-1])

    if step > 0.0 and iterations > 0:
        ref_x, ref_v = golden_section_max(objective, lo, hi, iterations=iterations)
        xs = np.concatenate([best_grid_x, ref_x], axis=1)
        vs = np.concatenate([best_grid_v, ref_v], axis=1)
    else:
        xs, vs = best_grid_x, best_grid_v

    if period is not None:
        xs = np.mod(xs, period)

    vmax = vs.max(axis=1)
    tied = vs >= vmax[:, None]
    argmax = np.where(tied, xs, np.inf).min(axis=1)
    return GridMaximum(value=vmax, argmax=argmax)


def pattern_search_min(
    objective: Objective,
    x0: np.ndarray,
    *,
    step: float,
    rounds: int = 40,
) -> tuple[np.ndarray, float]:
    """
    Compass search: try +/- step along every axis, move to the best improving
    neighbour, halve the step when none improves.

    ``objective`` maps an (n, d) array of points to n values.
    """
    x = np.array(x0, dtype=float)
    fx = float(objective(x[None, :])[0])
    dim = x.shape[0]
    directions = np.vstack([np.eye(dim), -np.eye(dim)])

    for _ in range(rounds):
        trial = x + step * directions
        ft = objective(trial)
        k = int(np.argmin(ft))
        if ft[k] < fx:
            x, fx = trial[k], float(ft[k])
        else:
            step *= 0.5
    return x, fx
