"""
min over the probability simplex K of f(a) = max_j (sum_{k != j} a_k c_k - a_j c_j).

Four independent routes to the same number:

  minimax_simplex         closed form min{c4, 2 / (1/c1 + 1/c2 + 1/c3 + 1/c4)}
  minimax_simplex_oracle  vertex enumeration of the lifted polytope K' in R^5
  minimax_simplex_lp      the same linear program handed to HiGHS
  minimax_simplex_grid    dense simplex grid with zoom refinement
"""

from __future__ import annotations

import itertools
import logging
import math

import numpy as np
from scipy.optimize import linprog

from numidx.errors import InternalInconsistencyError, InvalidInputError, OutOfScopeError
from numidx.index.contact import ContactVector

logger = logging.getLogger(__name__)

SINGULAR_TOL = 1e-12
FEASIBILITY_TOL = 1e-9
MERGE_TOL = 1e-9
Z_CAP = 2.0
GRID_POINTS = 1_000_000


def simplex_objective(contact: ContactVector, alpha: np.ndarray) -> np.ndarray:
    """f on an array of weights shaped (..., 4); uses f = sum_k a_k c_k - 2 min_j a_j c_j."""
    weighted = np.asarray(alpha, dtype=float) * np.asarray(contact.values)
    return weighted.sum(axis=-1) - 2.0 * weighted.min(axis=-1)


def minimax_simplex(contact: ContactVector) -> float:
    """Closed-form minimum; needs every c_j > 0 and c4 <= min(c1, c2, c3)."""
    if any(c <= 0.0 for c in contact.values):
        raise OutOfScopeError(f"closed form needs all c_j > 0, got {contact.values}")
    c1, c2, c3, c4 = contact.values
    return min(c4, 2.0 / (1.0 / c1 + 1.0 / c2 + 1.0 / c3 + 1.0 / c4))


def lifted_constraints(contact: ContactVector) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """
    K' as (A_eq, b_eq, A_ub, b_ub) over w = (a1, a2, a3, a4, z):

        a1 + a2 + a3 + a4 = 1,   z <= 2,   -a_j <= 0,
        sum_{k != j} a_k c_k - a_j c_j - z <= 0     (j = 1..4)
    """
    c = np.asarray(contact.values, dtype=float)
    a_eq = np.array([[1.0, 1.0, 1.0, 1.0, 0.0]])
    b_eq = np.array([1.0])
    rows = [np.array([0.0, 0.0, 0.0, 0.0, 1.0])]
    bounds = [Z_CAP]
    for j in range(4):
        row = np.zeros(5)
        row[j] = -1.0
        rows.append(row)
        bounds.append(0.0)
    for j in range(4):
        row = np.append(c.copy(), -1.0)
        row[j] = -c[j]
        rows.append(row)
        bounds.append(0.0)
    return a_eq, b_eq, np.vstack(rows), np.asarray(bounds)


def kprime_vertices(contact: ContactVector) -> np.ndarray:
    """All extreme points of K', found by solving every 5x5 active subsystem."""
    if any(c < 0.0 for c in contact.values):
        raise InvalidInputError(f"contact coefficients must be nonnegative, got {contact.values}")
    a_eq, b_eq, a_ub, b_ub = lifted_constraints(contact)
    found: list[np.ndarray] = []
    skipped = 0
    # the equality is active at every point of K', so pick 4 of the 9 inequalities
    for active in itertools.combinations(range(len(a_ub)), 4):
        m = np.vstack([a_eq, a_ub[list(active)]])
        if abs(np.linalg.det(m)) <= SINGULAR_TOL:
            skipped += 1
            continue
        w = np.linalg.solve(m, np.concatenate([b_eq, b_ub[list(active)]]))
        if np.all(a_ub @ w <= b_ub + FEASIBILITY_TOL) and abs(a_eq[0] @ w - 1.0) <= FEASIBILITY_TOL:
            if not any(np.max(np.abs(w - v)) <= MERGE_TOL for v in found):
                found.append(w)
    logger.debug("K' enumeration: %d vertices, %d singular subsystems skipped", len(found), skipped)
    return np.asarray(found).reshape(-1, 5)


def minimax_simplex_oracle(contact: ContactVector) -> float:
    """Minimum of z over the extreme points of K'."""
    vertices = kprime_vertices(contact)
    if len(vertices) == 0:
        raise InternalInconsistencyError(f"K' has no feasible vertex for c={contact.values}")
    return float(vertices[:, 4].min())


def minimax_simplex_lp(contact: ContactVector) -> float:
    """The lifted linear program solved by HiGHS."""
    a_eq, b_eq, a_ub, b_ub = lifted_constraints(contact)
    res = linprog(
        c=[0.0, 0.0, 0.0, 0.0, 1.0],
        A_ub=a_ub,
        b_ub=b_ub,
        A_eq=a_eq,
        b_eq=b_eq,
        bounds=[(0.0, None)] * 4 + [(None, None)],
        method="highs",
    )
    if not res.success:
        raise InternalInconsistencyError(f"linprog failed on K': {res.message}")
    return float(res.fun)


def _grid_steps(points: int) -> int:
    n = 1
    while math.comb(n + 3, 3) < points:
        n += 1
    return n


def minimax_simplex_grid(
    contact: ContactVector,
    *,
    points: int = GRID_POINTS,
    zoom_side: int = 21,
    zoom_shrink: float = 0.6,
    zoom_tol: float = 1e-12,
    max_rounds: int = 5000,
) -> float:
    """
    Brute-force minimum: every simplex point with coordinates in (1/n)Z
    (about ``points`` of them), then local grids around the incumbent.

    The local search runs in the weighted coordinates b_j = a_j c_j, where f
    becomes sum(b) - 2 min(b) on the plane sum(b_j / c_j) = 1; the coordinate
    with the smallest c_j is the dependent one. The box keeps its size while
    a round improves the incumbent and shrinks otherwise, down to ``zoom_tol``.
    """
    n = _grid_steps(points)
    c = np.asarray(contact.values, dtype=float)
    best_value = math.inf
    best = np.zeros(4)

    for i in range(n + 1):
        j, k = np.meshgrid(np.arange(n - i + 1), np.arange(n - i + 1), indexing="ij")
        keep = j + k <= n - i
        j, k = j[keep], k[keep]
        alpha = np.column_stack([np.full(j.shape, i), j, k, n - i - j - k]) / n
        values = simplex_objective(contact, alpha)
        idx = int(np.argmin(values))
        if values[idx] < best_value:
            best_value, best = float(values[idx]), alpha[idx]
    coarse_value = best_value

    dependent = int(np.argmin(c))
    free_idx = [j for j in range(4) if j != dependent]
    offsets = np.linspace(-1.0, 1.0, zoom_side)
    cube = np.stack(np.meshgrid(offsets, offsets, offsets, indexing="ij"), axis=-1).reshape(-1, 3)

    b_best = best * c
    half = float(c.max()) / n
    rounds = 0
    # a zero coefficient puts the minimum 0 on a simplex vertex, already on the grid
    if c.min() <= 0.0:
        half = 0.0
    while half >= zoom_tol and rounds < max_rounds:
        rounds += 1
        free = b_best[free_idx] + half * cube
        b = np.empty((len(free), 4))
        b[:, free_idx] = free
        slack = 1.0 - (free / c[free_idx]).sum(axis=1)
        b[:, dependent] = c[dependent] * slack
        b = b[np.all(b >= 0.0, axis=1) & (slack >= 0.0)]
        improved = False
        if len(b):
            values = b.sum(axis=1) - 2.0 * b.min(axis=1)
            idx = int(np.argmin(values))
            if values[idx] < best_value:
                improved = values[idx] < best_value - 1e-16
                best_value, b_best = float(values[idx]), b[idx]
        if not improved:
            half *= zoom_shrink
    logger.debug(
        "simplex grid: n=%d, coarse %.12g, refined %.12g after %d rounds", n, coarse_value, best_value, rounds
    )
    return best_value
