"""
The lp plane: M_p, the conjugate exponent and the certified index on [3/2, 3].
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from numidx.errors import InternalInconsistencyError, InvalidInputError, OutOfCertificationError
from numidx.search import grid_refine_max

logger = logging.getLogger(__name__)

MP_GRID = 10_000
CONDITION_GRID = 100_000
CONDITION_TOL = 1e-12
CERTIFIED_RANGE = (1.5, 3.0)


@dataclass(frozen=True)
class MpConstant:
    """M_p together with a maximizing t0 in [0, 1] (smallest one on ties)."""

    p: float
    value: float
    t0: float


@dataclass(frozen=True)
class ConditionCheck:
    """Outcome of the grid check of h(t) = t(1 - t^(2p-3)) + t^2(1 - t^(2p-1)) >= 0."""

    p: float
    holds: bool
    min_value: float
    argmin_t: float
    grid_size: int


def _check_exponent(p: float) -> None:
    if not (math.isfinite(p) and p > 1.0):
        raise InvalidInputError(f"exponent must satisfy 1 < p < inf, got p={p}")


def conjugate_exponent(p: float) -> float:
    _check_exponent(p)
    return p / (p - 1.0)


def c4_profile(p: float, t: np.ndarray) -> np.ndarray:
    """|t^(p-1) - t| / (1 + t^p), the I4 contact along the lp duality pairs."""
    t = np.asarray(t, dtype=float)
    return np.abs(t ** (p - 1.0) - t) / (1.0 + t**p)


def contact_profile(p: float, t: float) -> tuple[float, float, float, float]:
    """The closed forms c1(t)..c4(t) along the lp duality pairs (c4 as an absolute value)."""
    _check_exponent(p)
    s = 1.0 + t**p
    return (
        1.0,
        (1.0 - t**p) / s,
        (t ** (p - 1.0) + t) / s,
        abs(t ** (p - 1.0) - t) / s,
    )


def mp_constant(p: float, *, grid: int = MP_GRID, candidates: int = 8, iterations: int = 60) -> MpConstant:
    """
    M_p = max over t in [0, 1] of |t^(p-1) - t| / (1 + t^p).

    A uniform grid locates the peak and golden-section search polishes it;
    the value is accurate to well below 1e-12.
    """
    _check_exponent(p)
    ts = np.linspace(0.0, 1.0, grid + 1)
    best = grid_refine_max(lambda t: c4_profile(p, t), ts, candidates=candidates, iterations=iterations)
    return MpConstant(p=p, value=float(best.value[0]), t0=float(best.argmax[0]))


def condition_margin(p: float, t: np.ndarray) -> np.ndarray:
    """h(t) = t(1 - t^(2p-3)) + t^2(1 - t^(2p-1))."""
    t = np.asarray(t, dtype=float)
    return t * (1.0 - t ** (2.0 * p - 3.0)) + t**2 * (1.0 - t ** (2.0 * p - 1.0))


def lp_condition_check(p: float, grid_size: int = CONDITION_GRID) -> ConditionCheck:
    """
    Check h(t) >= 0 on a uniform grid of the open interval (0, 1).

    h >= 0 is equivalent to c4(t)(1 + 1/c2(t) + 1/c3(t)) <= 1 at every lp
    duality pair with t in (0, 1), so the contact-bound exactness test holds
    whichever pair realises v(I4).
    """
    _check_exponent(p)
    if grid_size < 2:
        raise InvalidInputError(f"grid_size must be at least 2, got {grid_size}")
    t = np.arange(1, grid_size + 1, dtype=float) / (grid_size + 1)
    h = condition_margin(p, t)
    k = int(np.argmin(h))
    result = ConditionCheck(
        p=p,
        holds=bool(h[k] >= -CONDITION_TOL),
        min_value=float(h[k]),
        argmin_t=float(t[k]),
        grid_size=grid_size,
    )
    logger.debug("condition check p=%s: holds=%s min=%.3e at t=%.6f", p, result.holds, result.min_value, result.argmin_t)
    return result


def certified_index_lp(p: float, *, grid_size: int = CONDITION_GRID) -> float:
    """
    n(lp^2) for p in [3/2, 3].

    p = 2 gives 0. For p in [3/2, 2) the condition check must pass and the
    index is M_p; for p in (2, 3] the computation runs at the conjugate
    exponent, since n(lp^2) = n(lq^2) and M_p = M_q.
    """
    _check_exponent(p)
    lo, hi = CERTIFIED_RANGE
    if not lo <= p <= hi:
        raise OutOfCertificationError(f"certified index covers p in [3/2, 3], got p={p}")
    if p == 2.0:
        return 0.0
    exponent = p if p < 2.0 else conjugate_exponent(p)
    check = lp_condition_check(exponent, grid_size)
    if not check.holds:
        raise InternalInconsistencyError(
            f"condition h(t) >= 0 fails for p={exponent} at t={check.argmin_t} (h={check.min_value:.3e})"
        )
    return mp_constant(exponent).value
