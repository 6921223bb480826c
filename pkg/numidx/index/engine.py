"""
Contact-vector lower bound: locate a duality pair where I4 attains its numerical
radius, read off the contact vector there and turn it into a lower bound for
the numerical index (exact when the condition c4 (1 + 1/c2 + 1/c3) <= 1 holds).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np

from numidx.errors import InconsistentContactError, InvalidDescriptorError
from numidx.geometry.norms import (
    TWO_PI,
    DualityPair,
    LpFamily,
    PolyhedralFamily,
    Vec2,
    functional_field,
    lp_duality_pair,
    make_duality_pair,
    norm_spec,
    polygon_duality_pairs,
    sphere_points,
)
from numidx.geometry.operators import range_basis
from numidx.geometry.validation import validate
from numidx.index.contact import ContactVector, condition_value, contact_vector
from numidx.index.lp import CERTIFIED_RANGE, CONDITION_GRID, MP_GRID, c4_profile, certified_index_lp
from numidx.index.minimax import minimax_simplex
from numidx.search import golden_section_max

logger = logging.getLogger(__name__)

EXACTNESS_TOL = 1e-12
MAXIMIZER_TOL = 1e-9
CONTACT_FLOOR = 1e-9


@dataclass(frozen=True)
class Theorem2Bound:
    condition_value: float
    lower_bound: float
    exact: bool
    certified_index: Optional[float] = None


@dataclass(frozen=True)
class I4Maximizer:
    """A duality pair attaining v(I4), the value, and every other pair found within 1e-9."""

    pair: DualityPair
    value: float
    t0: Optional[float] = None
    candidates: tuple[DualityPair, ...] = ()

    def __iter__(self):
        yield self.pair
        yield self.value


@dataclass(frozen=True)
class IndexReport:
    norm: dict[str, Any]
    radius_i4: float
    maximizer: DualityPair
    contact: ContactVector
    condition_value: float
    lower_bound: float
    exact: bool
    certified_index: Optional[float] = None
    certified_by: Optional[str] = None
    t0: Optional[float] = None
    maximizers_checked: int = 1
    maximizer_policy: str = field(default="any")


@dataclass(frozen=True)
class UniformCondition:
    holds: bool
    worst_value: float
    worst_point: Optional[Vec2]
    pairs_checked: int


def theorem2_bound(contact: ContactVector) -> Theorem2Bound:
    """
    n(X) >= min{c4, 2 / (1 + 1/c2 + 1/c3 + 1/c4)}, with n(X) = v(I4) = c4 when
    c4 (1 + 1/c2 + 1/c3) <= 1, and n(X) = 0 when c4 = 0.
    """
    if contact.c4 == 0.0:
        return Theorem2Bound(condition_value=0.0, lower_bound=0.0, exact=True, certified_index=0.0)
    if contact.c2 == 0.0 or contact.c3 == 0.0:
        raise InconsistentContactError(f"c4={contact.c4} > 0 but c2={contact.c2}, c3={contact.c3}")
    condition = condition_value(contact)
    exact = condition <= 1.0 + EXACTNESS_TOL
    return Theorem2Bound(
        condition_value=condition,
        lower_bound=minimax_simplex(contact),
        exact=exact,
        certified_index=contact.c4 if exact else None,
    )


def _lp_maximizer(norm: LpFamily, grid: int, iterations: int, candidates: int) -> I4Maximizer:
    p = norm.p
    ts = np.linspace(0.0, 1.0, grid + 1)
    values = c4_profile(p, ts)
    left = np.concatenate([[-np.inf], values[:-1]])
    right = np.concatenate([values[1:], [-np.inf]])
    peaks = np.flatnonzero((values >= left) & (values >= right))
    # largest first, smallest t among ties
    peaks = peaks[np.lexsort((ts[peaks], -values[peaks]))][:candidates]

    step = ts[1] - ts[0]
    lo = np.maximum(ts[peaks] - step, 0.0)
    hi = np.minimum(ts[peaks] + step, 1.0)
    ref_t, ref_v = golden_section_max(lambda t: c4_profile(p, t), lo, hi, iterations=iterations)
    better = ref_v > values[peaks]
    t_best = np.where(better, ref_t, ts[peaks])
    v_best = np.where(better, ref_v, values[peaks])

    top = float(v_best.max())
    keep = [i for i in np.lexsort((t_best, -v_best)) if v_best[i] >= top - MAXIMIZER_TOL]
    pairs = tuple(lp_duality_pair(p, float(t_best[i])) for i in keep)
    t0 = float(t_best[keep[0]])
    return I4Maximizer(pair=pairs[0], value=float(v_best[keep[0]]), t0=t0, candidates=pairs)


def _polygon_maximizer(norm: PolyhedralFamily) -> I4Maximizer:
    points, functionals = polygon_duality_pairs(norm)
    values = np.abs(range_basis(points, functionals)[3])
    top = float(values.max())
    keep = np.flatnonzero(values >= top - MAXIMIZER_TOL)
    pairs = tuple(make_duality_pair(norm, points[i], functionals[i]) for i in keep)
    return I4Maximizer(pair=pairs[0], value=float(values[keep[0]]), candidates=pairs)


def radius_i4_maximizer(
    norm: LpFamily | PolyhedralFamily,
    *,
    grid: int = MP_GRID,
    iterations: int = 60,
    candidates: int = 8,
) -> I4Maximizer:
    """
    A duality pair where |x*(I4 x)| = v(I4).

    lp norms are searched along the pairs x_t, t in [0, 1]; polyhedral norms
    are enumerated exactly over (vertex, extreme functional) pairs.
    """
    if isinstance(norm, LpFamily):
        result = _lp_maximizer(norm, grid, iterations, candidates)
    else:
        result = _polygon_maximizer(norm)
    logger.debug("v(I4)=%.12g with %d maximizing pair(s)", result.value, len(result.candidates))
    return result


def uniform_condition_check(
    norm: LpFamily | PolyhedralFamily,
    *,
    theta_grid: int = 4096,
) -> UniformCondition:
    """
    Worst value of c4 (1 + 1/c2 + 1/c3) over sampled duality pairs with c4 > 0.

    When it stays <= 1 the exactness test passes at every maximizer, so the
    maximizer need not be located precisely.
    """
    thetas = np.linspace(0.0, TWO_PI, theta_grid, endpoint=False)
    x = sphere_points(norm, thetas)
    f = functional_field(norm, x)
    if isinstance(norm, PolyhedralFamily):
        vx, vf = polygon_duality_pairs(norm)
        x = np.vstack([x, vx])
        f = np.vstack([f, vf])
    c = np.abs(range_basis(x, f))
    live = c[3] > CONTACT_FLOOR
    if not live.any():
        return UniformCondition(holds=True, worst_value=0.0, worst_point=None, pairs_checked=0)
    c2, c3, c4 = c[1, live], c[2, live], c[3, live]
    with np.errstate(divide="ignore"):
        cond = c4 * (1.0 + 1.0 / c2 + 1.0 / c3)
    k = int(np.argmax(cond))
    point = x[live][k]
    return UniformCondition(
        holds=bool(cond[k] <= 1.0 + EXACTNESS_TOL),
        worst_value=float(cond[k]),
        worst_point=Vec2(float(point[0]), float(point[1])),
        pairs_checked=int(live.sum()),
    )


def index_report(
    norm: LpFamily | PolyhedralFamily,
    *,
    condition_grid: int = CONDITION_GRID,
) -> IndexReport:
    """
    v(I4), its maximizing pair, the contact vector there and the contact-bound
    verdict. Every maximizing pair found is tried; exactness at any of them
    is enough. lp norms with p in [3/2, 3] are additionally certified through
    the lp pipeline.
    """
    verdict = validate(norm)
    if not verdict.passed:
        raise InvalidDescriptorError(verdict.reason)

    found = radius_i4_maximizer(norm)
    chosen: Optional[tuple[DualityPair, ContactVector, Theorem2Bound]] = None
    for pair in found.candidates:
        contact = contact_vector(pair, norm)
        bound = theorem2_bound(contact)
        if chosen is None or (bound.exact and not chosen[2].exact):
            chosen = (pair, contact, bound)
        if bound.exact:
            break
    assert chosen is not None
    pair, contact, bound = chosen

    certified_index = bound.certified_index
    certified_by: Optional[str] = None
    if bound.exact:
        certified_by = "zero-contact" if contact.c4 == 0.0 else "theorem2"
    if isinstance(norm, LpFamily) and CERTIFIED_RANGE[0] <= norm.p <= CERTIFIED_RANGE[1]:
        lp_value = certified_index_lp(norm.p, grid_size=condition_grid)
        if certified_index is None:
            certified_index, certified_by = lp_value, "lp-reduction"

    report = IndexReport(
        norm=norm_spec(norm),
        radius_i4=found.value,
        maximizer=pair,
        contact=contact,
        condition_value=bound.condition_value,
        lower_bound=bound.lower_bound,
        exact=certified_index is not None,
        certified_index=certified_index,
        certified_by=certified_by,
        t0=found.t0,
        maximizers_checked=len(found.candidates),
    )
    logger.debug("index report: %s", report)
    if math.isfinite(report.lower_bound) and report.lower_bound > report.radius_i4 + 1e-10:
        logger.warning("lower bound %.12g exceeds v(I4) %.12g", report.lower_bound, report.radius_i4)
    return report
