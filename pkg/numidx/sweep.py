"""
One row of lp-plane data per exponent p.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

from numidx.errors import InvalidInputError
from numidx.geometry.norms import lp_norm
from numidx.geometry.operators import THETA_GRID
from numidx.index.brute import COARSE_THETA_GRID, DEFAULT_RESOLUTION, PATTERN_ROUNDS, brute_force_index
from numidx.index.engine import index_report
from numidx.index.lp import CONDITION_GRID, conjugate_exponent, mp_constant

logger = logging.getLogger(__name__)

SWEEP_COLUMNS = ("p", "q", "mp", "radius_i4", "bound", "condition", "exact", "brute", "sandwich_lower")


@dataclass(frozen=True)
class SweepRange:
    start: float
    stop: float
    step: float

    def __post_init__(self) -> None:
        if not all(math.isfinite(v) for v in (self.start, self.stop, self.step)):
            raise InvalidInputError(f"sweep range must be finite, got {self}")
        if self.start <= 1.0:
            raise InvalidInputError(f"sweep start must exceed 1, got {self.start}")
        if self.stop <= self.start:
            raise InvalidInputError(f"sweep stop must exceed start, got {self.start}:{self.stop}")
        if self.step <= 0.0:
            raise InvalidInputError(f"sweep step must be positive, got {self.step}")

    @classmethod
    def parse(cls, text: str) -> SweepRange:
        """Parse "start:stop:step"."""
        parts = text.split(":")
        if len(parts) != 3:
            raise InvalidInputError(f"sweep range must look like start:stop:step, got {text!r}")
        try:
            start, stop, step = (float(p) for p in parts)
        except ValueError as exc:
            raise InvalidInputError(f"sweep range {text!r}: {exc}") from exc
        return cls(start, stop, step)

    def values(self) -> list[float]:
        # rounding keeps an endpoint like 3.0 from drifting to 3.0000000000000004
        count = int(math.floor((self.stop - self.start) / self.step + 1e-9))
        return [round(self.start + i * self.step, 12) for i in range(count + 1)]


@dataclass(frozen=True)
class SweepRow:
    p: float
    q: float
    mp: float
    radius_i4: float
    bound: float
    condition: float
    exact: bool
    brute: Optional[float]
    sandwich_lower: float


def sweep_row(
    p: float,
    *,
    brute: bool = True,
    resolution: int = DEFAULT_RESOLUTION,
    condition_grid: int = CONDITION_GRID,
    coarse_theta_grid: int = COARSE_THETA_GRID,
    theta_grid: int = THETA_GRID,
    pattern_rounds: int = PATTERN_ROUNDS,
) -> SweepRow:
    q = conjugate_exponent(p)
    mp = mp_constant(p).value
    report = index_report(lp_norm(p), condition_grid=condition_grid)
    estimate = None
    if brute:
        estimate = brute_force_index(
            lp_norm(p),
            resolution,
            coarse_theta_grid=coarse_theta_grid,
            theta_grid=theta_grid,
            pattern_rounds=pattern_rounds,
        ).value
    row = SweepRow(
        p=p,
        q=q,
        mp=mp,
        radius_i4=report.radius_i4,
        bound=report.lower_bound,
        condition=report.condition_value,
        exact=report.exact,
        brute=estimate,
        sandwich_lower=max(2.0 ** (-1.0 / p), 2.0 ** (-1.0 / q)) * mp,
    )
    logger.info("sweep p=%s: mp=%.12g exact=%s", p, mp, row.exact)
    return row


def run_sweep(
    sweep_range: SweepRange,
    *,
    brute: bool = True,
    resolution: int = DEFAULT_RESOLUTION,
    condition_grid: int = CONDITION_GRID,
    coarse_theta_grid: int = COARSE_THETA_GRID,
    theta_grid: int = THETA_GRID,
    pattern_rounds: int = PATTERN_ROUNDS,
    workers: int = 4,
) -> list[SweepRow]:
    """Rows for every p in the range, computed in a thread pool and returned sorted by p."""
    ps = sweep_range.values()
    options = {
        "brute": brute,
        "resolution": resolution,
        "condition_grid": condition_grid,
        "coarse_theta_grid": coarse_theta_grid,
        "theta_grid": theta_grid,
        "pattern_rounds": pattern_rounds,
    }
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        rows = list(pool.map(lambda p: sweep_row(p, **options), ps))
    return sorted(rows, key=lambda r: r.p)
