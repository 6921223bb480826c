from __future__ import annotations

import math
from dataclasses import dataclass

from numidx.errors import InternalInconsistencyError, InvalidInputError
from numidx.geometry.norms import DualityPair, LpFamily, PolyhedralFamily, check_duality_pair
from numidx.geometry.operators import ISOMETRIES

LEMMA_TOL = 1e-10
_UNIT_TOL = 1e-9


@dataclass(frozen=True)
class ContactVector:
    """c_j = |x0*(I_j x0)| at a duality pair (x0, x0*)."""

    c1: float
    c2: float
    c3: float
    c4: float

    def __post_init__(self) -> None:
        for name, c in zip(("c1", "c2", "c3", "c4"), self.values):
            if not math.isfinite(c) or c < 0.0 or c > 1.0 + _UNIT_TOL:
                raise InvalidInputError(f"{name} must lie in [0, 1], got {c}")
        if abs(self.c1 - 1.0) > LEMMA_TOL:
            raise InvalidInputError(f"c1 must equal 1 at a duality pair, got {self.c1}")

    @property
    def values(self) -> tuple[float, float, float, float]:
        return (self.c1, self.c2, self.c3, self.c4)

    def satisfies_lemma(self, tol: float = LEMMA_TOL) -> bool:
        """c4 <= min(c1, c2, c3) up to ``tol``."""
        return self.c4 <= min(self.c1, self.c2, self.c3) + tol


def contact_vector(pair: DualityPair, norm: LpFamily | PolyhedralFamily | None = None) -> ContactVector:
    """
    Contact coefficients of a duality pair.

    The pairing x*(x) = 1 is always checked; with ``norm`` given the two norms
    are checked as well. Breaking c4 <= min(c1, c2, c3) means the pair did not come from
    a genuine duality map of an absolute symmetric norm.
    """
    check_duality_pair(norm, pair)
    x = pair.x.as_array()
    f = pair.xstar.as_array()
    values = [abs(float(f @ (S @ x))) for S in ISOMETRIES]
    contact = ContactVector(*values)
    if not contact.satisfies_lemma():
        raise InternalInconsistencyError(
            f"c4={contact.c4!r} exceeds min(c1, c2, c3)={min(contact.values[:3])!r} at x={tuple(pair.x)}, "
            f"x*={tuple(pair.xstar)}"
        )
    return contact


def condition_value(contact: ContactVector) -> float:
    """c4 (1 + 1/c2 + 1/c3); infinite when c4 > 0 meets a vanishing c2 or c3."""
    if contact.c4 == 0.0:
        return 0.0
    if contact.c2 == 0.0 or contact.c3 == 0.0:
        return math.inf
    return contact.c4 * (1.0 + 1.0 / contact.c2 + 1.0 / contact.c3)
