from __future__ import annotations

# All library errors derive from NumIdxError. Input-side problems are also
# ValueErrors so callers that only know about ValueError keep working.


class NumIdxError(Exception):
    """Base class for every error raised by numidx."""


class InvalidInputError(NumIdxError, ValueError):
    """Non-finite numbers, malformed literals or malformed norm specs."""


class InvalidDescriptorError(InvalidInputError):
    """A norm descriptor that cannot define an absolute symmetric norm."""


class PreconditionError(NumIdxError, ValueError):
    """An argument violates a documented precondition (e.g. not on the unit sphere)."""


class InconsistentContactError(NumIdxError, ValueError):
    """c4 > 0 while c2 or c3 vanishes."""


class OutOfScopeError(NumIdxError, ValueError):
    """The closed-form minimax needs every contact coefficient to be positive."""


class OutOfCertificationError(NumIdxError, ValueError):
    """The certified lp pipeline only covers p in [3/2, 3]."""


class InternalInconsistencyError(NumIdxError, RuntimeError):
    """A computed quantity contradicts a proven property; signals a bug upstream."""
