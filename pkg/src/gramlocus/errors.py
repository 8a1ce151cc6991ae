"""Exception hierarchy for gramlocus.

Every domain error derives from :class:`LocusError` so callers can catch
one base class at API boundaries (the CLI does exactly that).
"""


class LocusError(Exception):
    """Base class for all gramlocus domain errors."""


class NotSymmetric(LocusError):
    """Matrix asymmetry exceeds the relative tolerance for Gram matrices."""


class NotPositiveDefinite(LocusError):
    """Factorization failed: the matrix does not define an inner product."""


class DimensionMismatch(LocusError):
    """A vector or focus does not conform to the space's dimension."""


class InvalidVector(LocusError):
    """Coordinates are not a finite 1-D real tuple."""


class ZeroVector(LocusError):
    """An operation that divides by a norm received a zero vector."""


class DegenerateTriangle(LocusError):
    """Parallel sides make a sine-law ratio undefined (sine 0)."""


class ZeroDirection(LocusError):
    """Ray solving needs a nonzero direction."""


class FocusCoincidence(LocusError):
    """A probe point coincides with a focus; estimate denominators vanish."""


class NotAMember(LocusError):
    """A vector required to lie on the locus misses it beyond tolerance."""


class NegativeCoefficient(LocusError):
    """Linear-combination certificates require nonnegative coefficients."""


class NonPositiveCoefficient(LocusError):
    """Multi-vector certificates require strictly positive coefficients."""


class ZeroTailVector(LocusError):
    """An iterated-estimate denominator vanished; the upper bound is undefined."""


class DegreeOverflow(LocusError):
    """Polynomial has more coefficients than the space has basis monomials."""


class DimensionNot2D(LocusError):
    """Curve tracing is defined for 2-D spaces only."""
