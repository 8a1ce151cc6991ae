"""Triangle identities in inner product spaces.

The three classical facts about the triangle with sides x, y, x+y carry
over verbatim once lengths are induced norms: the cosine law, the sine
law, and a length-of-sum formula whose sin^2 term can be bounded in
[0, 1] to bracket ``|x + y|`` from both sides.  That bracket is the
building block of the bound-certificate engine in :mod:`certify`.
"""

from __future__ import annotations

import numpy as np

from .errors import DegenerateTriangle, ZeroVector
from .spaces import GramSpace, as_vector

#: sin^2 below this fires DegenerateTriangle in sine_law_ratios.
DEGENERATE_SIN_SQ = 1e-14


def _sin_from_cos(c: float) -> float:
    return float(np.sqrt(max(0.0, 1.0 - c * c)))


def cosine_law_norm_sq(space: GramSpace, x, y) -> float:
    """|x+y|^2 via |x|^2 + |y|^2 + 2 |x| |y| cos(theta).

    Equals ``space.norm_sq(x + y)`` up to rounding; requires both vectors
    nonzero so the angle is defined.
    """
    nx = space.norm(x)
    ny = space.norm(y)
    if nx == 0.0 or ny == 0.0:
        raise ZeroVector("cosine law needs nonzero sides")
    c = space.cos_angle(x, y)
    return nx * nx + ny * ny + 2.0 * nx * ny * c


def sine_law_ratios(space: GramSpace, x, y) -> tuple[float, float, float]:
    """The three side / opposite-sine ratios of the triangle (x, y, x+y).

    All three are equal for a non-degenerate triangle.  The arccos angles
    used here are supplementary to the interior angles, which leaves the
    sines unchanged.

    Raises ZeroVector if any side is zero and DegenerateTriangle when the
    sides are parallel (a sine vanishes).
    """
    xv = as_vector(x, space.dim)
    yv = as_vector(y, space.dim)
    s = xv + yv
    nx, ny, ns = space.norm(xv), space.norm(yv), space.norm(s)
    if nx == 0.0 or ny == 0.0 or ns == 0.0:
        raise ZeroVector("sine law needs all three sides nonzero")
    sin_a = _sin_from_cos(space.cos_angle(yv, s))
    sin_b = _sin_from_cos(space.cos_angle(xv, s))
    sin_c = _sin_from_cos(space.cos_angle(xv, yv))
    for sv in (sin_a, sin_b, sin_c):
        if sv * sv < DEGENERATE_SIN_SQ:
            raise DegenerateTriangle("parallel sides: sine of an angle is zero")
    return (nx / sin_a, ny / sin_b, ns / sin_c)


def sum_length_sq(space: GramSpace, x, y) -> float:
    """|x+y|^2 via |y|^2 sin^2(theta) + (|x|^2 + <x,y>)^2 / |x|^2.

    theta is the angle between x and y.  Algebraically identical to the
    cosine law but split so that bounding sin^2 in [0, 1] brackets the
    sum length (see sum_length_bounds).
    """
    nx2 = space.norm_sq(x)
    ny2 = space.norm_sq(y)
    if nx2 == 0.0 or ny2 == 0.0:
        raise ZeroVector("length-of-sum formula divides by |x| and needs <x,y> angle")
    ip = space.inner(x, y)
    cos = ip / np.sqrt(nx2 * ny2)
    cos = min(1.0, max(-1.0, cos))
    sin_sq = max(0.0, 1.0 - cos * cos)
    return ny2 * sin_sq + (nx2 + ip) ** 2 / nx2


def sum_length_bounds(space: GramSpace, x, y) -> tuple[float, float]:
    """Bracket ``|x + y|`` without computing it.

    lower = |  |x|^2 + <x,y>  | / |x|       (sin^2 -> 0)
    upper = sqrt(|y|^2 + (|x|^2 + <x,y>)^2 / |x|^2)   (sin^2 -> 1)

    The projection term keeps its absolute value so the lower bound stays
    valid when <x, y> < -|x|^2; dropping it would make the bound negative
    and vacuous.  Guarantees lower <= |x+y| <= upper.
    """
    nx2 = space.norm_sq(x)
    if nx2 == 0.0:
        raise ZeroVector("bounds divide by |x|")
    ny2 = space.norm_sq(y)
    p = nx2 + space.inner(x, y)
    lower = abs(p) / np.sqrt(nx2)
    upper = np.sqrt(ny2 + p * p / nx2)
    return float(lower), float(upper)
