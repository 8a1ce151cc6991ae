"""Locus specifications and evaluation.

A locus is the level set ``{x : sum_i alpha_i * |x - x_i| = c}`` for foci
``x_i``, nonzero real coefficients ``alpha_i``, and a constant ``c``.  This
module evaluates the defining function, tests membership, solves for locus
points along rays, and performs the focus translation used when the
coefficients sum to zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, ZeroDirection
from .spaces import GramSpace, as_vector

#: |sum(alphas)| at or below this counts as the zero-sum case.
ALPHA_SUM_ZERO_TOL = 1e-12

#: Default number of uniform samples solve_on_ray scans for sign changes.
DEFAULT_RAY_SAMPLES = 1024


@dataclass(frozen=True)
class LocusSpec:
    """Foci, coefficients, and level constant of one locus equation.

    ``foci`` is an (n_foci, dim) array; ``alphas`` has one nonzero entry
    per focus.  A zero coefficient is rejected at construction: it would
    describe a different locus with that focus dropped.
    """

    foci: np.ndarray
    alphas: np.ndarray
    c: float

    def __post_init__(self) -> None:
        f = np.atleast_2d(np.asarray(self.foci, dtype=float))
        a = np.asarray(self.alphas, dtype=float).ravel()
        if f.size == 0:
            raise ValueError("locus needs at least one focus")
        if f.ndim != 2:
            raise ValueError(f"foci must be a list of coordinate tuples, got shape {f.shape}")
        if f.shape[0] != a.shape[0]:
            raise ValueError(f"{f.shape[0]} foci but {a.shape[0]} coefficients")
        if not (np.all(np.isfinite(f)) and np.all(np.isfinite(a)) and np.isfinite(self.c)):
            raise ValueError("foci, alphas and c must be finite")
        if np.any(a == 0.0):
            raise ValueError("zero coefficients are not allowed")
        f = f.copy()
        a = a.copy()
        f.flags.writeable = False
        a.flags.writeable = False
        object.__setattr__(self, "foci", f)
        object.__setattr__(self, "alphas", a)
        object.__setattr__(self, "c", float(self.c))

    @property
    def n_foci(self) -> int:
        return self.foci.shape[0]

    @property
    def dim(self) -> int:
        return self.foci.shape[1]


def _check_conform(space: GramSpace, spec: LocusSpec) -> None:
    if spec.dim != space.dim:
        raise DimensionMismatch(f"foci have dim {spec.dim}, space has dim {space.dim}")


def eval_g(space: GramSpace, spec: LocusSpec, x):
    """Evaluate ``sum_i alpha_i * |x - x_i|`` at one point or a batch.

    ``x`` may be a single coordinate tuple (returns a float) or an
    (m, dim) array of points (returns an (m,) array).  Well-defined at a
    focus, where that term is zero.
    """
    _check_conform(space, spec)
    pts = np.asarray(x, dtype=float)
    single = pts.ndim == 1
    if single:
        pts = as_vector(pts, space.dim)[np.newaxis, :]
    if pts.ndim != 2 or pts.shape[1] != space.dim:
        raise DimensionMismatch(f"points have shape {pts.shape}, space has dim {space.dim}")
    total = np.zeros(pts.shape[0])
    for focus, alpha in zip(spec.foci, spec.alphas):
        d = pts - focus
        q = np.einsum("ij,jk,ik->i", d, space.gram, d)
        total += alpha * np.sqrt(np.maximum(q, 0.0))
    return float(total[0]) if single else total


def is_member(space: GramSpace, spec: LocusSpec, x, tol: float) -> bool:
    """True iff ``|eval_g(x) - c| <= tol``; tol must be positive."""
    if not tol > 0.0:
        raise ValueError("membership tolerance must be positive")
    return abs(eval_g(space, spec, x) - spec.c) <= tol


def residual(space: GramSpace, spec: LocusSpec, x) -> float:
    """Signed distance-to-level ``eval_g(x) - c``."""
    return eval_g(space, spec, x) - spec.c


def solve_on_ray(
    space: GramSpace,
    spec: LocusSpec,
    origin,
    direction,
    t_min: float,
    t_max: float,
    tol: float,
    samples: int = DEFAULT_RAY_SAMPLES,
) -> list[float]:
    """Locus crossings of the ray ``origin + t * direction`` on [t_min, t_max].

    The residual is sampled on a uniform grid of ``samples`` points; each
    sign change is refined by bisection until ``|residual| <= tol`` or the
    bracket width falls below ``1e-14 * (t_max - t_min)``.  Roots come back
    ascending and deduplicated.  Tangencies (even-order roots) produce no
    sign change and are missed by design.
    """
    _check_conform(space, spec)
    o = as_vector(origin, space.dim)
    d = as_vector(direction, space.dim)
    if np.all(d == 0.0):
        raise ZeroDirection("ray direction is the zero vector")
    if not t_min < t_max:
        raise ValueError("t_min must be below t_max")
    if not tol > 0.0:
        raise ValueError("solve tolerance must be positive")
    if samples < 2:
        raise ValueError("need at least two samples")

    ts = np.linspace(t_min, t_max, samples)
    pts = o[np.newaxis, :] + ts[:, np.newaxis] * d[np.newaxis, :]
    r = eval_g(space, spec, pts) - spec.c

    span = t_max - t_min
    width_floor = 1e-14 * span

    def refine(lo: float, hi: float, r_lo: float) -> float:
        while hi - lo > width_floor:
            mid = 0.5 * (lo + hi)
            r_mid = eval_g(space, spec, o + mid * d) - spec.c
            if abs(r_mid) <= tol:
                return mid
            if (r_lo < 0.0) != (r_mid < 0.0):
                hi = mid
            else:
                lo, r_lo = mid, r_mid
        return 0.5 * (lo + hi)

    roots: list[float] = []
    dedup_eps = max(2.0 * width_floor, span * 1e-12)

    def push(t: float) -> None:
        if not roots or t - roots[-1] > dedup_eps:
            roots.append(t)

    for i in range(samples - 1):
        r0, r1 = r[i], r[i + 1]
        if r0 == 0.0:
            push(float(ts[i]))
        elif r0 * r1 < 0.0:
            push(refine(float(ts[i]), float(ts[i + 1]), float(r0)))
    if r[-1] == 0.0:
        push(float(ts[-1]))
    return roots


def translate_foci(spec: LocusSpec, z) -> LocusSpec:
    """Replace every focus ``x_i`` by ``x_i - z``; alphas and c unchanged.

    For ``z`` on the locus of a zero-coefficient-sum equation, solutions
    ``y`` of the translated equation are exactly the offsets for which
    ``z + y`` stays on the original locus.
    """
    zv = as_vector(z, spec.dim)
    return LocusSpec(foci=spec.foci - zv, alphas=spec.alphas, c=spec.c)


def alpha_sum(spec: LocusSpec) -> float:
    """Sum of the coefficients."""
    return float(np.sum(spec.alphas))


def is_alpha_sum_zero(spec: LocusSpec) -> bool:
    """Whether the coefficient sum vanishes (|sum| <= 1e-12)."""
    return abs(alpha_sum(spec)) <= ALPHA_SUM_ZERO_TOL
