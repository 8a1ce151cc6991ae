"""Bound certificates for composing locus members.

Each theorem here answers the same question: after forming a new point
from locus members (member plus arbitrary vector, member plus member,
nonnegative linear combination, or a positive combination of many
members), what can be said about the defining function's value there
without evaluating it?  Per focus, the unknown distance ``|z + y - x_i|``
is bracketed by a projection-style lower estimate and a hypotenuse-style
upper estimate (see :func:`gramlocus.triangle.sum_length_bounds`); picking
the estimate that makes the aggregate an over- or under-approximation
turns the sign of one scalar condition into a one-sided bound on the
composite value.

Four cases per theorem:

=====  =========  =========  ==================  =============
case   fires on   pos-alpha  neg-alpha estimate  bound
=====  =========  =========  ==================  =============
1      cond < 0   proj       hyp                 value >= high
2      cond > 0   hyp        proj                value <= high
3      cond > 0   proj       hyp                 value >= low
4      cond < 0   hyp        proj                value <= low
=====  =========  =========  ==================  =============

where ``high``/``low`` are the theorem's two bound constants.  Conditions
use strict inequalities; an exact zero fires nothing.  The conditions are
not mutually exclusive: when several fire, all their bounds hold and the
tightest wins.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import (
    FocusCoincidence,
    NegativeCoefficient,
    NonPositiveCoefficient,
    NotAMember,
    ZeroTailVector,
)
from .locus import LocusSpec, eval_g
from .spaces import GramSpace, as_vector

THEOREM_ADD_VECTOR = "T7"
THEOREM_ADD_MEMBERS = "T8"
THEOREM_LINEAR_COMBO = "T10"
THEOREM_MULTI_COMBO = "TMULTI"

GEQ = "GEQ"
LEQ = "LEQ"

#: Default membership gate for certificate preconditions.  Reference data
#: in this domain tends to carry four-decimal precision, so the default is
#: looser than the exact-membership tolerances used elsewhere; callers with
#: machine-precision members should tighten it.
DEFAULT_MEMBER_TOL = 5e-3

#: Absolute slack (scaled by max(1, |bound|)) when auditing a bound.
AUDIT_SLACK = 1e-9


@dataclass(frozen=True)
class DeltaEstimates:
    """Per-focus brackets for the distances from a composite point to foci.

    ``proj[i] <= |z + y - x_i| <= hyp[i]`` with

        proj_i = | |z-x_i|^2 + <z-x_i, y> | / |z-x_i|
        hyp_i  = sqrt(|y|^2 + (|z-x_i|^2 + <z-x_i, y>)^2 / |z-x_i|^2)

    ``negative_projection[i]`` flags foci where the pre-absolute-value
    projection numerator was negative, i.e. instances outside the regime
    where <z-x_i, y> >= 0 holds.
    """

    proj: np.ndarray
    hyp: np.ndarray
    negative_projection: np.ndarray

    def __post_init__(self) -> None:
        for name in ("proj", "hyp", "negative_projection"):
            arr = getattr(self, name)
            arr = np.asarray(arr)
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)


@dataclass(frozen=True)
class Certificate:
    """One case of one theorem, evaluated on a concrete instance.

    ``fired`` records whether the case's strict sign condition held; when
    it did, the theorem asserts ``direction``/``bound`` for the defining
    function evaluated at ``composite_point`` against ``composite_foci``
    (carried explicitly so audits cannot mispair point and foci).

    ``suspect_direction`` marks the one case whose stated direction
    duplicates its sibling case instead of mirroring it; audit both the
    stated and the flipped reading for a certificate so flagged.
    """

    theorem: str
    case_id: int
    condition_value: float
    direction: str
    bound: float
    fired: bool
    composite_point: np.ndarray
    composite_foci: np.ndarray
    suspect_direction: bool = False
    negative_projection: tuple[bool, ...] = ()

    def __post_init__(self) -> None:
        p = np.asarray(self.composite_point, dtype=float)
        f = np.atleast_2d(np.asarray(self.composite_foci, dtype=float))
        p.flags.writeable = False
        f.flags.writeable = False
        object.__setattr__(self, "composite_point", p)
        object.__setattr__(self, "composite_foci", f)

    def flipped(self) -> "Certificate":
        """The same certificate with the opposite direction."""
        return replace(self, direction=LEQ if self.direction == GEQ else GEQ)

    def to_dict(self) -> dict:
        return {
            "theorem": self.theorem,
            "case": self.case_id,
            "condition_value": self.condition_value,
            "direction": self.direction,
            "bound": self.bound,
            "fired": self.fired,
            "suspect_direction": self.suspect_direction,
            "negative_projection": list(self.negative_projection),
            "composite_point": self.composite_point.tolist(),
            "composite_foci": self.composite_foci.tolist(),
        }


def _offsets(space: GramSpace, spec: LocusSpec, point: np.ndarray) -> np.ndarray:
    return point[np.newaxis, :] - spec.foci


def _quad_rows(space: GramSpace, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Row-wise Gram inner products <a_i, b_i>."""
    return np.einsum("ij,jk,ik->i", a, space.gram, b)


def _require_member(
    space: GramSpace, spec: LocusSpec, v: np.ndarray, tol: float, label: str
) -> None:
    res = eval_g(space, spec, v) - spec.c
    if abs(res) > tol:
        raise NotAMember(
            f"{label} misses the locus: |g - c| = {abs(res):.3e} > {tol:.1e}; "
            "the theorem hypothesis fails"
        )


def _estimates(a2: np.ndarray, p: np.ndarray, ny2: np.ndarray) -> DeltaEstimates:
    """Brackets from squared base lengths a2, numerators p, offsets ny2.

    a2[i] = |base_i|^2 (must be positive), p[i] = a2[i] + <base_i, y_i>,
    ny2[i] = |y_i|^2.  Exact when y_i = 0: both sides collapse to |base_i|.
    """
    if np.any(a2 <= 0.0):
        raise FocusCoincidence("a base vector has zero norm at some focus")
    a = np.sqrt(a2)
    proj = np.abs(p) / a
    hyp = np.sqrt(np.maximum(ny2 + p * p / a2, 0.0))
    return DeltaEstimates(proj=proj, hyp=hyp, negative_projection=p < 0.0)


def delta_estimates(space: GramSpace, spec: LocusSpec, z, y) -> DeltaEstimates:
    """Per-focus brackets for ``|z + y - x_i|``.

    Requires z distinct from every focus (the projection denominators are
    the distances |z - x_i|).
    """
    zv = as_vector(z, space.dim)
    yv = as_vector(y, space.dim)
    zoff = _offsets(space, spec, zv)
    a2 = _quad_rows(space, zoff, zoff)
    if np.any(a2 <= 0.0):
        raise FocusCoincidence("z coincides with a focus")
    p = a2 + zoff @ space.gram @ yv
    ny2 = np.full(spec.n_foci, max(float(yv @ space.gram @ yv), 0.0))
    return _estimates(a2, p, ny2)


def _mix(alphas: np.ndarray, est_pos: np.ndarray, est_neg: np.ndarray) -> float:
    """sum(alpha_i * est_i) picking est_pos where alpha > 0, est_neg otherwise."""
    return float(np.sum(np.where(alphas > 0.0, alphas * est_pos, alphas * est_neg)))


def _four_cases(
    theorem: str,
    alphas: np.ndarray,
    est: DeltaEstimates,
    lead_high: float,
    lead_low: float,
    bound_high: float,
    bound_low: float,
    composite_point: np.ndarray,
    composite_foci: np.ndarray,
    suspect_case4_geq: bool = False,
) -> list[Certificate]:
    neg_flags = tuple(bool(b) for b in est.negative_projection)
    cond1 = lead_high - _mix(alphas, est.proj, est.hyp)
    cond2 = lead_high - _mix(alphas, est.hyp, est.proj)
    cond3 = lead_low + _mix(alphas, est.proj, est.hyp)
    cond4 = lead_low + _mix(alphas, est.hyp, est.proj)

    def cert(case_id, cond, fired, direction, bound, suspect=False):
        return Certificate(
            theorem=theorem,
            case_id=case_id,
            condition_value=cond,
            direction=direction,
            bound=bound,
            fired=fired,
            composite_point=composite_point,
            composite_foci=composite_foci,
            suspect_direction=suspect,
            negative_projection=neg_flags,
        )

    case4_dir = GEQ if suspect_case4_geq else LEQ
    return [
        cert(1, cond1, cond1 < 0.0, GEQ, bound_high),
        cert(2, cond2, cond2 > 0.0, LEQ, bound_high),
        cert(3, cond3, cond3 > 0.0, GEQ, bound_low),
        cert(4, cond4, cond4 < 0.0, case4_dir, bound_low, suspect=suspect_case4_geq),
    ]


def certify_add_vector(
    space: GramSpace,
    spec: LocusSpec,
    z,
    y,
    member_tol: float = DEFAULT_MEMBER_TOL,
) -> list[Certificate]:
    """Certificates for adding an arbitrary vector y to a member z.

    The composite point is z + y against the original foci; the bound
    constants are ``c + S|y|`` (cases 1-2) and ``c - S|y|`` (cases 3-4)
    with S the coefficient sum, i.e. the defining function evaluated at
    (|y|, ..., |y|) added to or subtracted from c.
    """
    zv = as_vector(z, space.dim)
    yv = as_vector(y, space.dim)
    _require_member(space, spec, zv, member_tol, "z")
    est = delta_estimates(space, spec, zv, yv)
    ny = space.norm(yv)
    s_alpha = float(np.sum(spec.alphas))
    high = spec.c + s_alpha * ny
    low = spec.c - s_alpha * ny
    return _four_cases(
        THEOREM_ADD_VECTOR,
        spec.alphas,
        est,
        lead_high=high,
        lead_low=s_alpha * ny - spec.c,
        bound_high=high,
        bound_low=low,
        composite_point=zv + yv,
        composite_foci=spec.foci,
    )


def certify_add_members(
    space: GramSpace,
    spec: LocusSpec,
    v,
    w,
    member_tol: float = DEFAULT_MEMBER_TOL,
) -> list[Certificate]:
    """Certificates for the sum of two members v, w.

    Specializes the add-vector result with the per-focus offset
    ``y_i = w - x_i``; both lead constants collapse because w's own
    membership makes ``sum(alpha_i |w - x_i|) = c``.  The composite point
    is v + w against doubled foci 2 x_i, with bounds 2c (cases 1-2) and
    0 (cases 3-4).  Case 4 is emitted with the GEQ direction it is stated
    with, flagged ``suspect_direction`` because the derivation yields the
    LEQ reading; audit both.
    """
    vv = as_vector(v, space.dim)
    wv = as_vector(w, space.dim)
    _require_member(space, spec, vv, member_tol, "v")
    _require_member(space, spec, wv, member_tol, "w")
    voff = _offsets(space, spec, vv)
    woff = _offsets(space, spec, wv)
    a2 = _quad_rows(space, voff, voff)
    if np.any(a2 <= 0.0):
        raise FocusCoincidence("v coincides with a focus")
    p = a2 + _quad_rows(space, voff, woff)
    ny2 = np.maximum(_quad_rows(space, woff, woff), 0.0)
    est = _estimates(a2, p, ny2)
    return _four_cases(
        THEOREM_ADD_MEMBERS,
        spec.alphas,
        est,
        lead_high=2.0 * spec.c,
        lead_low=0.0,
        bound_high=2.0 * spec.c,
        bound_low=0.0,
        composite_point=vv + wv,
        composite_foci=2.0 * spec.foci,
        suspect_case4_geq=True,
    )


def certify_linear_combo(
    space: GramSpace,
    spec: LocusSpec,
    v,
    w,
    gamma: float,
    beta: float,
    member_tol: float = DEFAULT_MEMBER_TOL,
) -> list[Certificate]:
    """Certificates for ``gamma * v + beta * w`` with nonnegative scalars.

    Works on the scaled offsets ``gamma (v - x_i)`` and ``beta (w - x_i)``;
    the composite point is ``gamma v + beta w`` against foci
    ``(gamma + beta) x_i`` with bounds ``(gamma + beta) c`` (cases 1-2) and
    ``(gamma - beta) c`` (cases 3-4).  Negative scalars are rejected: with
    a negative gamma the estimate inequalities lose their direction.

    When gamma or beta is zero the corresponding offset vanishes and the
    identity ``|0 + u| = |u|`` replaces the estimates exactly.
    """
    if gamma < 0.0 or beta < 0.0:
        raise NegativeCoefficient("gamma and beta must be nonnegative")
    vv = as_vector(v, space.dim)
    wv = as_vector(w, space.dim)
    _require_member(space, spec, vv, member_tol, "v")
    _require_member(space, spec, wv, member_tol, "w")
    voff = _offsets(space, spec, vv)
    woff = _offsets(space, spec, wv)
    w_norms_sq = np.maximum(_quad_rows(space, woff, woff), 0.0)
    if gamma == 0.0:
        # Offset side is exactly zero: both estimates equal |beta (w - x_i)|.
        exact = beta * np.sqrt(w_norms_sq)
        est = DeltaEstimates(
            proj=exact, hyp=exact, negative_projection=np.zeros(spec.n_foci, dtype=bool)
        )
    else:
        a2 = gamma * gamma * _quad_rows(space, voff, voff)
        if np.any(a2 <= 0.0):
            raise FocusCoincidence("v coincides with a focus and gamma > 0")
        p = a2 + gamma * beta * _quad_rows(space, voff, woff)
        ny2 = beta * beta * w_norms_sq
        est = _estimates(a2, p, ny2)
    return _four_cases(
        THEOREM_LINEAR_COMBO,
        spec.alphas,
        est,
        lead_high=(gamma + beta) * spec.c,
        lead_low=(beta - gamma) * spec.c,
        bound_high=(gamma + beta) * spec.c,
        bound_low=(gamma - beta) * spec.c,
        composite_point=gamma * vv + beta * wv,
        composite_foci=(gamma + beta) * spec.foci,
    )


def multi_offset_norm_sq(space: GramSpace, vs, betas, focus) -> float:
    """``|sum_j beta_j (v_j - focus)|^2`` via the pairwise Gram expansion.

    Expands over unordered index pairs with coefficient ``binom(2, d)``
    where d = 0 on the diagonal and 1 off it, i.e. diagonal terms count
    once and cross terms twice.
    """
    f = as_vector(focus, space.dim)
    offs = [float(b) * (as_vector(v, space.dim) - f) for v, b in zip(vs, betas)]
    m = len(offs)
    total = 0.0
    for i in range(m):
        for j in range(i, m):
            coeff = 1.0 if i == j else 2.0
            total += coeff * float(offs[i] @ space.gram @ offs[j])
    return total


def certify_multi_combo(
    space: GramSpace,
    spec: LocusSpec,
    vs,
    betas,
    member_tol: float = DEFAULT_MEMBER_TOL,
) -> list[Certificate]:
    """Certificates for ``sum_j beta_j v_j`` over members with beta_j > 0.

    Per focus, the composite offset ``sum_j beta_j (v_j - x_i)`` is
    bracketed by iterating the length-of-sum formula over the tail sums
    ``tail_j = sum_{k>=j} beta_k (v_k - x_i)``:

    * lower bound: the first-step projection
      ``| |b_1|^2 + <tail_2, b_1> | / |b_1|`` with ``b_j = beta_j (v_j - x_i)``;
    * upper bound: ``sqrt(U)`` where
      ``U = sum_{j<m} (|b_j|^2 + <tail_{j+1}, b_j>)^2 / |b_j|^2 + |b_m|^2``.

    Only the two aggregate cases exist: condition < 0 certifies
    ``value >= (sum beta) c`` and condition > 0 certifies
    ``value <= (sum beta) c``.  A vanishing ``b_j`` for j < m leaves the
    iterated bound undefined (ZeroTailVector).
    """
    betas = np.asarray(betas, dtype=float).ravel()
    if betas.size == 0:
        raise ValueError("need at least one vector and coefficient")
    if np.any(betas <= 0.0):
        raise NonPositiveCoefficient("all coefficients must be strictly positive")
    vecs = [as_vector(v, space.dim) for v in vs]
    if len(vecs) != betas.size:
        raise ValueError(f"{len(vecs)} vectors but {betas.size} coefficients")
    for k, vec in enumerate(vecs):
        _require_member(space, spec, vec, member_tol, f"v{k + 1}")

    m = len(vecs)
    beta_sum = float(np.sum(betas))
    lower = np.empty(spec.n_foci)
    upper = np.empty(spec.n_foci)
    neg = np.zeros(spec.n_foci, dtype=bool)

    for i, focus in enumerate(spec.foci):
        steps = [betas[j] * (vecs[j] - focus) for j in range(m)]
        tails = [None] * (m + 1)
        tails[m] = np.zeros(space.dim)
        for j in range(m - 1, -1, -1):
            tails[j] = tails[j + 1] + steps[j]
        if m == 1:
            exact = float(np.sqrt(max(steps[0] @ space.gram @ steps[0], 0.0)))
            lower[i] = upper[i] = exact
            continue
        upsilon = float(max(steps[m - 1] @ space.gram @ steps[m - 1], 0.0))
        for j in range(m - 1):
            b2 = float(steps[j] @ space.gram @ steps[j])
            if b2 <= 0.0:
                raise ZeroTailVector(
                    f"step vector {j + 1} vanishes at focus {i + 1}; "
                    "iterated upper bound undefined"
                )
            p = b2 + float(tails[j + 1] @ space.gram @ steps[j])
            upsilon += p * p / b2
            if j == 0:
                lower[i] = abs(p) / np.sqrt(b2)
                neg[i] = p < 0.0
        upper[i] = np.sqrt(upsilon)

    est = DeltaEstimates(proj=lower, hyp=upper, negative_projection=neg)
    lead = beta_sum * spec.c
    composite_point = np.sum([b * v for b, v in zip(betas, vecs)], axis=0)
    composite_foci = beta_sum * spec.foci
    cond1 = lead - _mix(spec.alphas, est.proj, est.hyp)
    cond2 = lead - _mix(spec.alphas, est.hyp, est.proj)
    neg_flags = tuple(bool(b) for b in neg)
    return [
        Certificate(
            theorem=THEOREM_MULTI_COMBO,
            case_id=1,
            condition_value=cond1,
            direction=GEQ,
            bound=lead,
            fired=cond1 < 0.0,
            composite_point=composite_point,
            composite_foci=composite_foci,
            negative_projection=neg_flags,
        ),
        Certificate(
            theorem=THEOREM_MULTI_COMBO,
            case_id=2,
            condition_value=cond2,
            direction=LEQ,
            bound=lead,
            fired=cond2 > 0.0,
            composite_point=composite_point,
            composite_foci=composite_foci,
            negative_projection=neg_flags,
        ),
    ]


def composite_value(
    space: GramSpace, spec: LocusSpec, composite_point, composite_foci
) -> float:
    """Direct evaluation of the defining function at a composite instance."""
    point = as_vector(composite_point, space.dim)
    foci = np.atleast_2d(np.asarray(composite_foci, dtype=float))
    if foci.shape != (spec.n_foci, space.dim):
        raise ValueError(
            f"composite foci shape {foci.shape} does not match "
            f"({spec.n_foci}, {space.dim})"
        )
    total = 0.0
    for focus, alpha in zip(foci, spec.alphas):
        d = point - focus
        total += alpha * np.sqrt(max(float(d @ space.gram @ d), 0.0))
    return total


def audit_certificate(
    space: GramSpace,
    spec: LocusSpec,
    composite_point,
    composite_foci,
    cert: Certificate,
) -> bool:
    """Check a fired certificate against direct evaluation.

    Computes the defining function at the composite point with the
    composite foci and returns whether it satisfies the certificate's
    direction against its bound, with small slack for rounding.
    """
    if not cert.fired:
        raise ValueError("only fired certificates can be audited")
    value = composite_value(space, spec, composite_point, composite_foci)
    slack = AUDIT_SLACK * max(1.0, abs(cert.bound))
    if cert.direction == GEQ:
        return bool(value >= cert.bound - slack)
    return bool(value <= cert.bound + slack)
