import math

import numpy as np
import pytest

from gramlocus import (
    LocusSpec,
    audit_certificate,
    certify_add_members,
    certify_add_vector,
    certify_linear_combo,
    certify_multi_combo,
    composite_value,
    delta_estimates,
    eval_g,
    identity_space,
    multi_offset_norm_sq,
    solve_on_ray,
)
from gramlocus.certify import GEQ, LEQ
from gramlocus.errors import (
    FocusCoincidence,
    NegativeCoefficient,
    NonPositiveCoefficient,
    NotAMember,
    ZeroTailVector,
)
from gramlocus.refcases import (
    euclid3_instance,
    linear_poly_locus,
    linear_poly_members,
    linear_poly_two_pi_space,
    quadratic_poly_locus,
    quadratic_poly_member,
    quadratic_poly_space,
)

from conftest import poly_inner_closed_form, rand_space

E2 = identity_space(2)


# ----------------------------------------------------------------------
# Independent oracle: the quadratic-polynomial instance recomputed from
# closed-form monomial integrals, never touching the Gram path.
# ----------------------------------------------------------------------

def quadratic_poly_oracle():
    b = math.sqrt(65.0) / 12.0 - 13.0 / 6.0
    z = [b, 3.0, 0.0]        # 3x + b
    y = [0.0, 0.0, 1.0]      # x^2
    plus = [b, 4.0, 0.0]     # z + x
    minus = [b, 2.0, 0.0]    # z - x
    ip = lambda f, g: poly_inner_closed_form(f, g, 0.0, 1.0)
    a2_plus = ip(plus, plus)
    a2_minus = ip(minus, minus)
    p_plus = a2_plus + ip(plus, y)
    p_minus = a2_minus + ip(minus, y)
    ny2 = ip(y, y)
    proj_plus = abs(p_plus) / math.sqrt(a2_plus)
    hyp_minus = math.sqrt(ny2 + p_minus**2 / a2_minus)
    cond1 = 0.5 - proj_plus + hyp_minus
    zy_plus = [b, 4.0, 1.0]
    zy_minus = [b, 2.0, 1.0]
    direct = math.sqrt(ip(zy_plus, zy_plus)) - math.sqrt(ip(zy_minus, zy_minus))
    return {
        "z": z,
        "y": y,
        "proj_plus": proj_plus,
        "hyp_minus": hyp_minus,
        "cond1": cond1,
        "direct": direct,
        "ip_plus": ip(plus, y),
        "ip_minus": ip(minus, y),
    }


ORACLE = quadratic_poly_oracle()


def test_oracle_matches_frozen_values():
    # Frozen from the closed-form integrals; guards against oracle drift.
    assert ORACLE["proj_plus"] == pytest.approx(1.6584553, abs=1e-6)
    assert ORACLE["hyp_minus"] == pytest.approx(0.8841018, abs=1e-6)
    assert ORACLE["cond1"] == pytest.approx(-0.2743535, abs=1e-6)
    assert ORACLE["direct"] == pytest.approx(0.7868311, abs=1e-6)
    assert ORACLE["ip_plus"] == pytest.approx(0.5017294, abs=1e-6)
    assert ORACLE["ip_minus"] == pytest.approx(0.0017294, abs=1e-6)


def test_delta_estimates_single_focus_mirrors_sum_bounds():
    spec = LocusSpec(foci=[[0.0, 0.0]], alphas=[1.0], c=1.0)
    est = delta_estimates(E2, spec, [1.0, 0.0], [0.0, 1.0])
    assert est.proj[0] == pytest.approx(1.0)
    assert est.hyp[0] == pytest.approx(math.sqrt(2))
    assert not est.negative_projection[0]


def test_delta_estimates_focus_coincidence():
    spec = LocusSpec(foci=[[1.0, 0.0]], alphas=[1.0], c=1.0)
    with pytest.raises(FocusCoincidence):
        delta_estimates(E2, spec, [1.0, 0.0], [0.0, 1.0])


def test_delta_estimates_quadratic_poly_instance():
    space = quadratic_poly_space()
    spec = quadratic_poly_locus()
    est = delta_estimates(space, spec, quadratic_poly_member(), [0.0, 0.0, 1.0])
    assert est.proj[0] == pytest.approx(ORACLE["proj_plus"], rel=1e-12)
    assert est.hyp[1] == pytest.approx(ORACLE["hyp_minus"], rel=1e-12)
    assert est.proj[0] == pytest.approx(1.6585, abs=1e-4)


def test_delta_estimates_sandwich(rng):
    for _ in range(500):
        dim = int(rng.integers(1, 4))
        space = rand_space(rng, dim)
        n_foci = int(rng.integers(1, 4))
        foci = rng.normal(size=(n_foci, dim)) * 2
        spec = LocusSpec(foci=foci, alphas=np.ones(n_foci), c=1.0)
        z = rng.normal(size=dim) * 3
        if min(space.norm(z - f) for f in foci) < 1e-6:
            continue
        y = rng.normal(size=dim) * 2
        est = delta_estimates(space, spec, z, y)
        for i, focus in enumerate(foci):
            true = space.norm(z + y - focus)
            assert 0.0 <= est.proj[i] <= est.hyp[i] + 1e-12
            assert est.proj[i] - 1e-9 <= true <= est.hyp[i] + 1e-9


def test_add_vector_quadratic_poly_case1():
    space = quadratic_poly_space()
    spec = quadratic_poly_locus()
    certs = certify_add_vector(space, spec, quadratic_poly_member(), [0.0, 0.0, 1.0], member_tol=1e-6)
    c1 = certs[0]
    assert c1.case_id == 1
    assert c1.condition_value == pytest.approx(ORACLE["cond1"], rel=1e-12)
    assert c1.fired
    assert c1.direction == GEQ
    assert c1.bound == pytest.approx(0.5)
    assert audit_certificate(space, spec, c1.composite_point, c1.composite_foci, c1)
    direct = composite_value(space, spec, c1.composite_point, c1.composite_foci)
    assert direct == pytest.approx(ORACLE["direct"], rel=1e-12)
    assert direct >= 0.5


def test_add_vector_zero_offset_conditions_vanish():
    space = quadratic_poly_space()
    spec = quadratic_poly_locus()
    z = quadratic_poly_member()
    certs = certify_add_vector(space, spec, z, [0.0, 0.0, 0.0], member_tol=1e-6)
    for cert in certs:
        # Conditions collapse to 0 up to rounding; anything that still fires
        # on float noise must remain sound (g(z + 0) = c sits on the bound).
        assert cert.condition_value == pytest.approx(0.0, abs=1e-9)
        if cert.fired and not cert.suspect_direction:
            assert audit_certificate(space, spec, cert.composite_point, cert.composite_foci, cert)
    est = delta_estimates(space, spec, z, [0.0, 0.0, 0.0])
    for i, focus in enumerate(spec.foci):
        d = space.norm(z - focus)
        assert est.proj[i] == pytest.approx(d)
        assert est.hyp[i] == pytest.approx(d)


def test_add_vector_rejects_non_member():
    with pytest.raises(NotAMember):
        certify_add_vector(E2, LocusSpec(foci=[[0.0, 0.0]], alphas=[1.0], c=1.0), [3.0, 0.0], [0.0, 1.0])


def test_add_members_euclid3_case2():
    space, spec, v, w = euclid3_instance()
    certs = certify_add_members(space, spec, v, w, member_tol=5e-3)
    c2 = certs[1]
    assert c2.condition_value == pytest.approx(0.2448737, abs=1e-6)
    assert c2.fired and c2.direction == LEQ and c2.bound == 30.0
    assert audit_certificate(space, spec, c2.composite_point, c2.composite_foci, c2)
    direct = composite_value(space, spec, v + w, 2.0 * spec.foci)
    assert direct == pytest.approx(27.6970467, abs=1e-6)
    assert direct <= 30.0


def test_add_members_conditions_match_manual_reassembly(rng):
    # Re-derive the four condition values from raw norms and inner products.
    for _ in range(50):
        dim = int(rng.integers(2, 4))
        space = rand_space(rng, dim)
        n_foci = int(rng.integers(1, 4))
        foci = rng.normal(size=(n_foci, dim)) * 2
        alphas = rng.choice([-1.0, 1.0], size=n_foci) * rng.uniform(0.2, 2.0, size=n_foci)
        probe_v = rng.normal(size=dim) * 3
        probe_w = rng.normal(size=dim) * 3
        c = float(eval_g(space, LocusSpec(foci=foci, alphas=alphas, c=0.0), probe_v))
        spec = LocusSpec(foci=foci, alphas=alphas, c=c)
        # probe_v is a member by construction; find another member on a ray
        # through probe_w's direction from probe_v.
        roots = solve_on_ray(space, spec, probe_v, probe_w, -3.0, 3.0, 1e-10)
        roots = [t for t in roots if abs(t) > 1e-6]
        if not roots or min(space.norm(probe_v - f) for f in foci) < 1e-3:
            continue
        w_pt = probe_v + roots[0] * probe_w
        if min(space.norm(w_pt - f) for f in foci) < 1e-3:
            continue
        certs = certify_add_members(space, spec, probe_v, w_pt, member_tol=1e-6)
        proj = np.empty(n_foci)
        hyp = np.empty(n_foci)
        for i, f in enumerate(foci):
            a2 = space.norm_sq(probe_v - f)
            p = a2 + space.inner(probe_v - f, w_pt - f)
            ny2 = space.norm_sq(w_pt - f)
            proj[i] = abs(p) / math.sqrt(a2)
            hyp[i] = math.sqrt(ny2 + p * p / a2)
        pos = alphas > 0
        mix = lambda ep, en: float(np.sum(np.where(pos, alphas * ep, alphas * en)))
        expected = [
            2 * c - mix(proj, hyp),
            2 * c - mix(hyp, proj),
            mix(proj, hyp),
            mix(hyp, proj),
        ]
        got = [cert.condition_value for cert in certs]
        assert got == pytest.approx(expected, rel=1e-9, abs=1e-9)


def test_add_members_equal_members_consistent_at_equality():
    space, spec = E2, LocusSpec(foci=[[4.0, 0.0], [-4.0, 0.0]], alphas=[1.0, 1.0], c=10.0)
    v = np.array([0.0, 3.0])
    certs = certify_add_members(space, spec, v, v, member_tol=1e-9)
    direct = composite_value(space, spec, 2 * v, 2 * spec.foci)
    assert direct == pytest.approx(20.0, rel=1e-12)
    for cert in certs:
        if cert.fired and not cert.suspect_direction:
            assert audit_certificate(space, spec, cert.composite_point, cert.composite_foci, cert)


def test_add_members_case4_suspect_flag_and_flipped_reading():
    # Mixed-sign instance chosen so case 4 fires: the stated GEQ reading
    # fails the audit while the flipped LEQ reading holds.
    spec = LocusSpec(foci=[[0.0, 2.0], [0.0, -2.0]], alphas=[1.0, -1.0], c=-3.0)
    v = np.array([0.0, 1.5])
    w = np.array([1.0, 1.5 * math.sqrt(1.0 + 1.0 / 1.75)])
    assert abs(eval_g(E2, spec, v) - spec.c) < 1e-9
    assert abs(eval_g(E2, spec, w) - spec.c) < 1e-9
    certs = certify_add_members(E2, spec, v, w, member_tol=1e-6)
    c4 = certs[3]
    assert c4.suspect_direction
    assert c4.direction == GEQ and c4.bound == 0.0
    assert c4.fired
    assert not audit_certificate(E2, spec, c4.composite_point, c4.composite_foci, c4)
    assert audit_certificate(E2, spec, c4.composite_point, c4.composite_foci, c4.flipped())


def test_linear_combo_two_pi_instance():
    space = linear_poly_two_pi_space()
    spec = linear_poly_locus()
    _, _, v, w = linear_poly_members()

    # Oracle: inner products via closed-form integrals of (a x + b) pairs.
    scale = 1.0 / (2.0 * math.pi)
    ip = lambda f, g: poly_inner_closed_form(f, g, 0.0, 2.0 * math.pi, scale)
    ip1 = 6.0 * ip([4.3543, 3.0], [7.9104, 2.0])
    ip2 = 6.0 * ip([4.3543, 6.0], [7.9104, 5.0])
    assert ip1 == pytest.approx(1291.8828, abs=1e-3)
    assert ip2 == pytest.approx(3880.3989, abs=1e-3)
    assert space.inner(2 * (v - spec.foci[0]), 3 * (w - spec.foci[0])) == pytest.approx(ip1, rel=1e-12)
    assert space.inner(2 * (v - spec.foci[1]), 3 * (w - spec.foci[1])) == pytest.approx(ip2, rel=1e-12)

    certs = certify_linear_combo(space, spec, v, w, 2.0, 3.0, member_tol=5e-3)
    assert certs[1].condition_value == pytest.approx(-23.8524, abs=1e-3)
    c3 = certs[2]
    assert c3.fired and c3.direction == GEQ and c3.bound == pytest.approx(-4.0)
    assert audit_certificate(space, spec, c3.composite_point, c3.composite_foci, c3)
    direct = composite_value(space, spec, 2 * v + 3 * w, 5 * spec.foci)
    assert direct == pytest.approx(19.7986898, abs=1e-6)
    assert direct <= 20.0


def test_linear_combo_beta_zero_reduces_to_member():
    space, spec = E2, LocusSpec(foci=[[4.0, 0.0], [-4.0, 0.0]], alphas=[1.0, 1.0], c=10.0)
    v = np.array([0.0, 3.0])
    w = np.array([5.0, 0.0])
    certs = certify_linear_combo(space, spec, v, w, 1.0, 0.0, member_tol=1e-9)
    direct = composite_value(space, spec, v, spec.foci)
    assert direct == pytest.approx(10.0, rel=1e-12)
    for cert in certs:
        assert cert.condition_value == pytest.approx(0.0, abs=1e-9) or not cert.fired


def test_linear_combo_gamma_zero_uses_exact_identity():
    space, spec = E2, LocusSpec(foci=[[4.0, 0.0], [-4.0, 0.0]], alphas=[1.0, 1.0], c=10.0)
    v = np.array([0.0, 3.0])
    w = np.array([5.0, 0.0])
    certs = certify_linear_combo(space, spec, v, w, 0.0, 2.0, member_tol=1e-9)
    direct = composite_value(space, spec, 2 * w, 2 * spec.foci)
    assert direct == pytest.approx(20.0, rel=1e-12)
    # The exact identity collapses the level cases to 0; case 3 still fires
    # its (always-sound) low-side bound.
    assert certs[0].condition_value == pytest.approx(0.0, abs=1e-9)
    assert certs[1].condition_value == pytest.approx(0.0, abs=1e-9)
    for cert in certs:
        if cert.fired:
            assert audit_certificate(space, spec, cert.composite_point, cert.composite_foci, cert)


def test_linear_combo_rejects_negative_coefficients():
    v = np.array([0.0, 3.0])
    spec = LocusSpec(foci=[[4.0, 0.0], [-4.0, 0.0]], alphas=[1.0, 1.0], c=10.0)
    with pytest.raises(NegativeCoefficient):
        certify_linear_combo(E2, spec, v, v, -1.0, 2.0)
    with pytest.raises(NegativeCoefficient):
        certify_linear_combo(E2, spec, v, v, 1.0, -2.0)


def test_multi_combo_m2_matches_linear_combo(rng):
    for _ in range(50):
        dim = int(rng.integers(2, 4))
        space = rand_space(rng, dim)
        n_foci = int(rng.integers(1, 4))
        foci = rng.normal(size=(n_foci, dim)) * 2
        alphas = rng.choice([-1.0, 1.0], size=n_foci) * rng.uniform(0.2, 2.0, size=n_foci)
        v = rng.normal(size=dim) * 3
        c = float(eval_g(space, LocusSpec(foci=foci, alphas=alphas, c=0.0), v))
        spec = LocusSpec(foci=foci, alphas=alphas, c=c)
        direction = rng.normal(size=dim)
        roots = [t for t in solve_on_ray(space, spec, v, direction, -3.0, 3.0, 1e-10) if abs(t) > 1e-6]
        if not roots:
            continue
        w = v + roots[0] * direction
        if min(space.norm(p - f) for p in (v, w) for f in foci) < 1e-3:
            continue
        gamma, beta = float(rng.uniform(0.1, 3)), float(rng.uniform(0.1, 3))
        combo = certify_linear_combo(space, spec, v, w, gamma, beta, member_tol=1e-6)
        multi = certify_multi_combo(space, spec, [v, w], [gamma, beta], member_tol=1e-6)
        assert multi[0].condition_value == pytest.approx(combo[0].condition_value, rel=1e-9, abs=1e-9)
        assert multi[1].condition_value == pytest.approx(combo[1].condition_value, rel=1e-9, abs=1e-9)


def test_multi_combo_single_vector_is_exact():
    spec = LocusSpec(foci=[[4.0, 0.0], [-4.0, 0.0]], alphas=[1.0, 1.0], c=10.0)
    v = np.array([0.0, 3.0])
    certs = certify_multi_combo(E2, spec, [v], [1.0], member_tol=1e-9)
    direct = composite_value(E2, spec, v, spec.foci)
    assert direct == pytest.approx(10.0, rel=1e-12)
    for cert in certs:
        assert cert.condition_value == pytest.approx(0.0, abs=1e-9)
        assert not cert.fired


def test_multi_combo_three_members_fired_certificates_audit(rng):
    spec = LocusSpec(foci=[[4.0, 0.0], [-4.0, 0.0]], alphas=[1.0, 1.0], c=10.0)
    audited = 0
    for _ in range(100):
        angles = rng.uniform(0, 2 * math.pi, size=3)
        members = [np.array([5 * math.cos(a), 3 * math.sin(a)]) for a in angles]
        betas = rng.uniform(0.2, 2.0, size=3)
        certs = certify_multi_combo(E2, spec, members, betas, member_tol=1e-9)
        for cert in certs:
            if cert.fired:
                assert audit_certificate(E2, spec, cert.composite_point, cert.composite_foci, cert)
                audited += 1
    assert audited > 20


def test_multi_combo_rejects_nonpositive_betas():
    v = np.array([0.0, 3.0])
    spec = LocusSpec(foci=[[4.0, 0.0], [-4.0, 0.0]], alphas=[1.0, 1.0], c=10.0)
    with pytest.raises(NonPositiveCoefficient):
        certify_multi_combo(E2, spec, [v, v], [1.0, 0.0])
    with pytest.raises(NonPositiveCoefficient):
        certify_multi_combo(E2, spec, [v, v], [1.0, -1.0])


def test_multi_combo_zero_tail_vector():
    # First member sits on a focus, so a step denominator vanishes.
    spec = LocusSpec(foci=[[0.0, 0.0]], alphas=[1.0], c=0.0)
    origin = np.array([0.0, 0.0])
    with pytest.raises(ZeroTailVector):
        certify_multi_combo(E2, spec, [origin, origin], [1.0, 1.0], member_tol=1e-9)


def test_multi_offset_norm_sq_matches_direct(rng):
    for _ in range(200):
        dim = int(rng.integers(1, 4))
        space = rand_space(rng, dim)
        m = int(rng.integers(1, 5))
        vs = [rng.normal(size=dim) * 2 for _ in range(m)]
        betas = rng.uniform(0.1, 2.0, size=m)
        focus = rng.normal(size=dim)
        expansion = multi_offset_norm_sq(space, vs, betas, focus)
        direct = space.norm_sq(sum(b * (v - focus) for b, v in zip(betas, vs)))
        assert expansion == pytest.approx(direct, rel=1e-9, abs=1e-9)


def test_audit_flipped_direction_is_negative_control():
    space = quadratic_poly_space()
    spec = quadratic_poly_locus()
    certs = certify_add_vector(space, spec, quadratic_poly_member(), [0.0, 0.0, 1.0], member_tol=1e-6)
    c1 = certs[0]
    assert audit_certificate(space, spec, c1.composite_point, c1.composite_foci, c1)
    assert not audit_certificate(space, spec, c1.composite_point, c1.composite_foci, c1.flipped())


def test_audit_requires_fired():
    space = quadratic_poly_space()
    spec = quadratic_poly_locus()
    certs = certify_add_vector(space, spec, quadratic_poly_member(), [0.0, 0.0, 1.0], member_tol=1e-6)
    unfired = [c for c in certs if not c.fired][0]
    with pytest.raises(ValueError):
        audit_certificate(space, spec, unfired.composite_point, unfired.composite_foci, unfired)


def test_tighter_bound_wins_when_cases_two_and_four_both_fire(rng):
    # For zero-sum coefficients both LEQ bounds coincide with c; for others
    # the smaller bound is the binding one.  Audit both whenever both fire.
    found = 0
    for _ in range(500):
        dim = 2
        space = rand_space(rng, dim)
        foci = rng.normal(size=(2, dim)) * 2
        alphas = np.array([rng.uniform(0.2, 2.0), -rng.uniform(0.2, 2.0)])
        v = rng.normal(size=dim) * 3
        c = float(eval_g(space, LocusSpec(foci=foci, alphas=alphas, c=0.0), v))
        spec = LocusSpec(foci=foci, alphas=alphas, c=c)
        if min(space.norm(v - f) for f in foci) < 1e-3:
            continue
        y = rng.normal(size=dim)
        certs = certify_add_vector(space, spec, v, y, member_tol=1e-9)
        c2, c4 = certs[1], certs[3]
        if c2.fired and c4.fired:
            found += 1
            value = composite_value(space, spec, c2.composite_point, c2.composite_foci)
            tighter = min(c2.bound, c4.bound)
            assert value <= tighter + 1e-9 * max(1.0, abs(tighter))
    assert found > 10
