import numpy as np
import pytest

from flatfront.deformation import QMINUS, QPLUS
from flatfront.errors import ContactSpanDegenerate, PointSphereEncountered, UmbilicEncountered
from flatfront.frames import GridDomain, build_front, parallel_front
from flatfront.geom import SigVec, dot, is_skew
from flatfront.lift import (
    SphereCongruenceGrid,
    alignment_residual,
    curvature_spheres,
    legendre_lift,
    moutard_residual,
    omega_residual,
    reconstruct_front,
    tau_form,
    tau_pm_form,
)
from flatfront.validation import moutard_control_scale, omega_control


def test_legendre_lift_is_null(front33, exact33):
    assert legendre_lift(front33).nullity_defect() < 1e-5
    assert legendre_lift(exact33).nullity_defect() < 1e-13


def test_curvature_sphere_identities(sc33, exact_sc33):
    for a, b in ((exact_sc33.s1, exact_sc33.s1), (exact_sc33.s2, exact_sc33.s2),
                 (exact_sc33.s1, exact_sc33.s2)):
        assert np.max(np.abs(dot(a, b))) < 1e-12
    assert np.max(np.abs(dot(sc33.s_plus, QPLUS))) < 1e-14
    assert np.max(np.abs(dot(sc33.s_minus, QMINUS))) < 1e-14
    assert sc33.parallelism_residual < 1e-2


def test_parallelism_residual_is_second_order(phi):
    res = [curvature_spheres(build_front(phi, GridDomain(nu=n, nv=n)), phi).parallelism_residual
           for n in (33, 65)]
    assert 1.7 < np.log2(res[0] / res[1]) < 2.3


def test_round_trip(front33, sc33):
    rec = reconstruct_front(sc33, SigVec(QPLUS), SigVec(QMINUS))
    assert not rec.point_sphere.any()
    assert np.max(np.abs(rec.front.f - front33.f)) < 1e-10
    assert np.max(np.abs(rec.front.t - front33.t)) < 1e-10


def test_reconstruct_rescaled_spheres_gives_parallel_front(front33, sc33):
    for dist in (0.3, -0.7):
        rec = reconstruct_front(sc33, SigVec(np.exp(dist) * QPLUS),
                                SigVec(np.exp(-dist) * QMINUS)).front
        pf = parallel_front(front33, dist)
        assert np.max(np.abs(rec.f - pf.f)) < 1e-9
        assert np.max(np.abs(rec.t - pf.t)) < 1e-9


def test_reconstruct_rejects_degenerate_spheres(sc33):
    with pytest.raises(ContactSpanDegenerate):
        reconstruct_front(sc33, SigVec(QPLUS), SigVec(2 * QPLUS))


def test_point_sphere_flagged(sc33):
    sp = sc33.s_plus.copy()
    sp[3, 4] = [0, 0, 1, 1, 0, 0]      # null and orthogonal to p: a point sphere
    sc = SphereCongruenceGrid(sc33.s1, sc33.s2, sp, sc33.s_minus, sc33.domain)
    rec = reconstruct_front(sc, SigVec(QPLUS), SigVec(QMINUS))
    assert rec.point_sphere[3, 4] and rec.point_sphere.sum() == 1
    assert np.isnan(rec.front.f[3, 4]).all()
    with pytest.raises(PointSphereEncountered):
        reconstruct_front(sc, SigVec(QPLUS), SigVec(QMINUS), strict=True)


def test_omega_residual_flat_vs_control(front33):
    om = omega_residual(front33.E, front33.G, front33.kappa1, front33.kappa2, front33.domain)
    ctrl = omega_control(front33.domain)
    interior = np.zeros(om.residual.shape, bool)
    interior[4:-4, 4:-4] = True
    # the control residual is -2v/(k1 - k2)^2 exactly for E = G = 1
    U, V = front33.domain.mesh()
    exact = -2 * V / (3 + U + V ** 2 + V) ** 2
    assert np.allclose(ctrl.residual[interior], exact[interior], atol=5e-3)
    assert ctrl.max(interior) > 0.05


def test_umbilic_is_flagged():
    dom = GridDomain(nu=9, nv=9)
    one = np.ones((9, 9))
    k1 = 2 * one
    k1[4, 4] = 1.0
    om = omega_residual(one, one, k1, one, dom)
    assert om.umbilic[4, 4] and np.isnan(om.residual[4, 4])
    with pytest.raises(UmbilicEncountered):
        omega_residual(one, one, k1, one, dom, strict=True)


def test_moutard_residual_flat_vs_control(phi):
    vals, ctrl = [], []
    for n in (33, 65):
        fr = build_front(phi, GridDomain(nu=n, nv=n))
        sc = curvature_spheres(fr, phi)
        s = (n - 1) // 32
        vals.append(max(m[::s, ::s].max() for m in moutard_residual(sc)))
        g = moutard_control_scale(fr.domain)
        ctrl.append(max(m[::s, ::s].max() for m in moutard_residual(sc.scaled(g, g))))
    assert 1.7 < np.log2(vals[0] / vals[1]) < 2.3
    assert abs(np.log2(ctrl[0] / ctrl[1])) < 0.5


def test_tau_is_skew_and_aligned(front33, sc33):
    tau = tau_form(front33)
    assert is_skew(tau.tau_u, atol=1e-12) and is_skew(tau.tau_v, atol=1e-12)
    tp, tm = tau_pm_form(sc33)
    assert is_skew(tp.tau_u, atol=1e-10) and is_skew(tm.tau_v, atol=1e-10)
    assert max(alignment_residual(front33, sc33)) < 1e-12


def test_fd_alignment_is_second_order(phi):
    res = []
    for n in (33, 65):
        fr = build_front(phi, GridDomain(nu=n, nv=n))
        res.append(max(alignment_residual(fr, curvature_spheres(fr, phi), exact=False)))
    assert 1.7 < np.log2(res[0] / res[1]) < 2.3
