"""Lie sphere geometric picture of a flat front.

The front ``(f, t)`` lifts to the null 2-plane ``span{q + f, p + t}`` in
R^{4,2}.  Along curvature lines the curvature spheres are

    s1 = cosh(phi) (p + t) + sinh(phi) (q + f)
    s2 = sinh(phi) (p + t) + cosh(phi) (q + f)

and ``s+- = s1 +- s2 = e^{+-phi} (p +- q + t +- f)`` are Moutard lifts of the
two isothermic sphere congruences.  Each touches the fixed sphere
``q+- = p +- q``, which is how the front is recovered from them.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ContactSpanDegenerate, PointSphereEncountered, UmbilicEncountered
from .frames import FrontGrid, GridDomain, grad, metric_and_curvatures
from .geom import AmbientSplit, ContactElement, SigVec, dot, embed, wedge_matrix
from .potential import HarmonicPotential, eval_potential

UMBILIC_TOL = 1e-9
POINT_SPHERE_TOL = 1e-12


def _split_arrays(split: AmbientSplit | None):
    split = split or AmbientSplit.standard()
    return split.p.coords, split.q.coords


@dataclass(frozen=True, eq=False)
class ContactGrid:
    """Legendre lift: per-point generators ``q + f`` and ``p + t``."""

    a: np.ndarray
    b: np.ndarray

    def at(self, i: int, j: int) -> ContactElement:
        return ContactElement(SigVec(self.a[i, j]), SigVec(self.b[i, j]))

    def nullity_defect(self) -> float:
        a, b = self.a, self.b
        return float(np.max(np.abs(np.stack([dot(a, a), dot(b, b), dot(a, b)]))))


def legendre_lift(front: FrontGrid, split: AmbientSplit | None = None) -> ContactGrid:
    p, q = _split_arrays(split)
    return ContactGrid(q + embed(front.f), p + embed(front.t))


@dataclass(frozen=True, eq=False)
class SphereCongruenceGrid:
    """Curvature spheres and the two isothermic congruences on a grid.

    ``sp_u`` etc. are exact derivatives of ``s+-`` when the source front
    carried exact derivatives, else ``None``.
    """

    s1: np.ndarray
    s2: np.ndarray
    s_plus: np.ndarray
    s_minus: np.ndarray
    domain: GridDomain
    sp_u: np.ndarray | None = None
    sp_v: np.ndarray | None = None
    sm_u: np.ndarray | None = None
    sm_v: np.ndarray | None = None
    parallelism_residual: float | None = None

    def derivatives(self, exact: bool | None = None):
        """``(sp_u, sp_v, sm_u, sm_v)``, exact when available unless ``exact=False``."""
        if exact is None:
            exact = self.sp_u is not None
        if exact:
            if self.sp_u is None:
                raise ValueError("sphere congruences carry no exact derivatives")
            return self.sp_u, self.sp_v, self.sm_u, self.sm_v
        return (*grad(self.s_plus, self.domain), *grad(self.s_minus, self.domain))

    def scaled(self, plus: np.ndarray, minus: np.ndarray) -> SphereCongruenceGrid:
        """Rescale ``s+`` and ``s-`` pointwise (drops exact derivatives)."""
        return SphereCongruenceGrid(self.s1, self.s2, self.s_plus * plus[..., None],
                                    self.s_minus * minus[..., None], self.domain)


def wedge_defect(a: np.ndarray, b: np.ndarray, floor: float = 0.0) -> np.ndarray:
    """Euclidean size of ``a ^ b`` relative to ``|a| |b|``: zero iff parallel.

    ``floor`` bounds the denominator's ``|b|`` from below, so that a
    vanishing ``b`` counts as parallel instead of producing 0/0.
    """
    na = np.linalg.norm(a, axis=-1)
    nb = np.linalg.norm(b, axis=-1)
    outer = a[..., :, None] * b[..., None, :]
    w = np.linalg.norm(outer - np.swapaxes(outer, -1, -2), axis=(-2, -1)) / np.sqrt(2.0)
    denom = na * np.maximum(nb, floor)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(denom > 0, w / np.where(denom > 0, denom, 1.0), 0.0)


def curvature_spheres(front: FrontGrid, phi: HarmonicPotential,
                      split: AmbientSplit | None = None) -> SphereCongruenceGrid:
    """Curvature spheres of a base front (``lam = 0``) with its own potential."""
    p, q = _split_arrays(split)
    U, V = front.domain.mesh()
    pv = eval_potential(phi, U, V)
    ch = np.cosh(pv.phi)[..., None]
    sh = np.sinh(pv.phi)[..., None]
    lt = p + embed(front.t)
    lf = q + embed(front.f)
    s1 = ch * lt + sh * lf
    s2 = sh * lt + ch * lf
    sp, sm = s1 + s2, s1 - s2

    # s1_u = phi_u s2 and s2_v = phi_v s1 along curvature lines
    s1_u, _ = grad(s1, front.domain)
    _, s2_v = grad(s2, front.domain)
    par = max(float(np.max(wedge_defect(s2, s1_u, 1.0))),
              float(np.max(wedge_defect(s1, s2_v, 1.0))))

    extra = {}
    if front.has_exact_derivatives:
        ep = np.exp(pv.phi)[..., None]
        em = np.exp(-pv.phi)[..., None]
        pu, pvv = pv.phi_u[..., None], pv.phi_v[..., None]
        fu, fv = embed(front.f_u), embed(front.f_v)
        tu, tv = embed(front.t_u), embed(front.t_v)
        extra = dict(sp_u=pu * sp + ep * (tu + fu), sp_v=pvv * sp + ep * (tv + fv),
                     sm_u=-pu * sm + em * (tu - fu), sm_v=-pvv * sm + em * (tv - fv))
    return SphereCongruenceGrid(s1, s2, sp, sm, front.domain, parallelism_residual=par,
                                **extra)


@dataclass(frozen=True, eq=False)
class OmegaResidual:
    residual: np.ndarray
    umbilic: np.ndarray

    def max(self, mask: np.ndarray | None = None) -> float:
        r = np.abs(self.residual)
        ok = ~self.umbilic & np.isfinite(r)
        if mask is not None:
            ok &= mask
        return float(r[ok].max()) if ok.any() else 0.0


def omega_residual(E: np.ndarray, G: np.ndarray, kappa1: np.ndarray, kappa2: np.ndarray,
                   dom: GridDomain, strict: bool = False) -> OmegaResidual:
    """Demoulin's Omega operator evaluated by central differences.

    Computes ``(sqrt(E/G) k1_u/(k1-k2))_v + (sqrt(G/E) k2_v/(k1-k2))_u``.
    Umbilic samples (``|k1 - k2| < 1e-9``) are flagged and reported as NaN,
    or raise with ``strict``.
    """
    diff = kappa1 - kappa2
    umbilic = np.abs(diff) < UMBILIC_TOL
    if strict and umbilic.any():
        raise UmbilicEncountered(f"{int(umbilic.sum())} umbilic samples")
    safe = np.where(umbilic, 1.0, diff)
    rE = np.sqrt(np.abs(E))
    rG = np.sqrt(np.abs(G))
    k1_u, _ = grad(kappa1, dom)
    _, k2_v = grad(kappa2, dom)
    with np.errstate(divide="ignore", invalid="ignore"):
        a = rE / rG * k1_u / safe
        b = rG / rE * k2_v / safe
    _, a_v = grad(a, dom)
    b_u, _ = grad(b, dom)
    res = a_v + b_u
    # a stencil touching an umbilic sample is unusable too
    bad = umbilic.copy()
    bad[1:] |= umbilic[:-1]
    bad[:-1] |= umbilic[1:]
    bad[:, 1:] |= umbilic[:, :-1]
    bad[:, :-1] |= umbilic[:, 1:]
    return OmegaResidual(np.where(bad, np.nan, res), bad)


def mixed_derivative(s: np.ndarray, dom: GridDomain) -> np.ndarray:
    """``s_uv`` by the symmetric four-point stencil (one-sided at the edges)."""
    s_u, _ = grad(s, dom)
    _, s_uv = grad(s_u, dom)
    return s_uv


def moutard_residual(sc: SphereCongruenceGrid) -> tuple[np.ndarray, np.ndarray]:
    """Per-point failure of ``s+- ^ s+-_uv = 0`` for both congruences.

    The size of the wedge is taken relative to ``|s| max(|s_uv|, |s|)``,
    which is relative to ``|s_uv|`` except where the mixed derivative
    itself (nearly) vanishes.
    """
    out = []
    for s in (sc.s_plus, sc.s_minus):
        s_uv = mixed_derivative(s, sc.domain)
        floor = np.linalg.norm(s, axis=-1)[..., None]
        na = np.linalg.norm(s, axis=-1)
        nb = np.maximum(np.linalg.norm(s_uv, axis=-1), floor[..., 0])
        outer = s[..., :, None] * s_uv[..., None, :]
        w = np.linalg.norm(outer - np.swapaxes(outer, -1, -2), axis=(-2, -1)) / np.sqrt(2.0)
        with np.errstate(divide="ignore", invalid="ignore"):
            out.append(np.where(na * nb > 0, w / np.where(na * nb > 0, na * nb, 1.0), 0.0))
    return out[0], out[1]


@dataclass(frozen=True, eq=False)
class ConnectionFormGrid:
    """Sampled connection 1-form: skew 6x6 matrices ``tau_u``, ``tau_v`` per point."""

    tau_u: np.ndarray
    tau_v: np.ndarray
    domain: GridDomain

    def scaled(self, k: float) -> ConnectionFormGrid:
        return ConnectionFormGrid(k * self.tau_u, k * self.tau_v, self.domain)

    def __add__(self, other: ConnectionFormGrid) -> ConnectionFormGrid:
        return ConnectionFormGrid(self.tau_u + other.tau_u, self.tau_v + other.tau_v,
                                  self.domain)

    def __sub__(self, other: ConnectionFormGrid) -> ConnectionFormGrid:
        return ConnectionFormGrid(self.tau_u - other.tau_u, self.tau_v - other.tau_v,
                                  self.domain)

    def max_norm(self) -> float:
        return float(max(np.max(np.linalg.norm(self.tau_u, axis=(-2, -1))),
                         np.max(np.linalg.norm(self.tau_v, axis=(-2, -1)))))


def tau_form(front: FrontGrid, exact: bool | None = None,
             split: AmbientSplit | None = None) -> ConnectionFormGrid:
    """``tau = -(p + t) ^ dt + (q + f) ^ df``.

    Uses the front's exact derivative fields when present (``exact=None``),
    central differences otherwise or when ``exact=False``.
    """
    p, q = _split_arrays(split)
    f_u, f_v, t_u, t_v = (embed(x) for x in front.derivatives(exact))
    lt = p + embed(front.t)
    lf = q + embed(front.f)
    tau_u = -wedge_matrix(lt, t_u) + wedge_matrix(lf, f_u)
    tau_v = -wedge_matrix(lt, t_v) + wedge_matrix(lf, f_v)
    return ConnectionFormGrid(tau_u, tau_v, front.domain)


def tau_pm_form(sc: SphereCongruenceGrid, exact: bool | None = None
                ) -> tuple[ConnectionFormGrid, ConnectionFormGrid]:
    """``tau+- = s+- ^ *ds+-`` with ``*du = du`` and ``*dv = -dv``."""
    sp_u, sp_v, sm_u, sm_v = sc.derivatives(exact)
    tp = ConnectionFormGrid(wedge_matrix(sc.s_plus, sp_u), -wedge_matrix(sc.s_plus, sp_v),
                            sc.domain)
    tm = ConnectionFormGrid(wedge_matrix(sc.s_minus, sm_u), -wedge_matrix(sc.s_minus, sm_v),
                            sc.domain)
    return tp, tm


def alignment_term(sc: SphereCongruenceGrid, exact: bool | None = None) -> ConnectionFormGrid:
    """``1/2 d(s+ ^ s-)``."""
    sp_u, sp_v, sm_u, sm_v = sc.derivatives(exact)
    sp, sm = sc.s_plus, sc.s_minus
    du = wedge_matrix(sp_u, sm) + wedge_matrix(sp, sm_u)
    dv = wedge_matrix(sp_v, sm) + wedge_matrix(sp, sm_v)
    return ConnectionFormGrid(0.5 * du, 0.5 * dv, sc.domain)


def alignment_residual(front: FrontGrid, sc: SphereCongruenceGrid,
                       exact: bool | None = None) -> tuple[float, float]:
    """Max Frobenius size of ``tau+ + 1/2 d(s+^s-) - tau`` and ``tau- + 1/2 d(s-^s+) - tau``."""
    tau = tau_form(front, exact)
    tp, tm = tau_pm_form(sc, exact)
    half = alignment_term(sc, exact)
    return (tp + half - tau).max_norm(), (tm - half - tau).max_norm()


@dataclass(frozen=True, eq=False)
class Reconstruction:
    front: FrontGrid
    point_sphere: np.ndarray


def reconstruct_front(sc: SphereCongruenceGrid, qplus: SigVec, qminus: SigVec,
                      strict: bool = False) -> Reconstruction:
    """Recover ``(f, t)`` from the isothermic congruences and the fixed spheres.

    The fixed spheres are rescaled symmetrically so ``<q+, q-> = -2``; they
    must span the ``(p, q)`` block so the result has R^{3,1} coordinates.
    Points where ``s+`` or ``s-`` is a point sphere are flagged (or raise
    with ``strict``) and left as NaN.
    """
    pairing = float(dot(qplus.coords, qminus.coords))
    if not pairing < -1e-14:
        raise ContactSpanDegenerate(f"<q+, q-> = {pairing:.3g}: fixed spheres span a contact element")
    if np.any(np.abs(qplus.coords[2:]) > 1e-14) or np.any(np.abs(qminus.coords[2:]) > 1e-14):
        raise ValueError("fixed spheres must lie in the (p, q) block")
    k = np.sqrt(-2.0 / pairing)
    qp, qm = k * qplus.coords, k * qminus.coords
    p = (qp + qm) / 2
    sp, sm = sc.s_plus, sc.s_minus
    bad = (np.abs(dot(sp, p)) < POINT_SPHERE_TOL * np.linalg.norm(sp, axis=-1)) | (
        np.abs(dot(sm, p)) < POINT_SPHERE_TOL * np.linalg.norm(sm, axis=-1))
    if strict and bad.any():
        raise PointSphereEncountered(f"{int(bad.sum())} samples are point spheres")
    with np.errstate(divide="ignore", invalid="ignore"):
        a = qp / 2 + sp / dot(sp, qm)[..., None]
        b = qm / 2 + sm / dot(sm, qp)[..., None]
    f = np.where(bad[..., None], np.nan, -a + b)[..., 2:]
    t = np.where(bad[..., None], np.nan, -a - b)[..., 2:]
    front = metric_and_curvatures(FrontGrid(f, t, sc.domain))
    return Reconstruction(front, bad)
