"""Lie-geometric deformation of a flat front.

The Calapso transformation ``T(lam)`` solves ``dT = T lam tau`` with
``T = 1`` at the base point.  The two vectors

    p+-(lam) = (1 - lam)(p +- q) - lam (t +- f)

are parallel for ``d + lam tau``, so ``T p+-`` is constant and plays the
role of the fixed spheres of the deformed front.  A constant rotation moves
those onto multiples of ``q+-``, after which the deformed front is read off
from ``T h+-(lam)``, ``h+-(lam) = -lam (p +- q) + (1 - lam)(t +- f)``.

The same fronts come out of integrating the frame system at ``lam``
directly (:func:`flatfront.frames.integrate_frame`); :func:`deform_both`
runs the two routes side by side.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .errors import TransportDiverged
from .frames import (
    FrontGrid,
    GridDomain,
    branch_constants,
    build_front,
    grad,
    initial_frame,
    metric_and_curvatures,
    rk4_sweep,
)
from .geom import ETA42, dot, embed, wedge_matrix
from .lift import ConnectionFormGrid, SphereCongruenceGrid, tau_form, tau_pm_form
from .potential import HarmonicPotential

logger = logging.getLogger(__name__)

DIVERGENCE_CEILING = 1e-3
DEFAULT_SWEEP = (-0.5, -0.25, 0.1, 0.25, 0.4, 0.6, 0.75, 1.0)

QPLUS = np.array([1.0, 1.0, 0, 0, 0, 0])
QMINUS = np.array([1.0, -1.0, 0, 0, 0, 0])


# ---------------------------------------------------------------- interpolation

INTERP_POINTS = 6


def _lagrange_weights(n: int, x: float, npts: int) -> tuple[int, np.ndarray]:
    m = min(n, npts)
    start = min(max(int(np.floor(x)) - (m // 2 - 1), 0), n - m)
    nodes = np.arange(start, start + m, dtype=float)
    w = np.ones(m)
    for a in range(m):
        for b in range(m):
            if a != b:
                w[a] *= (x - nodes[b]) / (nodes[a] - nodes[b])
    return start, w


def _line_interp(values: np.ndarray, x: float, npts: int = INTERP_POINTS) -> np.ndarray:
    """Lagrange interpolation of samples along the first axis at fractional index ``x``.

    Uses the ``npts`` nodes centred on ``x`` (shifted inwards near the ends).
    """
    n = values.shape[0]
    k = int(round(x))
    if abs(x - k) < 1e-12:
        return values[min(max(k, 0), n - 1)]
    start, w = _lagrange_weights(n, x, npts)
    return np.tensordot(w, values[start:start + len(w)], axes=(0, 0))


def _midpoints(values: np.ndarray, axis: int, npts: int = INTERP_POINTS) -> np.ndarray:
    """Interpolated values at every half-index along ``axis``, same rule as :func:`_line_interp`."""
    a = np.moveaxis(values, axis, 0)
    mids = np.stack([_line_interp(a, i + 0.5, npts) for i in range(a.shape[0] - 1)])
    return np.moveaxis(mids, 0, axis)


# ---------------------------------------------------------------- data

@dataclass(frozen=True, eq=False)
class ConservedQuantity:
    pplus: np.ndarray
    pminus: np.ndarray
    lam: float

    def pairing(self) -> np.ndarray:
        return dot(self.pplus, self.pminus)


def conserved_quantity(front: FrontGrid, lam: float) -> ConservedQuantity:
    f, t = embed(front.f), embed(front.t)
    lam = float(lam)
    return ConservedQuantity((1 - lam) * QPLUS - lam * (t + f),
                             (1 - lam) * QMINUS - lam * (t - f), lam)


def h_vectors(front: FrontGrid, lam: float) -> tuple[np.ndarray, np.ndarray]:
    """Unnormalized ``h+-(lam)``; ``<h+, h-> = 2 (1 - 2 lam)``."""
    f, t = embed(front.f), embed(front.t)
    lam = float(lam)
    return -lam * QPLUS + (1 - lam) * (t + f), -lam * QMINUS + (1 - lam) * (t - f)


@dataclass(frozen=True, eq=False)
class DeformationState:
    lam: float
    T: np.ndarray
    domain: GridDomain
    base_rotation: np.ndarray | None = None

    @property
    def mu2(self) -> float:
        return 1.0 - 2.0 * self.lam

    @property
    def branch(self) -> str:
        return "subcritical" if self.lam < 0.5 else "supercritical"

    def orthogonality_drift(self) -> float:
        """Max Frobenius norm of ``T^t eta T - eta`` over the grid."""
        g = np.swapaxes(self.T, -1, -2) @ ETA42 @ self.T - ETA42
        return float(np.max(np.linalg.norm(g, axis=(-2, -1))))

    def apply(self, vecs: np.ndarray) -> np.ndarray:
        return np.einsum("...ab,...b->...a", self.T, vecs)


def calapso_transport(tau: ConnectionFormGrid, lam: float, dom: GridDomain | None = None,
                      substeps: int = 1, order: str = "uv",
                      ceiling: float = DIVERGENCE_CEILING) -> DeformationState:
    """Integrate ``dT = T lam tau`` from the identity at the base point.

    The connection is only known at grid nodes; stage values between nodes
    come from 6-point Lagrange interpolation along the integration line
    (error ``O(h^6)``), so the Runge-Kutta error dominates.
    """
    dom = dom or tau.domain
    lam = float(lam)
    i0, j0 = dom.base_index
    eye = np.eye(6)
    tu = lam * tau.tau_u
    tv = lam * tau.tau_v

    if order == "uv":
        row = rk4_sweep(eye, lambda x, T: T @ _line_interp(tu[:, j0], x),
                        dom.nu, i0, dom.hu, substeps)
        tv_cols = np.swapaxes(tv, 0, 1)
        grid = rk4_sweep(row, lambda x, T: T @ _line_interp(tv_cols, x),
                         dom.nv, j0, dom.hv, substeps)
        T = np.swapaxes(grid, 0, 1)
    elif order == "vu":
        col = rk4_sweep(eye, lambda x, T: T @ _line_interp(tv[i0], x),
                        dom.nv, j0, dom.hv, substeps)
        T = rk4_sweep(col, lambda x, T: T @ _line_interp(tu, x), dom.nu, i0, dom.hu, substeps)
    else:
        raise ValueError("order must be 'uv' or 'vu'")
    state = DeformationState(lam, T, dom)
    drift = state.orthogonality_drift()
    if not np.isfinite(drift) or drift > ceiling:
        raise TransportDiverged(f"lambda={lam:g}: orthogonality drift {drift:.3g} exceeds {ceiling:g}")
    return state


def _edge_transports(tau: ConnectionFormGrid, lam: float):
    """One RK4 step of ``dU = U lam tau`` across every grid edge, starting from 1."""
    dom = tau.domain

    def step(M0, Mh, M1, h):
        eye = np.broadcast_to(np.eye(6), M0.shape)
        k1 = M0
        k2 = (eye + h / 2 * k1) @ Mh
        k3 = (eye + h / 2 * k2) @ Mh
        k4 = (eye + h * k3) @ M1
        return eye + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)

    tu = lam * tau.tau_u
    tv = lam * tau.tau_v
    Uu = step(tu[:-1], _midpoints(tu, 0), tu[1:], dom.hu)          # (nu-1, nv)
    Uv = step(tv[:, :-1], _midpoints(tv, 1), tv[:, 1:], dom.hv)    # (nu, nv-1)
    return Uu, Uv


def holonomy_residual(tau: ConnectionFormGrid, lam: float) -> np.ndarray:
    """Per-plaquette ``|Hol - 1| / area`` of the discrete transport.

    Zero for a flat connection up to the integrator error, so it decays
    with refinement; a curved connection leaves it at the curvature size.
    """
    dom = tau.domain
    Uu, Uv = _edge_transports(tau, float(lam))
    path1 = Uu[:, :-1] @ Uv[1:, :]      # along u, then v
    path2 = Uv[:-1, :] @ Uu[:, 1:]      # along v, then u
    hol = path1 @ np.linalg.inv(path2)
    dev = np.linalg.norm(hol - np.eye(6), axis=(-2, -1))
    return dev / (dom.hu * dom.hv)


def conservation_drift(state: DeformationState, cq: ConservedQuantity) -> float:
    """Max relative change of ``T p+-`` away from its base-point value."""
    i0, j0 = state.domain.base_index
    worst = 0.0
    for p in (cq.pplus, cq.pminus):
        Tp = state.apply(p)
        ref = Tp[i0, j0]
        scale = max(np.linalg.norm(ref), 1e-300)
        worst = max(worst, float(np.max(np.linalg.norm(Tp - ref, axis=-1)) / scale))
    return worst


# ---------------------------------------------------------------- gauge relation

def _principal_angle(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Largest principal angle between column spans, batched, accurate for small angles."""
    qa, _ = np.linalg.qr(A)
    qb, _ = np.linalg.qr(B)
    resid = qb - qa @ (np.swapaxes(qa, -1, -2) @ qb)
    s = np.linalg.norm(resid, ord=2, axis=(-2, -1))
    return np.arcsin(np.clip(s, 0.0, 1.0))


@dataclass(frozen=True, eq=False)
class GaugeReport:
    residual_plus: float
    residual_minus: float
    angle_plus: float
    angle_minus: float

    @property
    def residual(self) -> float:
        return max(self.residual_plus, self.residual_minus)

    @property
    def angle(self) -> float:
        return max(self.angle_plus, self.angle_minus)


def gauge_relation_residual(state: DeformationState, sc: SphereCongruenceGrid,
                            lam: float | None = None, substeps: int = 1,
                            exact: bool | None = None) -> GaugeReport:
    """Check ``T+-(1 + lam/2 s+- ^ s-+) = C+- T`` and ``T+- f = C+- T f``.

    ``T+-`` start at the identity like ``T``, so the relation holds up to
    the constant left factor ``C+- = 1 + lam/2 (s+- ^ s-+)`` at the base
    point, which is divided out before measuring.
    """
    lam = state.lam if lam is None else float(lam)
    dom = state.domain
    i0, j0 = dom.base_index
    tp, tm = tau_pm_form(sc, exact)
    out = []
    eye = np.eye(6)
    T = state.T
    Tnorm = np.linalg.norm(T, axis=(-2, -1))
    for tau_pm, s, s_other in ((tp, sc.s_plus, sc.s_minus), (tm, sc.s_minus, sc.s_plus)):
        Tpm = calapso_transport(tau_pm, lam, dom, substeps=substeps).T
        gauge = eye + lam / 2 * wedge_matrix(s, s_other)
        C = gauge[i0, j0]
        lhs = Tpm @ gauge
        rhs = C @ T
        res = float(np.max(np.linalg.norm(lhs - rhs, axis=(-2, -1)) / Tnorm))
        plane = np.stack([s, s_other], axis=-1)
        angle = float(np.max(_principal_angle(Tpm @ plane, rhs @ plane)))
        out += [res, angle]
    return GaugeReport(out[0], out[2], out[1], out[3])


# ---------------------------------------------------------------- deformed fronts

def _base_tangent_frame(front: FrontGrid) -> tuple[np.ndarray, np.ndarray]:
    """Unit principal directions at the base point (from the frame if stored)."""
    i0, j0 = front.domain.base_index
    if front.e1 is not None:
        return front.e1[i0, j0], front.e2[i0, j0]
    f_u, _ = grad(front.f, front.domain)
    f, t = front.f[i0, j0], front.t[i0, j0]
    e1 = f_u[i0, j0] / np.sqrt(dot(f_u[i0, j0], f_u[i0, j0]))
    eta = np.diag([-1.0, 1.0, 1.0, 1.0])
    _, _, vt = np.linalg.svd(np.stack([f, t, e1]) @ eta)
    e2 = vt[-1] / np.sqrt(abs(dot(vt[-1], vt[-1])))
    if np.linalg.det(np.stack([f, t, e1, e2], axis=1)) < 0:
        e2 = -e2
    return e1, e2


def base_rotation(front: FrontGrid, lam: float) -> np.ndarray:
    """Constant O(4,2) element moving ``T p+-`` onto multiples of ``q+-``.

    It also sends the base frame ``(e1, e2, hp, hm)`` of the deformed front
    to the canonical initial frame, which fixes the stabilizer and lines the
    result up with the directly integrated front.
    """
    mu, nu_, sigma = branch_constants(lam)
    i0, j0 = front.domain.base_index
    cq = conserved_quantity(front, lam)
    hp, hm = h_vectors(front, lam)
    e1, e2 = _base_tangent_frame(front)
    src = np.column_stack([cq.pplus[i0, j0] / nu_, cq.pminus[i0, j0] / (sigma * nu_),
                           embed(e1), embed(e2), hp[i0, j0] / nu_, sigma * hm[i0, j0] / nu_])
    init = initial_frame(lam)
    dst = np.column_stack([QPLUS, QMINUS, embed(init.e1), embed(init.e2),
                           embed(init.hp), embed(init.hm)])
    return dst @ np.linalg.inv(src)


@dataclass(frozen=True, eq=False)
class DeformationResult:
    lam: float
    reduced: FrontGrid
    ambient: FrontGrid
    state: DeformationState
    leakage: float

    @property
    def agreement(self) -> float:
        """Max pointwise difference of ``f`` and ``t`` between the two routes."""
        return float(max(np.max(np.abs(self.reduced.f - self.ambient.f)),
                         np.max(np.abs(self.reduced.t - self.ambient.t))))


def ambient_deformation(front: FrontGrid, lam: float, substeps: int = 1,
                        tau: ConnectionFormGrid | None = None
                        ) -> tuple[FrontGrid, DeformationState, float]:
    """Deformed front from the Calapso transport.

    Returns the front, the transport state (with its base rotation) and the
    largest component left outside R^{3,1}.
    """
    _, nu_, sigma = branch_constants(lam)
    tau = tau if tau is not None else tau_form(front)
    state = calapso_transport(tau, lam, front.domain, substeps=substeps)
    R = base_rotation(front, lam)
    state = DeformationState(state.lam, state.T, state.domain, R)
    M = R @ state.T
    hp, hm = h_vectors(front, lam)

    def move(x):
        return np.einsum("...ab,...b->...a", M, x)

    hp_hat = move(hp) / nu_
    hm_hat = sigma * move(hm) / nu_
    f6 = (hp_hat - hm_hat) / 2
    t6 = (hp_hat + hm_hat) / 2
    leakage = float(max(np.max(np.abs(f6[..., :2])), np.max(np.abs(t6[..., :2]))))
    extra = {}
    if front.e1 is not None:
        extra = dict(e1=move(embed(front.e1))[..., 2:], e2=move(embed(front.e2))[..., 2:])
    out = FrontGrid(f6[..., 2:], t6[..., 2:], front.domain, float(lam), **extra)
    return metric_and_curvatures(out), state, leakage


def deform_both(front: FrontGrid, phi: HarmonicPotential, lam: float,
                dom: GridDomain | None = None, substeps: int = 1) -> DeformationResult:
    """Run the reduced (frame at ``lam``) and ambient (Calapso) routes."""
    dom = dom or front.domain
    branch_constants(lam)
    reduced = build_front(phi, dom, lam, substeps=substeps)
    ambient, state, leakage = ambient_deformation(front, lam, substeps=substeps)
    logger.debug("lambda=%g leakage=%.3g", lam, leakage)
    return DeformationResult(float(lam), reduced, ambient, state, leakage)


def deform_front(front: FrontGrid, phi: HarmonicPotential, lam: float,
                 dom: GridDomain | None = None, pipeline: str = "ambient",
                 substeps: int = 1) -> FrontGrid:
    """The deformed flat front at ``lam`` (``lam = 1/2`` is rejected)."""
    branch_constants(lam)
    if pipeline == "ambient":
        return ambient_deformation(front, lam, substeps=substeps)[0]
    if pipeline == "reduced":
        return build_front(phi, dom or front.domain, lam, substeps=substeps)
    raise ValueError("pipeline must be 'ambient' or 'reduced'")


def curved_flat_parameter(lam: float) -> complex:
    """Parameter ``sqrt(1 - 2 lam)`` of the associated family of the Gauss map pair."""
    mu = 1.0 - 2.0 * float(lam)
    return complex(np.sqrt(mu)) if mu >= 0 else complex(0.0, np.sqrt(-mu))
