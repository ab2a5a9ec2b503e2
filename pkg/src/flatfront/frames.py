"""Flat fronts in hyperbolic space from a curvature-line potential.

The moving frame ``(e1, e2, hp, hm)`` lives in R^{3,1}: ``e1, e2`` are unit
principal directions and ``hp, hm`` are null with ``<hp, hm> = 2``.  The
front and its unit normal are ``f = (hp - hm)/2`` and ``t = (hp + hm)/2``.

For deformation parameter ``lam`` put ``mu = 1 - 2 lam``, ``nu = sqrt|mu|``
and ``sigma = sign(mu)``.  The frame obeys the real linear system

    d hp = sigma nu e^{-phi} (e1 du + e2 dv)
    d hm = nu e^{phi} (-e1 du + e2 dv)
    d e1 = (phi_v du - phi_u dv) e2 + nu/2 (e^{phi} hp - sigma e^{-phi} hm) du
    d e2 = (phi_u dv - phi_v du) e1 - nu/2 (e^{phi} hp + sigma e^{-phi} hm) dv

which is integrable exactly when ``phi_uu + phi_vv = 0``.  At ``lam = 0``
this is the frame of the flat front with metric
``cosh^2(phi) du^2 + sinh^2(phi) dv^2``.  For ``lam > 1/2`` the sign
``sigma`` replaces the imaginary square root, so no complex arithmetic is
needed.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from .errors import DegenerateParameter, PotentialOverflow
from .geom import dot
from .potential import HarmonicPotential, eval_potential

SINGULAR_EPS = 1e-3
OVERFLOW_LIMIT = 700.0


@dataclass(frozen=True)
class GridDomain:
    u_min: float = -1.0
    u_max: float = 1.0
    v_min: float = -1.0
    v_max: float = 1.0
    nu: int = 65
    nv: int = 65
    base_index: tuple[int, int] | None = None

    def __post_init__(self):
        if int(self.nu) < 1 or int(self.nv) < 1:
            raise ValueError("grid needs at least one node per direction")
        if self.u_max < self.u_min or self.v_max < self.v_min:
            raise ValueError("domain bounds are reversed")
        if self.nu == 1 and self.u_max != self.u_min or self.nv == 1 and self.v_max != self.v_min:
            raise ValueError("a single node needs a zero-width interval")
        if self.base_index is None:
            object.__setattr__(self, "base_index", ((self.nu - 1) // 2, (self.nv - 1) // 2))
        i0, j0 = self.base_index
        if not (0 <= i0 < self.nu and 0 <= j0 < self.nv):
            raise ValueError(f"base index {self.base_index} outside the grid")
        object.__setattr__(self, "base_index", (int(i0), int(j0)))

    @property
    def hu(self) -> float:
        return (self.u_max - self.u_min) / (self.nu - 1) if self.nu > 1 else 0.0

    @property
    def hv(self) -> float:
        return (self.v_max - self.v_min) / (self.nv - 1) if self.nv > 1 else 0.0

    @property
    def u(self) -> np.ndarray:
        return self.u_min + self.hu * np.arange(self.nu)

    @property
    def v(self) -> np.ndarray:
        return self.v_min + self.hv * np.arange(self.nv)

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.u, self.v, indexing="ij")

    @property
    def base_uv(self) -> tuple[float, float]:
        i0, j0 = self.base_index
        return float(self.u[i0]), float(self.v[j0])

    def refined(self, level: int) -> GridDomain:
        """Grid with ``2**level`` times as many intervals and the same base point.

        Nodes of the original grid are nodes of the refined one; the base
        index is rescaled so the base point does not move.
        """
        k = 2 ** level
        i0, j0 = self.base_index
        return GridDomain(self.u_min, self.u_max, self.v_min, self.v_max,
                          (self.nu - 1) * k + 1, (self.nv - 1) * k + 1, (i0 * k, j0 * k))

    def to_dict(self) -> dict:
        return {"u_min": self.u_min, "u_max": self.u_max, "v_min": self.v_min,
                "v_max": self.v_max, "nu": self.nu, "nv": self.nv,
                "base_index": list(self.base_index)}


def branch_constants(lam: float) -> tuple[float, float, float]:
    """Return ``(mu, nu, sigma)`` for a deformation parameter."""
    mu = 1.0 - 2.0 * float(lam)
    if mu == 0.0:
        raise DegenerateParameter("lambda = 1/2: the conserved quantities have zero pairing")
    return mu, float(np.sqrt(abs(mu))), float(np.sign(mu))


def rk4_sweep(y0: np.ndarray, deriv: Callable[[float, np.ndarray], np.ndarray],
              n: int, base: int, h: float, substeps: int = 1) -> np.ndarray:
    """Classical fourth-order Runge-Kutta along a line of ``n`` nodes.

    ``deriv(x, y)`` is the derivative with respect to the physical coordinate,
    where ``x`` is a (fractional) node index.  Integration starts at node
    ``base`` and runs outwards in both directions.
    """
    out = np.empty((n,) + y0.shape)
    out[base] = y0
    for direction, stop in ((1, n), (-1, -1)):
        y = y0
        x = float(base)
        for i in range(base + direction, stop, direction):
            for _ in range(substeps):
                dx = direction / substeps
                hh = h * dx
                k1 = deriv(x, y)
                k2 = deriv(x + dx / 2, y + hh / 2 * k1)
                k3 = deriv(x + dx / 2, y + hh / 2 * k2)
                k4 = deriv(x + dx, y + hh * k3)
                y = y + hh / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
                x += dx
            out[i] = y
    return out


def _coefficients(pv, nu_: float, sigma: float, direction: str) -> np.ndarray:
    """Coefficient matrix ``A`` with ``dX = A X`` for stacked rows (e1, e2, hp, hm)."""
    ep = np.exp(pv.phi)
    em = np.exp(-pv.phi)
    A = np.zeros(np.shape(pv.phi) + (4, 4))
    if direction == "u":
        A[..., 0, 1] = pv.phi_v
        A[..., 0, 2] = 0.5 * nu_ * ep
        A[..., 0, 3] = -0.5 * nu_ * sigma * em
        A[..., 1, 0] = -pv.phi_v
        A[..., 2, 0] = sigma * nu_ * em
        A[..., 3, 0] = -nu_ * ep
    else:
        A[..., 0, 1] = -pv.phi_u
        A[..., 1, 0] = pv.phi_u
        A[..., 1, 2] = -0.5 * nu_ * ep
        A[..., 1, 3] = -0.5 * nu_ * sigma * em
        A[..., 2, 1] = sigma * nu_ * em
        A[..., 3, 1] = nu_ * ep
    return A


@dataclass(frozen=True, eq=False)
class InitialFrame:
    f: np.ndarray
    t: np.ndarray
    e1: np.ndarray
    e2: np.ndarray
    hp: np.ndarray
    hm: np.ndarray

    def stacked(self) -> np.ndarray:
        return np.stack([self.e1, self.e2, self.hp, self.hm])


def initial_frame(lam: float = 0.0) -> InitialFrame:
    """Canonical frame at the base point, in ``(y0, y1, y2, y3)`` coordinates."""
    branch_constants(lam)
    f0 = np.array([1.0, 0.0, 0.0, 0.0])
    t0 = np.array([0.0, 0.0, 0.0, 1.0])
    return InitialFrame(f0, t0, np.array([0.0, 1.0, 0.0, 0.0]),
                        np.array([0.0, 0.0, 1.0, 0.0]), t0 + f0, t0 - f0)


@dataclass(frozen=True, eq=False)
class FrameGrid:
    lam: float
    e1: np.ndarray
    e2: np.ndarray
    hp: np.ndarray
    hm: np.ndarray
    phi: HarmonicPotential
    domain: GridDomain
    order: str = "uv"
    substeps: int = 1

    @property
    def stacked(self) -> np.ndarray:
        return np.stack([self.e1, self.e2, self.hp, self.hm], axis=-2)

    def invariant_violation(self) -> np.ndarray:
        """Per-point max deviation from the orthonormality relations."""
        e1, e2, hp, hm = self.e1, self.e2, self.hp, self.hm
        devs = [dot(e1, e1) - 1, dot(e2, e2) - 1, dot(e1, e2), dot(hp, hp), dot(hm, hm),
                dot(hp, hm) - 2, dot(e1, hp), dot(e1, hm), dot(e2, hp), dot(e2, hm)]
        return np.max(np.abs(np.stack(devs)), axis=0)


def _check_overflow(phi: HarmonicPotential, dom: GridDomain) -> None:
    U, V = dom.mesh()
    with np.errstate(over="ignore", invalid="ignore"):
        m = phi.max_abs(U, V)
    if not np.isfinite(m) or m > OVERFLOW_LIMIT:
        raise PotentialOverflow(f"|phi| reaches {m:.3g}; exp(|phi|) overflows")


def integrate_frame(phi: HarmonicPotential, dom: GridDomain, lam: float = 0.0,
                    order: str = "uv", substeps: int = 1, project: bool = False,
                    check: bool = True) -> FrameGrid:
    """Integrate the frame system over the grid.

    ``order="uv"`` sweeps the base row in ``u`` and then every column in
    ``v``; ``"vu"`` does the transpose.  ``project`` re-orthonormalizes the
    frame after integration (off by default so drift stays visible).
    ``check=False`` skips the admissibility test, which is only useful for
    demonstrating what goes wrong with a non-harmonic potential.
    """
    _, nu_, sigma = branch_constants(lam)
    if check:
        phi.check()
    _check_overflow(phi, dom)
    i0, j0 = dom.base_index
    u0, v0 = dom.base_uv
    u_nodes, v_nodes = dom.u, dom.v
    X0 = initial_frame(lam).stacked()

    def A(u, v, direction):
        pv = eval_potential(phi, u, v, check=False)
        return _coefficients(pv, nu_, sigma, direction)

    def u_at(x):
        return dom.u_min + x * dom.hu

    def v_at(x):
        return dom.v_min + x * dom.hv

    if order == "uv":
        row = rk4_sweep(X0, lambda x, X: A(u_at(x), v0, "u") @ X, dom.nu, i0, dom.hu, substeps)
        grid = rk4_sweep(row, lambda x, X: A(u_nodes, v_at(x), "v") @ X,
                         dom.nv, j0, dom.hv, substeps)
        grid = np.swapaxes(grid, 0, 1)
    elif order == "vu":
        col = rk4_sweep(X0, lambda x, X: A(u0, v_at(x), "v") @ X, dom.nv, j0, dom.hv, substeps)
        grid = rk4_sweep(col, lambda x, X: A(u_at(x), v_nodes, "u") @ X,
                         dom.nu, i0, dom.hu, substeps)
    else:
        raise ValueError("order must be 'uv' or 'vu'")
    if project:
        grid = project_frames(grid)
    return FrameGrid(float(lam), grid[..., 0, :], grid[..., 1, :], grid[..., 2, :],
                     grid[..., 3, :], phi, dom, order, substeps)


def project_frames(X: np.ndarray) -> np.ndarray:
    """Snap stacked frames back onto the constraint set by Gram-Schmidt.

    Works on ``(e1, e2, hp, hm)`` through the orthonormal basis
    ``(e1, e2, t, f)`` with ``t = (hp + hm)/2`` and ``f = (hp - hm)/2``.
    """
    e1, e2, hp, hm = (X[..., k, :] for k in range(4))
    f = (hp - hm) / 2
    t = (hp + hm) / 2
    out = []
    for v, sign in ((f, -1.0), (t, 1.0), (e1, 1.0), (e2, 1.0)):
        for w, ws in out:
            v = v - ws * dot(v, w)[..., None] * w
        v = v / np.sqrt(np.abs(dot(v, v)))[..., None]
        out.append((v, sign))
    (f, _), (t, _), (e1, _), (e2, _) = out
    return np.stack([e1, e2, t + f, t - f], axis=-2)


def path_dependence(phi: HarmonicPotential, dom: GridDomain, lam: float = 0.0,
                    substeps: int = 1, check: bool = True) -> dict:
    """Compare the two axis-ordered integration schedules."""
    a = integrate_frame(phi, dom, lam, "uv", substeps, check=check).stacked
    b = integrate_frame(phi, dom, lam, "vu", substeps, check=check).stacked
    diff = np.max(np.abs(a - b), axis=(-2, -1))
    corners = [diff[0, 0], diff[0, -1], diff[-1, 0], diff[-1, -1]]
    return {"max": float(diff.max()), "far_corner": float(max(corners))}


@dataclass(frozen=True, eq=False)
class FrontGrid:
    """Sampled flat front.  Arrays are ``(nu, nv, 4)`` or ``(nu, nv)``.

    ``f_u, f_v, t_u, t_v`` hold exact derivatives when the front came out of
    the frame integrator and are ``None`` otherwise; ``e1, e2`` likewise.
    """

    f: np.ndarray
    t: np.ndarray
    domain: GridDomain
    lam: float = 0.0
    E: np.ndarray | None = None
    G: np.ndarray | None = None
    kappa1: np.ndarray | None = None
    kappa2: np.ndarray | None = None
    singular: np.ndarray | None = None
    f_u: np.ndarray | None = None
    f_v: np.ndarray | None = None
    t_u: np.ndarray | None = None
    t_v: np.ndarray | None = None
    e1: np.ndarray | None = None
    e2: np.ndarray | None = None
    meta: dict = field(default_factory=dict)

    @property
    def has_exact_derivatives(self) -> bool:
        return self.f_u is not None

    def invariant_violation(self) -> np.ndarray:
        f, t = self.f, self.t
        return np.max(np.abs(np.stack([dot(f, f) + 1, dot(t, t) - 1, dot(f, t)])), axis=0)

    def derivatives(self, exact: bool | None = None, fd_order: int = 2):
        """``(f_u, f_v, t_u, t_v)``: exact if available (or requested), else finite differences."""
        if exact is None:
            exact = self.has_exact_derivatives
        if exact:
            if not self.has_exact_derivatives:
                raise ValueError("front carries no exact derivatives")
            return self.f_u, self.f_v, self.t_u, self.t_v
        return (*grad(self.f, self.domain, fd_order), *grad(self.t, self.domain, fd_order))


def grad(a: np.ndarray, dom: GridDomain, fd_order: int = 2) -> tuple[np.ndarray, np.ndarray]:
    """Finite differences in ``u`` and ``v``, central inside and one-sided at the edges."""
    return (_diff(a, dom.hu, 0, fd_order), _diff(a, dom.hv, 1, fd_order))


def _diff(a: np.ndarray, h: float, axis: int, fd_order: int = 2) -> np.ndarray:
    n = a.shape[axis]
    if n < 2 or h == 0.0:
        return np.zeros_like(a)
    if fd_order == 2 or n < 5:
        return np.gradient(a, h, axis=axis, edge_order=2 if n >= 3 else 1)
    if fd_order != 4:
        raise ValueError("fd_order must be 2 or 4")
    a = np.moveaxis(a, axis, 0)
    out = np.empty_like(a)
    out[2:-2] = (a[:-4] - 8 * a[1:-3] + 8 * a[3:-1] - a[4:]) / (12 * h)
    out[0] = (-25 * a[0] + 48 * a[1] - 36 * a[2] + 16 * a[3] - 3 * a[4]) / (12 * h)
    out[1] = (-3 * a[0] - 10 * a[1] + 18 * a[2] - 6 * a[3] + a[4]) / (12 * h)
    out[-1] = (25 * a[-1] - 48 * a[-2] + 36 * a[-3] - 16 * a[-4] + 3 * a[-5]) / (12 * h)
    out[-2] = (3 * a[-1] + 10 * a[-2] - 18 * a[-3] + 6 * a[-4] - a[-5]) / (12 * h)
    return np.moveaxis(out, 0, axis)


def front_from_frame(fg: FrameGrid) -> FrontGrid:
    """Front ``f = (hp - hm)/2`` with normal ``t = (hp + hm)/2``, metric and curvatures filled."""
    _, nu_, sigma = branch_constants(fg.lam)
    U, V = fg.domain.mesh()
    pv = eval_potential(fg.phi, U, V, check=False)
    ep = np.exp(pv.phi)[..., None]
    em = np.exp(-pv.phi)[..., None]
    hp_u, hm_u = sigma * nu_ * em * fg.e1, -nu_ * ep * fg.e1
    hp_v, hm_v = sigma * nu_ * em * fg.e2, nu_ * ep * fg.e2
    front = FrontGrid(
        f=(fg.hp - fg.hm) / 2, t=(fg.hp + fg.hm) / 2, domain=fg.domain, lam=fg.lam,
        f_u=(hp_u - hm_u) / 2, f_v=(hp_v - hm_v) / 2,
        t_u=(hp_u + hm_u) / 2, t_v=(hp_v + hm_v) / 2,
        e1=fg.e1, e2=fg.e2,
    )
    return metric_and_curvatures(front)


def metric_and_curvatures(front: FrontGrid, eps: float = SINGULAR_EPS,
                          fd_order: int = 2) -> FrontGrid:
    """Metric, principal curvatures and singular flags by finite differences.

    Only the sampled ``f`` and ``t`` are used, never the exact derivative
    fields, so the curvatures are an independent measurement of the front.
    """
    E, G, k1, k2 = _shape_data(front, fd_order)
    root = np.sqrt(np.clip(np.minimum(E, G), 0.0, None))
    return replace(front, E=E, G=G, kappa1=k1, kappa2=k2, singular=root < eps)


def _shape_data(front: FrontGrid, fd_order: int):
    f_u, f_v, t_u, t_v = front.derivatives(exact=False, fd_order=fd_order)
    E = dot(f_u, f_u)
    G = dot(f_v, f_v)
    with np.errstate(divide="ignore", invalid="ignore"):
        k1 = np.where(E != 0, -dot(t_u, f_u) / np.where(E != 0, E, 1.0), np.nan)
        k2 = np.where(G != 0, -dot(t_v, f_v) / np.where(G != 0, G, 1.0), np.nan)
    return E, G, k1, k2


def flatness_deviation(front: FrontGrid, min_root_metric: float = 0.1,
                       fd_order: int = 4) -> float:
    """Max of ``|kappa1 kappa2 - 1|`` where both ``sqrt(E)`` and ``sqrt(G)`` exceed the threshold.

    Curvatures come from fourth-order differences by default: the second
    order ones carry an ``O(h^2 / sinh(phi))`` error that swamps the
    flatness defect near the singular set.
    """
    E, G, k1, k2 = _shape_data(front, fd_order)
    mask = np.sqrt(np.clip(np.minimum(E, G), 0.0, None)) > min_root_metric
    if not mask.any():
        return 0.0
    return float(np.max(np.abs(k1 * k2 - 1.0)[mask]))


def parallel_front(front: FrontGrid, dist: float) -> FrontGrid:
    """Front at signed normal distance ``dist``; still flat."""
    c, s = np.cosh(dist), np.sinh(dist)

    def mix(a, b):
        return None if a is None else (c * a + s * b, s * a + c * b)

    f, t = mix(front.f, front.t)
    out = replace(front, f=f, t=t, E=None, G=None, kappa1=None, kappa2=None, singular=None)
    if front.has_exact_derivatives:
        f_u, t_u = mix(front.f_u, front.t_u)
        f_v, t_v = mix(front.f_v, front.t_v)
        out = replace(out, f_u=f_u, t_u=t_u, f_v=f_v, t_v=t_v)
    return metric_and_curvatures(out)


def build_front(phi: HarmonicPotential, dom: GridDomain, lam: float = 0.0,
                substeps: int = 1) -> FrontGrid:
    """Integrate the frame and return the front; shorthand for the two steps."""
    return front_from_frame(integrate_frame(phi, dom, lam, substeps=substeps))
