"""Diagnostics across refinement levels and the acceptance checks built on them.

Level ``k`` is the configured grid refined ``2**k`` times (same nodes, same
base point).  Bounds are read on level 0; orders are least-squares slopes of
``-log2(error)`` against ``k`` and need at least two levels.  Quantities that
come from finite differences are compared on the nodes of the level-0 grid
so every level measures the same points.
"""
from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .deformation import (
    QMINUS,
    QPLUS,
    ambient_deformation,
    calapso_transport,
    conservation_drift,
    conserved_quantity,
    curved_flat_parameter,
    deform_front,
    gauge_relation_residual,
    holonomy_residual,
)
from .errors import DegenerateParameter
from .export import report_text
from .frames import (
    GridDomain,
    flatness_deviation,
    front_from_frame,
    integrate_frame,
    parallel_front,
    path_dependence,
)
from .geom import SigVec, cross_ratio, dot
from .lift import (
    SphereCongruenceGrid,
    alignment_residual,
    curvature_spheres,
    moutard_residual,
    omega_residual,
    reconstruct_front,
    tau_form,
)
from .potential import HarmonicPotential, Term, eval_potential, linear_u, re_poly

logger = logging.getLogger(__name__)

REPORT_FORMAT = "flatfront-report"
REPORT_VERSION = 1

PAIRING_LAMBDAS = (-1.0, 0.0, 0.25, 1.0)
CONSERVATION_LAMBDAS = (-1.0, 0.25)
TRANSPORT_LAMBDA = 0.25
DEFORMATION_LAMBDAS = (0.25, 0.75, 1.0)
CRITERIA_LAMBDAS = (-1.0, 0.25, 0.75, 1.0)
PARALLEL_DISTANCES = (0.3, -0.7)

EXACT_TOL = 1e-12
ROUND_TRIP_TOL = 1e-10
FLATNESS_TOL = 1e-4
FLATNESS_ROOT_METRIC = 0.1
FD_ORDER_BAND = (1.7, 2.3)
CONTROL_ORDER_MAX = 0.5
CONSERVATION_TOL = 1e-6
HIGH_ORDER_MIN = 2.7
ORTHOGONALITY_TOL = 1e-7
GAUGE_TOL = 1e-5
ANGLE_TOL = 1e-6
AGREEMENT_TOL = 1e-6
PROBE_TOL = 1e-9
PROBE_SIZE = 9

# masks for finite-difference residuals: stay off the singular set
OMEGA_MIN_SINH = 0.25
# Omega nests two difference operators; at level 0 the node next to the
# edge would reach the one-sided formula, so two coarse rows are skipped
OMEGA_MARGIN = 2


# ---------------------------------------------------------------- orders

def convergence_order(errors: list[float]) -> dict | None:
    """Order record from errors on successive halvings, or None with fewer than two."""
    if len(errors) < 2:
        return None
    e = np.maximum(np.asarray(errors, dtype=float), 1e-300)
    pairwise = [float(np.log2(e[k] / e[k + 1])) for k in range(len(e) - 1)]
    k = np.arange(len(e), dtype=float)
    slope = -np.polyfit(k, np.log2(e), 1)[0]
    return {"pairwise": pairwise, "fitted": float(slope)}


def _orders(metrics: dict[str, list], names) -> dict:
    return {n: convergence_order(metrics[n]) for n in names}


def _coarse(a: np.ndarray, k: int) -> np.ndarray:
    s = 2 ** k
    return a[::s, ::s]


# ---------------------------------------------------------------- controls

def omega_control(dom: GridDomain):
    """Curvature data that is not an Omega surface: residual ``-2v/(k1-k2)^2``."""
    U, V = dom.mesh()
    one = np.ones_like(U)
    return omega_residual(one, one, 3.0 + U + V ** 2, -V, dom)


def moutard_control_scale(dom: GridDomain) -> np.ndarray:
    """A rescaling that destroys the Moutard property of a lift."""
    U, V = dom.mesh()
    return (1.0 + 0.5 * U ** 2) * np.cos(V)


def harmonicity_study(levels=(17, 33, 65)) -> dict:
    """Path dependence of the frame for a Laplace-harmonic and a non-harmonic potential.

    The first has ``phi_uv != 0`` and ``phi_uu + phi_vv = 0``; the second
    ``phi_uv = 0`` and a nonzero Laplacian.  Only the Laplace condition
    makes the two integration orders agree in the limit.
    """
    cases = {
        "laplace_harmonic": HarmonicPotential((linear_u(1.0), re_poly(3, 0.2))),
        "mixed_harmonic_only": HarmonicPotential((linear_u(1.0),
                                                  Term("monomial", 0.3, powers=(2, 0)))),
    }
    out = {"levels": list(levels), "cases": {}}
    for name, phi in cases.items():
        errs = [path_dependence(phi, GridDomain(nu=n, nv=n), check=False)["max"]
                for n in levels]
        out["cases"][name] = {"potential": phi.to_spec(), "path_dependence": errs,
                              "order": convergence_order(errs)}
    lap = out["cases"]["laplace_harmonic"]["order"]["fitted"]
    mix = out["cases"]["mixed_harmonic_only"]["order"]["fitted"]
    out["convention"] = "laplace" if lap > 2.0 and mix < 0.5 else "undetermined"
    out["condition"] = "phi_uu + phi_vv = 0"
    return out


# ---------------------------------------------------------------- base front

class _Level:
    """Base front and its lift on one refinement level."""

    def __init__(self, phi: HarmonicPotential, dom: GridDomain, k: int, substeps: int):
        self.k = k
        self.dom = dom.refined(k)
        self.frame = integrate_frame(phi, self.dom, 0.0, substeps=substeps)
        self.front = front_from_frame(self.frame)
        self.sc = curvature_spheres(self.front, phi)
        U, V = self.dom.mesh()
        self.pv = eval_potential(phi, U, V)


def _omega_mask(phi_coarse: np.ndarray) -> np.ndarray:
    mask = np.abs(np.sinh(phi_coarse)) > OMEGA_MIN_SINH
    b = OMEGA_MARGIN
    mask[:b], mask[-b:], mask[:, :b], mask[:, -b:] = False, False, False, False
    return mask


def _base_metrics(lv: _Level, phi0: np.ndarray) -> dict:
    k, front, sc = lv.k, lv.front, lv.sc
    m = {}
    m["frame_invariant_drift"] = float(max(lv.frame.invariant_violation().max(),
                                           front.invariant_violation().max()))
    m["kappa1_tanh_error"] = float(np.max(np.abs(
        _coarse(front.kappa1 - np.tanh(lv.pv.phi), k))))
    m["kappa_product_deviation_fd2"] = _masked_product(front)
    om = omega_residual(front.E, front.G, front.kappa1, front.kappa2, lv.dom)
    mask = _omega_mask(phi0)
    m["omega_residual_max"] = _masked_max(_coarse(om.residual, k), mask)
    mp, mm = moutard_residual(sc)
    m["moutard_residual_max"] = float(max(_coarse(mp, k).max(), _coarse(mm, k).max()))
    m["omega_control"] = _masked_max(_coarse(omega_control(lv.dom).residual, k), mask)
    g = moutard_control_scale(lv.dom)
    cp, cm = moutard_residual(sc.scaled(g, g))
    m["moutard_control"] = float(max(_coarse(cp, k).max(), _coarse(cm, k).max()))
    fd_plus, fd_minus = alignment_residual(front, sc, exact=False)
    m["alignment_residual_fd"] = float(max(fd_plus, fd_minus))
    m["parallelism_residual"] = float(sc.parallelism_residual)
    return m


def _masked_max(a: np.ndarray, mask: np.ndarray) -> float:
    r = np.abs(a)[mask & np.isfinite(a)]
    return float(r.max()) if r.size else 0.0


def _masked_product(front) -> float:
    root = np.sqrt(np.clip(np.minimum(front.E, front.G), 0.0, None))
    mask = root > FLATNESS_ROOT_METRIC
    return float(np.max(np.abs(front.kappa1 * front.kappa2 - 1.0)[mask])) if mask.any() else 0.0


def _identities(phi: HarmonicPotential, dom: GridDomain, substeps: int) -> dict:
    """Exact algebraic identities on the configured grid.

    The frame is re-orthonormalized first: the identities are algebraic
    consequences of the front relations, and the integrator's own drift is
    reported separately.
    """
    front = front_from_frame(integrate_frame(phi, dom, 0.0, substeps=substeps, project=True))
    sc = curvature_spheres(front, phi)
    s1, s2, sp, sm = sc.s1, sc.s2, sc.s_plus, sc.s_minus
    scale = np.maximum(np.linalg.norm(s1, axis=-1) ** 2, 1.0)
    null = float(np.max(np.abs(np.stack([dot(s1, s1), dot(s2, s2), dot(s1, s2)])) / scale))
    contact = float(max(np.max(np.abs(dot(sp, QPLUS)) / np.linalg.norm(sp, axis=-1)),
                        np.max(np.abs(dot(sm, QMINUS)) / np.linalg.norm(sm, axis=-1))))
    pairing = {}
    for lam in PAIRING_LAMBDAS:
        cq = conserved_quantity(front, lam)
        pairing[_key(lam)] = float(np.max(np.abs(cq.pairing() + 2 * (1 - 2 * lam))))
    cr = 0.0
    flat = [x.reshape(-1, 6) for x in (sp, sm, s1, s2)]
    for a, b, c, d in zip(*flat):
        val = cross_ratio(SigVec(a), SigVec(b), SigVec(c), SigVec(d))
        cr = max(cr, abs(val + 1.0))
    rec = reconstruct_front(sc, SigVec(QPLUS), SigVec(QMINUS))
    rf = rec.front
    return {
        "curvature_sphere_nullity": null,
        "fixed_sphere_contact": contact,
        "conserved_pairing": pairing,
        "cross_ratio_deviation": float(cr),
        "reconstruction_invariants": float(np.nanmax(rf.invariant_violation())),
        "round_trip_error": float(max(np.nanmax(np.abs(rf.f - front.f)),
                                      np.nanmax(np.abs(rf.t - front.t)))),
        "point_sphere_samples": int(rec.point_sphere.sum()),
        "alignment_residual_exact": float(max(alignment_residual(front, sc))),
    }


def _parallel(levels: list[_Level], dist: float) -> dict:
    lv0 = levels[0]
    errs = []
    for lv in levels:
        pf = parallel_front(lv.front, dist)
        errs.append(float(np.max(np.abs(_coarse(pf.kappa1 - np.tanh(lv.pv.phi - dist), lv.k)))))
    pf0 = parallel_front(lv0.front, dist)
    rec = reconstruct_front(lv0.sc, SigVec(np.exp(dist) * QPLUS),
                            SigVec(np.exp(-dist) * QMINUS)).front
    n = lv0.dom.nu, lv0.dom.nv
    pi = np.unique(np.linspace(0, n[0] - 1, PROBE_SIZE).round().astype(int))
    pj = np.unique(np.linspace(0, n[1] - 1, PROBE_SIZE).round().astype(int))
    sel = np.ix_(pi, pj)
    probe = float(max(np.max(np.abs(pf0.f[sel] - rec.f[sel])),
                      np.max(np.abs(pf0.t[sel] - rec.t[sel]))))
    return {
        "distance": dist,
        "flatness_deviation": flatness_deviation(pf0, FLATNESS_ROOT_METRIC),
        "kappa1_tanh_error": errs,
        "kappa1_tanh_order": convergence_order(errs),
        "reconstruction_probe_error": probe,
        "invariant_violation": float(pf0.invariant_violation().max()),
    }


# ---------------------------------------------------------------- deformation

def _deformed_metrics(lv: _Level, phi: HarmonicPotential, lam: float, phi0: np.ndarray,
                      substeps: int, full: bool) -> dict:
    k, front, sc = lv.k, lv.front, lv.sc
    tau = tau_form(front)
    state = calapso_transport(tau, lam, lv.dom, substeps=substeps)
    m = {
        "conservation_drift": conservation_drift(state, conserved_quantity(front, lam)),
        "orthogonality_drift": state.orthogonality_drift(),
        "holonomy_residual": float(holonomy_residual(tau, lam).max()),
    }
    gauge = gauge_relation_residual(state, sc, lam, substeps=substeps)
    m["gauge_relation_residual"] = gauge.residual
    m["gauge_principal_angle"] = gauge.angle

    reduced_frame = integrate_frame(phi, lv.dom, lam, substeps=substeps)
    reduced = front_from_frame(reduced_frame)
    ambient, st, leakage = ambient_deformation(front, lam, substeps=substeps, tau=tau)
    m["frame_invariant_drift"] = float(reduced_frame.invariant_violation().max())
    m["pipeline_agreement"] = float(max(np.max(np.abs(reduced.f - ambient.f)),
                                        np.max(np.abs(reduced.t - ambient.t))))
    m["leakage"] = leakage

    om = omega_residual(ambient.E, ambient.G, ambient.kappa1, ambient.kappa2, lv.dom)
    m["omega_residual_max"] = _masked_max(_coarse(om.residual, k), _omega_mask(phi0))
    moved = SphereCongruenceGrid(state.apply(sc.s1), state.apply(sc.s2),
                                 state.apply(sc.s_plus), state.apply(sc.s_minus), lv.dom)
    mp, mm = moutard_residual(moved)
    m["moutard_residual_max"] = float(max(_coarse(mp, k).max(), _coarse(mm, k).max()))
    if full:
        m["flatness_deviation_ambient"] = flatness_deviation(ambient, FLATNESS_ROOT_METRIC)
        m["flatness_deviation_reduced"] = flatness_deviation(reduced, FLATNESS_ROOT_METRIC)
        m["kappa_product_deviation_fd2"] = _masked_product(ambient)
        m["singular_samples"] = int(reduced.singular.sum())
    return m


LAMBDA_ORDER_KEYS = ("conservation_drift", "orthogonality_drift", "holonomy_residual",
                     "gauge_relation_residual", "pipeline_agreement", "frame_invariant_drift",
                     "omega_residual_max", "moutard_residual_max")
BASE_ORDER_KEYS = ("frame_invariant_drift", "kappa1_tanh_error", "omega_residual_max",
                   "moutard_residual_max", "omega_control", "moutard_control",
                   "alignment_residual_fd", "parallelism_residual")


def _lambda_record(levels: list[_Level], phi: HarmonicPotential, lam: float,
                   phi0: np.ndarray, substeps: int) -> dict:
    logger.info("lambda = %g", lam)
    per_level = [_deformed_metrics(lv, phi, lam, phi0, substeps, lv.k == 0) for lv in levels]
    metrics: dict[str, list] = {}
    for key in per_level[0]:
        if key in LAMBDA_ORDER_KEYS:
            metrics[key] = [m[key] for m in per_level]
    level0 = {k: v for k, v in per_level[0].items() if k not in LAMBDA_ORDER_KEYS}
    cfp = curved_flat_parameter(lam)
    return {
        "lambda": lam,
        "branch": "subcritical" if lam < 0.5 else "supercritical",
        "curved_flat_parameter": {"re": cfp.real, "im": cfp.imag},
        "metrics": metrics,
        "level0": level0,
        "orders": _orders(metrics, LAMBDA_ORDER_KEYS),
    }


def _key(lam: float) -> str:
    return repr(float(lam))


# ---------------------------------------------------------------- criteria

def _check(name: str, value, bound, kind: str = "le") -> dict:
    """One bound.  ``kind``: le, lt, ge, range.  Missing values are 'absent'."""
    if value is None:
        return {"name": name, "value": None, "bound": bound, "kind": kind,
                "status": "absent"}
    v = float(value)
    if kind == "le":
        ok = v <= bound
    elif kind == "lt":
        ok = v < bound
    elif kind == "ge":
        ok = v >= bound
    else:
        ok = bound[0] <= v <= bound[1]
    return {"name": name, "value": v, "bound": list(bound) if kind == "range" else bound,
            "kind": kind, "status": "pass" if ok else "fail"}


def _fitted(order: dict | None):
    return None if order is None else order["fitted"]


def _criterion(cid: int, title: str, checks: list[dict]) -> dict:
    states = [c["status"] for c in checks if c["status"] != "absent"]
    passed = None if not states else all(s == "pass" for s in states)
    return {"id": cid, "title": title, "passed": passed, "checks": checks}


def evaluate_criteria(report: dict) -> list[dict]:
    base = report["base"]
    ident = base["identities"]
    bo = base["orders"]
    lam = {r["lambda"]: r for r in report["lambdas"]}
    out = []

    checks = [
        _check("curvature spheres null and orthogonal", ident["curvature_sphere_nullity"], EXACT_TOL),
        _check("<s+-, q+-> = 0", ident["fixed_sphere_contact"], EXACT_TOL),
    ]
    checks += [_check(f"<p+(l), p-(l)> + 2(1-2l) = 0 at l={k}", v, EXACT_TOL)
               for k, v in ident["conserved_pairing"].items()]
    checks += [_check("cross_ratio(s+, s-, s1, s2) = -1", ident["cross_ratio_deviation"], EXACT_TOL),
               _check("reconstructed front invariants", ident["reconstruction_invariants"],
                      EXACT_TOL)]
    out.append(_criterion(1, "algebraic identities", checks))

    out.append(_criterion(2, "round trip", [
        _check("reconstruct(curvature_spheres(front)) - front", ident["round_trip_error"],
               ROUND_TRIP_TOL, "lt")]))

    out.append(_criterion(3, "flatness of the base front", [
        _check("|k1 k2 - 1| where sqrt(G) > 0.1", base["flatness_deviation"], FLATNESS_TOL),
        _check("order of |k1 - tanh(phi)|", _fitted(bo["kappa1_tanh_error"]),
               FD_ORDER_BAND, "range")]))

    out.append(_criterion(4, "Omega and Moutard residuals", [
        _check("Omega residual order", _fitted(bo["omega_residual_max"]), FD_ORDER_BAND, "range"),
        _check("Moutard residual order", _fitted(bo["moutard_residual_max"]), FD_ORDER_BAND,
               "range"),
        _check("Omega negative control order", _fitted(bo["omega_control"]),
               CONTROL_ORDER_MAX, "lt"),
        _check("Moutard negative control order", _fitted(bo["moutard_control"]),
               CONTROL_ORDER_MAX, "lt")]))

    checks = []
    for l in CONSERVATION_LAMBDAS:
        r = lam[l]
        checks.append(_check(f"conservation drift at l={l:g}",
                             r["metrics"]["conservation_drift"][0], CONSERVATION_TOL))
        checks.append(_check(f"conservation order at l={l:g}",
                             _fitted(r["orders"]["conservation_drift"]), HIGH_ORDER_MIN, "ge"))
    out.append(_criterion(5, "conservation", checks))

    r = lam[TRANSPORT_LAMBDA]
    out.append(_criterion(6, "transport orthogonality", [
        _check("|T^t eta T - eta| at l=0.25", r["metrics"]["orthogonality_drift"][0],
               ORTHOGONALITY_TOL),
        _check("holonomy residual order at l=0.25", _fitted(r["orders"]["holonomy_residual"]),
               HIGH_ORDER_MIN, "ge")]))

    out.append(_criterion(7, "gauge relation", [
        _check("gauge relation residual at l=0.25", r["metrics"]["gauge_relation_residual"][0],
               GAUGE_TOL),
        _check("principal angle T+- f vs T f at l=0.25", r["level0"]["gauge_principal_angle"]
               if "gauge_principal_angle" in r["level0"] else None, ANGLE_TOL)]))

    checks = []
    for l in DEFORMATION_LAMBDAS:
        r = lam[l]
        checks.append(_check(f"flatness (ambient) at l={l:g}",
                             r["level0"]["flatness_deviation_ambient"], FLATNESS_TOL))
        checks.append(_check(f"flatness (reduced) at l={l:g}",
                             r["level0"]["flatness_deviation_reduced"], FLATNESS_TOL))
        checks.append(_check(f"pipeline agreement at l={l:g}",
                             r["metrics"]["pipeline_agreement"][0], AGREEMENT_TOL))
    dz = report["base"]["identity_deformation"]
    checks.append(_check("l=0 reproduces the base front", dz["error"], EXACT_TOL))
    checks.append(_check("l=0.5 rejected", 0.0 if dz["half_rejected"] else 1.0, 0.0))
    out.append(_criterion(8, "deformed fronts", checks))

    checks = []
    for par in base["parallel"]:
        t = par["distance"]
        checks.append(_check(f"flatness at t={t:g}", par["flatness_deviation"], FLATNESS_TOL))
        checks.append(_check(f"order of |k1 - tanh(phi - t)| at t={t:g}",
                             _fitted(par["kappa1_tanh_order"]), FD_ORDER_BAND, "range"))
        checks.append(_check(f"reconstruction probe at t={t:g}",
                             par["reconstruction_probe_error"], PROBE_TOL))
    out.append(_criterion(9, "parallel fronts", checks))
    return out


# ---------------------------------------------------------------- driver

def _identity_deformation(lv: _Level, phi: HarmonicPotential) -> dict:
    d0 = deform_front(lv.front, phi, 0.0)
    err = float(max(np.max(np.abs(d0.f - lv.front.f)), np.max(np.abs(d0.t - lv.front.t))))
    try:
        deform_front(lv.front, phi, 0.5)
        rejected = False
    except DegenerateParameter:
        rejected = True
    return {"error": err, "half_rejected": rejected}


def diagnostics(cfg, command: str = "validate", lambdas=None, levels: int | None = None,
                criteria: bool = True, workers: int = 4) -> dict:
    """Run every diagnostic for ``cfg`` and return the report (JSON-ready dict).

    ``lambdas`` defaults to the configured values, plus the ones the
    criteria need when ``criteria`` is set.
    """
    phi = cfg.potential
    phi.check()
    dom = cfg.domain
    nlev = cfg.refinement_levels if levels is None else levels
    lam_set = set(float(x) for x in (cfg.lambdas if lambdas is None else lambdas))
    if criteria:
        lam_set |= set(CRITERIA_LAMBDAS)
    lam_list = sorted(lam_set)
    for lam in lam_list:
        if lam == 0.5:
            raise DegenerateParameter("lambda = 1/2 requested")

    logger.info("building base fronts on %d level(s)", nlev)
    lv_list = [_Level(phi, dom, k, cfg.substeps) for k in range(nlev)]
    lv0 = lv_list[0]
    phi0 = lv0.pv.phi

    per_level = [_base_metrics(lv, phi0) for lv in lv_list]
    base_metrics = {k: [m[k] for m in per_level] for k in per_level[0]}
    pd = path_dependence(phi, dom, 0.0, cfg.substeps)
    base = {
        "metrics": base_metrics,
        "orders": _orders(base_metrics, BASE_ORDER_KEYS),
        "flatness_deviation": flatness_deviation(lv0.front, FLATNESS_ROOT_METRIC),
        "singular_samples": int(lv0.front.singular.sum()),
        "path_dependence": pd,
        "identities": _identities(phi, dom, cfg.substeps),
        "identity_deformation": _identity_deformation(lv0, phi),
        "parallel": [_parallel(lv_list, t) for t in PARALLEL_DISTANCES] if criteria else [],
    }

    def one(lam):
        return _lambda_record(lv_list, phi, lam, phi0, cfg.substeps)

    if workers > 1 and len(lam_list) > 1:
        with ThreadPoolExecutor(max_workers=min(workers, len(lam_list))) as pool:
            records = list(pool.map(one, lam_list))
    else:
        records = [one(lam) for lam in lam_list]

    report = {
        "format": REPORT_FORMAT,
        "version": REPORT_VERSION,
        "command": command,
        "config": cfg.to_dict(),
        "levels": [lv.dom.nu for lv in lv_list],
        "harmonicity": harmonicity_study() if criteria else None,
        "base": base,
        "lambdas": records,
        "criteria": [],
        "passed": None,
    }
    if criteria:
        report["criteria"] = evaluate_criteria(report)
        report["passed"] = all(c["passed"] is not False for c in report["criteria"])
    return report


def determinism_criterion(first: str, second: str) -> dict:
    same = first == second
    return _criterion(10, "determinism", [
        {"name": "two validate runs give byte-identical report.json", "value": 0.0 if same else 1.0,
         "bound": 0.0, "kind": "le", "status": "pass" if same else "fail"}])


def run_validation(cfg, workers: int = 4, repeat: bool = True) -> dict:
    """Full validation report, with the determinism criterion from a second run."""
    report = diagnostics(cfg, "validate", workers=workers)
    if repeat:
        again = diagnostics(cfg, "validate", workers=workers)
        crit = determinism_criterion(report_text(report), report_text(again))
    else:
        crit = _criterion(10, "determinism", [{"name": "two validate runs give byte-identical "
                                               "report.json", "value": None, "bound": 0.0,
                                               "kind": "le", "status": "absent"}])
    report["criteria"].append(crit)
    report["passed"] = all(c["passed"] is not False for c in report["criteria"])
    return report


def failing_criteria(report: dict) -> list[str]:
    out = []
    for c in report.get("criteria", []):
        if c["passed"] is False:
            bad = [ch["name"] for ch in c["checks"] if ch["status"] == "fail"]
            out.append(f"criterion {c['id']} ({c['title']}): " + "; ".join(bad))
    return out
