"""Lift the front to Lie sphere geometry: curvature spheres, Omega and Moutard checks.

Run: python3 walkthroughs/02_lie_sphere_lift.py
"""
import numpy as np

from flatfront import (
    GridDomain,
    SigVec,
    build_front,
    curvature_spheres,
    default_potential,
    eval_potential,
    legendre_lift,
    moutard_residual,
    omega_residual,
    reconstruct_front,
)
from flatfront.deformation import QMINUS, QPLUS
from flatfront.geom import dot

phi = default_potential()
for n in (33, 65, 129):
    dom = GridDomain(nu=n, nv=n)
    front = build_front(phi, dom)
    lift = legendre_lift(front)
    sc = curvature_spheres(front, phi)
    s = (n - 1) // 32
    om = omega_residual(front.E, front.G, front.kappa1, front.kappa2, dom)
    # compare the same interior nodes on every grid, away from phi = 0
    p = eval_potential(phi, *dom.mesh()).phi
    keep = np.zeros_like(p, dtype=bool)
    keep[2 * s:-2 * s:s, 2 * s:-2 * s:s] = True
    keep &= np.abs(np.sinh(p)) > 0.25
    mp, mm = moutard_residual(sc)
    print(f"n={n:4d}  lift nullity {lift.nullity_defect():.1e}  "
          f"Omega {om.max(keep):.2e}  "
          f"Moutard {max(mp[::s, ::s].max(), mm[::s, ::s].max()):.2e}")

# the two isothermic congruences touch the fixed spheres q+ and q-
print("<s+, q+> :", np.abs(dot(sc.s_plus, QPLUS)).max())
print("<s-, q-> :", np.abs(dot(sc.s_minus, QMINUS)).max())

# and the front comes back from them
rec = reconstruct_front(sc, SigVec(QPLUS), SigVec(QMINUS))
print("round trip error:", np.abs(rec.front.f - front.f).max())
