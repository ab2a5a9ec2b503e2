"""Deform the front along the Calapso family and compare the two routes.

Run: python3 walkthroughs/03_deformation.py
"""
from flatfront import (
    GridDomain,
    build_front,
    calapso_transport,
    conservation_drift,
    conserved_quantity,
    curved_flat_parameter,
    default_potential,
    deform_both,
    flatness_deviation,
    tau_form,
)

phi = default_potential()
front = build_front(phi, GridDomain())
tau = tau_form(front)

print(" lambda  branch         drift(Tp)  orth      A/B       flatness  sqrt(1-2l)")
for lam in (-1.0, -0.25, 0.25, 0.49, 0.75, 1.0):
    st = calapso_transport(tau, lam)
    res = deform_both(front, phi, lam)
    print(f"{lam:7.2f}  {st.branch:13s}  "
          f"{conservation_drift(st, conserved_quantity(front, lam)):.2e}  "
          f"{st.orthogonality_drift():.2e}  {res.agreement:.2e}  "
          f"{flatness_deviation(res.ambient):.2e}  {curved_flat_parameter(lam):.3f}")
