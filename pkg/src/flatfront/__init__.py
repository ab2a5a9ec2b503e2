"""Flat fronts in hyperbolic 3-space, their Lie sphere geometric lift and deformation."""
from .config import RunConfig, load_config, parse_config
from .deformation import (
    ConservedQuantity,
    DeformationState,
    base_rotation,
    calapso_transport,
    conservation_drift,
    conserved_quantity,
    curved_flat_parameter,
    deform_both,
    deform_front,
    gauge_relation_residual,
    holonomy_residual,
)
from .errors import (
    ContactSpanDegenerate,
    DegenerateConfiguration,
    DegenerateParameter,
    FlatFrontError,
    NotCollinear,
    NotHarmonic,
    PointSphereEncountered,
    PotentialOverflow,
    SignatureMismatch,
    TransportDiverged,
    UmbilicEncountered,
)
from .export import export_mesh
from .frames import (
    FrameGrid,
    FrontGrid,
    GridDomain,
    build_front,
    flatness_deviation,
    front_from_frame,
    integrate_frame,
    metric_and_curvatures,
    parallel_front,
    path_dependence,
)
from .geom import (
    AmbientSplit,
    ContactElement,
    Signature,
    SigVec,
    SkewEndo,
    cross_ratio,
    dot,
    inner,
    wedge_matrix,
)
from .lift import (
    ConnectionFormGrid,
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
from .potential import HarmonicPotential, Term, default_potential, eval_potential

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
