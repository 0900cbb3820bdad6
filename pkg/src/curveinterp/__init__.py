"""Interpolation for restricted tangent bundles of curves in projective space.

Exact feasibility criteria, a genus-0 incidence solver, and finite-field
certificates of interpolation on nodal degenerations.
"""

from .errors import CurveInterpError, FieldTooSmall, GluingError, InvalidInput, ResamplingExhausted, SolverFailure
from .exact_algebra import DEFAULT_PRIME, FieldSpec, Matrix, Poly, Rng, mat_kernel, mat_rank, poly_eval
from .numerology import (
    chi_tangent,
    chi_twisted,
    feasibility_hyperplane,
    feasibility_unconstrained,
    hyperplane_moduli_dim,
    rho,
    twist_classification,
)
from .rational_maps import (
    IncidenceProblem,
    IncidenceSolution,
    ProjPoint,
    RationalMap,
    evaluate,
    is_nondegenerate,
    random_map,
    solve_through_points,
    solve_through_points_hyperplane,
)
from .euler_model import SplittingType, h0_general_twist, is_balanced, omega_h0, splitting_type
from .nodal_glue import (
    CertConfig,
    DivisorSpec,
    InterpolationCertificate,
    NodalCurve,
    SubspaceConstraint,
    TwistSpec,
    Verdict,
    assemble,
    build_degeneration,
    check_interpolation,
    check_subspace_interpolation,
    genmod_check,
    global_h0,
    higher_genus_glue_check,
)
from .verify import CampaignConfig, CampaignReport, sweep, verify_main, verify_remark, verify_twisted

__version__ = "0.1.0"
