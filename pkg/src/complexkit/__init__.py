"""Numerical toolkit for one and several complex variables.

Contour and area quadrature with Cauchy-kernel singularities, a solver
for the inhomogeneous Cauchy-Riemann equation, the Poisson integral on
the disc, invariant metrics on the disc, bidisc and ball, exact
polynomial algebra homomorphisms, and boundedness-set machinery for
pointwise limits of holomorphic sequences.
"""

__version__ = "0.1.0"

from .errors import ComplexKitError, KindMismatch, NumericError
from .geometry import (
    Contour,
    GridField,
    Lattice,
    PlanarDomain,
    QuadratureSpec,
    annulus,
    area_integral,
    boundary_integral,
    circle,
    contour_integral,
    disc,
    singular_area_integral,
    wirtinger,
)
from .cauchy import cauchy_eval, holomorphy_residual, pompeiu_eval, pompeiu_terms
from .dbar import (
    BlowUpExtension,
    CauchyTransform,
    CutoffSpec,
    DbarProblem,
    blow_up_extension,
    boundedness_bound,
    cauchy_transform,
    dbar_residual,
    extension_residual,
)
from .dirichlet import (
    BoundaryData,
    HarmonicField,
    boundary_continuity_gap,
    ck_alpha_report,
    harmonic_extension,
    harnack_lower_bound_check,
    holder_seminorm,
    hopf_normal_derivative,
    laplacian_residual,
    poisson_kernel,
    poisson_solve,
)
from .metrics import (
    CurvePath,
    HolomorphicMap,
    Kind,
    MetricQuery,
    Model,
    caratheodory_lower_bound,
    curve_length,
    distance_decreasing_check,
    indicatrix_membership,
    jacobian_c,
    metric_length,
)
from .automorphisms import (
    BidiscAutomorphism,
    DiagonalRotation,
    Unitary2,
    apply_bidisc_automorphism,
    commutator_defect,
    isotropy_abelian_report,
    poincare_witness,
    strict_convexity_check,
)
from .bers import (
    AlgebraHom,
    CharacterTable,
    Poly,
    character_point,
    compose,
    divide_at_point,
    evaluate,
    hom_from_map,
    morphism_audit,
    pullback,
)
from .osgood import (
    BoundednessMask,
    FunctionSequence,
    boundedness_set,
    cover_check,
    dense_ball_search,
    limit_holomorphy_residual,
)
