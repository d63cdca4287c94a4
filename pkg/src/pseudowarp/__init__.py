__version__ = "0.1.0.dev0"

from .circles import (
    CircleState,
    CircleTrajectory,
    circle_center,
    circle_closed_form,
    circle_integrate,
    circle_residual,
    evaluate_circle,
    sphere_geodesic_is_circle,
)
from .isometry import (
    ParaboloidEmbedding,
    ParaboloidIsometry,
    ParaboloidMotion,
    QuadricRotation,
    check_equivariance,
    check_lifted_isometry,
    decode_isometry,
    lift_factor_isometry,
    sample_factor_isometry,
)
from .pseudo_linear import Space, Subspace, classify, inner, orthogonal_complement
from .spheres import SphereInitialData, SphericalSubmanifold, classify_sphere
from .utils import (
    CaseTag,
    CausalClass,
    CheckRecord,
    CircleClass,
    SphereKind,
    ValidationReport,
    WarpFamily,
    is_rich_available,
)
from .validation import run_validation
from .warp import (
    InitialData,
    InitialDataError,
    OutOfDomainError,
    OutOfImageError,
    WarpedDecomposition,
    WarpedPoint,
    build,
    canonicalize,
    compose,
    enumerate_type,
    psi_forward,
    psi_inverse,
    psi_pushforward,
    restrict_to_quadric,
    translate,
)


if is_rich_available():
    from .utils import rich
