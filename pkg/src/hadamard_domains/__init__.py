"""Hadamard star products of Reinhardt domains in C^2.

Geometry (shadows, dual complements, separation of 0 and infinity) and the
series side (truncated coefficient tables, contour and torus quadratures)
are kept in separate modules and cross-checked in :mod:`verification`.
"""

from .domains import (
    Domain2,
    GeneralDomain,
    ReinhardtDomain,
    Shadow,
    contains,
    exhaustion,
    make_ball,
    make_ellipsoid,
    make_polydisc,
    make_profile,
    scale_domain,
    swap_domain,
)
from .dual import NormalSample, dual_boundary, dual_contains, phi_map, reinhardt_normal, support
from .errors import (
    DegenerateNormal,
    HadamardError,
    InternalError,
    InvalidArgument,
    InvalidParameter,
    OriginExcluded,
    QuadratureFailure,
    RangeRequired,
    UnboundedDomain,
    UnsupportedDomain,
)
from .separation import LogPolarGrid, NotSeparated, Separated, Undetermined, i_map, separates, verify_certificate
from .series import (
    Circle,
    Polyline,
    TruncatedSeries2,
    cauchy_hadamard_shadow,
    contour_h_star,
    evaluate,
    h_xi_coeffs,
    hadamard,
    lambda_op,
    torus_hadamard,
    weighted_hadamard,
)
from .star import CellState, GridMask, StarResult, cc0, h_star_shadow, star_membership, star_shadow
from .verification import (
    Report,
    compare_shadows,
    ray_discrepancy,
    shadow_distance,
    verify_contour_vs_series,
    verify_hstar,
    verify_union_lemma,
)

__version__ = "0.1.0"
