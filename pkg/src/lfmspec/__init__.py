"""Spectra of composition operators induced by linear fractional self-maps
of the complex unit ball, with classification, normal forms, and a
truncated-power-series numerical oracle."""

from .errors import (
    BallMapError,
    DenominatorVanishes,
    DimensionMismatch,
    GapEigenvalue,
    HasInteriorFixedPoint,
    MapFormatError,
    MultipleBoundaryFixedPoints,
    NoBoundaryFixedPoint,
    NoInteriorFixedPoint,
    NoQualifyingBoundaryPoint,
    NotAFixedPoint,
    NotHyperbolic,
    NumericalInconsistency,
    ParameterConstraintViolated,
    PointNotInterior,
    SizeCapExceeded,
    UnitaryIndexNonzero,
    UnsupportedAutomorphism,
    UnsupportedMapClass,
    UnsupportedParabolic,
    ZeroConstantTerm,
    ZeroFunction,
)
from .maps import (
    FixedPoint,
    FixedPointSet,
    HalfPlaneMap,
    LinearFractionalMap,
    ValidationReport,
    ball_automorphism_to_origin,
    ball_from_siegel,
    cayley_matrix,
    compose,
    conjugate_to_halfplane,
    conjugated,
    denjoy_wolff,
    evaluate,
    fixed_points,
    identity_map,
    inverse,
    is_automorphism,
    iterate_matrix,
    jacobian,
    map_from_json_dict,
    map_to_json_dict,
    proportional_residual,
    siegel_from_ball,
    unitary_map,
    unitary_with_first_column,
    validate_self_map,
)
from .classify import (
    Classification,
    EllipticP0Form,
    EllipticSpectralData,
    HyperbolicNormalForm,
    MapClass,
    classify,
    elliptic_p0_normal_form,
    elliptic_spectral_data,
    hyperbolic_normal_form,
    unitary_index,
)
from .spectra import (
    Annulus,
    Circle,
    ClosedDisk,
    EssentialRadiusEstimate,
    Point,
    PointFamily,
    SpectralSet,
    cloud_to_csv,
    essential_radius_closed_form,
    essential_radius_estimate,
    spectral_radius,
    spectrum,
)
from .series import (
    Compression,
    TruncatedSeries,
    basis_multi_indices,
    binomial_series,
    build_compression,
    compose_series,
    compression_spectrum,
    compression_to_csv,
    eigenfunction_residual,
    hardy_norm_sq,
    map_power_series,
    monomial_norm_sq,
    norm_equivalence_interval,
    series_from_vector,
    sobolev_norm_sq,
    weighted_norm_sq,
)

__version__ = "0.1.0"
