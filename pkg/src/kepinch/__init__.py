"""Pointwise curvature calculus for Kähler-Einstein surfaces.

Closed-form extremal and average holomorphic sectional curvatures,
pinching-ratio regime classification against the classical threshold
ladder, and randomized certification of the superharmonic-test-function
inequality chain, all cross-checked by independent brute-force oracles.
"""

from .regimes import (
    RegimeReport,
    Threshold,
    ThresholdTable,
    classify_regimes,
    pinching_ratio,
    ratio_t_map,
    t_of_ratio,
    thresholds,
)
from .sectional import (
    BruteExtrema,
    CurvatureSummary,
    Direction,
    Locus,
    average_exact,
    average_mc,
    brute_extrema,
    critical_gradient,
    curvature_summary,
    extremal_locus,
    gauss_moment,
    holo_sec,
    recover_profile,
)
from .tensor import (
    CurvatureTensor,
    ExtremumTag,
    PinchingProfile,
    UnitaryFrameChange,
    build_tensor,
    frame_change,
    ricci_trace,
    validate,
)
from .variational import (
    CertificationReport,
    CertificationViolation,
    FrameDerivatives,
    amgm_product,
    certify_regime,
    delta_phi,
    delta_s,
    grad_phi,
    guan_yang_values,
    laplacian_point,
    nabla_relations,
    phi_and_c,
    q_value,
)

__version__ = "0.1.0"

__all__ = [
    "BruteExtrema",
    "CertificationReport",
    "CertificationViolation",
    "CurvatureSummary",
    "CurvatureTensor",
    "Direction",
    "ExtremumTag",
    "FrameDerivatives",
    "Locus",
    "PinchingProfile",
    "RegimeReport",
    "Threshold",
    "ThresholdTable",
    "UnitaryFrameChange",
    "amgm_product",
    "average_exact",
    "average_mc",
    "brute_extrema",
    "build_tensor",
    "certify_regime",
    "classify_regimes",
    "critical_gradient",
    "curvature_summary",
    "delta_phi",
    "delta_s",
    "extremal_locus",
    "frame_change",
    "gauss_moment",
    "grad_phi",
    "guan_yang_values",
    "holo_sec",
    "laplacian_point",
    "nabla_relations",
    "phi_and_c",
    "pinching_ratio",
    "q_value",
    "ratio_t_map",
    "recover_profile",
    "ricci_trace",
    "t_of_ratio",
    "thresholds",
    "validate",
]
