"""framecert: numerical certification of phase retrievability and
stability for finite complex frames."""

from ._version import __version__
from .core import (
    ComplexFrame,
    FrameOperatorSummary,
    RealifiedFrame,
    SymOuter,
    build_phi,
    canonical_dual,
    frame_bounds,
    gram_squared,
    j_matrix,
    l_matrix,
    nuclear_norm_rank2,
    parseval_version,
    r_matrix,
    rank_by_svd,
    realify,
    sym_outer,
    transform_frame,
    unrealify,
)
from .certify import (
    TAU_NPR,
    TAU_PR,
    VERDICT_INCONCLUSIVE,
    VERDICT_NOT_RETRIEVABLE,
    VERDICT_RETRIEVABLE,
    CardinalityBounds,
    CertificationReport,
    ComplementResult,
    RankKernelResult,
    certify_complex,
    certify_real,
    complement_property,
    eigenvalue_2n_minus_1,
    estimate_a0,
    hmw_lower_bound,
    injectivity_sampling_oracle,
    magnitude_separation_check,
    rank_kernel_check,
)
from .constructions import (
    BodmannHammenParams,
    FramePath,
    bodmann_hammen,
    connect_frames,
    denied_angles,
    path_eval,
    r3_example,
    random_frame,
    trivial_non_retrievable,
)
from .errors import (
    AsymmetricInput,
    BadCardinality,
    BadDimension,
    CardinalityTooSmall,
    DegenerateAfterRetries,
    DeniedAngle,
    FramecertError,
    FrameFormatError,
    NotAFrame,
    NotRealFrame,
    NotRetrievableInput,
    SelectionFailed,
    ShapeMismatch,
    SingularTransform,
    TooLarge,
    ZeroScalar,
    ZeroXi,
)
from .frameio import dump_frame, frame_from_dict, frame_to_dict, load_frame
from .stability import (
    GapAuditResult,
    PerturbationTrial,
    StabilityExperimentReport,
    StabilityRadius,
    l_matrix_gap_audit,
    max_displacement,
    perturb_frame,
    spanning_safe_radius,
    stability_experiment,
    stability_radius,
)

__all__ = [
    "__version__",
    # core
    "ComplexFrame",
    "RealifiedFrame",
    "FrameOperatorSummary",
    "SymOuter",
    "j_matrix",
    "realify",
    "unrealify",
    "build_phi",
    "r_matrix",
    "l_matrix",
    "sym_outer",
    "nuclear_norm_rank2",
    "frame_bounds",
    "gram_squared",
    "transform_frame",
    "canonical_dual",
    "parseval_version",
    "rank_by_svd",
    # certification
    "TAU_PR",
    "TAU_NPR",
    "VERDICT_RETRIEVABLE",
    "VERDICT_NOT_RETRIEVABLE",
    "VERDICT_INCONCLUSIVE",
    "CertificationReport",
    "RankKernelResult",
    "ComplementResult",
    "CardinalityBounds",
    "certify_complex",
    "certify_real",
    "complement_property",
    "eigenvalue_2n_minus_1",
    "estimate_a0",
    "hmw_lower_bound",
    "injectivity_sampling_oracle",
    "magnitude_separation_check",
    "rank_kernel_check",
    # stability
    "StabilityRadius",
    "StabilityExperimentReport",
    "PerturbationTrial",
    "GapAuditResult",
    "stability_radius",
    "spanning_safe_radius",
    "perturb_frame",
    "stability_experiment",
    "l_matrix_gap_audit",
    "max_displacement",
    # constructions
    "BodmannHammenParams",
    "FramePath",
    "bodmann_hammen",
    "denied_angles",
    "r3_example",
    "trivial_non_retrievable",
    "random_frame",
    "connect_frames",
    "path_eval",
    # io
    "load_frame",
    "dump_frame",
    "frame_to_dict",
    "frame_from_dict",
    # errors
    "FramecertError",
    "AsymmetricInput",
    "BadCardinality",
    "BadDimension",
    "CardinalityTooSmall",
    "DegenerateAfterRetries",
    "DeniedAngle",
    "FrameFormatError",
    "NotAFrame",
    "NotRealFrame",
    "NotRetrievableInput",
    "SelectionFailed",
    "ShapeMismatch",
    "SingularTransform",
    "TooLarge",
    "ZeroScalar",
    "ZeroXi",
]
