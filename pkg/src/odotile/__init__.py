"""Exact combinatorics of odometer tilings.

Group arithmetic for integer lattices and the discrete Heisenberg group,
congruence chains with coset labels, Folner-set calculus, exact tilings
and their nested refinement, truncated profinite completions with the
left-multiplication odometer, transformation-groupoid subgroupoids with
almost-AF certificates, and invariant-measure verification.  All
acceptance-grade arithmetic is exact (integers and rationals).
"""

from ._kernels import ACTIVE_BACKEND
from .errors import (
    ChainDepthInsufficientError,
    ChainExhaustedError,
    ConfigError,
    FNotSeparatedError,
    KindMismatchError,
    LevelExhaustedError,
    LevelOrderError,
    LevelRangeError,
    NonComposableError,
    OdotileError,
    PreconditionViolatedError,
    SizeCapExceededError,
)
from .folner import (
    DEFAULT_SIZE_CAP,
    FiniteElementSet,
    box,
    folner_defect,
    get_size_cap,
    interval,
    max_folner_defect,
    s_boundary,
    set_size_cap,
)
from .groups import (
    HEISENBERG,
    LATTICE,
    ChainDiagnostics,
    CheckResult,
    GroupDescriptor,
    GroupElement,
    SubgroupChain,
    check_chain,
    check_separation,
    coset_label,
    group_op,
)
from .groupoid import (
    Arrow,
    ArrowPatch,
    CertificateValidation,
    CompactGroupoidSet,
    GraphCertificate,
    NestingResult,
    almost_af_certificate,
    gn_pieces,
    groupoid_algebra,
    membership_Gn,
    validate_graph,
    verify_nesting,
    verify_nesting_pair,
)
from .measure import (
    LevelMeasure,
    MeasureSolution,
    birkhoff_average,
    invariance_defect,
    solve_invariant_measure,
)
from .odometer import (
    ClopenSet,
    CoherentPoint,
    Cylinder,
    LevelVector,
    act,
    almost_periodicity_defect,
    decompose_clopen,
    embed_point,
    identity_point,
    orbit,
    periodicity_window,
)
from .reporting import (
    AFChainReport,
    af_chain_report,
    emit_report,
    parse_report,
    supernatural_factorization,
)
from .tiling import (
    NestedTileChain,
    Tile,
    TilingFailure,
    box_tile_source,
    build_transversal,
    full_nested_chain,
    refine_tile,
    refinement_centers,
    select_nested_chain,
    two_sided_max_defect,
    verify_tiling,
)

__version__ = "0.1.0"

__all__ = [
    "ACTIVE_BACKEND",
    "AFChainReport",
    "Arrow",
    "ArrowPatch",
    "CertificateValidation",
    "ChainDepthInsufficientError",
    "ChainDiagnostics",
    "ChainExhaustedError",
    "CheckResult",
    "ClopenSet",
    "CoherentPoint",
    "CompactGroupoidSet",
    "ConfigError",
    "Cylinder",
    "DEFAULT_SIZE_CAP",
    "FNotSeparatedError",
    "FiniteElementSet",
    "GraphCertificate",
    "GroupDescriptor",
    "GroupElement",
    "HEISENBERG",
    "KindMismatchError",
    "LATTICE",
    "LevelExhaustedError",
    "LevelMeasure",
    "LevelOrderError",
    "LevelRangeError",
    "LevelVector",
    "MeasureSolution",
    "NestedTileChain",
    "NestingResult",
    "NonComposableError",
    "OdotileError",
    "PreconditionViolatedError",
    "SizeCapExceededError",
    "SubgroupChain",
    "Tile",
    "TilingFailure",
    "act",
    "af_chain_report",
    "almost_af_certificate",
    "almost_periodicity_defect",
    "birkhoff_average",
    "box",
    "box_tile_source",
    "build_transversal",
    "check_chain",
    "check_separation",
    "coset_label",
    "decompose_clopen",
    "embed_point",
    "emit_report",
    "folner_defect",
    "full_nested_chain",
    "get_size_cap",
    "gn_pieces",
    "group_op",
    "groupoid_algebra",
    "identity_point",
    "interval",
    "invariance_defect",
    "max_folner_defect",
    "membership_Gn",
    "orbit",
    "parse_report",
    "periodicity_window",
    "refine_tile",
    "refinement_centers",
    "s_boundary",
    "select_nested_chain",
    "set_size_cap",
    "solve_invariant_measure",
    "supernatural_factorization",
    "two_sided_max_defect",
    "validate_graph",
    "verify_nesting",
    "verify_nesting_pair",
    "verify_tiling",
]
