"""Type-signature CFI policy evaluation.

Thin package wrapper around the compiled ``_core`` extension: program
views, the four policy predicates, target-set computation, CTR and
relative-CTR metrics, signature-recovery accuracy tables, and the seeded
view perturbation generator.
"""

from ._core import (
    BucketTable,
    CallSiteSignature,
    DistributionStats,
    FunctionSignature,
    InputError,
    InvariantError,
    MatchedProgram,
    PerturbConfig,
    ProgramView,
    RelativeReport,
    SiteRatios,
    TargetMap,
    TypeDescriptor,
    __version__,
    accuracy_report,
    allows,
    cdf_series,
    compute_stats,
    ctr_stats,
    ctr_total,
    format_type,
    link_views,
    load_view_file,
    normalized_ctr,
    parse_type,
    parse_view,
    perturb_view,
    relative_ctr,
    relaxed_width,
    serialize_view,
    target_sets,
    target_sets_naive,
    type_equal_ifcc,
    type_equal_mcfi,
    zero_target_counts,
)

__all__ = [
    "BucketTable",
    "CallSiteSignature",
    "DistributionStats",
    "FunctionSignature",
    "InputError",
    "InvariantError",
    "MatchedProgram",
    "PerturbConfig",
    "ProgramView",
    "RelativeReport",
    "SiteRatios",
    "TargetMap",
    "TypeDescriptor",
    "__version__",
    "accuracy_report",
    "allows",
    "cdf_series",
    "compute_stats",
    "ctr_stats",
    "ctr_total",
    "format_type",
    "link_views",
    "load_view_file",
    "normalized_ctr",
    "parse_type",
    "parse_view",
    "perturb_view",
    "relative_ctr",
    "relaxed_width",
    "serialize_view",
    "target_sets",
    "target_sets_naive",
    "type_equal_ifcc",
    "type_equal_mcfi",
    "zero_target_counts",
]
