"""Staged construction of additive bases with prescribed representation
counts, plus exhaustive verification of every step."""

from .construct import (
    DEFAULT_SEARCH_CAP,
    KIND_BASE,
    KIND_DENSIFICATION,
    KIND_EXTENSION,
    SEARCH_CAP_ENV,
    ConstructionTrace,
    StageRecord,
    base_case,
    build,
    densify,
    extend_target,
    resolve_search_cap,
    trace_dumps,
    trace_from_dict,
    trace_loads,
    trace_to_dict,
    validate_trace_structure,
)
from .errors import (
    DensityUnreachableError,
    EmptySetError,
    InputTooSmallError,
    MalformedTraceError,
    PhiTooSlowError,
    PreconditionViolatedError,
    RepbasisError,
)
from .repcore import (
    INFINITY,
    FiniteBasis,
    PhiSpec,
    RepTarget,
    TargetSequence,
    counting,
    d0_of,
    density_demand,
    density_exceeds,
    rep_function,
    rep_profile,
    sum_counter,
    target_prefix,
)
from .sidon import (
    SidonLadder,
    SidonSet,
    erdos_turan_sidon,
    greedy_sidon,
    is_sidon,
    sidon_for_density,
)
from .verify import (
    CheckResult,
    DecompositionReport,
    EqualityReport,
    InvariantReport,
    VerificationReport,
    check_decomposition,
    check_equality_coverage,
    check_invariants,
    upper_bound_check,
    verify_trace,
)

__version__ = "0.1.0"

__all__ = [
    "CheckResult",
    "ConstructionTrace",
    "DecompositionReport",
    "DensityUnreachableError",
    "DEFAULT_SEARCH_CAP",
    "EmptySetError",
    "EqualityReport",
    "FiniteBasis",
    "INFINITY",
    "InputTooSmallError",
    "InvariantReport",
    "KIND_BASE",
    "KIND_DENSIFICATION",
    "KIND_EXTENSION",
    "MalformedTraceError",
    "PhiSpec",
    "PhiTooSlowError",
    "PreconditionViolatedError",
    "RepTarget",
    "RepbasisError",
    "SEARCH_CAP_ENV",
    "SidonLadder",
    "SidonSet",
    "StageRecord",
    "TargetSequence",
    "VerificationReport",
    "base_case",
    "build",
    "check_decomposition",
    "check_equality_coverage",
    "check_invariants",
    "counting",
    "d0_of",
    "densify",
    "density_demand",
    "density_exceeds",
    "erdos_turan_sidon",
    "extend_target",
    "greedy_sidon",
    "is_sidon",
    "rep_function",
    "rep_profile",
    "resolve_search_cap",
    "sidon_for_density",
    "sum_counter",
    "target_prefix",
    "trace_dumps",
    "trace_from_dict",
    "trace_loads",
    "trace_to_dict",
    "upper_bound_check",
    "validate_trace_structure",
    "verify_trace",
]
