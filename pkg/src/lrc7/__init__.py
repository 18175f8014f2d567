"""Distance-7, locality-2 erasure codes with disjoint repair groups.

Exact finite-field linear algebra, 2-spreads of the 4-dimensional space,
the greedy pair-sequence constructor, parameter bounds, and an erasure
codec with local/global repair and a storage-repair simulator.
"""

from .bounds import (
    BoundsReport,
    CodeParams,
    bounds_report,
    ceil_log,
    classify,
    cor1_distance_cap,
    dim_bound_eq3,
    eq2_holds,
    is_prime_power,
    length_bound_eq5,
    phi,
    prior_length_bounds,
    singleton_like,
    wang_bound,
)
from .codec import (
    EnumerationBudgetError,
    ErasurePattern,
    GroupDetectionError,
    LocalRepairError,
    LrcCode,
    RepairStats,
    UnrecoverableErasureError,
    code_from_parity_check,
    encode,
    load_fixture,
    min_distance,
    min_weight_oracle,
    repair_global,
    repair_local,
    simulate_repairs,
    wilson_interval,
)
from .construct import (
    CandidateFamily,
    ConditionReport,
    ConstructionTrace,
    ReplayError,
    VectorSequence,
    assemble_parity_check,
    choose_triple,
    guaranteed_min_rounds,
    replay_trace,
    run_algorithm1,
    trim,
    verify_conditions,
)
from .fields import MAX_FIELD_ORDER, FieldElement, FieldSpec, field_arith, field_create
from .linalg import (
    AmbiguousSystemError,
    InconsistentSystemError,
    MatrixF,
    VectorF,
    columns_dependent,
    kernel_basis,
    load_matrix_json,
    matmul,
    matrix_from_json_dict,
    matrix_to_json_dict,
    rank,
    save_matrix_csv,
    save_matrix_json,
    solve_columns,
)
from .spread import (
    Plane,
    ProjectivePoint,
    Spread,
    build_2_spread,
    canonical_rep,
    load_spread_json,
    projective_points,
    save_spread_json,
    verify_spread,
)

__version__ = "0.1.0"

__all__ = [
    "AmbiguousSystemError",
    "BoundsReport",
    "CandidateFamily",
    "CodeParams",
    "ConditionReport",
    "ConstructionTrace",
    "EnumerationBudgetError",
    "ErasurePattern",
    "FieldElement",
    "FieldSpec",
    "GroupDetectionError",
    "InconsistentSystemError",
    "LocalRepairError",
    "LrcCode",
    "MatrixF",
    "MAX_FIELD_ORDER",
    "Plane",
    "ProjectivePoint",
    "RepairStats",
    "ReplayError",
    "Spread",
    "UnrecoverableErasureError",
    "VectorF",
    "VectorSequence",
    "assemble_parity_check",
    "bounds_report",
    "build_2_spread",
    "canonical_rep",
    "ceil_log",
    "choose_triple",
    "classify",
    "code_from_parity_check",
    "columns_dependent",
    "cor1_distance_cap",
    "dim_bound_eq3",
    "encode",
    "eq2_holds",
    "field_arith",
    "field_create",
    "guaranteed_min_rounds",
    "is_prime_power",
    "kernel_basis",
    "length_bound_eq5",
    "load_fixture",
    "load_matrix_json",
    "load_spread_json",
    "matmul",
    "matrix_from_json_dict",
    "matrix_to_json_dict",
    "min_distance",
    "min_weight_oracle",
    "phi",
    "prior_length_bounds",
    "projective_points",
    "rank",
    "repair_global",
    "repair_local",
    "replay_trace",
    "run_algorithm1",
    "save_matrix_csv",
    "save_matrix_json",
    "save_spread_json",
    "simulate_repairs",
    "singleton_like",
    "solve_columns",
    "trim",
    "verify_conditions",
    "verify_spread",
    "wang_bound",
    "wilson_interval",
]
