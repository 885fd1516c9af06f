"""Exact rank censuses and closed-form verification for stacked
persymmetric GF(2) matrix families."""

from .census import (
    BudgetExceededError,
    CensusIntegrityError,
    CensusSchemaError,
    MomentValue,
    RankCensus,
    census_moment,
    full_census,
    kernel_moment,
    load_census,
    multiset_census,
    save_census,
)
from .fitting import (
    AffineCheck,
    CoefficientFit,
    check_affine_top_coefficient,
    expand_product_form,
    fit_in_2k,
    fit_in_2n,
    fit_report_json,
    refactor_product_form,
    solve_exact,
)
from .formulas import (
    ClosedFormPoly,
    NotCoveredError,
    bracket_coefficient,
    complement_count,
    count,
    covered,
    fixed_n_row,
    formula_catalog,
    full_rank_count,
    interior_coefficient,
    interior_count,
    leading_affine_by_recurrence,
    leading_affine_pair,
    predicted_census,
    prefactor_poly,
    rank5_four_block_count,
    rank8_count,
    rank8_count_factored,
    rank8_fixed_k_row,
    rank8_row,
    rank8_special_row,
)
from .gf2 import (
    BitVec,
    GF2Matrix,
    PersymParams,
    build_block,
    build_matrix,
    rank,
    rank_rows,
    transpose,
)
from .verify import (
    CheckResult,
    VerificationReport,
    default_plan,
    run_plan,
    verify_case,
    verify_census_pair,
    verify_formula_identities,
    verify_rank8_identities,
)

__version__ = "0.1.0"

__all__ = [
    "AffineCheck",
    "BitVec",
    "BudgetExceededError",
    "CensusIntegrityError",
    "CensusSchemaError",
    "CheckResult",
    "ClosedFormPoly",
    "CoefficientFit",
    "GF2Matrix",
    "MomentValue",
    "NotCoveredError",
    "PersymParams",
    "RankCensus",
    "VerificationReport",
    "bracket_coefficient",
    "build_block",
    "build_matrix",
    "census_moment",
    "check_affine_top_coefficient",
    "complement_count",
    "count",
    "covered",
    "default_plan",
    "expand_product_form",
    "fit_in_2k",
    "fit_in_2n",
    "fit_report_json",
    "fixed_n_row",
    "formula_catalog",
    "full_census",
    "full_rank_count",
    "interior_coefficient",
    "interior_count",
    "kernel_moment",
    "leading_affine_by_recurrence",
    "leading_affine_pair",
    "load_census",
    "multiset_census",
    "predicted_census",
    "prefactor_poly",
    "rank",
    "rank5_four_block_count",
    "rank8_count",
    "rank8_count_factored",
    "rank8_fixed_k_row",
    "rank8_row",
    "rank8_special_row",
    "rank_rows",
    "refactor_product_form",
    "run_plan",
    "save_census",
    "solve_exact",
    "transpose",
    "verify_case",
    "verify_census_pair",
    "verify_formula_identities",
    "verify_rank8_identities",
    "__version__",
]
