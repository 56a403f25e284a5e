"""Skew Hadamard difference sets and Paley-type partial difference sets from
unions of cyclotomic classes, verified by difference counting and character sums."""

__version__ = "0.1.0"

from .charsums import (
    BCData,
    GaussSumRecord,
    check_basic_identities,
    closed_form_index2,
    compare_with_closed_form,
    davenport_hasse_check,
    gauss_sum,
    gauss_sum_table,
    restricted_sums,
    solve_bc,
)
from .construct import (
    construct_case_A,
    construct_case_B,
    normalize_generator_case_B,
    random_transversal,
    validate_transversal,
)
from .cyclotomy import (
    CandidateSet,
    CyclotomicScheme,
    IndexSet,
    build_scheme,
    union_of_classes,
)
from .finite_field import (
    DEFAULT_BUDGET,
    FieldElement,
    FiniteField,
    build_field,
    dlog,
    element_order,
    field_from_dict,
    invert_generator,
    trace,
)
from .numtheory import (
    CaseAParams,
    CaseBParams,
    case_a_params,
    case_b_params,
    class_number,
    digit_factorial_t,
    digit_sum_s,
    is_index_two,
    mult_order,
    search_case_A,
    search_case_B,
)
from .verify import (
    NEITHER,
    PALEY_PDS,
    SKEW_HDS,
    VerificationReport,
    check_skew,
    difference_histogram,
    predicted_sign_pattern,
    sign_pattern_check,
    verify_by_characters,
    verify_paley_pds_brute,
    verify_skew_hds_brute,
    warmup_kernels,
)
