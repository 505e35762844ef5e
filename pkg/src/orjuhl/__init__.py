"""Exact symbolic kernel for conformal operator coefficient tables.

Expands powers of the Laplacian-type operators and their bilinear/linear
curved analogues over a free noncommutative algebra of curvature symbols,
both by definitional operator composition and by closed-form summation, and
verifies that the two agree with exact rational arithmetic.
"""

from .algebra import (
    BasisKey,
    CoeffTable,
    FormalExpr,
    VariantMismatch,
    add,
    attach_M,
    inject_f,
    pair_key,
    pair_product,
    plain_key,
    scale,
    table_add,
    table_scale,
    unit_plain,
    withf_key,
)
from .closed_forms import (
    cf_bilinear_general,
    cf_D2k,
    cf_D2kI,
    cf_DML_PN,
    cf_DML_PN_f,
    cf_linear_general,
    cf_P2k,
)
from .oracle import (
    compose_D,
    oracle_bilinear_general,
    oracle_D2k,
    oracle_D2kI,
    oracle_DML_PN,
    oracle_DML_PN_f,
    oracle_linear_general,
    oracle_P2k,
)
from .rationals import (
    ParamPoint,
    PoleError,
    Rational,
    SampleExhausted,
    gamma_ratio,
    gen_binomial,
    pochhammer,
    sample_rational,
)
from .serialization import (
    table_from_json,
    table_to_csv,
    table_to_json,
    table_to_latex,
)
from .verifier import (
    SUITES,
    ComparisonReport,
    SuiteConfig,
    SymmetryReport,
    check_symmetry,
    compare_tables,
    run_equivalence_suite,
)

__version__ = "1.0.0"
