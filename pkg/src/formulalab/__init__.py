"""Exact formula-size oracle, cut/adversary measures, random projections
and shrinkage checks for small boolean functions.

The package is organized bottom-up: truth tables and projections are the
ground types, the size oracle gives exact minimum leaf counts up to four
variables, and everything above (measures, projection families, shrinkage
inequalities, the surjectivity constructions, communication protocols)
is verified against that oracle rather than against asymptotic formulas.
"""

from .formula import (
    And,
    AndN,
    Const,
    Formula,
    Leaf,
    Or,
    OrN,
    apply_projection,
    balance,
    demorgan_negate,
    eval_formula,
    format_formula,
    formula_depth,
    formula_size,
    formula_vars,
    parity_formula,
    parse_formula,
    random_formula,
    simplify,
    tt_from_formula,
)
from .hardfunc import (
    SurjInstance,
    andreev_F,
    andreev_arity,
    andreev_ratio_rows,
    andreev_size_depth4,
    andreev_textbook,
    andreev_textbook_size,
    composition_identity_check,
    params_from_n,
    surj_pair_distribution,
    surj_params_from_n,
    surj_tt,
    surj_uformula,
)
from .kw import Protocol, kw_protocol, kw_verify, leaf_count
from .measures import (
    PairDistribution,
    Relation,
    am_cert_value,
    am_from_khrapchenko,
    am_from_uniform_relation,
    amb_exact_max,
    amb_relation_value,
    info_inequality_check,
    khrapchenko_K,
    khrapchenko_Kmin,
    khrapchenko_cert_value,
    km_binary,
    kmin_all,
    kmin_witness,
    pair_distribution,
    relation,
    relation_from_sets,
    uniform_khrapchenko_distribution,
    wa2_from_am,
    wa2_scheme_value,
)
from .projdist import (
    ExactProjDist,
    NotFixingError,
    SamplerProjDist,
    adversary_to_hiding,
    condition_on_filter,
    exact_dist,
    format_proj_dist,
    generalized_hiding_check,
    hiding_to_fixing,
    is_fixing,
    is_hiding,
    join,
    m_fold,
    majority_block,
    p_random_restriction,
    parse_proj_dist,
    random_edge,
    random_m_alive,
    tightest_fixing,
    tightest_hiding,
)
from .projection import (
    Projection,
    assignment_projection,
    format_projection,
    identity_restriction,
    parse_projection,
    random_projection,
)
from .shrinkage import (
    conditional_shrink_check,
    expected_L_exact,
    expected_L_mc,
    fixing_bound,
    hiding_bound,
    parity_curve_row,
    prob_single_literal,
    reduction_bound_check,
    shrinkage_curve,
    single_literal_check,
)
from .sizetable import (
    D_exact,
    L_exact,
    build_size_table,
    get_table,
    max_L_function,
    witness_formula,
)
from .truthtable import (
    TruthTable,
    and_table,
    compose,
    const_table,
    literal_table,
    majority_table,
    named_table,
    negate_inputs,
    or_table,
    parity_table,
    parse_table_spec,
    random_table,
    restrict_tt,
    var_table,
)
from .verify import run_suite

__version__ = "0.1.0"
