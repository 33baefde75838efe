"""
coregame services 包
精确有理数运算、定义域与目标函数、线性规划、合作博弈核分析与应用族
"""

# 精确运算
from coregame.services.exact import (
    RatMatrix,
    to_rational,
    format_rational,
    format_vector,
    as_vector,
    dot,
    gauss_solve,
    inverse,
    left_pseudo_inverse
)

# 定义域
from coregame.services.domain import (
    DomainSpec,
    BooleanDomain,
    BooleanCardinalityDomain,
    BooleanKnapsackDomain,
    IntegerBoxDomain,
    ExplicitDomain,
    GeneratorConeDomain,
    CoalitionIndexedDomain,
    AssumptionReport,
    enumerate_domain,
    check_assumptions,
    make_coalition,
    grand_coalition
)

# 目标函数
from coregame.services.objective import (
    ObjectiveSpec,
    LinearObjective,
    QuadraticObjective,
    RatioObjective,
    TableObjective,
    ScaledObjective,
    SumObjective,
    MaxObjective,
    MinObjective,
    PrecomposedObjective,
    CoalitionDependentObjective,
    BasisCoefficients,
    basis_coefficients,
    evaluate
)

# 函数类
from coregame.services.function_classes import (
    ISVerdict,
    ClassReport,
    is_individually_subadditive,
    class_checks,
    quadratic_is_characterization,
    relaxation_kind,
    relaxation_fact_check
)

# 线性规划
from coregame.services.lp import (
    LpProblem,
    LpSolution,
    solve,
    solve_optimal,
    is_dual_optimal,
    dual_problem,
    enumerate_optimal_dual_vertices
)

# 博弈
from coregame.services.game import (
    GameInstance,
    ValueChain,
    nu,
    coalition_values,
    anchor_problem,
    anchor_lp,
    anchor_value,
    extension_points,
    value_chain,
    describe
)

# 核分析
from coregame.services.analysis import (
    CoreReport,
    BondarevaReport,
    core_nonempty,
    is_core_member,
    brute_force_member_check,
    integrality_check,
    equivalence_check,
    bondareva_oracle,
    tbc_value,
    gamma_analysis,
    superadditivity_probe
)

# 应用族
from coregame.services.families import (
    portfolio_game,
    portfolio_core_closed_form,
    maxcut_game,
    maxcut_analysis,
    maxcut_gamma,
    assortment_game,
    assortment_analysis,
    ratio_game_core_check
)

from coregame.services.matching import (
    WeightedGraph,
    max_weight_matching,
    quadratic_matching_game,
    qmatching_core_check,
    ratio_matching_game,
    rmatching_core_check
)

from coregame.services.sat_reduction import (
    SatInstance,
    ConflictStructure,
    parse_sat,
    serialize_sat,
    sat_reduction,
    verify_reduction,
    sat_quadratic_matching_game
)

# 文件格式
from coregame.services.instance_io import (
    load_instance,
    parse_instance,
    instance_to_dict,
    dump_instance
)

__all__ = [
    # 精确运算
    'RatMatrix',
    'to_rational',
    'format_rational',
    'format_vector',
    'as_vector',
    'dot',
    'gauss_solve',
    'inverse',
    'left_pseudo_inverse',

    # 定义域
    'DomainSpec',
    'BooleanDomain',
    'BooleanCardinalityDomain',
    'BooleanKnapsackDomain',
    'IntegerBoxDomain',
    'ExplicitDomain',
    'GeneratorConeDomain',
    'CoalitionIndexedDomain',
    'AssumptionReport',
    'enumerate_domain',
    'check_assumptions',
    'make_coalition',
    'grand_coalition',

    # 目标函数
    'ObjectiveSpec',
    'LinearObjective',
    'QuadraticObjective',
    'RatioObjective',
    'TableObjective',
    'ScaledObjective',
    'SumObjective',
    'MaxObjective',
    'MinObjective',
    'PrecomposedObjective',
    'CoalitionDependentObjective',
    'BasisCoefficients',
    'basis_coefficients',
    'evaluate',

    # 函数类
    'ISVerdict',
    'ClassReport',
    'is_individually_subadditive',
    'class_checks',
    'quadratic_is_characterization',
    'relaxation_kind',
    'relaxation_fact_check',

    # 线性规划
    'LpProblem',
    'LpSolution',
    'solve',
    'solve_optimal',
    'is_dual_optimal',
    'dual_problem',
    'enumerate_optimal_dual_vertices',

    # 博弈
    'GameInstance',
    'ValueChain',
    'nu',
    'coalition_values',
    'anchor_problem',
    'anchor_lp',
    'anchor_value',
    'extension_points',
    'value_chain',
    'describe',

    # 核分析
    'CoreReport',
    'BondarevaReport',
    'core_nonempty',
    'is_core_member',
    'brute_force_member_check',
    'integrality_check',
    'equivalence_check',
    'bondareva_oracle',
    'tbc_value',
    'gamma_analysis',
    'superadditivity_probe',

    # 应用族
    'portfolio_game',
    'portfolio_core_closed_form',
    'maxcut_game',
    'maxcut_analysis',
    'maxcut_gamma',
    'assortment_game',
    'assortment_analysis',
    'ratio_game_core_check',
    'WeightedGraph',
    'max_weight_matching',
    'quadratic_matching_game',
    'qmatching_core_check',
    'ratio_matching_game',
    'rmatching_core_check',
    'SatInstance',
    'ConflictStructure',
    'parse_sat',
    'serialize_sat',
    'sat_reduction',
    'verify_reduction',
    'sat_quadratic_matching_game',

    # 文件格式
    'load_instance',
    'parse_instance',
    'instance_to_dict',
    'dump_instance',
]
