"""
合作博弈实例与特征函数
计算特征函数 ν、锚定博弈（LP 松弛）以及四个博弈构成的取值链

博弈类型：
- packing: Ax ≤ b·w，最大化
- covering: Ax ≥ b·w，最小化（成本博弈）
- partition: Ax = b·w，最大化
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from coregame.services.domain import (
    Coalition, CoalitionIndexedDomain, DomainSpec, GeneratorConeDomain,
    enumerate_domain, grand_coalition, make_coalition
)
from coregame.services.exact import RatMatrix, RatVector, format_rational, format_vector, to_rational
from coregame.services.lp import LpProblem, LpSolution, solve, solve_optimal
from coregame.services.objective import (
    A_DEPENDENT, B_SCALED, Q_GENERATOR, STANDARD, BasisCoefficients, ObjectiveSpec, basis_coefficients
)
from coregame.utils.errors import (
    AssumptionViolation, DimensionError, InfeasibleSubprogramError, InvariantError, UsageError
)
from coregame.utils.helpers import all_coalitions

logger = logging.getLogger(__name__)

PACKING = 'packing'
COVERING = 'covering'
PARTITION = 'partition'
SENSES = (PACKING, COVERING, PARTITION)

_ROW_SENSE = {PACKING: '<=', COVERING: '>=', PARTITION: '='}


@dataclass(frozen=True, eq=False)
class GameInstance:
    """
    非线性参数规划诱导的合作博弈

    Attributes:
        A: n×m 的 0/1 约束矩阵，行对应玩家
        sense: packing / covering / partition
        domain: 定义域 X
        objective: 目标函数 f
        rhs_scale: 右端缩放因子 b（默认 1）
        name: 可选的实例名
    """
    A: RatMatrix
    sense: str
    domain: DomainSpec
    objective: ObjectiveSpec
    rhs_scale: Fraction = Fraction(1)
    name: str = ''

    def __post_init__(self):
        object.__setattr__(self, 'rhs_scale', to_rational(self.rhs_scale))
        if self.sense not in SENSES:
            raise UsageError(f"未知的博弈类型 {self.sense!r}，可选 {SENSES}")
        if self.rhs_scale <= 0:
            raise UsageError("右端缩放因子 b 必须为正")
        if self.A.n_rows < 1:
            raise UsageError("约束矩阵至少需要一行（一个玩家）")
        m = self.A.n_cols
        if self.domain.dimension != m:
            raise DimensionError(f"定义域维度 {self.domain.dimension} 与约束矩阵列数 {m} 不符")
        if self.objective.dimension != m:
            raise DimensionError(f"目标函数维度 {self.objective.dimension} 与约束矩阵列数 {m} 不符")
        if isinstance(self.domain, GeneratorConeDomain) and self.rhs_scale != 1:
            raise UsageError("生成元锥变体不支持右端缩放")
        if isinstance(self.domain, GeneratorConeDomain) and self.objective.requires_coalition:
            raise UsageError("生成元锥变体不支持联盟相关目标")
        if self.objective.requires_coalition and self.objective.n_players != self.A.n_rows:
            raise DimensionError("联盟相关目标的玩家数与约束矩阵行数不符")

    @property
    def n(self) -> int:
        return self.A.n_rows

    @property
    def m(self) -> int:
        return self.A.n_cols

    @property
    def maximizes(self) -> bool:
        return self.sense != COVERING

    @property
    def relaxation_variant(self) -> str:
        if isinstance(self.domain, GeneratorConeDomain):
            return Q_GENERATOR
        if self.objective.requires_coalition:
            return A_DEPENDENT
        if self.rhs_scale != 1:
            return B_SCALED
        return STANDARD

    @property
    def theorem(self) -> str:
        """适用的核刻画定理变体"""
        if isinstance(self.domain, GeneratorConeDomain):
            return 'q-generator'
        if self.objective.requires_coalition:
            return 'a-dependent'
        if isinstance(self.domain, CoalitionIndexedDomain):
            return 'coalition-domain'
        if self.rhs_scale != 1:
            return 'b-scaled'
        return self.sense

    @cached_property
    def coefficients(self) -> BasisCoefficients:
        return basis_coefficients(
            self.objective, self.relaxation_variant, A=self.A, b=self.rhs_scale, domain=self.domain
        )

    @cached_property
    def _entries(self) -> List[Tuple[RatVector, RatVector, Fraction]]:
        return self._build_entries(enumerate_domain(self.domain))

    @cached_property
    def _family_entries(self) -> Dict[Coalition, List[Tuple[RatVector, RatVector, Fraction]]]:
        return {}

    def _build_entries(self, points: Sequence[RatVector]):
        coeffs = self.coefficients
        return [(x, self.A.matvec(x), coeffs.relaxed_value(x)) for x in points]

    def entries_for(self, w: Coalition) -> List[Tuple[RatVector, RatVector, Fraction]]:
        """(x, Ax, F(x)) 列表；联盟相关定义域按 X(w) 取点"""
        if isinstance(self.domain, CoalitionIndexedDomain):
            cache = self._family_entries
            if w not in cache:
                cache[w] = self._build_entries(enumerate_domain(self.domain.domain_for(w)))
            return cache[w]
        return self._entries

    def f(self, x: RatVector, w: Coalition) -> Fraction:
        return self.objective.evaluate(x, w if self.objective.requires_coalition else None)

    def check_coalition(self, w: Sequence) -> Coalition:
        return make_coalition(w, self.n)


def better(g: GameInstance, a: Fraction, b: Fraction) -> bool:
    """按博弈方向判断 a 是否不劣于 b"""
    return a >= b if g.maximizes else a <= b


def _satisfies(sense: str, lhs: Sequence[Fraction], rhs: Sequence[Fraction]) -> bool:
    if sense == PACKING:
        return all(a <= r for a, r in zip(lhs, rhs))
    if sense == COVERING:
        return all(a >= r for a, r in zip(lhs, rhs))
    return all(a == r for a, r in zip(lhs, rhs))


def feasible_entries(g: GameInstance, w: Coalition) -> Iterator[Tuple[RatVector, RatVector, Fraction]]:
    """满足 Ax {≤,≥,=} b·w 的定义域点"""
    rhs = tuple(g.rhs_scale * b for b in w)
    for entry in g.entries_for(w):
        if _satisfies(g.sense, entry[1], rhs):
            yield entry


def _optimum(g: GameInstance, values: Iterator[Fraction]) -> Optional[Fraction]:
    best = None
    for v in values:
        if best is None or (v > best if g.maximizes else v < best):
            best = v
    return best


def nu(g: GameInstance, w: Sequence) -> Fraction:
    """
    特征函数 ν(w)，穷举定义域求精确最优值

    Raises:
        InfeasibleSubprogramError: covering/partition 子问题不可行
        TooLargeError: 定义域超过枚举上限
    """
    w = g.check_coalition(w)
    value = _optimum(g, (g.f(x, w) for x, _, _ in feasible_entries(g, w)))
    if value is None:
        raise InfeasibleSubprogramError(f"联盟 {w} 的子问题可行集为空", coalition=w)
    logger.debug(f"ν{w} = {format_rational(value)}")
    return value


def nu_or_none(g: GameInstance, w: Sequence) -> Optional[Fraction]:
    """不可行时返回 None 的 ν"""
    try:
        return nu(g, w)
    except InfeasibleSubprogramError:
        return None


def coalition_values(g: GameInstance, include_empty: bool = False) -> Dict[Coalition, Optional[Fraction]]:
    """全部联盟的 ν 值，不可行联盟记为 None"""
    return {w: nu_or_none(g, w) for w in all_coalitions(g.n, include_empty=include_empty)}


def anchor_problem(g: GameInstance, w: Sequence) -> LpProblem:
    """
    锚定博弈的 LP：在 x ≥ 0（或生成元坐标 z ≥ 0）上优化 F

    生成元变体使用约束矩阵 A·Q 与系数 (f(q_1),…,f(q_k))
    """
    w = g.check_coalition(w)
    coeffs = g.coefficients
    if isinstance(g.domain, GeneratorConeDomain):
        matrix = g.A.matmul(g.domain.generators)
    else:
        matrix = g.A
    return LpProblem(
        sense='max' if g.maximizes else 'min',
        c=coeffs.coeffs,
        A=matrix,
        row_senses=(_ROW_SENSE[g.sense],) * g.n,
        rhs=tuple(g.rhs_scale * b for b in w),
    )


def anchor_lp(g: GameInstance, w: Sequence) -> LpSolution:
    return solve(anchor_problem(g, w))


def anchor_value(g: GameInstance, w: Sequence) -> Fraction:
    """
    锚定博弈值

    Raises:
        SolverStatusError: LP 不可行或无界
    """
    w = g.check_coalition(w)
    sol = solve_optimal(anchor_problem(g, w), f"联盟 {w} 的锚定 LP ")
    return sol.value


def dual_to_member(g: GameInstance, y: Sequence[Fraction]) -> RatVector:
    """锚定 LP 的对偶解换算为分配向量（b-scaled 时乘以 b）"""
    return tuple(g.rhs_scale * v for v in y)


def member_to_dual(g: GameInstance, y: Sequence[Fraction]) -> RatVector:
    return tuple(Fraction(v) / g.rhs_scale for v in y)


def extension_points(g: GameInstance, w: Optional[Sequence] = None) -> List[RatVector]:
    """
    延拓点集 X̄ = {x ∈ X : f(x) = F(x)}

    联盟相关定义域或联盟相关目标需要给出 w
    """
    needs_w = isinstance(g.domain, CoalitionIndexedDomain) or g.objective.requires_coalition
    if needs_w and w is None:
        raise UsageError("联盟相关实例的延拓点需要给出联盟 w")
    w = g.check_coalition(w) if w is not None else grand_coalition(g.n)
    return [x for x, _, Fx in g.entries_for(w) if g.f(x, w) == Fx]


@dataclass
class ValueChain:
    """
    四个博弈的取值

    最大化博弈：anchor ≥ upper ≥ original ≥ lower；最小化博弈方向相反。
    lower 为 None 表示没有可行的延拓点
    """
    anchor: Fraction
    upper: Fraction
    original: Fraction
    lower: Optional[Fraction]
    maximizes: bool = True

    def as_tuple(self) -> Tuple:
        return (self.anchor, self.upper, self.original, self.lower)

    def to_dict(self) -> Dict:
        return {
            'anchor': format_rational(self.anchor),
            'upper': format_rational(self.upper),
            'original': format_rational(self.original),
            'lower': None if self.lower is None else format_rational(self.lower),
            'direction': 'max' if self.maximizes else 'min',
        }


def upper_value(g: GameInstance, w: Coalition) -> Fraction:
    """上博弈 ν_{X,F}(w)"""
    value = _optimum(g, (Fx for _, _, Fx in feasible_entries(g, w)))
    if value is None:
        raise InfeasibleSubprogramError(f"联盟 {w} 的子问题可行集为空", coalition=w)
    return value


def lower_value(g: GameInstance, w: Coalition) -> Optional[Fraction]:
    """下博弈 ν_{X̄,F}(w)，没有可行延拓点时返回 None"""
    return _optimum(g, (Fx for x, _, Fx in feasible_entries(g, w) if g.f(x, w) == Fx))


def value_chain(g: GameInstance, w: Sequence) -> ValueChain:
    """
    计算锚定、上、原、下四个博弈在 w 处的值并校验顺序

    Raises:
        AssumptionViolation: 上博弈与原博弈顺序被破坏（目标不满足个体次/超可加性）
        InvariantError: 其余顺序被破坏
    """
    w = g.check_coalition(w)
    original = nu(g, w)
    chain = ValueChain(
        anchor=anchor_value(g, w),
        upper=upper_value(g, w),
        original=original,
        lower=lower_value(g, w),
        maximizes=g.maximizes,
    )
    if not better(g, chain.anchor, chain.upper):
        raise InvariantError(f"锚定博弈值 {chain.anchor} 劣于上博弈值 {chain.upper}")
    if not better(g, chain.upper, chain.original):
        raise AssumptionViolation(
            f"上博弈值 {chain.upper} 劣于原博弈值 {chain.original}，目标函数不满足个体"
            f"{'次' if g.maximizes else '超'}可加性"
        )
    if chain.lower is not None and not better(g, chain.original, chain.lower):
        raise InvariantError(f"原博弈值 {chain.original} 劣于下博弈值 {chain.lower}")
    logger.info(f"取值链 {w}: {chain.to_dict()}")
    return chain


def describe(g: GameInstance) -> Dict:
    """实例摘要，用于报告"""
    return {
        'name': g.name,
        'n': g.n,
        'm': g.m,
        'sense': g.sense,
        'domain': g.domain.kind,
        'objective': g.objective.kind,
        'rhs_scale': format_rational(g.rhs_scale),
        'variant': g.relaxation_variant,
        'theorem': g.theorem,
        'coefficients': format_vector(g.coefficients.coeffs),
    }
