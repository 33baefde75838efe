"""
应用族
投资组合博弈、最大割博弈、分类（assortment）博弈与组合比值博弈的实例构造和闭式核判定

这些族的约束矩阵都是单位阵（玩家 i 拥有物品 i），定义域为布尔立方体
"""

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Sequence, Tuple

from coregame.services.analysis import CoreReport
from coregame.services.domain import BooleanDomain, grand_coalition
from coregame.services.exact import (
    RatMatrix, RatVector, as_vector, format_rational, format_vector, to_rational
)
from coregame.services.game import (
    PACKING, GameInstance, anchor_problem, dual_to_member, feasible_entries
)
from coregame.services.lp import solve_optimal
from coregame.services.objective import QuadraticObjective, RatioObjective
from coregame.utils.errors import AssumptionViolation, DimensionError, UsageError
from coregame.utils.helpers import ensure_enumerable

logger = logging.getLogger(__name__)


def _identity_game(objective, name: str) -> GameInstance:
    m = objective.dimension
    return GameInstance(
        A=RatMatrix.identity(m),
        sense=PACKING,
        domain=BooleanDomain(m),
        objective=objective,
        name=name,
    )


def _check_weight_matrix(M: RatMatrix, what: str) -> None:
    if not M.is_square():
        raise DimensionError(f"{what}必须是方阵")
    if not M.is_symmetric():
        raise UsageError(f"{what}必须对称")
    negatives = [(i, j) for i in range(M.n_rows) for j in range(M.n_cols) if M[i, j] < 0]
    if negatives:
        i, j = negatives[0]
        raise AssumptionViolation(
            f"{what}含负元素 ({i}, {j}) = {format_rational(M[i, j])}，次模性不成立，定理前提失效",
            violations=[{'code': 'c', 'message': f"negative entry at ({i}, {j})"}],
        )


def portfolio_game(mu: Sequence, Sigma: RatMatrix, gamma_risk) -> GameInstance:
    """
    投资组合博弈：A = I，b = μ，Q = −(γ/2)Σ

    Raises:
        AssumptionViolation: Σ 含负相关
        UsageError: γ ≤ 0 或 Σ 不对称
    """
    mu = as_vector(mu)
    gamma_risk = to_rational(gamma_risk)
    if gamma_risk <= 0:
        raise UsageError("风险厌恶系数必须为正")
    if Sigma.shape != (len(mu), len(mu)):
        raise DimensionError(f"协方差矩阵形状 {Sigma.shape} 与收益向量长度 {len(mu)} 不符")
    _check_weight_matrix(Sigma, '协方差矩阵')
    factor = -gamma_risk / 2
    Q = RatMatrix([[factor * v for v in row] for row in Sigma.rows])
    return _identity_game(QuadraticObjective(mu, Q), 'portfolio')


def quadratic_identity_core(b: Sequence, Q: RatMatrix) -> CoreReport:
    """
    A = I 的二次博弈闭式判定（Q 非对角元 ≤ 0）

    令 P = {k : (b+q)_k > 0}。核非空当且仅当 Q 的支撑图限制在 P 上没有边；
    此时唯一核成员为 (b+q)⁺
    """
    b = as_vector(b)
    adjusted = tuple(bi + Q[i, i] for i, bi in enumerate(b))
    positive = [k for k, v in enumerate(adjusted) if v > 0]
    member = tuple(max(v, Fraction(0)) for v in adjusted)
    anchor = sum(member, Fraction(0))
    offending = next(
        ((i, j) for i, j in itertools.combinations(positive, 2) if Q[i, j] != 0), None
    )
    report = CoreReport(
        nonempty=offending is None,
        nu_grand=anchor if offending is None else None,
        anchor_grand=anchor,
        member=member if offending is None else None,
        theorem_used='quadratic-identity-closed-form',
        details={'risk_adjusted': format_vector(adjusted), 'positive_support': positive},
    )
    if offending is not None:
        i, j = offending
        report.details['offending_pair'] = [i, j]
        report.notes.append(
            f"资产 {i} 与 {j} 的风险调整收益均为正且 q_{i}{j} = {format_rational(Q[i, j])} ≠ 0"
        )
    return report


def portfolio_core_closed_form(mu: Sequence, Sigma: RatMatrix, gamma_risk) -> CoreReport:
    """投资组合博弈的闭式核判定，核成员唯一"""
    g = portfolio_game(mu, Sigma, gamma_risk)
    report = quadratic_identity_core(g.objective.b, g.objective.Q)
    report.theorem_used = 'portfolio-closed-form'
    return report


def maxcut_game(W: RatMatrix) -> GameInstance:
    """
    最大割博弈：b = W·1，Q = −W，f(x) 为顶点集 {i : x_i = 1} 的割权

    Raises:
        AssumptionViolation: W 含负权
        UsageError: W 不对称或对角线非零
    """
    _check_weight_matrix(W, '权矩阵')
    if any(v != 0 for v in W.diagonal()):
        raise UsageError("最大割权矩阵的对角线必须为 0")
    degrees = W.matvec((Fraction(1),) * W.n_rows)
    Q = RatMatrix([[-v for v in row] for row in W.rows])
    return _identity_game(QuadraticObjective(degrees, Q), 'maxcut')


@dataclass
class MaxCutAnalysis:
    gamma: Fraction
    total_weight: Fraction
    max_cut: Fraction
    best_cut: Tuple[int, ...]
    member: RatVector
    core_nonempty: bool

    def to_dict(self) -> Dict:
        return {
            'gamma': format_rational(self.gamma),
            'total_weight': format_rational(self.total_weight),
            'max_cut': format_rational(self.max_cut),
            'best_cut': list(self.best_cut),
            'member': format_vector(self.member),
            'core_nonempty': self.core_nonempty,
        }


def cut_weight(W: RatMatrix, side: Sequence[int]) -> Fraction:
    return sum(
        (W[i, j] for i in range(W.n_rows) for j in range(W.n_cols) if side[i] and not side[j]),
        Fraction(0),
    )


def maxcut_analysis(W: RatMatrix) -> MaxCutAnalysis:
    """
    gamma = 1ᵀW1 / maxcut(W)，最大割通过穷举 2^n 个割精确求得；4-核的唯一成员为 W·1

    无边图的核平凡非空，成员为 0，gamma = 1
    """
    g = maxcut_game(W)
    n = W.n_rows
    ensure_enumerable(2 ** n, '割')
    member = g.objective.b
    total = sum(member, Fraction(0))
    if total == 0:
        return MaxCutAnalysis(Fraction(1), total, Fraction(0), (0,) * n, member, True)
    best_value, best_side = Fraction(-1), None
    for side in itertools.product((0, 1), repeat=n):
        value = cut_weight(W, side)
        if value > best_value:
            best_value, best_side = value, side
    gamma = total / best_value
    logger.info(f"最大割: 1ᵀW1 = {format_rational(total)}，maxcut = {format_rational(best_value)}，"
                f"gamma = {format_rational(gamma)}")
    return MaxCutAnalysis(gamma, total, best_value, best_side, member, gamma == 1)


def maxcut_gamma(W: RatMatrix) -> Fraction:
    return maxcut_analysis(W).gamma


def assortment_game(p: Sequence, v: Sequence) -> GameInstance:
    """
    分类博弈：c_i = p_i v_i，d_i = v_i，d0 = 1

    Raises:
        UsageError: n < 2，或 p、v 不全为正
    """
    p, v = as_vector(p), as_vector(v)
    if len(p) != len(v):
        raise DimensionError("价格向量与偏好权重长度不符")
    if len(p) < 2:
        raise UsageError("分类博弈至少需要两个商品")
    if any(x <= 0 for x in p) or any(x <= 0 for x in v):
        raise UsageError("分类博弈要求价格与偏好权重全为正")
    c = tuple(pi * vi for pi, vi in zip(p, v))
    return _identity_game(RatioObjective(c, v, Fraction(1)), 'assortment')


@dataclass
class AssortmentAnalysis:
    core_nonempty: bool
    nu_grand: Fraction
    anchor_grand: Fraction
    gamma_min: Fraction
    n_core_member: RatVector
    best_assortment: Tuple[int, ...]

    def to_dict(self) -> Dict:
        return {
            'core_nonempty': self.core_nonempty,
            'nu_grand': format_rational(self.nu_grand),
            'anchor_grand': format_rational(self.anchor_grand),
            'gamma_min': format_rational(self.gamma_min),
            'n_core_member': format_vector(self.n_core_member),
            'best_assortment': list(self.best_assortment),
        }


def assortment_analysis(p: Sequence, v: Sequence) -> AssortmentAnalysis:
    """
    按价格降序取前缀求 ν(1)，anchor(1) = Σ p_i v_i / (1 + v_i)

    y_i = p_i v_i / (1 + v_i) 是 n-核成员
    """
    g = assortment_game(p, v)
    p, v = as_vector(p), as_vector(v)
    member = tuple(pi * vi / (1 + vi) for pi, vi in zip(p, v))
    anchor = sum(member, Fraction(0))
    order = sorted(range(len(p)), key=lambda i: -p[i])
    best, best_prefix = Fraction(0), ()
    revenue, weight = Fraction(0), Fraction(0)
    for k, i in enumerate(order, 1):
        revenue += p[i] * v[i]
        weight += v[i]
        value = revenue / (1 + weight)
        if value > best:
            best, best_prefix = value, tuple(sorted(order[:k]))
    logger.debug(f"{g.name}: ν(1) = {format_rational(best)}，anchor(1) = {format_rational(anchor)}")
    return AssortmentAnalysis(
        core_nonempty=best == anchor,
        nu_grand=best,
        anchor_grand=anchor,
        gamma_min=anchor / best,
        n_core_member=member,
        best_assortment=best_prefix,
    )


def ratio_game_core_check(g: GameInstance) -> CoreReport:
    """
    组合比值博弈的闭式核判定

    K = {i : d_i = 0}。核非空当且仅当
    anchor(1) = max{ max_i c_i/(d0+d_i), 在支撑于 K 的可行点上 Σ_k c_k x_k / d0 的最大值 }

    Raises:
        UsageError: 不是 packing 比值博弈，或 m < 2，或 c 不全为正
    """
    f = g.objective
    if not isinstance(f, RatioObjective):
        raise UsageError("组合比值博弈要求比值目标函数")
    if g.sense != PACKING or g.rhs_scale != 1:
        raise UsageError("组合比值博弈要求 packing 约束且 b = 1")
    if g.m < 2:
        raise UsageError("组合比值博弈至少需要两个变量")
    if any(ci <= 0 for ci in f.c):
        raise UsageError("组合比值博弈要求 c > 0")
    grand = grand_coalition(g.n)
    sol = solve_optimal(anchor_problem(g, grand), '大联盟锚定 LP ')
    single = max(ci / (f.d0 + di) for ci, di in zip(f.c, f.d))
    K = [i for i in range(g.m) if f.d[i] == 0]
    linear = Fraction(0)
    for x, _, _ in feasible_entries(g, grand):
        if all(x[i] == 0 for i in range(g.m) if i not in K):
            linear = max(linear, sum((f.c[k] * x[k] for k in K), Fraction(0)) / f.d0)
    best = max(single, linear)
    nonempty = best == sol.value
    return CoreReport(
        nonempty=nonempty,
        nu_grand=best if nonempty else None,
        anchor_grand=sol.value,
        member=dual_to_member(g, sol.dual) if nonempty else None,
        theorem_used='ratio-closed-form',
        details={
            'best_single_ratio': format_rational(single),
            'zero_denominator_columns': K,
            'linear_part_value': format_rational(linear),
        },
    )
