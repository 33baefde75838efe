"""
核分析服务
核非空判定、核成员提取与校验、整数性检查、等价刻画交叉检查、
Bondareva-Shapley 暴力预言机、全平衡覆盖博弈、gamma 近似核与超可加性探测
"""

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from coregame.config import (
    MAX_ORACLE_PLAYERS, MAX_PROBE_PLAYERS, MAX_TBC_PLAYERS
)
from coregame.services.domain import (
    BooleanDomain, Coalition, GeneratorConeDomain, check_assumptions, grand_coalition
)
from coregame.services.exact import (
    RatMatrix, RatVector, as_vector, dot, format_rational, format_vector
)
from coregame.services.function_classes import ISVerdict, is_individually_subadditive
from coregame.services.game import (
    COVERING, PACKING, PARTITION, GameInstance, anchor_problem, better, coalition_values,
    dual_to_member, feasible_entries, lower_value, member_to_dual, nu, nu_or_none, upper_value
)
from coregame.services.lp import LpProblem, is_dual_optimal, solve, solve_optimal
from coregame.utils.errors import (
    AssumptionViolation, InfeasibleSubprogramError, InvariantError, TooLargeError,
    UsageError, ZeroGrandValueError
)
from coregame.utils.helpers import all_coalitions, ensure_dimension, ensure_enumerable

logger = logging.getLogger(__name__)


def _fmt(q: Optional[Fraction]) -> Optional[str]:
    return None if q is None else format_rational(q)


def _fmt_vec(v: Optional[Sequence[Fraction]]) -> Optional[List[str]]:
    return None if v is None else format_vector(v)


@dataclass
class CoreReport:
    """
    核非空判定结果

    Attributes:
        nonempty: 核是否非空
        nu_grand: ν(1)，闭式判定无法给出时为 None
        anchor_grand: 锚定博弈值
        member: 核成员（非空时）
        gamma_min: 最小近似核参数
        theorem_used: 所用定理变体
        notes: 附注
    """
    nonempty: bool
    nu_grand: Optional[Fraction]
    anchor_grand: Fraction
    member: Optional[RatVector] = None
    gamma_min: Optional[Fraction] = None
    theorem_used: str = ''
    notes: List[str] = field(default_factory=list)
    details: Dict = field(default_factory=dict)

    def to_dict(self) -> Dict:
        out = {
            'nonempty': self.nonempty,
            'nu_grand': _fmt(self.nu_grand),
            'anchor_grand': _fmt(self.anchor_grand),
            'member': _fmt_vec(self.member),
            'gamma_min': _fmt(self.gamma_min),
            'theorem_used': self.theorem_used,
            'notes': list(self.notes),
        }
        if self.details:
            out['details'] = self.details
        return out


def validate_instance(g: GameInstance) -> List[str]:
    """
    校验结构性假设

    Returns:
        附注列表

    Raises:
        AssumptionViolation: 假设不成立
    """
    report = check_assumptions(g.domain, g.A, g.rhs_scale)
    if not report.ok:
        raise AssumptionViolation(
            '结构性假设不成立: ' + '; '.join(f"({v.code}) {v.message}" for v in report.violations),
            violations=[v.to_dict() for v in report.violations],
        )
    return list(report.notes)


def check_hypothesis(g: GameInstance) -> ISVerdict:
    """检查与博弈方向匹配的个体次可加性（covering 为个体超可加性）"""
    return is_individually_subadditive(
        g.objective, g.domain, g.relaxation_variant, A=g.A, b=g.rhs_scale,
        superadditive=not g.maximizes,
    )


def require_hypotheses(g: GameInstance) -> List[str]:
    """
    校验结构性假设与个体次/超可加性，定理路径的前置条件

    Raises:
        AssumptionViolation: 任一假设不成立
    """
    notes = validate_instance(g)
    verdict = check_hypothesis(g)
    if not verdict.holds:
        prop = '个体超可加性' if verdict.superadditive else '个体次可加性'
        raise AssumptionViolation(
            f"目标函数不满足{prop}（{verdict.variant}）：在 {format_vector(verdict.witness)} 处 "
            f"f = {format_rational(verdict.f_value)}，F = {format_rational(verdict.relaxed_value)}",
            violations=[{'code': 'c', 'message': f"witness {format_vector(verdict.witness)}"}],
        )
    return notes


def _partition_sign_check(g: GameInstance, anchor: Fraction, notes: List[str]) -> Dict:
    """划分博弈：比较自由符号对偶与 y ≥ 0 的读法"""
    p = anchor_problem(g, grand_coalition(g.n))
    restricted = LpProblem(
        sense='min',
        c=(Fraction(1),) * g.n,
        A=p.A.transpose(),
        row_senses=('>=',) * p.n_vars,
        rhs=p.c,
    )
    sol = solve(restricted)
    value = sol.value if sol.is_optimal else None
    notes.append("划分博弈定理陈述中的 ν^cov(1) 按 ν^ptn(1) 处理")
    if value != anchor:
        msg = (f"划分博弈对偶符号约定不一致: 自由符号对偶值 {format_rational(anchor)}，"
               f"y ≥ 0 读法的值 {_fmt(value) if value is not None else sol.status}")
        logger.warning(msg)
        notes.append(msg)
    return {'nonnegative_dual_value': _fmt(value), 'nonnegative_dual_status': sol.status}


def core_nonempty(g: GameInstance) -> CoreReport:
    """
    按核刻画定理判定核是否非空

    比较 ν(1) 与锚定博弈值 anchor(1)，相等时取锚定 LP 的对偶最优解作为核成员

    Raises:
        AssumptionViolation: 定理前提不成立
        InfeasibleSubprogramError: 大联盟子问题不可行
        SolverStatusError: 锚定 LP 不可行或无界
    """
    notes = require_hypotheses(g)
    grand = grand_coalition(g.n)
    nu_grand = nu(g, grand)
    sol = solve_optimal(anchor_problem(g, grand), '大联盟锚定 LP ')
    anchor = sol.value
    nonempty = nu_grand == anchor
    report = CoreReport(
        nonempty=nonempty,
        nu_grand=nu_grand,
        anchor_grand=anchor,
        theorem_used=g.theorem,
        notes=notes,
    )
    if nonempty:
        report.member = dual_to_member(g, sol.dual)
    if g.maximizes and nu_grand > 0:
        report.gamma_min = anchor / nu_grand
    if g.sense == COVERING:
        report.notes.append("成本博弈的核: 1ᵀy = ν(1)，aᵀy ≤ ν(a)")
    if g.sense == PARTITION:
        report.details['partition_sign_check'] = _partition_sign_check(g, anchor, report.notes)
    if g.rhs_scale != 1:
        report.notes.append(f"对偶解已按 y = b·z 换算（b = {format_rational(g.rhs_scale)}）")
    logger.info(
        f"核判定: ν(1) = {format_rational(nu_grand)}, anchor(1) = {format_rational(anchor)}, "
        f"{'非空' if nonempty else '为空'}"
    )
    return report


def is_core_member(g: GameInstance, y: Sequence) -> bool:
    """
    y 是否为核成员：核非空且 y 是大联盟锚定 LP 的对偶最优解
    """
    y = as_vector(y)
    if len(y) != g.n:
        return False
    grand = grand_coalition(g.n)
    p = anchor_problem(g, grand)
    sol = solve_optimal(p, '大联盟锚定 LP ')
    if nu(g, grand) != sol.value:
        return False
    return is_dual_optimal(p, member_to_dual(g, y))


@dataclass
class MembershipCheck:
    """2^n 个联盟约束的暴力校验结果"""
    holds: bool
    total: Fraction
    nu_grand: Fraction
    violated: Optional[Coalition] = None
    violated_value: Optional[Fraction] = None
    skipped: List[Coalition] = field(default_factory=list)

    def to_dict(self) -> Dict:
        return {
            'holds': self.holds,
            'total': format_rational(self.total),
            'nu_grand': format_rational(self.nu_grand),
            'violated': None if self.violated is None else list(self.violated),
            'violated_value': _fmt(self.violated_value),
            'skipped': [list(w) for w in self.skipped],
        }


def brute_force_member_check(g: GameInstance, y: Sequence, grand_equality: bool = True,
                             values: Optional[Dict] = None) -> MembershipCheck:
    """
    逐个联盟检查 aᵀy ≥ ν(a)（成本博弈为 ≤），并检查 1ᵀy = ν(1)

    Args:
        grand_equality: 为 False 时只检查联盟约束（用于 gamma 近似核成员）
        values: 可选的预先计算的联盟值
    """
    ensure_dimension(g.n, MAX_ORACLE_PLAYERS, '联盟枚举的玩家数')
    y = as_vector(y)
    values = values if values is not None else coalition_values(g)
    grand = grand_coalition(g.n)
    if values.get(grand) is None:
        raise InfeasibleSubprogramError("大联盟子问题不可行", coalition=grand)
    total = sum(y, Fraction(0))
    check = MembershipCheck(holds=True, total=total, nu_grand=values[grand])
    if grand_equality and total != values[grand]:
        check.holds = False
        check.violated = grand
        check.violated_value = values[grand]
        return check
    for a, v in values.items():
        if not any(a):
            continue
        if v is None:
            check.skipped.append(a)
            continue
        if not better(g, dot(a, y), v):
            check.holds = False
            check.violated = a
            check.violated_value = v
            break
    return check


@dataclass
class IntegralityReport:
    relax_has_integer_optimum: bool
    integer_optimum: Optional[RatVector]
    anchor_value: Fraction
    core_nonempty: bool
    converse_note: str

    def to_dict(self) -> Dict:
        return {
            'relax_has_integer_optimum': self.relax_has_integer_optimum,
            'integer_optimum': _fmt_vec(self.integer_optimum),
            'anchor_value': format_rational(self.anchor_value),
            'core_nonempty': self.core_nonempty,
            'converse_note': self.converse_note,
        }


CONVERSE_NOTE = "锚定 LP 存在整数最优解只是核非空的必要条件，并不充分"


def integrality_check(g: GameInstance) -> IntegralityReport:
    """
    在锚定 LP 的最优面上搜索整数点

    核非空时整数最优解必然存在；反之不成立

    Raises:
        UsageError: 定义域不是布尔超立方体（生成元锥变体也不适用）
        InvariantError: 核非空却找不到整数最优解
    """
    if isinstance(g.domain, GeneratorConeDomain):
        raise UsageError("整数性检查不适用于生成元锥变体")
    if not isinstance(g.domain, BooleanDomain):
        raise UsageError(f"整数性检查要求布尔定义域，实际为 {g.domain.kind}")
    grand = grand_coalition(g.n)
    p = anchor_problem(g, grand)
    sol = solve_optimal(p, '大联盟锚定 LP ')
    bound = int(g.rhs_scale)  # A 无零列，x_j ≤ b
    ensure_enumerable((bound + 1) ** g.m, '整数点')
    found = None
    rhs = p.rhs
    for x in itertools.product(range(bound + 1), repeat=g.m):
        x = tuple(Fraction(v) for v in x)
        lhs = g.A.matvec(x)
        if g.sense == PACKING:
            ok = all(a <= r for a, r in zip(lhs, rhs))
        elif g.sense == COVERING:
            ok = all(a >= r for a, r in zip(lhs, rhs))
        else:
            ok = lhs == rhs
        if ok and dot(p.c, x) == sol.value:
            found = x
            break
    nonempty = nu(g, grand) == sol.value
    if nonempty and found is None:
        raise InvariantError("核非空但锚定 LP 没有整数最优解")
    return IntegralityReport(found is not None, found, sol.value, nonempty, CONVERSE_NOTE)


@dataclass
class EquivalenceReport:
    """三种刻画的判定结果"""
    main: bool
    upper_condition_i: bool
    upper_condition_ii: bool
    lower: bool
    nu_grand: Fraction
    anchor_grand: Fraction
    upper_grand: Fraction
    lower_grand: Optional[Fraction]

    @property
    def upper(self) -> bool:
        return self.upper_condition_i and self.upper_condition_ii

    @property
    def agree(self) -> bool:
        return self.main == self.upper == self.lower

    def to_dict(self) -> Dict:
        return {
            'main': self.main,
            'upper': self.upper,
            'upper_condition_i': self.upper_condition_i,
            'upper_condition_ii': self.upper_condition_ii,
            'lower': self.lower,
            'agree': self.agree,
            'nu_grand': format_rational(self.nu_grand),
            'anchor_grand': format_rational(self.anchor_grand),
            'upper_grand': format_rational(self.upper_grand),
            'lower_grand': _fmt(self.lower_grand),
        }


def equivalence_check(g: GameInstance) -> EquivalenceReport:
    """
    交叉检查三种核非空刻画

    (A) ν(1) = anchor(1)
    (B) upper(1) = anchor(1)，且存在 F 的最优点 x* 满足 f(x*) = F(x*)
    (C) lower(1) = anchor(1)

    Raises:
        InvariantError: 三者不一致
    """
    require_hypotheses(g)
    grand = grand_coalition(g.n)
    nu_grand = nu(g, grand)
    anchor = solve_optimal(anchor_problem(g, grand), '大联盟锚定 LP ').value
    upper = upper_value(g, grand)
    lower = lower_value(g, grand)
    argmax_ext = any(
        Fx == upper and g.f(x, grand) == Fx for x, _, Fx in feasible_entries(g, grand)
    )
    report = EquivalenceReport(
        main=nu_grand == anchor,
        upper_condition_i=upper == anchor,
        upper_condition_ii=argmax_ext,
        lower=lower is not None and lower == anchor,
        nu_grand=nu_grand,
        anchor_grand=anchor,
        upper_grand=upper,
        lower_grand=lower,
    )
    if not report.agree:
        raise InvariantError(f"三种刻画不一致: {report.to_dict()}")
    return report


@dataclass
class BondarevaReport:
    """Bondareva-Shapley 预言机结果"""
    coalition_values: Dict[Coalition, Optional[Fraction]]
    lp_value: Fraction
    nonempty: bool
    core_member: Optional[RatVector] = None
    infeasible_coalitions: List[Coalition] = field(default_factory=list)

    def to_dict(self) -> Dict:
        return {
            'coalition_values': {
                ''.join(map(str, w)): _fmt(v) for w, v in self.coalition_values.items()
            },
            'lp_value': format_rational(self.lp_value),
            'nonempty': self.nonempty,
            'core_member': _fmt_vec(self.core_member),
            'infeasible_coalitions': [''.join(map(str, w)) for w in self.infeasible_coalitions],
        }


def bondareva_oracle(g: GameInstance) -> BondarevaReport:
    """
    不依赖松弛的核非空判定

    收益博弈: min 1ᵀy s.t. aᵀy ≥ ν(a)，a ≠ 0；成本博弈: max 1ᵀy s.t. aᵀy ≤ ν(a)。
    y 为自由变量，不可行联盟不产生约束。核非空当且仅当最优值等于 ν(1)

    Raises:
        TooLargeError: 玩家数超过上限
        InfeasibleSubprogramError: 大联盟子问题不可行
    """
    ensure_dimension(g.n, MAX_ORACLE_PLAYERS, 'Bondareva 预言机的玩家数')
    values = coalition_values(g)
    grand = grand_coalition(g.n)
    if values.get(grand) is None:
        raise InfeasibleSubprogramError("大联盟子问题不可行", coalition=grand)
    rows = [a for a, v in values.items() if v is not None]
    infeasible = [a for a, v in values.items() if v is None]
    p = LpProblem(
        sense='min' if g.maximizes else 'max',
        c=(Fraction(1),) * g.n,
        A=RatMatrix(rows, n_cols=g.n),
        row_senses=('>=' if g.maximizes else '<=',) * len(rows),
        rhs=tuple(values[a] for a in rows),
        var_signs=('free',) * g.n,
    )
    sol = solve_optimal(p, 'Bondareva LP ')
    nonempty = sol.value == values[grand]
    if infeasible:
        logger.info(f"{len(infeasible)} 个联盟的子问题不可行，已跳过")
    return BondarevaReport(
        coalition_values=values,
        lp_value=sol.value,
        nonempty=nonempty,
        core_member=sol.primal if nonempty else None,
        infeasible_coalitions=infeasible,
    )


def tbc_value(g: GameInstance, w: Sequence) -> Fraction:
    """
    全平衡覆盖博弈值 max Σ ν(a)λ(a) s.t. Σ aλ(a) = w，λ ≥ 0（成本博弈取 min）

    Raises:
        TooLargeError: 玩家数超过上限
        SolverStatusError: LP 不可行
    """
    ensure_dimension(g.n, MAX_TBC_PLAYERS, '全平衡覆盖博弈的玩家数')
    w = g.check_coalition(w)
    support = [i for i in range(g.n) if w[i]]
    if not support:
        return Fraction(0)
    cols = []
    weights = []
    for a in all_coalitions(g.n, include_empty=False):
        if any(a[i] > w[i] for i in range(g.n)):
            continue
        v = nu_or_none(g, a)
        if v is None:
            continue
        cols.append(a)
        weights.append(v)
    p = LpProblem(
        sense='max' if g.maximizes else 'min',
        c=tuple(weights),
        A=RatMatrix([[a[i] for a in cols] for i in support], n_cols=len(cols)),
        row_senses=('=',) * len(support),
        rhs=(Fraction(1),) * len(support),
    )
    return solve_optimal(p, f"联盟 {w} 的全平衡覆盖 LP ").value


@dataclass
class GammaReport:
    gamma_min: Fraction
    nu_grand: Fraction
    anchor_grand: Fraction
    member: RatVector
    coalition_check: Optional[bool] = None

    def to_dict(self) -> Dict:
        return {
            'gamma_min': format_rational(self.gamma_min),
            'nu_grand': format_rational(self.nu_grand),
            'anchor_grand': format_rational(self.anchor_grand),
            'member': format_vector(self.member),
            'coalition_check': self.coalition_check,
        }


def gamma_analysis(g: GameInstance) -> GammaReport:
    """
    最小近似核参数 gamma_min = anchor(1)/ν(1)，近似核成员为锚定 LP 的对偶最优解

    玩家数不超过 MAX_ORACLE_PLAYERS 时额外暴力校验成员满足全部联盟约束

    Raises:
        UsageError: 成本博弈
        ZeroGrandValueError: ν(1) ≤ 0
    """
    if not g.maximizes:
        raise UsageError("gamma 近似核只对收益博弈定义")
    require_hypotheses(g)
    grand = grand_coalition(g.n)
    nu_grand = nu(g, grand)
    if nu_grand <= 0:
        raise ZeroGrandValueError(f"ν(1) = {format_rational(nu_grand)}，gamma 无定义")
    sol = solve_optimal(anchor_problem(g, grand), '大联盟锚定 LP ')
    member = dual_to_member(g, sol.dual)
    report = GammaReport(sol.value / nu_grand, nu_grand, sol.value, member)
    if g.n <= MAX_ORACLE_PLAYERS and _coalition_budget_ok(g):
        check = brute_force_member_check(g, member, grand_equality=False)
        report.coalition_check = check.holds
        if not check.holds:
            raise InvariantError(f"近似核成员违反联盟约束 {check.violated}")
    return report


def _coalition_budget_ok(g: GameInstance) -> bool:
    """2^n 次枚举求值的总量是否可接受"""
    try:
        ensure_enumerable(2 ** g.n * max(1, len(g.entries_for(grand_coalition(g.n)))), '联盟求值')
    except TooLargeError:
        return False
    return True


@dataclass
class ProbeReport:
    """超可加性探测结果，只作探索，不作断言"""
    holds: bool
    pairs_checked: int
    witness: Optional[Tuple[Coalition, Coalition]] = None
    witness_values: Optional[Tuple[Fraction, Fraction, Fraction]] = None

    def to_dict(self) -> Dict:
        out = {'holds': self.holds, 'pairs_checked': self.pairs_checked}
        if self.witness is not None:
            w, u = self.witness
            out['witness'] = {
                'w': list(w), 'u': list(u),
                'nu_w': format_rational(self.witness_values[0]),
                'nu_u': format_rational(self.witness_values[1]),
                'nu_union': format_rational(self.witness_values[2]),
            }
        return out


def superadditivity_probe(g: GameInstance) -> ProbeReport:
    """
    穷举不交联盟对，检查 ν(w ∨ u) ≥ ν(w) + ν(u)（成本博弈检查次可加性）

    Raises:
        TooLargeError: 玩家数超过上限
    """
    ensure_dimension(g.n, MAX_PROBE_PLAYERS, '超可加性探测的玩家数')
    values = coalition_values(g)
    report = ProbeReport(holds=True, pairs_checked=0)
    coalitions = [w for w in all_coalitions(g.n, include_empty=False)]
    for w in coalitions:
        if values[w] is None:
            continue
        free = [i for i in range(g.n) if not w[i]]
        for bits in itertools.product((0, 1), repeat=len(free)):
            if not any(bits):
                continue
            u = [0] * g.n
            for i, b in zip(free, bits):
                u[i] = b
            u = tuple(u)
            if u < w or values[u] is None:
                continue
            union = tuple(a | b for a, b in zip(w, u))
            if values[union] is None:
                continue
            report.pairs_checked += 1
            joint = values[w] + values[u]
            if not better(g, values[union], joint):
                report.holds = False
                report.witness = (w, u)
                report.witness_values = (values[w], values[u], values[union])
                logger.info(f"超可加性不成立: ν{w} + ν{u} 与 ν{union}")
                return report
    return report
