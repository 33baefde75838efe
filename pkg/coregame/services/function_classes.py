"""
函数类判定
个体次可加性（IS）检查、布尔格上的函数类检查、二次函数 IS 的闭式判定、
松弛与延拓的区分

函数类（布尔格 {0,1}^m 上）：
- subadditive: 不交的 x, y 满足 f(x+y) ≤ f(x)+f(y)
- submodular: 边际收益递减
- grand_fractionally_subadditive: 只约束大联盟的平衡覆盖
- fractionally_subadditive: 对每个 v 的平衡覆盖
- monotone: x ≤ y ⇒ f(x) ≤ f(y)
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from coregame.config import MAX_CLASS_CHECK_DIM
from coregame.services.domain import (
    CoalitionIndexedDomain, DomainSpec, enumerate_domain
)
from coregame.services.exact import RatMatrix, RatVector, format_rational, format_vector
from coregame.services.lp import INFEASIBLE, LpProblem, OPTIMAL, UNBOUNDED, solve
from coregame.services.objective import (
    A_DEPENDENT, STANDARD, BasisCoefficients, ObjectiveSpec, basis_coefficients
)
from coregame.utils.errors import UsageError
from coregame.utils.helpers import boolean_vectors, ensure_dimension, unit_vector

logger = logging.getLogger(__name__)

CLASS_NAMES = (
    'individually_subadditive',
    'subadditive',
    'submodular',
    'grand_fractionally_subadditive',
    'fractionally_subadditive',
    'monotone',
)


@dataclass
class ISVerdict:
    """个体次/超可加性判定结果，失败时给出见证点"""
    holds: bool
    variant: str
    superadditive: bool = False
    witness: Optional[RatVector] = None
    witness_coalition: Optional[Tuple[int, ...]] = None
    f_value: Optional[Fraction] = None
    relaxed_value: Optional[Fraction] = None
    coefficients: Optional[BasisCoefficients] = None
    checked_points: int = 0

    def to_dict(self) -> Dict:
        out = {
            'holds': self.holds,
            'property': 'individually_superadditive' if self.superadditive else 'individually_subadditive',
            'variant': self.variant,
            'checked_points': self.checked_points,
        }
        if self.coefficients is not None:
            out['coefficients'] = self.coefficients.to_dict()
        if self.witness is not None:
            out['witness'] = format_vector(self.witness)
            out['f_value'] = format_rational(self.f_value)
            out['relaxed_value'] = format_rational(self.relaxed_value)
            if self.witness_coalition is not None:
                out['witness_coalition'] = list(self.witness_coalition)
        return out


def _evaluation_pairs(f: ObjectiveSpec, d: DomainSpec):
    if f.requires_coalition:
        # 联盟相关目标只在表中给出的 (x, w) 上检查
        for x, w in f.defined_pairs():
            sub = d.family.get(w) if isinstance(d, CoalitionIndexedDomain) else d
            if sub is not None and sub.contains(x):
                yield x, w
    else:
        for x in enumerate_domain(d):
            yield x, None


def is_individually_subadditive(f: ObjectiveSpec, d: DomainSpec, variant: str = STANDARD,
                                A: Optional[RatMatrix] = None,
                                b: Optional[Fraction] = None,
                                superadditive: bool = False) -> ISVerdict:
    """
    穷举检查 f(x) ≤ F(x)（superadditive=True 时检查 f(x) ≥ F(x)）

    Args:
        f: 目标函数
        d: 有限定义域
        variant: 松弛变体
        A: a-dependent 变体需要的约束矩阵
        b: b-scaled 变体的缩放因子
        superadditive: 是否检查个体超可加性

    Returns:
        ISVerdict，失败时含第一个见证点

    Raises:
        TooLargeError: 定义域超过枚举上限
    """
    if f.requires_coalition and variant != A_DEPENDENT:
        variant = A_DEPENDENT
    coeffs = basis_coefficients(f, variant, A=A, b=b, domain=d)
    verdict = ISVerdict(holds=True, variant=variant, superadditive=superadditive, coefficients=coeffs)
    for x, w in _evaluation_pairs(f, d):
        verdict.checked_points += 1
        fx = f.evaluate(x, w)
        Fx = coeffs.relaxed_value(x)
        bad = fx < Fx if superadditive else fx > Fx
        if bad:
            verdict.holds = False
            verdict.witness = x
            verdict.witness_coalition = w
            verdict.f_value = fx
            verdict.relaxed_value = Fx
            logger.info(f"个体{'超' if superadditive else '次'}可加性不成立，见证点 {format_vector(x)}")
            break
    return verdict


@dataclass
class ClassReport:
    """函数类检查结果"""
    m: int
    verdicts: Dict[str, bool] = field(default_factory=dict)
    witnesses: Dict[str, object] = field(default_factory=dict)

    def to_dict(self) -> Dict:
        def fmt(w):
            if isinstance(w, tuple) and w and isinstance(w[0], tuple):
                return [list(v) if isinstance(v, tuple) else v for v in w]
            return list(w) if isinstance(w, tuple) else w
        return {
            'm': self.m,
            'verdicts': dict(self.verdicts),
            'witnesses': {k: fmt(v) for k, v in self.witnesses.items()},
        }


def _add(x: Tuple[int, ...], y: Tuple[int, ...]) -> Tuple[int, ...]:
    return tuple(a + b for a, b in zip(x, y))


def _balanced_cover_value(values: Dict[Tuple[int, ...], Fraction], v: Tuple[int, ...],
                          exact_cover: bool) -> Optional[Fraction]:
    """
    min Σ λ(w) f(w)，w ≤ v 且 w ≠ 0，约束 Σ wλ(w) = v（exact_cover）或 ≥ v

    Returns:
        最优值；无界时返回 None
    """
    support = [i for i, b in enumerate(v) if b]
    cols = [w for w in values if any(w) and all(w[i] <= v[i] for i in range(len(v)))]
    A = RatMatrix([[w[i] for w in cols] for i in support], n_cols=len(cols))
    p = LpProblem(
        sense='min',
        c=tuple(values[w] for w in cols),
        A=A,
        row_senses=('=' if exact_cover else '>=',) * len(support),
        rhs=(Fraction(1),) * len(support),
    )
    sol = solve(p)
    if sol.status == UNBOUNDED:
        return None
    if sol.status == INFEASIBLE:
        raise UsageError(f"平衡覆盖 LP 不可行（v = {v}）")
    return sol.value


def class_checks(f: ObjectiveSpec, m: Optional[int] = None) -> ClassReport:
    """
    在 {0,1}^m 上精确判定各函数类

    Args:
        f: 在整个布尔格上有定义的目标函数
        m: 维度，默认取 f.dimension

    Returns:
        ClassReport

    Raises:
        TooLargeError: m 超过 MAX_CLASS_CHECK_DIM
    """
    m = f.dimension if m is None else m
    ensure_dimension(m, MAX_CLASS_CHECK_DIM, '函数类检查')
    if f.requires_coalition:
        raise UsageError("函数类检查不支持联盟相关目标")
    points = list(boolean_vectors(m))
    values = {x: f.evaluate(x) for x in points}
    report = ClassReport(m=m)
    singles = [values[tuple(int(v) for v in unit_vector(m, j))] for j in range(m)]

    # 个体次可加
    report.verdicts['individually_subadditive'] = True
    for x in points:
        if values[x] > sum((s for s, b in zip(singles, x) if b), Fraction(0)):
            report.verdicts['individually_subadditive'] = False
            report.witnesses['individually_subadditive'] = x
            break

    # 单调
    report.verdicts['monotone'] = True
    for x in points:
        bad = next((j for j in range(m) if not x[j] and values[x[:j] + (1,) + x[j + 1:]] < values[x]), None)
        if bad is not None:
            report.verdicts['monotone'] = False
            report.witnesses['monotone'] = (x, bad)
            break

    # 次可加：不交的非零对
    report.verdicts['subadditive'] = True
    for x in points:
        if not report.verdicts['subadditive']:
            break
        if not any(x):
            continue
        free = [i for i in range(m) if not x[i]]
        for bits in boolean_vectors(len(free)):
            if not any(bits):
                continue
            y = [0] * m
            for i, bit in zip(free, bits):
                y[i] = bit
            y = tuple(y)
            if values[_add(x, y)] > values[x] + values[y]:
                report.verdicts['subadditive'] = False
                report.witnesses['subadditive'] = (x, y)
                break

    # 子模：f(x+e_i) - f(x) ≥ f(x+e_i+e_j) - f(x+e_j)
    report.verdicts['submodular'] = True
    for x in points:
        if not report.verdicts['submodular']:
            break
        zero_idx = [i for i in range(m) if not x[i]]
        for a in range(len(zero_idx)):
            for c in range(a + 1, len(zero_idx)):
                i, j = zero_idx[a], zero_idx[c]
                xi = x[:i] + (1,) + x[i + 1:]
                xj = x[:j] + (1,) + x[j + 1:]
                xij = xi[:j] + (1,) + xi[j + 1:]
                if values[xi] - values[x] < values[xij] - values[xj]:
                    report.verdicts['submodular'] = False
                    report.witnesses['submodular'] = (x, i, j)
                    break
            if not report.verdicts['submodular']:
                break

    # 大联盟分数次可加：一个 LP
    grand = (1,) * m
    gfs = _balanced_cover_value(values, grand, exact_cover=True)
    report.verdicts['grand_fractionally_subadditive'] = gfs is not None and gfs >= values[grand]
    if not report.verdicts['grand_fractionally_subadditive']:
        report.witnesses['grand_fractionally_subadditive'] = grand

    # 分数次可加：每个 v 一个 LP
    report.verdicts['fractionally_subadditive'] = True
    for v in points:
        if not any(v):
            continue
        best = _balanced_cover_value(values, v, exact_cover=False)
        if best is None or best < values[v]:
            report.verdicts['fractionally_subadditive'] = False
            report.witnesses['fractionally_subadditive'] = v
            break

    logger.info(f"函数类检查 (m={m}): {report.verdicts}")
    return report


@dataclass
class QuadraticISVerdict:
    holds: bool
    domain_kind: str
    reason: str = ''

    def to_dict(self) -> Dict:
        return {'holds': self.holds, 'domain_kind': self.domain_kind, 'reason': self.reason}


QUADRATIC_DOMAIN_KINDS = ('boolean', 'box', 'orthant', 'full_space')


def quadratic_is_characterization(domain_kind: str, b: Sequence[Fraction], Q: RatMatrix) -> QuadraticISVerdict:
    """
    二次函数 bᵀx + xᵀQx 个体次可加性的闭式判定

    - boolean: 非对角元 ≤ 0
    - box ([0,1]^m): 另要求对角元 ≥ 0
    - orthant: 另要求对角元 = 0
    - full_space: Q ≡ 0

    Raises:
        UsageError: Q 不对称或定义域类型未知
    """
    if domain_kind not in QUADRATIC_DOMAIN_KINDS:
        raise UsageError(f"未知的定义域类型 {domain_kind!r}，可选 {QUADRATIC_DOMAIN_KINDS}")
    if not Q.is_symmetric():
        raise UsageError("二次项矩阵 Q 必须对称")
    n = Q.n_rows

    if domain_kind == 'full_space':
        for i in range(n):
            for j in range(n):
                if Q[i, j] != 0:
                    return QuadraticISVerdict(False, domain_kind, f"q_{i + 1}{j + 1} ≠ 0")
        return QuadraticISVerdict(True, domain_kind)

    for i in range(n):
        for j in range(i + 1, n):
            if Q[i, j] > 0:
                return QuadraticISVerdict(False, domain_kind, f"非对角元 q_{i + 1}{j + 1} > 0")
    for i in range(n):
        if domain_kind == 'box' and Q[i, i] < 0:
            return QuadraticISVerdict(False, domain_kind, f"对角元 q_{i + 1}{i + 1} < 0")
        if domain_kind == 'orthant' and Q[i, i] != 0:
            return QuadraticISVerdict(False, domain_kind, f"对角元 q_{i + 1}{i + 1} ≠ 0")
    return QuadraticISVerdict(True, domain_kind)


def relaxation_kind(f: ObjectiveSpec, d: DomainSpec, variant: str = STANDARD,
                    A: Optional[RatMatrix] = None,
                    b: Optional[Fraction] = None) -> str:
    """
    判断基线性松弛 F 与 f 在 X 上的关系

    F 按给定变体构造；q-generator 变体从生成元锥定义域取 Q

    Args:
        f: 目标函数
        d: 有限定义域
        variant: 松弛变体
        A: a-dependent 变体需要的约束矩阵
        b: b-scaled 变体的缩放因子

    Returns:
        'extension'（F = f）、'upper-relaxation'（F ≥ f）、
        'lower-relaxation'（F ≤ f）或 'neither'
    """
    coeffs = basis_coefficients(f, variant, A=A, b=b, domain=d)
    above = below = True
    for x in enumerate_domain(d):
        diff = coeffs.relaxed_value(x) - f.evaluate(x)
        if diff < 0:
            above = False
        elif diff > 0:
            below = False
    if above and below:
        return 'extension'
    if above:
        return 'upper-relaxation'
    if below:
        return 'lower-relaxation'
    return 'neither'


@dataclass
class RelaxationFactReport:
    """max f 与其松弛 max F 之间的关系检查"""
    kind: str
    f_max: Fraction
    F_max: Fraction
    f_argmax: List[RatVector]
    F_argmax: List[RatVector]
    f_optimum_attains_F: bool
    f_argmax_in_F_argmax: bool
    consistent: bool

    def to_dict(self) -> Dict:
        return {
            'kind': self.kind,
            'f_max': format_rational(self.f_max),
            'F_max': format_rational(self.F_max),
            'f_argmax': [format_vector(x) for x in self.f_argmax],
            'F_argmax': [format_vector(x) for x in self.F_argmax],
            'f_optimum_attains_F': self.f_optimum_attains_F,
            'f_argmax_in_F_argmax': self.f_argmax_in_F_argmax,
            'consistent': self.consistent,
        }


def relaxation_fact_check(f: ObjectiveSpec, d: DomainSpec, feasible=None,
                          variant: str = STANDARD,
                          A: Optional[RatMatrix] = None,
                          b: Optional[Fraction] = None) -> RelaxationFactReport:
    """
    在有限可行集上比较 max f 与 max F

    松弛（F ≥ f）时：max f = max F 蕴含 f 的最优点也是 F 的最优点；
    延拓（F = f）时：二者等价

    Args:
        f: 目标函数
        d: 有限定义域
        feasible: 可选的可行性谓词，例如 Ax ≤ w
        variant: 松弛变体
        A: a-dependent 变体需要的约束矩阵
        b: b-scaled 变体的缩放因子

    Raises:
        UsageError: 可行集为空
    """
    kind = relaxation_kind(f, d, variant, A=A, b=b)
    coeffs = basis_coefficients(f, variant, A=A, b=b, domain=d)
    pts = [x for x in enumerate_domain(d) if feasible is None or feasible(x)]
    if not pts:
        raise UsageError("可行集为空，无法比较 max f 与 max F")
    fv = {x: f.evaluate(x) for x in pts}
    Fv = {x: coeffs.relaxed_value(x) for x in pts}
    f_max = max(fv.values())
    F_max = max(Fv.values())
    f_arg = [x for x in pts if fv[x] == f_max]
    F_arg = [x for x in pts if Fv[x] == F_max]
    attains = f_max == F_max
    inside = any(x in F_arg for x in f_arg)
    if kind == 'extension':
        consistent = attains == inside
    elif kind == 'upper-relaxation':
        consistent = (not attains) or inside
    else:
        consistent = True
    return RelaxationFactReport(kind, f_max, F_max, f_arg, F_arg, attains, inside, consistent)
