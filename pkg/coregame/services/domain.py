"""
可行解定义域
表示并枚举定义域 X 及其变体，校验结构性假设

支持的变体：
- Boolean(m): {0,1}^m
- BooleanCardinality(m, k): 至多 k 个 1 的布尔向量
- BooleanKnapsack(m, Qc, d): 满足 Qc·x ≤ d 的布尔向量
- IntegerBox(m, u): {0,…,u}^m，用于非二元整数博弈
- ExplicitFinite(points): 显式给出的有限点集
- GeneratorCone(base, Q): 由独立生成元张成的锥上的有限底集
- CoalitionIndexed(family): 每个联盟 w 对应一个有限定义域 X(w)
"""

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import comb
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from coregame.services.exact import RatMatrix, RatVector, as_vector, format_vector, left_pseudo_inverse
from coregame.utils.errors import (
    DimensionError, InfiniteDomainError, RankDeficientError, UsageError
)
from coregame.utils.helpers import boolean_vectors, ensure_enumerable, unit_vector, zeros

logger = logging.getLogger(__name__)

Coalition = Tuple[int, ...]


def make_coalition(bits: Iterable, n: Optional[int] = None) -> Coalition:
    """
    校验并构造联盟向量

    Raises:
        UsageError: 分量不是 0/1，或长度与 n 不符
    """
    out = []
    for b in bits:
        if b not in (0, 1) or isinstance(b, float):
            raise UsageError(f"联盟分量必须为 0 或 1，得到 {b!r}")
        out.append(int(b))
    if n is not None and len(out) != n:
        raise DimensionError(f"联盟长度 {len(out)} 与玩家数 {n} 不符")
    return tuple(out)


def grand_coalition(n: int) -> Coalition:
    return (1,) * n


def empty_coalition(n: int) -> Coalition:
    return (0,) * n


class DomainSpec:
    """定义域基类"""

    kind = 'abstract'

    @property
    def dimension(self) -> int:
        raise NotImplementedError

    @property
    def is_finite(self) -> bool:
        return True

    def point_count(self) -> int:
        """枚举前预估的点数，用于上限检查"""
        raise NotImplementedError

    def contains(self, x: Sequence[Fraction]) -> bool:
        raise NotImplementedError

    def _generate(self) -> Iterable[RatVector]:
        raise NotImplementedError

    @cached_property
    def _points(self) -> Tuple[RatVector, ...]:
        ensure_enumerable(self.point_count(), f"{self.kind} 定义域")
        seen = set()
        pts = []
        for p in self._generate():
            if p not in seen:
                seen.add(p)
                pts.append(p)
        logger.debug(f"枚举 {self.kind}({self.dimension}) 得到 {len(pts)} 个点")
        return tuple(pts)

    def points(self) -> List[RatVector]:
        return list(self._points)


def _lattice(m: int) -> Iterable[RatVector]:
    return (tuple(Fraction(b) for b in bits) for bits in boolean_vectors(m))


def _is_boolean(x: Sequence[Fraction]) -> bool:
    return all(v in (0, 1) for v in x)


@dataclass(frozen=True, eq=False)
class BooleanDomain(DomainSpec):
    m: int
    kind = 'boolean'

    def __post_init__(self):
        if self.m < 1:
            raise UsageError(f"布尔定义域维度必须为正，得到 {self.m}")

    @property
    def dimension(self) -> int:
        return self.m

    def point_count(self) -> int:
        return 2 ** self.m

    def contains(self, x) -> bool:
        return len(x) == self.m and _is_boolean(x)

    def _generate(self):
        return _lattice(self.m)


@dataclass(frozen=True, eq=False)
class BooleanCardinalityDomain(DomainSpec):
    m: int
    k: int
    kind = 'boolean_cardinality'

    def __post_init__(self):
        if self.m < 1 or self.k < 1:
            raise UsageError(f"基数约束定义域需要 m ≥ 1 且 k ≥ 1，得到 m={self.m}, k={self.k}")

    @property
    def dimension(self) -> int:
        return self.m

    def point_count(self) -> int:
        return sum(comb(self.m, i) for i in range(min(self.k, self.m) + 1))

    def contains(self, x) -> bool:
        return len(x) == self.m and _is_boolean(x) and sum(x) <= self.k

    def _generate(self):
        # 先做上限检查再枚举全格点，点数按过滤前计
        ensure_enumerable(2 ** self.m, '基数约束定义域的格点')
        return (p for p in _lattice(self.m) if sum(p) <= self.k)


@dataclass(frozen=True, eq=False)
class BooleanKnapsackDomain(DomainSpec):
    m: int
    weights: RatMatrix
    capacity: RatVector
    kind = 'boolean_knapsack'

    def __post_init__(self):
        if self.weights.n_cols != self.m:
            raise DimensionError(f"背包约束矩阵有 {self.weights.n_cols} 列，应为 {self.m}")
        if len(self.capacity) != self.weights.n_rows:
            raise DimensionError(f"背包容量长度 {len(self.capacity)} 与约束行数 {self.weights.n_rows} 不符")

    @property
    def dimension(self) -> int:
        return self.m

    def point_count(self) -> int:
        return 2 ** self.m

    def contains(self, x) -> bool:
        if len(x) != self.m or not _is_boolean(x):
            return False
        return all(lhs <= cap for lhs, cap in zip(self.weights.matvec(x), self.capacity))

    def _generate(self):
        return (p for p in _lattice(self.m) if self.contains(p))


@dataclass(frozen=True, eq=False)
class IntegerBoxDomain(DomainSpec):
    m: int
    upper: int
    kind = 'integer_box'

    def __post_init__(self):
        if self.m < 1 or self.upper < 1:
            raise UsageError(f"整数盒定义域需要 m ≥ 1 且 upper ≥ 1，得到 m={self.m}, upper={self.upper}")

    @property
    def dimension(self) -> int:
        return self.m

    def point_count(self) -> int:
        return (self.upper + 1) ** self.m

    def contains(self, x) -> bool:
        return len(x) == self.m and all(
            Fraction(v).denominator == 1 and 0 <= v <= self.upper for v in x
        )

    def _generate(self):
        rng = [Fraction(i) for i in range(self.upper + 1)]
        return itertools.product(rng, repeat=self.m)


@dataclass(frozen=True, eq=False)
class ExplicitDomain(DomainSpec):
    m: int
    point_list: Tuple[RatVector, ...]
    kind = 'explicit'

    def __post_init__(self):
        for p in self.point_list:
            if len(p) != self.m:
                raise DimensionError(f"点 {format_vector(p)} 的维度不是 {self.m}")

    @classmethod
    def of(cls, points: Iterable[Iterable], m: Optional[int] = None) -> 'ExplicitDomain':
        pts = tuple(as_vector(p) for p in points)
        if m is None:
            if not pts:
                raise UsageError("空的显式定义域必须给出维度")
            m = len(pts[0])
        return cls(m, pts)

    @cached_property
    def _members(self) -> frozenset:
        return frozenset(self.point_list)

    @property
    def dimension(self) -> int:
        return self.m

    def point_count(self) -> int:
        return len(self.point_list)

    def contains(self, x) -> bool:
        return tuple(Fraction(v) for v in x) in self._members

    def _generate(self):
        return iter(self.point_list)


@dataclass(frozen=True, eq=False)
class GeneratorConeDomain(DomainSpec):
    """
    生成元锥上的定义域

    底集 base 中每个点 x 都能唯一表示为 x = Q·(Q†x)，且 Q†x ≥ 0
    """
    base: DomainSpec
    generators: RatMatrix
    kind = 'generator_cone'

    def __post_init__(self):
        if self.generators.n_rows != self.base.dimension:
            raise DimensionError(
                f"生成元矩阵有 {self.generators.n_rows} 行，底集维度为 {self.base.dimension}"
            )

    @property
    def dimension(self) -> int:
        return self.base.dimension

    @property
    def generator_count(self) -> int:
        return self.generators.n_cols

    @cached_property
    def pseudo_inverse(self) -> RatMatrix:
        return left_pseudo_inverse(self.generators)

    def coordinates(self, x: Sequence[Fraction]) -> RatVector:
        """生成元坐标 Q†x"""
        return self.pseudo_inverse.matvec(tuple(x))

    def point_count(self) -> int:
        return self.base.point_count()

    def contains(self, x) -> bool:
        return self.base.contains(x)

    def _generate(self):
        return iter(self.base.points())


@dataclass(frozen=True, eq=False)
class CoalitionIndexedDomain(DomainSpec):
    """联盟相关定义域，family 需要显式列出每个被查询的联盟"""
    m: int
    family: Dict[Coalition, DomainSpec] = field(default_factory=dict)
    kind = 'coalition_indexed'

    def __post_init__(self):
        for w, d in self.family.items():
            if d.dimension != self.m:
                raise DimensionError(f"联盟 {w} 的定义域维度为 {d.dimension}，应为 {self.m}")
            if isinstance(d, CoalitionIndexedDomain):
                raise UsageError("联盟相关定义域不能嵌套")

    @property
    def dimension(self) -> int:
        return self.m

    def domain_for(self, w: Coalition) -> DomainSpec:
        try:
            return self.family[tuple(w)]
        except KeyError:
            raise UsageError(f"联盟 {tuple(w)} 未在联盟相关定义域中给出")

    def point_count(self) -> int:
        return sum(d.point_count() for d in self.family.values())

    def contains(self, x) -> bool:
        return any(d.contains(x) for d in self.family.values())

    def _generate(self):
        for d in self.family.values():
            yield from d.points()


def enumerate_domain(d: DomainSpec) -> List[RatVector]:
    """
    穷举有限定义域的全部点（无重复）

    Raises:
        TooLargeError: 点数超过上限
        InfiniteDomainError: 定义域不可枚举
    """
    if not d.is_finite:
        raise InfiniteDomainError(f"{d.kind} 定义域不可枚举")
    return d.points()


@dataclass
class Violation:
    """一条假设违反记录"""
    code: str
    message: str

    def to_dict(self) -> Dict[str, str]:
        return {'code': self.code, 'message': self.message}


@dataclass
class AssumptionReport:
    """结构性假设检查结果"""
    violations: List[Violation] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, code: str, message: str) -> None:
        logger.info(f"假设 ({code}) 不成立: {message}")
        self.violations.append(Violation(code, message))

    def to_dict(self) -> Dict:
        return {
            'ok': self.ok,
            'violations': [v.to_dict() for v in self.violations],
            'notes': list(self.notes),
        }


def _check_matrix(A: RatMatrix, m: int, report: AssumptionReport) -> None:
    if A.n_cols != m:
        report.add('dimension', f"约束矩阵有 {A.n_cols} 列，定义域维度为 {m}")
        return
    if not A.is_binary():
        report.add('a', "约束矩阵 A 不是 0/1 矩阵")
    for j in range(A.n_cols):
        if not any(A.column(j)):
            report.add('a', f"约束矩阵 A 的第 {j} 列全为零")


def _check_basis(d: DomainSpec, scale: Fraction, report: AssumptionReport) -> None:
    m = d.dimension
    if not d.contains(zeros(m)):
        report.add('b', "零向量不在定义域中")
    for j in range(m):
        point = tuple(scale * v for v in unit_vector(m, j))
        if not d.contains(point):
            label = 'e' if scale == 1 else f"{scale}·e"
            report.add('b', f"基点 {label}_{j + 1} 不在定义域中")


def _check_nonnegative(d: DomainSpec, report: AssumptionReport) -> None:
    for p in d.points():
        if any(v < 0 for v in p):
            report.add('nonneg', f"点 {format_vector(p)} 有负分量")
            return


def _check_generators(d: GeneratorConeDomain, report: AssumptionReport) -> None:
    try:
        pinv = d.pseudo_inverse
    except RankDeficientError as e:
        report.add('generator', str(e))
        return
    Q = d.generators
    if not d.base.contains(zeros(d.dimension)):
        report.add('b', "零向量不在底集中")
    for j, q in enumerate(Q.columns()):
        if not d.base.contains(q):
            report.add('generator', f"生成元 q_{j + 1} = {format_vector(q)} 不在底集中")
    for x in d.base.points():
        z = pinv.matvec(x)
        if any(v < 0 for v in z):
            report.add('generator', f"点 {format_vector(x)} 的生成元坐标含负分量")
            return
        if Q.matvec(z) != tuple(x):
            report.add('generator', f"点 {format_vector(x)} 不在生成元张成的锥中")
            return


def _check_coalition_family(d: CoalitionIndexedDomain, A: RatMatrix, report: AssumptionReport) -> None:
    n = A.n_rows
    m = d.dimension
    for w, sub in d.family.items():
        if len(w) != n:
            report.add('coalition', f"联盟 {w} 长度不等于玩家数 {n}")
            continue
        if not sub.contains(zeros(m)):
            report.add('coalition', f"零向量不在 X({w}) 中")
    for j in range(A.n_cols):
        w = tuple(int(v) for v in A.column(j))
        sub = d.family.get(w)
        if sub is None:
            report.add('coalition', f"联盟 A·e_{j + 1} = {w} 未给出定义域")
        elif not sub.contains(unit_vector(m, j)):
            report.add('coalition', f"e_{j + 1} 不在 X(A·e_{j + 1}) 中")
    report.notes.append(
        "联盟相关定义域按较强条件校验: 对所有 w 要求 0 ∈ X(w)，"
        "而非仅 0 ∈ X(0)；基点条件按 e_j ∈ X(A·e_j) 校验"
    )


def check_assumptions(d: DomainSpec, A: RatMatrix, rhs_scale: Fraction = Fraction(1)) -> AssumptionReport:
    """
    校验结构性假设

    Args:
        d: 定义域
        A: 约束矩阵
        rhs_scale: 右端缩放因子 b，基点条件改为 b·e_j ∈ X

    Returns:
        AssumptionReport，不抛出异常
    """
    report = AssumptionReport()
    _check_matrix(A, d.dimension, report)

    if isinstance(d, GeneratorConeDomain):
        _check_nonnegative(d.base, report)
        _check_generators(d, report)
    elif isinstance(d, CoalitionIndexedDomain):
        _check_nonnegative(d, report)
        if A.n_cols == d.dimension:
            _check_coalition_family(d, A, report)
    else:
        if isinstance(d, ExplicitDomain):
            _check_nonnegative(d, report)
        if isinstance(d, BooleanKnapsackDomain):
            if any(v < 0 for r in d.weights.rows for v in r) or any(v < 0 for v in d.capacity):
                report.add('knapsack', "背包约束系数或容量为负")
        _check_basis(d, Fraction(rhs_scale), report)

    if report.ok:
        logger.debug(f"{d.kind} 定义域通过结构性假设检查")
    return report
