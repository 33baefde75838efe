"""
目标函数
表示目标函数 f，并计算四种基线性松弛系数

目标函数变体：线性、二次、比值、表函数、数乘、求和、取大、取小、线性复合、联盟相关表函数。
所有目标函数在构造时校验 f(0) = 0（grounded）。
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from coregame.services.domain import Coalition, GeneratorConeDomain
from coregame.services.exact import (
    RatMatrix, RatVector, as_vector, dot, format_rational, format_vector, left_pseudo_inverse, to_rational
)
from coregame.utils.errors import DimensionError, UndefinedPointError, UsageError
from coregame.utils.helpers import unit_vector, zeros

logger = logging.getLogger(__name__)

STANDARD = 'standard'
B_SCALED = 'b-scaled'
Q_GENERATOR = 'q-generator'
A_DEPENDENT = 'a-dependent'
VARIANTS = (STANDARD, B_SCALED, Q_GENERATOR, A_DEPENDENT)


class ObjectiveSpec:
    """目标函数基类"""

    kind = 'abstract'

    @property
    def dimension(self) -> int:
        raise NotImplementedError

    @property
    def requires_coalition(self) -> bool:
        return False

    def _value(self, x: RatVector, w: Optional[Coalition]) -> Fraction:
        raise NotImplementedError

    def evaluate(self, x: Sequence, w: Optional[Coalition] = None) -> Fraction:
        x = tuple(Fraction(v) for v in x)
        if len(x) != self.dimension:
            raise DimensionError(f"{self.kind} 目标函数维度为 {self.dimension}，输入点维度为 {len(x)}")
        if self.requires_coalition and w is None:
            raise UsageError("联盟相关目标函数求值需要给出联盟 w")
        return self._value(x, None if w is None else tuple(w))

    def _check_grounded(self) -> None:
        w0 = None
        if self.requires_coalition:
            w0 = (0,) * self.n_players
        value = self.evaluate(zeros(self.dimension), w0)
        if value != 0:
            raise UsageError(f"{self.kind} 目标函数在零点取值 {format_rational(value)}，不满足 f(0) = 0")


@dataclass(frozen=True, eq=False)
class LinearObjective(ObjectiveSpec):
    c: RatVector
    kind = 'linear'

    def __post_init__(self):
        object.__setattr__(self, 'c', as_vector(self.c))

    @property
    def dimension(self) -> int:
        return len(self.c)

    def _value(self, x, w):
        return dot(self.c, x)


@dataclass(frozen=True, eq=False)
class QuadraticObjective(ObjectiveSpec):
    """f(x) = bᵀx + xᵀQx，Q 对称"""
    b: RatVector
    Q: RatMatrix
    kind = 'quadratic'

    def __post_init__(self):
        object.__setattr__(self, 'b', as_vector(self.b))
        if self.Q.shape != (len(self.b), len(self.b)):
            raise DimensionError(f"二次项矩阵形状 {self.Q.shape} 与线性项长度 {len(self.b)} 不符")
        if not self.Q.is_symmetric():
            raise UsageError("二次项矩阵 Q 必须对称")

    @property
    def dimension(self) -> int:
        return len(self.b)

    @property
    def risk_adjusted(self) -> RatVector:
        """b + diag(Q)，即基线性松弛的系数"""
        return tuple(bi + qi for bi, qi in zip(self.b, self.Q.diagonal()))

    def _value(self, x, w):
        return dot(self.b, x) + dot(x, self.Q.matvec(x))


@dataclass(frozen=True, eq=False)
class RatioObjective(ObjectiveSpec):
    """f(x) = cᵀx / (d0 + dᵀx)，c, d ≥ 0，d0 > 0"""
    c: RatVector
    d: RatVector
    d0: Fraction
    kind = 'ratio'

    def __post_init__(self):
        object.__setattr__(self, 'c', as_vector(self.c))
        object.__setattr__(self, 'd', as_vector(self.d))
        object.__setattr__(self, 'd0', to_rational(self.d0))
        if len(self.c) != len(self.d):
            raise DimensionError(f"比值目标的分子长度 {len(self.c)} 与分母长度 {len(self.d)} 不符")
        if any(v < 0 for v in self.c) or any(v < 0 for v in self.d):
            raise UsageError("比值目标要求 c ≥ 0 且 d ≥ 0")
        if self.d0 <= 0:
            raise UsageError(f"比值目标要求 d0 > 0，得到 {format_rational(self.d0)}")
        if any(v == 0 for v in self.c):
            logger.warning("比值目标含 c_i = 0，已放宽 c > 0 的要求")

    @property
    def dimension(self) -> int:
        return len(self.c)

    def _value(self, x, w):
        return dot(self.c, x) / (self.d0 + dot(self.d, x))


@dataclass(frozen=True, eq=False)
class TableObjective(ObjectiveSpec):
    """逐点给出取值的表函数"""
    m: int
    values: Dict[RatVector, Fraction]
    kind = 'table'

    def __post_init__(self):
        table = {}
        for point, value in self.values.items():
            p = as_vector(point)
            if len(p) != self.m:
                raise DimensionError(f"表函数点 {format_vector(p)} 的维度不是 {self.m}")
            table[p] = to_rational(value)
        object.__setattr__(self, 'values', table)
        if zeros(self.m) not in table:
            raise UsageError("表函数必须给出零点取值")
        self._check_grounded()

    @property
    def dimension(self) -> int:
        return self.m

    def _value(self, x, w):
        try:
            return self.values[x]
        except KeyError:
            raise UndefinedPointError(f"表函数在点 {format_vector(x)} 没有定义")


@dataclass(frozen=True, eq=False)
class ScaledObjective(ObjectiveSpec):
    alpha: Fraction
    inner: ObjectiveSpec
    kind = 'scaled'

    def __post_init__(self):
        object.__setattr__(self, 'alpha', to_rational(self.alpha))
        if self.alpha < 0:
            raise UsageError("数乘系数必须非负")

    @property
    def dimension(self) -> int:
        return self.inner.dimension

    @property
    def requires_coalition(self) -> bool:
        return self.inner.requires_coalition

    @property
    def n_players(self) -> int:
        return self.inner.n_players

    def _value(self, x, w):
        return self.alpha * self.inner._value(x, w)


@dataclass(frozen=True, eq=False)
class SumObjective(ObjectiveSpec):
    terms: Tuple[ObjectiveSpec, ...]
    kind = 'sum'

    def __post_init__(self):
        object.__setattr__(self, 'terms', tuple(self.terms))
        if not self.terms:
            raise UsageError("求和目标至少需要一项")
        dims = {t.dimension for t in self.terms}
        if len(dims) != 1:
            raise DimensionError(f"求和各项维度不一致: {sorted(dims)}")

    @property
    def dimension(self) -> int:
        return self.terms[0].dimension

    @property
    def requires_coalition(self) -> bool:
        return any(t.requires_coalition for t in self.terms)

    @property
    def n_players(self) -> int:
        return next(t.n_players for t in self.terms if t.requires_coalition)

    def _value(self, x, w):
        return sum((t._value(x, w) for t in self.terms), Fraction(0))


@dataclass(frozen=True, eq=False)
class _PairObjective(ObjectiveSpec):
    left: ObjectiveSpec
    right: ObjectiveSpec

    def __post_init__(self):
        if self.left.dimension != self.right.dimension:
            raise DimensionError(f"{self.kind} 两侧维度不一致")

    @property
    def dimension(self) -> int:
        return self.left.dimension

    @property
    def requires_coalition(self) -> bool:
        return self.left.requires_coalition or self.right.requires_coalition

    @property
    def n_players(self) -> int:
        side = self.left if self.left.requires_coalition else self.right
        return side.n_players


class MaxObjective(_PairObjective):
    """取大保持个体次可加性"""
    kind = 'max'

    def _value(self, x, w):
        return max(self.left._value(x, w), self.right._value(x, w))


class MinObjective(_PairObjective):
    """取小保持个体超可加性"""
    kind = 'min'

    def _value(self, x, w):
        return min(self.left._value(x, w), self.right._value(x, w))


@dataclass(frozen=True, eq=False)
class PrecomposedObjective(ObjectiveSpec):
    """g(x) = f(Mx)"""
    M: RatMatrix
    inner: ObjectiveSpec
    kind = 'precomposed'

    def __post_init__(self):
        if self.M.n_rows != self.inner.dimension:
            raise DimensionError(f"复合矩阵有 {self.M.n_rows} 行，内层目标维度为 {self.inner.dimension}")
        if self.inner.requires_coalition:
            raise UsageError("线性复合不支持联盟相关的内层目标")

    @property
    def dimension(self) -> int:
        return self.M.n_cols

    def _value(self, x, w):
        return self.inner._value(self.M.matvec(x), None)


@dataclass(frozen=True, eq=False)
class CoalitionDependentObjective(ObjectiveSpec):
    """f(x, w)，按 (点, 联盟) 显式给出"""
    m: int
    n_players: int
    table: Dict[Tuple[RatVector, Coalition], Fraction]
    kind = 'coalition_dependent'

    def __post_init__(self):
        built = {}
        for (point, w), value in self.table.items():
            p = as_vector(point)
            w = tuple(int(b) for b in w)
            if len(p) != self.m or len(w) != self.n_players:
                raise DimensionError(f"联盟相关表项 ({format_vector(p)}, {w}) 维度不符")
            built[(p, w)] = to_rational(value)
        object.__setattr__(self, 'table', built)
        if (zeros(self.m), (0,) * self.n_players) not in built:
            raise UsageError("联盟相关目标必须给出 f(0, 0)")
        self._check_grounded()

    @property
    def dimension(self) -> int:
        return self.m

    @property
    def requires_coalition(self) -> bool:
        return True

    def defined_pairs(self) -> List[Tuple[RatVector, Coalition]]:
        return list(self.table)

    def _value(self, x, w):
        try:
            return self.table[(x, w)]
        except KeyError:
            raise UndefinedPointError(f"联盟相关目标在 ({format_vector(x)}, {w}) 没有定义")


def evaluate(f: ObjectiveSpec, x: Sequence, w: Optional[Coalition] = None) -> Fraction:
    """求 f(x) 或 f(x, w) 的精确值"""
    return f.evaluate(x, w)


@dataclass
class BasisCoefficients:
    """
    基线性松弛 F 的系数

    Attributes:
        coeffs: 系数向量（生成元变体时长度为 k）
        variant: standard / b-scaled / q-generator / a-dependent
        pseudo_inverse: 生成元变体的 Q†
        scale: b-scaled 变体的 b
    """
    coeffs: RatVector
    variant: str = STANDARD
    pseudo_inverse: Optional[RatMatrix] = None
    scale: Fraction = Fraction(1)

    def relaxed_value(self, x: Sequence[Fraction]) -> Fraction:
        """F(x)"""
        if self.variant == Q_GENERATOR:
            return dot(self.coeffs, self.pseudo_inverse.matvec(tuple(x)))
        return dot(self.coeffs, tuple(x))

    def to_dict(self) -> Dict:
        out = {'variant': self.variant, 'coeffs': format_vector(self.coeffs)}
        if self.variant == B_SCALED:
            out['scale'] = format_rational(self.scale)
        if self.pseudo_inverse is not None:
            out['pseudo_inverse'] = self.pseudo_inverse.to_lists()
        return out


def basis_coefficients(f: ObjectiveSpec, variant: str = STANDARD,
                       A: Optional[RatMatrix] = None,
                       Q: Optional[RatMatrix] = None,
                       b: Optional[Fraction] = None,
                       domain=None) -> BasisCoefficients:
    """
    计算基线性松弛系数

    Args:
        f: 目标函数
        variant: 松弛变体
        A: a-dependent 变体需要的约束矩阵
        Q: q-generator 变体需要的生成元矩阵（也可由 GeneratorConeDomain 提供）
        b: b-scaled 变体的缩放因子
        domain: 可选的定义域，用于取出生成元

    Returns:
        BasisCoefficients

    Raises:
        UsageError: 缺少变体所需的上下文
        DimensionError: 维度不符
    """
    m = f.dimension
    if variant not in VARIANTS:
        raise UsageError(f"未知的松弛变体 {variant!r}")
    if variant != A_DEPENDENT and f.requires_coalition:
        raise UsageError("联盟相关目标只能使用 a-dependent 变体")

    if variant == STANDARD:
        coeffs = tuple(f.evaluate(unit_vector(m, j)) for j in range(m))
        return BasisCoefficients(coeffs, STANDARD)

    if variant == B_SCALED:
        if b is None:
            raise UsageError("b-scaled 变体需要缩放因子 b")
        b = to_rational(b)
        if b <= 0:
            raise UsageError("缩放因子 b 必须为正")
        coeffs = tuple(
            f.evaluate(tuple(b * v for v in unit_vector(m, j))) / b for j in range(m)
        )
        return BasisCoefficients(coeffs, B_SCALED, scale=b)

    if variant == Q_GENERATOR:
        pinv = None
        if Q is None and isinstance(domain, GeneratorConeDomain):
            Q = domain.generators
            pinv = domain.pseudo_inverse
        if Q is None:
            raise UsageError("q-generator 变体需要生成元矩阵 Q")
        if Q.n_rows != m:
            raise DimensionError(f"生成元矩阵有 {Q.n_rows} 行，目标维度为 {m}")
        if pinv is None:
            pinv = left_pseudo_inverse(Q)
        coeffs = tuple(f.evaluate(q) for q in Q.columns())
        return BasisCoefficients(coeffs, Q_GENERATOR, pseudo_inverse=pinv)

    if A is None:
        raise UsageError("a-dependent 变体需要约束矩阵 A")
    if A.n_cols != m:
        raise DimensionError(f"约束矩阵有 {A.n_cols} 列，目标维度为 {m}")
    coeffs = []
    for j in range(m):
        col = tuple(int(v) for v in A.column(j))
        coeffs.append(f.evaluate(unit_vector(m, j), col if f.requires_coalition else None))
    return BasisCoefficients(tuple(coeffs), A_DEPENDENT)
