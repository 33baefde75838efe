"""
精确有理数运算
提供有理数标量、稠密向量与矩阵、高斯消元和左伪逆

所有数值都使用 fractions.Fraction，分子分母为任意精度整数，构造后即为既约形式
"""

import logging
from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple, Union

from coregame.utils.errors import DimensionError, RankDeficientError, SingularMatrixError, UsageError

logger = logging.getLogger(__name__)

Rational = Fraction
RatVector = Tuple[Fraction, ...]
Scalar = Union[Fraction, int, str]


def to_rational(value: Scalar) -> Fraction:
    """
    将整数、Fraction 或 "p/q" 字符串转换为有理数

    浮点数被拒绝，避免二进制舍入悄悄进入精确计算

    Raises:
        UsageError: 无法解析
    """
    if isinstance(value, bool):
        return Fraction(int(value))
    if isinstance(value, (Fraction, int)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise UsageError(f"无法解析有理数 {value!r}: {e}")
    raise UsageError(f"不支持的数值类型 {type(value).__name__}: {value!r}（请使用整数或 \"p/q\" 字符串）")


def format_rational(q: Fraction) -> str:
    """格式化为 "p/q" 或整数字符串"""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def as_vector(values: Iterable[Scalar]) -> RatVector:
    return tuple(to_rational(v) for v in values)


def format_vector(v: Sequence[Fraction]) -> List[str]:
    return [format_rational(x) for x in v]


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    if len(u) != len(v):
        raise DimensionError(f"向量长度不一致: {len(u)} != {len(v)}")
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


class RatMatrix:
    """
    稠密有理数矩阵

    构造后不可变，行列数固定，所有行共享同一列数
    """

    __slots__ = ('_rows', '_n_cols')

    def __init__(self, rows: Iterable[Iterable[Scalar]], n_cols: int = None):
        built = tuple(as_vector(r) for r in rows)
        if built:
            width = len(built[0])
            for i, r in enumerate(built):
                if len(r) != width:
                    raise DimensionError(f"矩阵第 {i} 行有 {len(r)} 列，应为 {width} 列")
            if n_cols is not None and n_cols != width:
                raise DimensionError(f"矩阵列数 {width} 与声明的 {n_cols} 不符")
        else:
            width = n_cols or 0
        object.__setattr__(self, '_rows', built)
        object.__setattr__(self, '_n_cols', width)

    def __setattr__(self, name, value):
        raise AttributeError("RatMatrix 不可变")

    @classmethod
    def identity(cls, n: int) -> 'RatMatrix':
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)], n_cols=n)

    @classmethod
    def zeros(cls, n_rows: int, n_cols: int) -> 'RatMatrix':
        return cls([[0] * n_cols for _ in range(n_rows)], n_cols=n_cols)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[Scalar]], n_rows: int = None) -> 'RatMatrix':
        if not columns:
            return cls([[] for _ in range(n_rows or 0)], n_cols=0)
        return cls(zip(*columns), n_cols=len(columns))

    @property
    def rows(self) -> Tuple[RatVector, ...]:
        return self._rows

    @property
    def n_rows(self) -> int:
        return len(self._rows)

    @property
    def n_cols(self) -> int:
        return self._n_cols

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.n_rows, self.n_cols)

    def __getitem__(self, index: Tuple[int, int]) -> Fraction:
        i, j = index
        return self._rows[i][j]

    def row(self, i: int) -> RatVector:
        return self._rows[i]

    def column(self, j: int) -> RatVector:
        return tuple(r[j] for r in self._rows)

    def columns(self) -> List[RatVector]:
        return [self.column(j) for j in range(self._n_cols)]

    def transpose(self) -> 'RatMatrix':
        return RatMatrix.from_columns(self._rows, n_rows=self._n_cols)

    def matvec(self, x: Sequence[Fraction]) -> RatVector:
        if len(x) != self._n_cols:
            raise DimensionError(f"矩阵 {self.shape} 无法乘以长度 {len(x)} 的向量")
        return tuple(dot(r, x) for r in self._rows)

    def vecmat(self, y: Sequence[Fraction]) -> RatVector:
        """计算 yᵀM"""
        if len(y) != self.n_rows:
            raise DimensionError(f"长度 {len(y)} 的向量无法左乘矩阵 {self.shape}")
        return tuple(dot(y, self.column(j)) for j in range(self._n_cols))

    def matmul(self, other: 'RatMatrix') -> 'RatMatrix':
        if self._n_cols != other.n_rows:
            raise DimensionError(f"矩阵维度不匹配: {self.shape} x {other.shape}")
        cols = other.columns()
        return RatMatrix([[dot(r, c) for c in cols] for r in self._rows], n_cols=other.n_cols)

    def is_square(self) -> bool:
        return self.n_rows == self._n_cols

    def is_symmetric(self) -> bool:
        if not self.is_square():
            return False
        n = self.n_rows
        return all(self._rows[i][j] == self._rows[j][i] for i in range(n) for j in range(i + 1, n))

    def is_binary(self) -> bool:
        return all(v in (0, 1) for r in self._rows for v in r)

    def diagonal(self) -> RatVector:
        return tuple(self._rows[i][i] for i in range(min(self.n_rows, self._n_cols)))

    def to_lists(self) -> List[List[str]]:
        return [format_vector(r) for r in self._rows]

    def __eq__(self, other) -> bool:
        if not isinstance(other, RatMatrix):
            return NotImplemented
        return self.shape == other.shape and self._rows == other._rows

    def __hash__(self) -> int:
        return hash((self.shape, self._rows))

    def __repr__(self) -> str:
        return f"RatMatrix({self.to_lists()})"


def gauss_solve(M: RatMatrix, rhs: Sequence[Fraction]) -> RatVector:
    """
    精确高斯消元求解 Mx = rhs

    Args:
        M: 方阵
        rhs: 右端向量

    Returns:
        精确解 x

    Raises:
        DimensionError: M 非方阵或维度不符
        SingularMatrixError: M 不可逆
    """
    if not M.is_square():
        raise DimensionError(f"gauss_solve 需要方阵，得到 {M.shape}")
    n = M.n_rows
    if len(rhs) != n:
        raise DimensionError(f"右端向量长度 {len(rhs)} 与矩阵阶数 {n} 不符")

    aug = [list(M.row(i)) + [Fraction(rhs[i])] for i in range(n)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            raise SingularMatrixError(f"矩阵奇异（第 {col} 列无主元）")
        if pivot != col:
            aug[col], aug[pivot] = aug[pivot], aug[col]
        p = aug[col][col]
        row = [v / p for v in aug[col]]
        aug[col] = row
        for r in range(n):
            if r != col and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [a - factor * b for a, b in zip(aug[r], row)]
    return tuple(aug[i][n] for i in range(n))


def inverse(M: RatMatrix) -> RatMatrix:
    """逐列求解得到逆矩阵"""
    n = M.n_rows
    cols = []
    for j in range(n):
        e = tuple(Fraction(1) if i == j else Fraction(0) for i in range(n))
        cols.append(gauss_solve(M, e))
    return RatMatrix.from_columns(cols, n_rows=n)


def left_pseudo_inverse(Q: RatMatrix) -> RatMatrix:
    """
    计算列满秩矩阵的左伪逆 Q† = (QᵀQ)⁻¹Qᵀ

    Args:
        Q: m×k 生成元矩阵，列线性无关

    Returns:
        k×m 矩阵，满足 Q†Q = I_k

    Raises:
        RankDeficientError: 列线性相关
    """
    Qt = Q.transpose()
    gram = Qt.matmul(Q)
    try:
        gram_inv = inverse(gram)
    except SingularMatrixError:
        raise RankDeficientError(f"生成元矩阵 {Q.shape} 的列线性相关，伪逆不存在")
    pinv = gram_inv.matmul(Qt)
    if pinv.matmul(Q) != RatMatrix.identity(Q.n_cols):
        raise SingularMatrixError("伪逆校验失败: Q†Q != I")
    return pinv
