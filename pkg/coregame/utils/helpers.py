"""
通用工具函数
枚举上限读取与布尔向量枚举
"""
import itertools
import logging
import os
from fractions import Fraction
from typing import Iterator, Tuple

from coregame.config import DEFAULT_ENUM_CAP, ENUM_CAP_ENV
from coregame.utils.errors import TooLargeError

logger = logging.getLogger(__name__)


def enum_cap() -> int:
    """
    读取枚举维度上限

    每次调用时读取环境变量 COREGAME_ENUM_CAP，非法值回退到默认值

    Returns:
        允许枚举的最大维度（点数上限为 2^cap）
    """
    raw = os.environ.get(ENUM_CAP_ENV)
    if raw is None or not raw.strip():
        return DEFAULT_ENUM_CAP
    try:
        cap = int(raw)
    except ValueError:
        logger.warning(f"{ENUM_CAP_ENV}={raw!r} 不是整数，使用默认值 {DEFAULT_ENUM_CAP}")
        return DEFAULT_ENUM_CAP
    if cap < 0:
        logger.warning(f"{ENUM_CAP_ENV}={cap} 为负数，使用默认值 {DEFAULT_ENUM_CAP}")
        return DEFAULT_ENUM_CAP
    return cap


def ensure_enumerable(count: int, what: str = '定义域') -> None:
    """
    检查待枚举的点数是否在上限之内

    Raises:
        TooLargeError: 点数超过 2^cap
    """
    cap = enum_cap()
    if count > 2 ** cap:
        raise TooLargeError(f"{what}共 {count} 个点，超过枚举上限 2^{cap}")


def ensure_dimension(dim: int, limit: int, what: str) -> None:
    """维度超过给定上限时抛出 TooLargeError"""
    if dim > limit:
        raise TooLargeError(f"{what}的维度 {dim} 超过上限 {limit}")


def boolean_vectors(length: int) -> Iterator[Tuple[int, ...]]:
    """按字典序枚举 {0,1}^length"""
    return itertools.product((0, 1), repeat=length)


def all_coalitions(n: int, include_empty: bool = True) -> Iterator[Tuple[int, ...]]:
    """枚举全部 2^n 个联盟（二进制向量）"""
    for bits in boolean_vectors(n):
        if include_empty or any(bits):
            yield bits


def unit_vector(length: int, j: int) -> Tuple[Fraction, ...]:
    """第 j 个单位向量"""
    return tuple(Fraction(1) if i == j else Fraction(0) for i in range(length))


def ones(length: int) -> Tuple[Fraction, ...]:
    return (Fraction(1),) * length


def zeros(length: int) -> Tuple[Fraction, ...]:
    return (Fraction(0),) * length
