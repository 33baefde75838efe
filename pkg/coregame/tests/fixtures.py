"""
测试共用的博弈实例
"""

import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', '..'))

from coregame.services.domain import BooleanDomain
from coregame.services.exact import RatMatrix
from coregame.services.game import PACKING, GameInstance
from coregame.services.objective import QuadraticObjective, TableObjective
from coregame.utils.helpers import boolean_vectors

# 四个玩家、四条边的二部图 C4：第 j 列给出第 j 条边的两个端点
C4_INCIDENCE = [
    [1, 1, 0, 0],
    [0, 0, 1, 1],
    [1, 0, 1, 0],
    [0, 1, 0, 1],
]


def symmetric(size, entries):
    """由 {(i, j): q} 构造对称矩阵"""
    rows = [[0] * size for _ in range(size)]
    for (i, j), q in entries.items():
        rows[i][j] = rows[j][i] = q
    return RatMatrix(rows)


def c4_game(full_conflicts=False):
    """
    C4 上的二次匹配博弈

    默认只有 q12 = q13 = q24 = q34 = -1/2，核非空；
    full_conflicts 时所有边对都冲突，核为空
    """
    pairs = [(0, 1), (0, 2), (1, 3), (2, 3)]
    if full_conflicts:
        pairs += [(0, 3), (1, 2)]
    Q = symmetric(4, {p: '-1/2' for p in pairs})
    return GameInstance(
        A=RatMatrix(C4_INCIDENCE),
        sense=PACKING,
        domain=BooleanDomain(4),
        objective=QuadraticObjective((1, 1, 1, 1), Q),
        name='c4-full' if full_conflicts else 'c4',
    )


def two_player_game():
    """f(x) = x1 + x2 - 2 x1 x2，A = I"""
    return GameInstance(
        A=RatMatrix.identity(2),
        sense=PACKING,
        domain=BooleanDomain(2),
        objective=QuadraticObjective((1, 1), symmetric(2, {(0, 1): -1})),
        name='two-player',
    )


def table_by_size(m, by_size):
    """按 1 的个数给值的对称表函数"""
    return TableObjective(m, {x: by_size[sum(x)] for x in boolean_vectors(m)})
