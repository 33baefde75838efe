"""
精确线性规划测试

测试覆盖范围：
1. 基本求解 - 最优、不可行、无界
2. 变量符号与行类型 - 自由变量、等式行、负右端
3. 对偶解 - 强对偶、对偶可行性、对偶最优判定
4. 冗余行 - 删除冗余行后对偶仍正确
5. 最优对偶面枚举 - 唯一顶点与多个顶点
6. 随机性质测试 - 打包型 LP 的强对偶
"""

import unittest
import sys
import os
from fractions import Fraction

# 添加项目根目录到路径
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', '..'))

from hypothesis import given, settings, strategies as st

from coregame.services.exact import RatMatrix, as_vector, dot
from coregame.services.game import anchor_problem
from coregame.services.lp import (
    INFEASIBLE, OPTIMAL, UNBOUNDED, LpProblem, dual_feasible, dual_problem,
    enumerate_optimal_dual_vertices, is_dual_optimal, primal_feasible, solve, solve_optimal
)
from coregame.tests.fixtures import c4_game
from coregame.utils.errors import DimensionError, SolverStatusError, UsageError


def packing(c, rows, rhs):
    return LpProblem(
        sense='max', c=as_vector(c), A=RatMatrix(rows), row_senses=('<=',) * len(rows), rhs=as_vector(rhs)
    )


class TestLpProblem(unittest.TestCase):
    """测试问题构造校验"""

    def test_bad_sense(self):
        with self.assertRaises(UsageError):
            LpProblem(sense='maximize', c=(1,), A=RatMatrix([[1]]), row_senses=('<=',), rhs=(1,))

    def test_dimension_mismatch(self):
        with self.assertRaises(DimensionError):
            LpProblem(sense='max', c=(1, 1), A=RatMatrix([[1]]), row_senses=('<=',), rhs=(1,))

    def test_unknown_row_sense(self):
        with self.assertRaises(UsageError):
            LpProblem(sense='max', c=(1,), A=RatMatrix([[1]]), row_senses=('<',), rhs=(1,))


class TestSolve(unittest.TestCase):
    """测试求解状态"""

    def test_box(self):
        """max x1 + x2，x ≤ 1"""
        sol = solve(packing([1, 1], [[1, 0], [0, 1]], [1, 1]))
        self.assertEqual(sol.status, OPTIMAL)
        self.assertEqual(sol.value, Fraction(2))
        self.assertEqual(sol.primal, (Fraction(1), Fraction(1)))
        self.assertEqual(sol.dual, (Fraction(1), Fraction(1)))

    def test_infeasible(self):
        """x ≤ -1 且 x ≥ 0"""
        sol = solve(packing([1], [[1]], [-1]))
        self.assertEqual(sol.status, INFEASIBLE)
        self.assertIsNone(sol.value)
        with self.assertRaises(SolverStatusError):
            solve_optimal(packing([1], [[1]], [-1]))

    def test_unbounded(self):
        sol = solve(packing([1, 0], [[1, -1]], [1]))
        self.assertEqual(sol.status, UNBOUNDED)

    def test_min_with_covering_rows(self):
        """min x1 + 2x2，x1 + x2 ≥ 1"""
        p = LpProblem(sense='min', c=(1, 2), A=RatMatrix([[1, 1]]), row_senses=('>=',), rhs=(1,))
        sol = solve_optimal(p)
        self.assertEqual(sol.value, Fraction(1))
        self.assertEqual(sol.dual, (Fraction(1),))

    def test_free_variable_equality(self):
        """max -y1 - y2，y1 + y2 = 3，y 自由"""
        p = LpProblem(
            sense='max', c=(-1, -1), A=RatMatrix([[1, 1]]), row_senses=('=',), rhs=(3,),
            var_signs=('free', 'free'),
        )
        sol = solve_optimal(p)
        self.assertEqual(sol.value, Fraction(-3))
        self.assertTrue(primal_feasible(p, sol.primal))
        self.assertTrue(dual_feasible(p, sol.dual))

    def test_nonpositive_variable(self):
        """min x，x ≤ 0 符号约束，x ≥ -2"""
        p = LpProblem(
            sense='min', c=(1,), A=RatMatrix([[1]]), row_senses=('>=',), rhs=(-2,),
            var_signs=('nonpos',),
        )
        sol = solve_optimal(p)
        self.assertEqual(sol.value, Fraction(-2))
        self.assertEqual(dot(p.rhs, sol.dual), sol.value)

    def test_redundant_rows(self):
        """重复的等式行被删除后对偶仍满足强对偶"""
        p = LpProblem(
            sense='max', c=(1, 1), A=RatMatrix([[1, 1], [1, 1], [1, 0]]),
            row_senses=('=', '=', '<='), rhs=(2, 2, 1),
        )
        sol = solve_optimal(p)
        self.assertEqual(sol.value, Fraction(2))
        self.assertTrue(dual_feasible(p, sol.dual))
        self.assertEqual(dot(p.rhs, sol.dual), Fraction(2))


class TestDual(unittest.TestCase):
    """测试对偶相关函数"""

    def test_dual_problem_shape(self):
        p = packing([1, 2, 3], [[1, 1, 0], [0, 1, 1]], [1, 1])
        d = dual_problem(p)
        self.assertEqual(d.sense, 'min')
        self.assertEqual(d.A.shape, (3, 2))
        self.assertEqual(d.row_senses, ('>=',) * 3)
        self.assertEqual(d.var_signs, ('nonneg', 'nonneg'))
        self.assertEqual(solve_optimal(d).value, solve_optimal(p).value)

    def test_is_dual_optimal(self):
        p = packing([1, 1], [[1, 0], [0, 1]], [1, 1])
        self.assertTrue(is_dual_optimal(p, [1, 1]))
        self.assertFalse(is_dual_optimal(p, [2, 0]))
        self.assertFalse(is_dual_optimal(p, [2, 2]))


class TestDualVertexEnumeration(unittest.TestCase):
    """测试最优对偶面枚举"""

    def test_single_vertex(self):
        """max x1，x1 ≤ 1 的对偶只有 (1)"""
        result = enumerate_optimal_dual_vertices(packing([1], [[1]], [1]))
        self.assertEqual(result.vertices, [(Fraction(1),)])
        self.assertFalse(result.truncated)

    def test_c4_vertices(self):
        """C4 匹配的最优对偶面含 (1,1,0,0) 与 (0,0,1,1)"""
        g = c4_game()
        p = anchor_problem(g, (1, 1, 1, 1))
        result = enumerate_optimal_dual_vertices(p)
        vertices = set(result.vertices)
        one, zero = Fraction(1), Fraction(0)
        self.assertIn((one, one, zero, zero), vertices)
        self.assertIn((zero, zero, one, one), vertices)
        for y in result.vertices:
            self.assertTrue(is_dual_optimal(p, y))

    def test_cap_truncates(self):
        g = c4_game()
        result = enumerate_optimal_dual_vertices(anchor_problem(g, (1, 1, 1, 1)), cap=1)
        self.assertTrue(result.truncated)
        self.assertEqual(result.bases_visited, 1)


class TestStrongDualityProperty(unittest.TestCase):
    """随机打包型 LP 的强对偶"""

    @settings(max_examples=60, deadline=None)
    @given(st.integers(min_value=1, max_value=4), st.integers(min_value=1, max_value=4), st.data())
    def test_random_packing(self, n_rows, n_vars, data):
        entries = data.draw(st.lists(st.integers(min_value=0, max_value=3),
                                     min_size=n_rows * n_vars, max_size=n_rows * n_vars))
        rows = [entries[i * n_vars:(i + 1) * n_vars] for i in range(n_rows)]
        # 每列至少一个正元素，保证有界
        for j in range(n_vars):
            if not any(r[j] for r in rows):
                rows[0][j] = 1
        c = data.draw(st.lists(st.integers(min_value=-2, max_value=5), min_size=n_vars, max_size=n_vars))
        rhs = data.draw(st.lists(st.integers(min_value=0, max_value=6), min_size=n_rows, max_size=n_rows))
        p = packing(c, rows, rhs)
        sol = solve(p)
        self.assertEqual(sol.status, OPTIMAL)
        self.assertTrue(primal_feasible(p, sol.primal))
        self.assertTrue(dual_feasible(p, sol.dual))
        self.assertEqual(dot(p.rhs, sol.dual), sol.value)
        self.assertEqual(dot(p.c, sol.primal), sol.value)


if __name__ == '__main__':
    unittest.main()
