"""
应用族测试

测试覆盖范围：
1. 投资组合博弈 - 独立资产核非空、正相关资产核为空、闭式判定与一般路径一致
2. 最大割博弈 - 完全图 gamma、单边图、无边图、4-核成员（至多 8 个顶点的随机图）
3. 分类博弈 - 核为空、gamma 闭式公式、与一般路径一致
4. 组合比值博弈 - 闭式判定
5. 输入校验 - 负协方差、非对称矩阵、非正价格
"""

import unittest
import sys
import itertools
import os
from fractions import Fraction

# 添加项目根目录到路径
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', '..'))

from hypothesis import given, settings, strategies as st

from coregame.services.analysis import (
    bondareva_oracle, brute_force_member_check, core_nonempty, gamma_analysis
)
from coregame.services.domain import BooleanDomain
from coregame.services.exact import RatMatrix
from coregame.services.families import (
    assortment_analysis, assortment_game, cut_weight, maxcut_analysis, maxcut_game, maxcut_gamma,
    portfolio_core_closed_form, portfolio_game, ratio_game_core_check
)
from coregame.services.game import PACKING, GameInstance
from coregame.services.objective import RatioObjective
from coregame.utils.errors import AssumptionViolation, UsageError


def complete_weights(n, weight=1):
    return RatMatrix([[0 if i == j else weight for j in range(n)] for i in range(n)])


class TestPortfolio(unittest.TestCase):
    """测试投资组合博弈"""

    def test_independent_assets(self):
        report = portfolio_core_closed_form((3, 2), RatMatrix.identity(2), 2)
        self.assertTrue(report.nonempty)
        self.assertEqual(report.member, (Fraction(2), Fraction(1)))
        general = core_nonempty(portfolio_game((3, 2), RatMatrix.identity(2), 2))
        self.assertTrue(general.nonempty)
        self.assertEqual(general.member, report.member)

    def test_correlated_assets(self):
        sigma = RatMatrix([[1, '1/2'], ['1/2', 1]])
        report = portfolio_core_closed_form((3, 2), sigma, 2)
        self.assertFalse(report.nonempty)
        self.assertEqual(report.details['offending_pair'], [0, 1])
        general = core_nonempty(portfolio_game((3, 2), sigma, 2))
        self.assertFalse(general.nonempty)
        self.assertEqual(general.nu_grand, Fraction(2))
        self.assertEqual(general.anchor_grand, Fraction(3))

    def test_negative_covariance_rejected(self):
        with self.assertRaises(AssumptionViolation):
            portfolio_game((1, 1), RatMatrix([[1, -1], [-1, 1]]), 1)

    def test_bad_inputs(self):
        with self.assertRaises(UsageError):
            portfolio_game((1, 1), RatMatrix([[1, 1], [0, 1]]), 1)
        with self.assertRaises(UsageError):
            portfolio_game((1, 1), RatMatrix.identity(2), 0)

    @settings(max_examples=100, deadline=None)
    @given(st.integers(1, 6), st.integers(1, 2), st.data())
    def test_closed_form_matches_general(self, n, risk, data):
        mu = data.draw(st.lists(st.integers(0, 4), min_size=n, max_size=n))
        rows = [[0] * n for _ in range(n)]
        for i in range(n):
            rows[i][i] = data.draw(st.integers(0, 3))
            for j in range(i + 1, n):
                rows[i][j] = rows[j][i] = data.draw(st.integers(0, 2))
        sigma = RatMatrix(rows)
        closed = portfolio_core_closed_form(mu, sigma, risk)
        g = portfolio_game(mu, sigma, risk)
        general = core_nonempty(g)
        self.assertEqual(closed.nonempty, general.nonempty)
        self.assertEqual(closed.nonempty, bondareva_oracle(g).nonempty)
        if closed.nonempty:
            self.assertEqual(closed.member, general.member)


class TestMaxCut(unittest.TestCase):
    """测试最大割博弈"""

    def test_complete_graphs(self):
        self.assertEqual(maxcut_gamma(complete_weights(4)), Fraction(3))
        self.assertEqual(maxcut_gamma(complete_weights(6)), Fraction(10, 3))
        self.assertEqual(maxcut_gamma(complete_weights(8)), Fraction(7, 2))

    def test_k4_matches_gamma_analysis(self):
        report = gamma_analysis(maxcut_game(complete_weights(4)))
        self.assertEqual(report.gamma_min, Fraction(3))
        self.assertEqual(report.nu_grand, Fraction(4))

    def test_single_edge(self):
        analysis = maxcut_analysis(RatMatrix([[0, 1], [1, 0]]))
        self.assertEqual(analysis.gamma, Fraction(2))
        self.assertEqual(analysis.max_cut, Fraction(1))
        self.assertFalse(analysis.core_nonempty)

    def test_edgeless(self):
        analysis = maxcut_analysis(RatMatrix([[0, 0], [0, 0]]))
        self.assertEqual(analysis.gamma, Fraction(1))
        self.assertTrue(analysis.core_nonempty)

    def test_nonzero_diagonal_rejected(self):
        with self.assertRaises(UsageError):
            maxcut_game(RatMatrix([[1, 0], [0, 0]]))

    @settings(max_examples=100, deadline=None)
    @given(st.integers(2, 8), st.data())
    def test_random_graphs(self, n, data):
        rows = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                rows[i][j] = rows[j][i] = data.draw(st.integers(0, 3))
        W = RatMatrix(rows)
        analysis = maxcut_analysis(W)
        self.assertGreaterEqual(analysis.gamma, 1)
        self.assertLessEqual(analysis.gamma, 4)
        # 成员非负，只需对每个割的一侧 S 检查 cut(S) ≤ Σ_{i∈S} y_i
        for side in itertools.product((0, 1), repeat=n):
            share = sum((y for y, s in zip(analysis.member, side) if s), Fraction(0))
            self.assertLessEqual(cut_weight(W, side), share)
            self.assertLessEqual(cut_weight(W, side), analysis.max_cut)
        if n <= 5:
            g = maxcut_game(W)
            self.assertTrue(brute_force_member_check(g, analysis.member, grand_equality=False).holds)


class TestAssortment(unittest.TestCase):
    """测试分类博弈"""

    def test_two_products(self):
        analysis = assortment_analysis((1, 1), (1, 1))
        self.assertFalse(analysis.core_nonempty)
        self.assertEqual(analysis.gamma_min, Fraction(3, 2))
        self.assertEqual(analysis.n_core_member, (Fraction(1, 2), Fraction(1, 2)))
        self.assertEqual(analysis.nu_grand, Fraction(2, 3))
        self.assertEqual(analysis.anchor_grand, Fraction(1))

    def test_gamma_formula(self):
        for n in (2, 3, 4):
            for v in (1, 10, 100):
                analysis = assortment_analysis((1,) * n, (v,) * n)
                self.assertEqual(analysis.gamma_min, n - Fraction(n - 1, 1 + v))
                self.assertFalse(analysis.core_nonempty)

    def test_matches_general_path(self):
        p, v = (3, 2, 1), (1, 2, 1)
        analysis = assortment_analysis(p, v)
        report = core_nonempty(assortment_game(p, v))
        self.assertEqual(report.nu_grand, analysis.nu_grand)
        self.assertEqual(report.anchor_grand, analysis.anchor_grand)
        self.assertFalse(report.nonempty)

    def test_bad_inputs(self):
        with self.assertRaises(UsageError):
            assortment_game((1,), (1,))
        with self.assertRaises(UsageError):
            assortment_game((1, 0), (1, 1))


class TestRatioGame(unittest.TestCase):
    """测试组合比值博弈的闭式判定"""

    def test_empty(self):
        g = GameInstance(RatMatrix.identity(2), PACKING, BooleanDomain(2), RatioObjective((1, 1), (0, 1), 1))
        report = ratio_game_core_check(g)
        self.assertFalse(report.nonempty)
        self.assertEqual(report.anchor_grand, Fraction(3, 2))
        self.assertEqual(report.details['best_single_ratio'], '1')
        self.assertFalse(core_nonempty(g).nonempty)

    def test_linear_when_no_denominator(self):
        g = GameInstance(RatMatrix.identity(2), PACKING, BooleanDomain(2), RatioObjective((1, 2), (0, 0), 1))
        report = ratio_game_core_check(g)
        self.assertTrue(report.nonempty)
        self.assertEqual(report.member, (Fraction(1), Fraction(2)))

    def test_requires_positive_numerator(self):
        g = GameInstance(RatMatrix.identity(2), PACKING, BooleanDomain(2), RatioObjective((1, 0), (0, 1), 1))
        with self.assertRaises(UsageError):
            ratio_game_core_check(g)


if __name__ == '__main__':
    unittest.main()
