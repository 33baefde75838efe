"""
函数类判定测试

测试覆盖范围：
1. 个体次可加性 - 成立与见证点、个体超可加性
2. 布尔格函数类 - 各类的典型反例
3. 函数类包含链 - SM ⇒ FS ⇒ SA ⇒ IS 与 FS ⇒ GFS（m ≤ 4 的随机表函数，含单调表）
4. 大联盟分数次可加但不次可加的反例
5. 二次函数的闭式判定 - 四种定义域，随机 Q 与精确网格上的逐点检查一致
6. 松弛与延拓 - 松弛类型（含生成元变体）、最优值关系、空可行集
"""

import unittest
import sys
import itertools
import os
from fractions import Fraction

# 添加项目根目录到路径
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', '..'))

from hypothesis import given, settings, strategies as st

from coregame.services.domain import BooleanDomain, ExplicitDomain, GeneratorConeDomain
from coregame.services.exact import RatMatrix
from coregame.services.function_classes import (
    QUADRATIC_DOMAIN_KINDS, class_checks, is_individually_subadditive,
    quadratic_is_characterization, relaxation_fact_check, relaxation_kind
)
from coregame.services.objective import (
    Q_GENERATOR, LinearObjective, QuadraticObjective, RatioObjective, TableObjective
)
from coregame.tests.fixtures import symmetric, table_by_size
from coregame.utils.errors import TooLargeError, UsageError
from coregame.utils.helpers import boolean_vectors

HALF = Fraction(1, 2)

# 逐点检查用的网格
GRIDS = {
    'boolean': (0, 1),
    'box': (0, HALF, 1),
    'orthant': (0, HALF, 1, 2),
    'full_space': (-1, 0, HALF, 1),
}


class TestIndividualSubadditivity(unittest.TestCase):
    """测试个体次可加性检查"""

    def test_negative_interaction_holds(self):
        f = QuadraticObjective((1, 1, 1), symmetric(3, {(0, 1): -1, (1, 2): '-1/2'}))
        verdict = is_individually_subadditive(f, BooleanDomain(3))
        self.assertTrue(verdict.holds)
        self.assertEqual(verdict.checked_points, 8)
        self.assertIsNone(verdict.witness)

    def test_positive_interaction_witness(self):
        """q12 = +1 时在 (1,1) 处失败"""
        f = QuadraticObjective((1, 1), symmetric(2, {(0, 1): 1}))
        verdict = is_individually_subadditive(f, BooleanDomain(2))
        self.assertFalse(verdict.holds)
        self.assertEqual(verdict.witness, (Fraction(1), Fraction(1)))
        self.assertEqual(verdict.f_value, Fraction(4))
        self.assertEqual(verdict.relaxed_value, Fraction(2))

    def test_superadditive(self):
        f = QuadraticObjective((1, 1), symmetric(2, {(0, 1): 1}))
        self.assertTrue(is_individually_subadditive(f, BooleanDomain(2), superadditive=True).holds)
        g = QuadraticObjective((1, 1), symmetric(2, {(0, 1): -1}))
        self.assertFalse(is_individually_subadditive(g, BooleanDomain(2), superadditive=True).holds)

    def test_ratio_on_boolean(self):
        f = RatioObjective((1, 1), (0, 1), 1)
        self.assertTrue(is_individually_subadditive(f, BooleanDomain(2)).holds)


class TestClassChecks(unittest.TestCase):
    """测试布尔格上的函数类"""

    def test_is_but_not_subadditive(self):
        f = table_by_size(3, {0: 0, 1: 2, 2: 3, 3: 6})
        report = class_checks(f)
        self.assertTrue(report.verdicts['individually_subadditive'])
        self.assertFalse(report.verdicts['subadditive'])

    def test_is_but_not_submodular(self):
        """单点 1、两点 3/2、全集 3：f(1,1,1) = 3 > 3/2 + 1，同样不次可加"""
        f = table_by_size(3, {0: 0, 1: 1, 2: '3/2', 3: 3})
        report = class_checks(f)
        self.assertTrue(report.verdicts['individually_subadditive'])
        self.assertFalse(report.verdicts['submodular'])
        self.assertFalse(report.verdicts['subadditive'])

    def test_ratio_not_submodular(self):
        """m = 3，c = (7,1,1)，d = (1,1,1)"""
        f = RatioObjective((7, 1, 1), (1, 1, 1), 1)
        report = class_checks(f)
        self.assertFalse(report.verdicts['submodular'])

    def test_ratio_submodular_small(self):
        f = RatioObjective((7, 1), (1, 1), 1)
        self.assertTrue(class_checks(f).verdicts['submodular'])

    def test_quadratic_not_is(self):
        f = QuadraticObjective((1, 1), symmetric(2, {(0, 1): 1}))
        report = class_checks(f)
        self.assertFalse(report.verdicts['individually_subadditive'])
        self.assertEqual(report.witnesses['individually_subadditive'], (1, 1))

    def test_gfs_not_subadditive(self):
        """单调、f(0) = 0、大联盟分数次可加，但不次可加"""
        values = {(0, 0, 0): 0, (1, 0, 0): 1, (0, 1, 0): 1, (0, 0, 1): 1,
                  (1, 1, 0): 3, (1, 0, 1): 2, (0, 1, 1): 2, (1, 1, 1): 3}
        report = class_checks(TableObjective(3, values))
        self.assertTrue(report.verdicts['monotone'])
        self.assertTrue(report.verdicts['grand_fractionally_subadditive'])
        self.assertFalse(report.verdicts['subadditive'])
        self.assertFalse(report.verdicts['fractionally_subadditive'])

    def test_linear_all_classes(self):
        report = class_checks(LinearObjective((1, 2, 3)))
        self.assertTrue(all(report.verdicts.values()))

    def test_dimension_cap(self):
        with self.assertRaises(TooLargeError):
            class_checks(LinearObjective((1,) * 13))

    @settings(max_examples=100, deadline=None)
    @given(st.integers(3, 4), st.booleans(), st.data())
    def test_inclusion_chain(self, m, monotone, data):
        """SM ⇒ FS ⇒ SA ⇒ IS，FS ⇒ GFS"""
        points = sorted((x for x in boolean_vectors(m) if any(x)), key=sum)
        raw = data.draw(st.lists(st.integers(min_value=0, max_value=6),
                                 min_size=len(points), max_size=len(points)))
        values = {(0,) * m: 0}
        for x, r in zip(points, raw):
            if monotone:
                below = [values[x[:i] + (0,) + x[i + 1:]] for i in range(m) if x[i]]
                r = max([r] + below)
            values[x] = r
        v = class_checks(TableObjective(m, values)).verdicts
        if monotone:
            self.assertTrue(v['monotone'])
        implications = [
            ('submodular', 'fractionally_subadditive'),
            ('fractionally_subadditive', 'subadditive'),
            ('subadditive', 'individually_subadditive'),
            ('fractionally_subadditive', 'grand_fractionally_subadditive'),
        ]
        for stronger, weaker in implications:
            if v[stronger]:
                self.assertTrue(v[weaker], f"{stronger} 成立但 {weaker} 不成立: {values}")


class TestQuadraticCharacterization(unittest.TestCase):
    """测试二次函数 IS 的闭式判定"""

    def test_boolean(self):
        Q = symmetric(2, {(0, 1): -1, (0, 0): 5})
        self.assertTrue(quadratic_is_characterization('boolean', (1, 1), Q).holds)
        self.assertFalse(quadratic_is_characterization('boolean', (1, 1), symmetric(2, {(0, 1): 1})).holds)

    def test_box_needs_nonnegative_diagonal(self):
        Q = symmetric(2, {(0, 1): -1, (0, 0): -1})
        self.assertFalse(quadratic_is_characterization('box', (1, 1), Q).holds)
        self.assertTrue(quadratic_is_characterization('boolean', (1, 1), Q).holds)

    def test_orthant_and_full_space(self):
        Q = symmetric(2, {(0, 1): -1})
        self.assertTrue(quadratic_is_characterization('orthant', (1, 1), Q).holds)
        self.assertFalse(quadratic_is_characterization('full_space', (1, 1), Q).holds)
        self.assertTrue(quadratic_is_characterization('full_space', (1, 1), RatMatrix.zeros(2, 2)).holds)

    def test_agrees_with_enumeration(self):
        for q01 in (-2, -1, 0, 1):
            for q00 in (-1, 0, 1):
                Q = symmetric(2, {(0, 1): q01, (0, 0): q00})
                closed = quadratic_is_characterization('boolean', (1, 1), Q).holds
                brute = is_individually_subadditive(QuadraticObjective((1, 1), Q), BooleanDomain(2)).holds
                self.assertEqual(closed, brute, f"q01={q01}, q00={q00}")

    def test_unknown_kind(self):
        with self.assertRaises(UsageError):
            quadratic_is_characterization('sphere', (1,), RatMatrix([[0]]))

    @settings(max_examples=100, deadline=None)
    @given(st.integers(1, 5), st.data())
    def test_random_q_matches_grid(self, m, data):
        """
        每种定义域在有限网格上逐点检查 f(x) ≤ Σ x_j f(e_j)

        e_i + e_j、e_i / 2、2 e_i、-e_i、e_i - e_j 覆盖了闭式条件的全部反例方向
        """
        entries = {}
        for i in range(m):
            entries[(i, i)] = data.draw(st.sampled_from([-1, 0, 0, 1]))
            for j in range(i + 1, m):
                entries[(i, j)] = data.draw(st.sampled_from([-2, -1, 0, 0, 0, 1]))
        Q = symmetric(m, entries)
        b = data.draw(st.lists(st.integers(-2, 2), min_size=m, max_size=m))
        f = QuadraticObjective(b, Q)
        singles = [f.evaluate(tuple(int(k == j) for k in range(m))) for j in range(m)]
        for kind in QUADRATIC_DOMAIN_KINDS:
            grid = GRIDS[kind]
            pointwise = all(
                f.evaluate(x) <= sum((xj * s for xj, s in zip(x, singles)), Fraction(0))
                for x in itertools.product(grid, repeat=m)
            )
            closed = quadratic_is_characterization(kind, b, Q).holds
            self.assertEqual(closed, pointwise, f"{kind}: Q = {Q.to_lists()}")
        brute = is_individually_subadditive(f, BooleanDomain(m)).holds
        self.assertEqual(quadratic_is_characterization('boolean', b, Q).holds, brute)


class TestRelaxation(unittest.TestCase):
    """测试松弛与延拓"""

    def test_kinds(self):
        d = BooleanDomain(2)
        self.assertEqual(relaxation_kind(LinearObjective((1, 2)), d), 'extension')
        self.assertEqual(relaxation_kind(QuadraticObjective((1, 1), symmetric(2, {(0, 1): -1})), d),
                         'upper-relaxation')
        self.assertEqual(relaxation_kind(QuadraticObjective((1, 1), symmetric(2, {(0, 1): 1})), d),
                         'lower-relaxation')

    def test_fact_check_relaxation(self):
        """x1 + x2 - 2 x1 x2：max f = 1 < max F = 2"""
        f = QuadraticObjective((1, 1), symmetric(2, {(0, 1): -1}))
        report = relaxation_fact_check(f, BooleanDomain(2))
        self.assertEqual(report.kind, 'upper-relaxation')
        self.assertEqual(report.f_max, Fraction(1))
        self.assertEqual(report.F_max, Fraction(2))
        self.assertFalse(report.f_optimum_attains_F)
        self.assertTrue(report.consistent)

    def test_fact_check_with_feasibility(self):
        f = QuadraticObjective((1, 1), symmetric(2, {(0, 1): -1}))
        report = relaxation_fact_check(f, BooleanDomain(2), feasible=lambda x: sum(x) <= 1)
        self.assertTrue(report.f_optimum_attains_F)
        self.assertTrue(report.f_argmax_in_F_argmax)

    def test_fact_check_empty_feasible_set(self):
        with self.assertRaises(UsageError):
            relaxation_fact_check(LinearObjective((1, 1)), BooleanDomain(2), feasible=lambda x: False)

    def test_generator_variant(self):
        """f = x1 x2 在 {0, (1,1)} 上：标准系数全为 0，生成元 (1,1) 的系数恰好为 f(1,1)"""
        f = QuadraticObjective((0, 0), symmetric(2, {(0, 1): HALF}))
        d = GeneratorConeDomain(ExplicitDomain.of([[0, 0], [1, 1]]), RatMatrix([[1], [1]]))
        self.assertEqual(relaxation_kind(f, d), 'lower-relaxation')
        self.assertEqual(relaxation_kind(f, d, Q_GENERATOR), 'extension')
        report = relaxation_fact_check(f, d, variant=Q_GENERATOR)
        self.assertEqual(report.kind, 'extension')
        self.assertEqual(report.F_max, Fraction(1))
        self.assertTrue(report.consistent)


if __name__ == '__main__':
    unittest.main()
