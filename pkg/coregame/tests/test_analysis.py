"""
核分析服务测试

测试覆盖范围：
1. 核非空判定 - C4 博弈（非空）、全冲突 C4（为空）、两人博弈（为空）
2. 核成员 - 对偶最优解提取、成员校验、逐联盟暴力校验
3. 整数性检查 - 整数最优解存在但核为空、非布尔定义域被拒绝
4. 等价刻画 - 三种刻画一致及条件 (i)(ii)
5. Bondareva-Shapley 预言机与全平衡覆盖博弈（随机博弈上二者的值一致）
6. gamma 近似核与超可加性探测
7. 博弈类型与变体 - covering、partition、b-scaled、生成元锥、联盟相关定义域与目标
8. 前提不成立 - 结构性假设与个体次可加性
9. 随机性质测试 - 定理路径、等价刻画与预言机一致
"""

import unittest
import sys
import os
from fractions import Fraction

# 添加项目根目录到路径
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', '..'))

from hypothesis import given, settings, strategies as st

from coregame.services.analysis import (
    bondareva_oracle, brute_force_member_check, core_nonempty, equivalence_check,
    gamma_analysis, integrality_check, is_core_member, superadditivity_probe, tbc_value
)
from coregame.services.domain import (
    BooleanDomain, CoalitionIndexedDomain, ExplicitDomain, GeneratorConeDomain, IntegerBoxDomain
)
from coregame.services.exact import RatMatrix
from coregame.services.game import COVERING, PACKING, PARTITION, GameInstance, nu
from coregame.services.lp import LpProblem, is_dual_optimal
from coregame.services.objective import (
    CoalitionDependentObjective, LinearObjective, QuadraticObjective, RatioObjective
)
from coregame.tests.fixtures import c4_game, symmetric, two_player_game
from coregame.utils.errors import AssumptionViolation, UsageError, ZeroGrandValueError

ONE = Fraction(1)
ZERO = Fraction(0)
HALF = Fraction(1, 2)


class TestCoreNonempty(unittest.TestCase):
    """测试核非空判定"""

    def test_c4_nonempty(self):
        g = c4_game()
        report = core_nonempty(g)
        self.assertTrue(report.nonempty)
        self.assertEqual(report.nu_grand, Fraction(2))
        self.assertEqual(report.anchor_grand, Fraction(2))
        self.assertEqual(report.gamma_min, ONE)
        self.assertEqual(sum(report.member), Fraction(2))
        self.assertTrue(brute_force_member_check(g, report.member).holds)

    def test_c4_full_conflicts_empty(self):
        report = core_nonempty(c4_game(full_conflicts=True))
        self.assertFalse(report.nonempty)
        self.assertEqual(report.nu_grand, ONE)
        self.assertEqual(report.anchor_grand, Fraction(2))
        self.assertIsNone(report.member)
        self.assertEqual(report.gamma_min, Fraction(2))

    def test_two_player_empty(self):
        report = core_nonempty(two_player_game())
        self.assertFalse(report.nonempty)
        self.assertEqual(report.nu_grand, ONE)
        self.assertEqual(report.gamma_min, Fraction(2))

    def test_to_dict(self):
        out = core_nonempty(c4_game()).to_dict()
        self.assertEqual(out['nu_grand'], '2')
        self.assertTrue(out['nonempty'])
        self.assertEqual(len(out['member']), 4)


class TestMembership(unittest.TestCase):
    """测试核成员校验"""

    def test_c4_members(self):
        g = c4_game()
        self.assertTrue(is_core_member(g, [HALF] * 4))
        self.assertTrue(is_core_member(g, [1, 1, 0, 0]))
        self.assertTrue(is_core_member(g, [0, 0, 1, 1]))
        self.assertFalse(is_core_member(g, [2, 0, 0, 0]))
        self.assertFalse(is_core_member(g, [1, 1, 1]))

    def test_dual_optimum_of_empty_core_rejected(self):
        """锚定 LP 对偶最优但 ν(1) ≠ anchor(1) 时不是核成员"""
        self.assertFalse(is_core_member(c4_game(full_conflicts=True), [HALF] * 4))

    def test_brute_force(self):
        g = c4_game()
        self.assertTrue(brute_force_member_check(g, [HALF] * 4).holds)
        check = brute_force_member_check(g, [2, 0, 0, 0])
        self.assertFalse(check.holds)
        self.assertIsNotNone(check.violated)
        check = brute_force_member_check(g, [1, 1, 1, 1])
        self.assertFalse(check.holds)
        self.assertEqual(check.violated, (1, 1, 1, 1))


class TestIntegrality(unittest.TestCase):
    """测试整数性检查"""

    def test_two_player(self):
        report = integrality_check(two_player_game())
        self.assertTrue(report.relax_has_integer_optimum)
        self.assertEqual(report.integer_optimum, (ONE, ONE))
        self.assertFalse(report.core_nonempty)
        self.assertTrue(report.converse_note)

    def test_covering_gap(self):
        g = GameInstance(RatMatrix([[1, 1, 0], [0, 1, 1], [1, 0, 1]]), COVERING, BooleanDomain(3),
                         LinearObjective((1, 1, 1)))
        report = integrality_check(g)
        self.assertFalse(report.relax_has_integer_optimum)
        self.assertEqual(report.anchor_value, Fraction(3, 2))

    def test_generator_rejected(self):
        g = GameInstance(
            RatMatrix([[1, 1]]), PACKING,
            GeneratorConeDomain(BooleanDomain(2), RatMatrix.identity(2)), LinearObjective((1, 1)),
        )
        with self.assertRaises(UsageError):
            integrality_check(g)

    def test_requires_boolean_domain(self):
        g = GameInstance(RatMatrix([[1, 1]]), PACKING, IntegerBoxDomain(2, 2), LinearObjective((1, 1)))
        with self.assertRaises(UsageError):
            integrality_check(g)
        g = GameInstance(RatMatrix([[1, 1]]), PACKING, ExplicitDomain.of([[0, 0], [1, 0]]), LinearObjective((1, 1)))
        with self.assertRaises(UsageError):
            integrality_check(g)


class TestEquivalence(unittest.TestCase):
    """测试三种刻画"""

    def test_two_player(self):
        report = equivalence_check(two_player_game())
        self.assertTrue(report.upper_condition_i)
        self.assertFalse(report.upper_condition_ii)
        self.assertFalse(report.main)
        self.assertFalse(report.upper)
        self.assertFalse(report.lower)
        self.assertEqual(report.lower_grand, ONE)

    def test_c4(self):
        report = equivalence_check(c4_game())
        self.assertTrue(report.main and report.upper and report.lower)

    def test_c4_full_conflicts(self):
        report = equivalence_check(c4_game(full_conflicts=True))
        self.assertTrue(report.upper_condition_i)
        self.assertFalse(report.upper_condition_ii)
        self.assertTrue(report.agree)


class TestOracle(unittest.TestCase):
    """测试 Bondareva-Shapley 预言机与全平衡覆盖博弈"""

    def test_agrees_with_theorem(self):
        for g in (c4_game(), c4_game(full_conflicts=True), two_player_game()):
            self.assertEqual(bondareva_oracle(g).nonempty, core_nonempty(g).nonempty)

    def test_oracle_member(self):
        report = bondareva_oracle(c4_game())
        self.assertEqual(report.lp_value, Fraction(2))
        self.assertTrue(brute_force_member_check(c4_game(), report.core_member).holds)

    def test_infeasible_coalitions_listed(self):
        g = GameInstance(
            RatMatrix.identity(2), COVERING, ExplicitDomain.of([[0, 0], [1, 0], [1, 1]]),
            LinearObjective((1, 1)),
        )
        report = bondareva_oracle(g)
        self.assertEqual(report.infeasible_coalitions, [])
        g = GameInstance(
            RatMatrix.identity(2), PARTITION, ExplicitDomain.of([[0, 0], [1, 0], [1, 1]]),
            LinearObjective((1, 1)),
        )
        report = bondareva_oracle(g)
        self.assertEqual(report.infeasible_coalitions, [(0, 1)])

    def test_tbc(self):
        self.assertEqual(tbc_value(c4_game(), (1, 1, 1, 1)), Fraction(2))
        self.assertEqual(tbc_value(c4_game(full_conflicts=True), (1, 1, 1, 1)), Fraction(2))
        self.assertEqual(tbc_value(c4_game(), (0, 0, 0, 0)), ZERO)

    @settings(max_examples=60, deadline=None)
    @given(st.integers(1, 4), st.integers(1, 4), st.data())
    def test_tbc_equals_oracle_value(self, n, m, data):
        """全平衡覆盖值是 Bondareva LP 的对偶，二者最优值相同"""
        A = RatMatrix(_binary_matrix(data, n, m))
        b = data.draw(st.lists(st.integers(-1, 3), min_size=m, max_size=m))
        g = GameInstance(A, PACKING, BooleanDomain(m), QuadraticObjective(b, _nonpositive_symmetric(data, m)))
        oracle = bondareva_oracle(g)
        self.assertEqual(tbc_value(g, (1,) * n), oracle.lp_value)
        self.assertEqual(oracle.nonempty, tbc_value(g, (1,) * n) == nu(g, (1,) * n))


class TestGammaAndProbe(unittest.TestCase):
    """测试 gamma 近似核与超可加性探测"""

    def test_gamma_two_player(self):
        report = gamma_analysis(two_player_game())
        self.assertEqual(report.gamma_min, Fraction(2))
        self.assertEqual(report.member, (ONE, ONE))
        self.assertTrue(report.coalition_check)

    def test_gamma_rejects_covering(self):
        g = GameInstance(RatMatrix.identity(1), COVERING, BooleanDomain(1), LinearObjective((1,)))
        with self.assertRaises(UsageError):
            gamma_analysis(g)

    def test_gamma_zero_grand_value(self):
        g = GameInstance(RatMatrix.identity(1), PACKING, BooleanDomain(1), LinearObjective((0,)))
        with self.assertRaises(ZeroGrandValueError):
            gamma_analysis(g)

    def test_probe_c4(self):
        self.assertTrue(superadditivity_probe(c4_game()).holds)

    def test_probe_full_conflicts(self):
        report = superadditivity_probe(c4_game(full_conflicts=True))
        self.assertFalse(report.holds)
        self.assertEqual(report.witness_values, (ONE, ONE, ONE))
        w, u = report.witness
        self.assertEqual(tuple(a | b for a, b in zip(w, u)), (1, 1, 1, 1))


class TestSensesAndVariants(unittest.TestCase):
    """测试博弈类型与变体"""

    def test_covering_nonempty(self):
        g = GameInstance(RatMatrix([[1, 0, 1], [0, 1, 1]]), COVERING, BooleanDomain(3),
                         LinearObjective((1, 1, '3/2')))
        report = core_nonempty(g)
        self.assertTrue(report.nonempty)
        self.assertEqual(report.nu_grand, Fraction(3, 2))
        self.assertIsNone(report.gamma_min)
        self.assertTrue(brute_force_member_check(g, report.member).holds)
        self.assertTrue(bondareva_oracle(g).nonempty)

    def test_covering_empty(self):
        g = GameInstance(RatMatrix([[1, 1, 0], [0, 1, 1], [1, 0, 1]]), COVERING, BooleanDomain(3),
                         LinearObjective((1, 1, 1)))
        self.assertFalse(core_nonempty(g).nonempty)
        self.assertFalse(bondareva_oracle(g).nonempty)

    def test_partition(self):
        g = GameInstance(RatMatrix.identity(2), PARTITION, BooleanDomain(2), LinearObjective((1, 2)))
        report = core_nonempty(g)
        self.assertTrue(report.nonempty)
        self.assertEqual(report.member, (ONE, Fraction(2)))
        self.assertTrue(any('ν^ptn' in note for note in report.notes))
        self.assertIn('partition_sign_check', report.details)

    def test_partition_empty(self):
        g = GameInstance(RatMatrix.identity(2), PARTITION, BooleanDomain(2), two_player_game().objective)
        report = core_nonempty(g)
        self.assertFalse(report.nonempty)
        self.assertEqual(report.nu_grand, ZERO)
        self.assertIsNone(report.gamma_min)

    def test_b_scaled(self):
        """b = 2 时核成员等于 b 乘以未缩放 LP 的对偶最优解"""
        A = RatMatrix([[1, 0], [1, 1], [0, 1]])
        g = GameInstance(A, PACKING, IntegerBoxDomain(2, 2), LinearObjective((2, 1)), rhs_scale=2)
        self.assertEqual(g.relaxation_variant, 'b-scaled')
        report = core_nonempty(g)
        self.assertTrue(report.nonempty)
        self.assertEqual(report.nu_grand, Fraction(4))
        unscaled = LpProblem(sense='max', c=(2, 1), A=A, row_senses=('<=',) * 3, rhs=(1, 1, 1))
        self.assertTrue(is_dual_optimal(unscaled, [v / 2 for v in report.member]))
        self.assertTrue(is_core_member(g, report.member))
        self.assertTrue(brute_force_member_check(g, report.member).holds)

    def test_generator_identity_matches_standard(self):
        standard = core_nonempty(c4_game())
        base = c4_game()
        g = GameInstance(
            base.A, PACKING, GeneratorConeDomain(BooleanDomain(4), RatMatrix.identity(4)), base.objective
        )
        self.assertEqual(g.relaxation_variant, 'q-generator')
        report = core_nonempty(g)
        self.assertEqual(report.theorem_used, 'q-generator')
        self.assertEqual((report.nonempty, report.nu_grand, report.anchor_grand, report.member),
                         (standard.nonempty, standard.nu_grand, standard.anchor_grand, standard.member))

    def test_coalition_domain(self):
        family = {
            (0, 0): ExplicitDomain.of([[0, 0]]),
            (1, 0): ExplicitDomain.of([[0, 0], [1, 0]]),
            (0, 1): ExplicitDomain.of([[0, 0], [0, 1]]),
            (1, 1): BooleanDomain(2),
        }
        g = GameInstance(RatMatrix.identity(2), PACKING, CoalitionIndexedDomain(2, family),
                         LinearObjective((1, 3)))
        report = core_nonempty(g)
        self.assertEqual(report.theorem_used, 'coalition-domain')
        self.assertTrue(report.nonempty)
        self.assertEqual(report.member, (ONE, Fraction(3)))
        self.assertTrue(bondareva_oracle(g).nonempty)

    def test_player_dependent_objective(self):
        table = {
            ((0, 0), (0, 0)): 0,
            ((0, 0), (1, 0)): 0, ((1, 0), (1, 0)): 1,
            ((0, 0), (0, 1)): 0, ((0, 1), (0, 1)): 1,
            ((0, 0), (1, 1)): 0, ((1, 0), (1, 1)): 1, ((0, 1), (1, 1)): 1, ((1, 1), (1, 1)): 1,
        }
        g = GameInstance(RatMatrix.identity(2), PACKING, BooleanDomain(2),
                         CoalitionDependentObjective(2, 2, table))
        self.assertEqual(g.relaxation_variant, 'a-dependent')
        report = core_nonempty(g)
        self.assertEqual(report.theorem_used, 'a-dependent')
        self.assertFalse(report.nonempty)
        self.assertEqual(report.anchor_grand, Fraction(2))
        self.assertFalse(bondareva_oracle(g).nonempty)


class TestHypotheses(unittest.TestCase):
    """测试定理前提不成立"""

    def test_zero_column(self):
        g = GameInstance(RatMatrix([[1, 0], [1, 0]]), PACKING, BooleanDomain(2), LinearObjective((1, 1)))
        with self.assertRaises(AssumptionViolation) as ctx:
            core_nonempty(g)
        self.assertEqual(ctx.exception.exit_code, 3)
        self.assertTrue(ctx.exception.violations)

    def test_not_individually_subadditive(self):
        g = GameInstance(RatMatrix.identity(2), PACKING, BooleanDomain(2),
                         QuadraticObjective((1, 1), symmetric(2, {(0, 1): 1})))
        with self.assertRaises(AssumptionViolation):
            core_nonempty(g)


def _binary_matrix(data, n, m):
    rows = [data.draw(st.lists(st.integers(0, 1), min_size=m, max_size=m)) for _ in range(n)]
    for j in range(m):
        if not any(r[j] for r in rows):
            rows[data.draw(st.integers(0, n - 1))][j] = 1
    return rows


def _nonpositive_symmetric(data, m, low=-2, high=0):
    entries = {}
    for i in range(m):
        for j in range(i, m):
            q = data.draw(st.integers(low, high)) if i != j else data.draw(st.integers(-1, 1))
            if q:
                entries[(i, j)] = Fraction(q, 2)
    return symmetric(m, entries)


class TestRandomizedAgreement(unittest.TestCase):
    """定理路径、三种刻画与 Bondareva 预言机在随机实例上一致"""

    def _assert_agree(self, g):
        report = core_nonempty(g)
        oracle = bondareva_oracle(g)
        self.assertEqual(report.nonempty, oracle.nonempty)
        if report.member is not None:
            self.assertTrue(brute_force_member_check(g, report.member).holds)
        return report

    @settings(max_examples=200, deadline=None)
    @given(st.integers(1, 5), st.integers(1, 6), st.booleans(), st.data())
    def test_packing(self, n, m, use_ratio, data):
        A = RatMatrix(_binary_matrix(data, n, m))
        if use_ratio:
            c = data.draw(st.lists(st.integers(0, 4), min_size=m, max_size=m))
            d = data.draw(st.lists(st.integers(0, 3), min_size=m, max_size=m))
            objective = RatioObjective(c, d, data.draw(st.integers(1, 3)))
        else:
            b = data.draw(st.lists(st.integers(-1, 3), min_size=m, max_size=m))
            objective = QuadraticObjective(b, _nonpositive_symmetric(data, m))
        g = GameInstance(A, PACKING, BooleanDomain(m), objective)
        report = self._assert_agree(g)
        self.assertEqual(equivalence_check(g).main, report.nonempty)

    @settings(max_examples=50, deadline=None)
    @given(st.integers(1, 3), st.integers(0, 2), st.data())
    def test_partition(self, n, extra, data):
        identity = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
        cols = [data.draw(st.lists(st.integers(0, 1), min_size=n, max_size=n).filter(any))
                for _ in range(extra)]
        A = RatMatrix([identity[i] + [c[i] for c in cols] for i in range(n)])
        m = n + extra
        b = data.draw(st.lists(st.integers(-1, 3), min_size=m, max_size=m))
        g = GameInstance(A, PARTITION, BooleanDomain(m), QuadraticObjective(b, _nonpositive_symmetric(data, m)))
        self._assert_agree(g)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(1, 3), st.integers(1, 4), st.data())
    def test_covering(self, n, m, data):
        rows = _binary_matrix(data, n, m)
        for r in rows:
            if not any(r):
                r[data.draw(st.integers(0, m - 1))] = 1
        b = data.draw(st.lists(st.integers(0, 3), min_size=m, max_size=m))
        Q = _nonpositive_symmetric(data, m, low=0, high=2)
        Q = RatMatrix([[v if i != j else 0 for j, v in enumerate(row)] for i, row in enumerate(Q.rows)])
        g = GameInstance(RatMatrix(rows), COVERING, BooleanDomain(m), QuadraticObjective(b, Q))
        self._assert_agree(g)


if __name__ == '__main__':
    unittest.main()
