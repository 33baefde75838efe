"""
分析命令
analyze、member、gamma、oracle、check-is、equiv
"""

import argparse
import logging

from coregame.commands import add_common_flags, command, emit
from coregame.config import DUAL_VERTEX_CAP, MAX_CLASS_CHECK_DIM
from coregame.services.analysis import (
    bondareva_oracle, brute_force_member_check, core_nonempty, equivalence_check,
    gamma_analysis, integrality_check, is_core_member, superadditivity_probe
)
from coregame.services.domain import BooleanDomain, grand_coalition
from coregame.services.exact import format_rational, format_vector
from coregame.services.function_classes import (
    class_checks, is_individually_subadditive, quadratic_is_characterization, relaxation_kind
)
from coregame.services.game import anchor_problem, describe, dual_to_member, value_chain
from coregame.services.instance_io import load_instance, load_vector
from coregame.services.lp import enumerate_optimal_dual_vertices
from coregame.services.objective import QuadraticObjective
from coregame.utils.errors import EmptyCoreError, InvariantError

logger = logging.getLogger(__name__)


def _verdict(nonempty: bool) -> str:
    return '核非空' if nonempty else '核为空'


@command
def cmd_analyze(args: argparse.Namespace) -> int:
    """判定核是否非空，可附加取值链、等价刻画、整数性检查与超可加性探测"""
    g = load_instance(args.instance)
    report = core_nonempty(g)
    payload = {'instance': describe(g), 'core': report.to_dict(), 'verdict': 'nonempty' if report.nonempty else 'empty'}
    if args.chain:
        payload['chain'] = value_chain(g, grand_coalition(g.n)).to_dict()
    if args.equiv:
        payload['equivalence'] = equivalence_check(g).to_dict()
    if args.integrality:
        payload['integrality'] = integrality_check(g).to_dict()
    if args.probe:
        payload['superadditivity'] = superadditivity_probe(g).to_dict()
    summary = (f"ν(1) = {format_rational(report.nu_grand)}，anchor(1) = {format_rational(report.anchor_grand)}，"
               f"{_verdict(report.nonempty)}")
    return emit(args, payload, summary)


@command
def cmd_member(args: argparse.Namespace) -> int:
    """提取核成员、校验给定分配或列出全部最优对偶顶点"""
    g = load_instance(args.instance)
    if args.check:
        y = load_vector(args.check)
        payload = {'y': format_vector(y), 'is_core_member': is_core_member(g, y)}
        if args.brute:
            payload['brute_force'] = brute_force_member_check(g, y).to_dict()
        return emit(args, payload, '通过' if payload['is_core_member'] else '未通过')
    report = core_nonempty(g)
    if not report.nonempty:
        raise EmptyCoreError(
            f"核为空: ν(1) = {format_rational(report.nu_grand)} ≠ anchor(1) = {format_rational(report.anchor_grand)}"
        )
    payload = {'member': format_vector(report.member)}
    if args.enumerate is not None:
        result = enumerate_optimal_dual_vertices(anchor_problem(g, grand_coalition(g.n)), args.enumerate)
        payload['vertices'] = [format_vector(dual_to_member(g, v)) for v in result.vertices]
        payload['bases_visited'] = result.bases_visited
        payload['truncated'] = result.truncated
    return emit(args, payload, f"核成员 ({', '.join(payload['member'])})")


@command
def cmd_gamma(args: argparse.Namespace) -> int:
    g = load_instance(args.instance)
    report = gamma_analysis(g)
    return emit(args, report.to_dict(), f"gamma_min = {format_rational(report.gamma_min)}")


@command
def cmd_oracle(args: argparse.Namespace) -> int:
    """Bondareva-Shapley 暴力预言机，--compare 与定理路径比对"""
    g = load_instance(args.instance)
    report = bondareva_oracle(g)
    payload = {'oracle': report.to_dict()}
    summary = f"预言机: {_verdict(report.nonempty)}"
    if args.compare:
        theorem = core_nonempty(g)
        agrees = theorem.nonempty == report.nonempty
        if theorem.member is not None:
            agrees = agrees and brute_force_member_check(g, theorem.member).holds
        payload['theorem'] = theorem.to_dict()
        payload['agrees'] = agrees
        if not agrees:
            raise InvariantError("预言机与定理路径结论不一致")
        summary = '预言机与定理路径一致'
    return emit(args, payload, summary)


@command
def cmd_check_is(args: argparse.Namespace) -> int:
    """检查个体次可加性，并给出松弛类型；二次目标在布尔定义域上附带闭式刻画"""
    g = load_instance(args.instance)
    verdict = is_individually_subadditive(
        g.objective, g.domain, g.relaxation_variant, A=g.A, b=g.rhs_scale, superadditive=not g.maximizes
    )
    payload = {'verdict': verdict.to_dict()}
    if not g.objective.requires_coalition:
        payload['relaxation_kind'] = relaxation_kind(
            g.objective, g.domain, g.relaxation_variant, A=g.A, b=g.rhs_scale
        )
    f = g.objective
    if isinstance(f, QuadraticObjective) and isinstance(g.domain, BooleanDomain):
        payload['quadratic_characterization'] = quadratic_is_characterization('boolean', f.b, f.Q).to_dict()
    if args.classes and not f.requires_coalition:
        if g.m > MAX_CLASS_CHECK_DIM:
            logger.warning(f"m = {g.m} 超过函数类检查上限 {MAX_CLASS_CHECK_DIM}，跳过")
        else:
            payload['classes'] = class_checks(f, g.m).to_dict()
    return emit(args, payload, '满足' if verdict.holds else '不满足')


@command
def cmd_equiv(args: argparse.Namespace) -> int:
    g = load_instance(args.instance)
    report = equivalence_check(g)
    return emit(args, report.to_dict(), f"三种刻画一致: {_verdict(report.main)}")


def register_analysis_commands(subparsers) -> None:
    """
    注册分析命令

    Args:
        subparsers: argparse 子命令集合
    """
    p = subparsers.add_parser('analyze', help='判定核是否非空')
    p.add_argument('instance', help='实例 JSON 文件')
    p.add_argument('--chain', action='store_true', help='输出四个博弈的取值链')
    p.add_argument('--equiv', action='store_true', help='交叉检查三种刻画')
    p.add_argument('--integrality', action='store_true', help='在锚定 LP 最优面上搜索整数点')
    p.add_argument('--probe', action='store_true', help='探测特征函数的超可加性')
    add_common_flags(p)
    p.set_defaults(handler=cmd_analyze)

    p = subparsers.add_parser('member', help='提取或校验核成员')
    p.add_argument('instance', help='实例 JSON 文件')
    p.add_argument('--check', metavar='Y_JSON', help='校验给定分配向量')
    p.add_argument('--brute', action='store_true', help='配合 --check 逐个联盟暴力校验')
    p.add_argument('--enumerate', type=int, nargs='?', const=DUAL_VERTEX_CAP, metavar='CAP',
                   help='列出全部最优对偶顶点（默认上限 %(const)s 个基）')
    add_common_flags(p)
    p.set_defaults(handler=cmd_member)

    p = subparsers.add_parser('gamma', help='最小近似核参数')
    p.add_argument('instance', help='实例 JSON 文件')
    add_common_flags(p)
    p.set_defaults(handler=cmd_gamma)

    p = subparsers.add_parser('oracle', help='Bondareva-Shapley 暴力预言机')
    p.add_argument('instance', help='实例 JSON 文件')
    p.add_argument('--compare', action='store_true', help='与定理路径比对')
    add_common_flags(p)
    p.set_defaults(handler=cmd_oracle)

    p = subparsers.add_parser('check-is', help='检查个体次可加性')
    p.add_argument('instance', help='实例 JSON 文件')
    p.add_argument('--classes', action='store_true', help='附带函数类检查（表函数语义，2^m 个点）')
    add_common_flags(p)
    p.set_defaults(handler=cmd_check_is)

    p = subparsers.add_parser('equiv', help='交叉检查三种核刻画')
    p.add_argument('instance', help='实例 JSON 文件')
    add_common_flags(p)
    p.set_defaults(handler=cmd_equiv)
