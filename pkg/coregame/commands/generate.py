"""
实例生成命令
generate portfolio | maxcut | assortment | qmatching | rmatching | sat-reduction

默认输出实例 JSON；--closed-form 改为输出该族的闭式核判定
"""

import argparse
import logging
import os
from fractions import Fraction
from typing import List, Tuple

from coregame.commands import add_common_flags, command, emit
from coregame.services.exact import RatMatrix, as_vector
from coregame.services.families import (
    assortment_analysis, assortment_game, maxcut_analysis, maxcut_game,
    portfolio_core_closed_form, portfolio_game
)
from coregame.services.instance_io import dump_instance, to_json, write_output
from coregame.services.matching import (
    WeightedGraph, qmatching_core_check, quadratic_matching_game, ratio_matching_game,
    rmatching_core_check
)
from coregame.services.sat_reduction import parse_sat, sat_quadratic_matching_game, sat_reduction, verify_reduction
from coregame.utils.errors import UsageError

logger = logging.getLogger(__name__)


def parse_matrix(text: str) -> RatMatrix:
    """"1,1/2;1/2,1" 形式的矩阵"""
    try:
        return RatMatrix([[cell.strip() for cell in row.split(',')] for row in text.split(';')])
    except UsageError:
        raise
    except Exception as e:
        raise UsageError(f"无法解析矩阵 {text!r}: {e}")


def parse_edges(text: str) -> Tuple[Tuple[int, int], ...]:
    """"0-1,1-2" 形式的边表"""
    edges = []
    for item in text.split(','):
        try:
            u, v = item.strip().split('-')
            edges.append((int(u), int(v)))
        except ValueError:
            raise UsageError(f"无法解析边 {item!r}，应为 u-v")
    return tuple(edges)


def parse_pair_entries(text: str, size: int) -> RatMatrix:
    """"i,j,q;..." 形式的对称矩阵非零元"""
    rows: List[List[Fraction]] = [[Fraction(0)] * size for _ in range(size)]
    if text:
        for item in text.split(';'):
            parts = [p.strip() for p in item.split(',')]
            if len(parts) != 3:
                raise UsageError(f"无法解析矩阵元 {item!r}，应为 i,j,q")
            i, j = int(parts[0]), int(parts[1])
            if not (0 <= i < size and 0 <= j < size):
                raise UsageError(f"矩阵元下标 ({i}, {j}) 超出范围")
            value = as_vector([parts[2]])[0]
            rows[i][j] = rows[j][i] = value
    return RatMatrix(rows)


def _graph(args: argparse.Namespace) -> WeightedGraph:
    return WeightedGraph(args.vertices, parse_edges(args.edges))


def _finish(args: argparse.Namespace, g, report_fn) -> int:
    if args.closed_form:
        report = report_fn()
        return emit(args, report.to_dict())
    dump_instance(g, args.output)
    return 0


@command
def cmd_portfolio(args: argparse.Namespace) -> int:
    sigma = parse_matrix(args.sigma)
    g = portfolio_game(args.mu, sigma, args.risk)
    return _finish(args, g, lambda: portfolio_core_closed_form(args.mu, sigma, args.risk))


@command
def cmd_maxcut(args: argparse.Namespace) -> int:
    if args.complete is not None:
        graph = WeightedGraph.complete(args.complete, as_vector([args.weight])[0])
        rows = [[Fraction(0)] * graph.n_vertices for _ in range(graph.n_vertices)]
        for (u, v), w in zip(graph.edges, graph.weights):
            rows[u][v] = rows[v][u] = w
        W = RatMatrix(rows)
    elif args.weights:
        W = parse_matrix(args.weights)
    else:
        raise UsageError("需要 --complete N 或 --weights 矩阵")
    g = maxcut_game(W)
    return _finish(args, g, lambda: maxcut_analysis(W))


@command
def cmd_assortment(args: argparse.Namespace) -> int:
    g = assortment_game(args.prices, args.weights)
    return _finish(args, g, lambda: assortment_analysis(args.prices, args.weights))


@command
def cmd_qmatching(args: argparse.Namespace) -> int:
    graph = _graph(args)
    b = as_vector(args.b) if args.b else (Fraction(1),) * graph.edge_count
    Q = parse_pair_entries(args.q or '', graph.edge_count)
    g = quadratic_matching_game(graph, b, Q)
    return _finish(args, g, lambda: qmatching_core_check(graph, b, Q))


@command
def cmd_rmatching(args: argparse.Namespace) -> int:
    graph = _graph(args)
    g = ratio_matching_game(graph, args.c, args.d, args.d0)
    return _finish(args, g, lambda: rmatching_core_check(graph, args.c, args.d, args.d0))


@command
def cmd_sat_reduction(args: argparse.Namespace) -> int:
    """读取 p 3b2sat 文本，输出冲突结构、二次匹配博弈实例或穷举校验结果"""
    if not os.path.isfile(args.sat):
        raise UsageError(f"文件不存在: {args.sat}")
    with open(args.sat, 'r', encoding='utf-8') as f:
        sat = parse_sat(f.read())
    if args.game:
        g, _, _ = sat_quadratic_matching_game(sat)
        dump_instance(g, args.output)
        return 0
    payload = {'structure': sat_reduction(sat).to_dict()}
    if args.verify:
        payload['verification'] = verify_reduction(sat).to_dict()
    write_output(to_json(payload), args.output)
    return 0


def register_generate_commands(subparsers) -> None:
    """
    注册 generate 命令及各应用族子命令

    Args:
        subparsers: argparse 子命令集合
    """
    gen = subparsers.add_parser('generate', help='生成应用族实例')
    families = gen.add_subparsers(dest='family', metavar='FAMILY')
    families.required = True

    def family(name: str, help_text: str, handler):
        p = families.add_parser(name, help=help_text)
        add_common_flags(p)
        p.set_defaults(handler=handler)
        return p

    def closed_form_flag(p):
        p.add_argument('--closed-form', action='store_true', help='输出闭式核判定而不是实例')

    p = family('portfolio', '投资组合博弈', cmd_portfolio)
    p.add_argument('--mu', nargs='+', required=True, help='期望收益')
    p.add_argument('--sigma', required=True, help='协方差矩阵，如 "1,0;0,1"')
    p.add_argument('--risk', default='1', help='风险厌恶系数 γ')
    closed_form_flag(p)

    p = family('maxcut', '最大割博弈', cmd_maxcut)
    p.add_argument('--complete', type=int, metavar='N', help='完全图 K_N')
    p.add_argument('--weight', default='1', help='完全图的统一边权')
    p.add_argument('--weights', help='权矩阵，如 "0,1;1,0"')
    closed_form_flag(p)

    p = family('assortment', '分类博弈', cmd_assortment)
    p.add_argument('--prices', nargs='+', required=True, help='价格 p')
    p.add_argument('--weights', nargs='+', required=True, help='偏好权重 v')
    closed_form_flag(p)

    p = family('qmatching', '二次匹配博弈', cmd_qmatching)
    p.add_argument('--vertices', type=int, required=True, help='顶点数')
    p.add_argument('--edges', required=True, help='边表，如 "0-1,1-2"')
    p.add_argument('--b', nargs='+', help='边的线性系数（默认全 1）')
    p.add_argument('--q', help='非零的 q_ij，如 "0,1,-1"')
    closed_form_flag(p)

    p = family('rmatching', '比值匹配博弈', cmd_rmatching)
    p.add_argument('--vertices', type=int, required=True, help='顶点数')
    p.add_argument('--edges', required=True, help='边表，如 "0-1,1-2"')
    p.add_argument('--c', nargs='+', required=True, help='分子系数')
    p.add_argument('--d', nargs='+', required=True, help='分母系数')
    p.add_argument('--d0', default='1', help='分母常数')
    closed_form_flag(p)

    p = family('sat-reduction', '(3,B2)-SAT 归约', cmd_sat_reduction)
    p.add_argument('sat', help='p 3b2sat 文本文件')
    p.add_argument('--verify', action='store_true', help='穷举校验归约')
    p.add_argument('--game', action='store_true', help='输出对应的二次匹配博弈实例')
