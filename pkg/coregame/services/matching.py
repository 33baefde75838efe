"""
匹配博弈
加权图与关联矩阵、带冲突约束的穷举最大权匹配、冲突图极大团枚举、
二次匹配博弈与比值匹配博弈的闭式核判定
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

import networkx as nx

from coregame.config import MAX_MATCHING_EDGES
from coregame.services.analysis import CoreReport
from coregame.services.domain import BooleanDomain, grand_coalition
from coregame.services.exact import RatMatrix, RatVector, as_vector, format_rational, to_rational
from coregame.services.game import PACKING, GameInstance, anchor_problem, dual_to_member
from coregame.services.lp import solve_optimal
from coregame.services.objective import QuadraticObjective, RatioObjective
from coregame.utils.errors import DimensionError, UsageError
from coregame.utils.helpers import ensure_dimension

logger = logging.getLogger(__name__)

Edge = Tuple[int, int]


@dataclass(frozen=True)
class WeightedGraph:
    """
    简单无向图，边按输入顺序编号

    Attributes:
        n_vertices: 顶点数
        edges: 边列表 (u, v)
        weights: 边权（默认全 1）
    """
    n_vertices: int
    edges: Tuple[Edge, ...]
    weights: RatVector = None

    def __post_init__(self):
        edges = tuple((int(u), int(v)) for u, v in self.edges)
        object.__setattr__(self, 'edges', edges)
        seen = set()
        for u, v in edges:
            if u == v:
                raise UsageError(f"边 ({u}, {v}) 的两个端点相同")
            if not (0 <= u < self.n_vertices and 0 <= v < self.n_vertices):
                raise UsageError(f"边 ({u}, {v}) 的端点超出范围 0..{self.n_vertices - 1}")
            key = frozenset((u, v))
            if key in seen:
                raise UsageError(f"重复的边 ({u}, {v})")
            seen.add(key)
        if self.weights is None:
            object.__setattr__(self, 'weights', (Fraction(1),) * len(edges))
        else:
            object.__setattr__(self, 'weights', as_vector(self.weights))
        if len(self.weights) != len(edges):
            raise DimensionError(f"边权长度 {len(self.weights)} 与边数 {len(edges)} 不符")

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def incidence_matrix(self) -> RatMatrix:
        """A_ij = 1 当且仅当顶点 i 是边 j 的端点"""
        return RatMatrix(
            [[1 if i in e else 0 for e in self.edges] for i in range(self.n_vertices)],
            n_cols=len(self.edges),
        )

    def with_weights(self, weights: Sequence) -> 'WeightedGraph':
        return WeightedGraph(self.n_vertices, self.edges, as_vector(weights))

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.n_vertices))
        for j, (u, v) in enumerate(self.edges):
            g.add_edge(u, v, weight=self.weights[j], index=j)
        return g

    @classmethod
    def complete(cls, n: int, weight=1) -> 'WeightedGraph':
        edges = [(u, v) for u in range(n) for v in range(u + 1, n)]
        return cls(n, tuple(edges), (to_rational(weight),) * len(edges))


@dataclass
class MatchingResult:
    value: Fraction
    edges: Tuple[int, ...]

    def to_dict(self) -> Dict:
        return {'value': format_rational(self.value), 'edges': list(self.edges)}


def max_weight_matching(graph: WeightedGraph, allowed: Optional[Iterable[int]] = None,
                        conflicts: Iterable[Tuple[int, int]] = ()) -> MatchingResult:
    """
    穷举最大权匹配（只取正权边），可限定可用边集并排除冲突边对

    分支定界：当前值加剩余正权之和不超过已知最优时剪枝

    Raises:
        TooLargeError: 边数超过 MAX_MATCHING_EDGES
    """
    ensure_dimension(graph.edge_count, MAX_MATCHING_EDGES, '匹配的边数')
    pool = sorted(
        (j for j in (range(graph.edge_count) if allowed is None else allowed) if graph.weights[j] > 0),
        key=lambda j: -graph.weights[j],
    )
    blocked: Dict[int, Set[int]] = {j: set() for j in range(graph.edge_count)}
    for i, j in conflicts:
        blocked[i].add(j)
        blocked[j].add(i)
    suffix = [Fraction(0)] * (len(pool) + 1)
    for pos in range(len(pool) - 1, -1, -1):
        suffix[pos] = suffix[pos + 1] + graph.weights[pool[pos]]

    best_value = Fraction(0)
    best_edges: Tuple[int, ...] = ()
    chosen: List[int] = []
    used: Set[int] = set()

    def search(pos: int, value: Fraction) -> None:
        nonlocal best_value, best_edges
        if value > best_value:
            best_value, best_edges = value, tuple(sorted(chosen))
        if pos == len(pool) or value + suffix[pos] <= best_value:
            return
        j = pool[pos]
        u, v = graph.edges[j]
        if u not in used and v not in used and not blocked[j].intersection(chosen):
            used.update((u, v))
            chosen.append(j)
            search(pos + 1, value + graph.weights[j])
            chosen.pop()
            used.difference_update((u, v))
        search(pos + 1, value)

    search(0, Fraction(0))
    return MatchingResult(best_value, best_edges)


def conflict_graph(Q: RatMatrix) -> nx.Graph:
    """边集上的冲突图 G′：i ≠ j 且 q_ij = 0 时相邻"""
    g = nx.Graph()
    g.add_nodes_from(range(Q.n_rows))
    for i in range(Q.n_rows):
        for j in range(i + 1, Q.n_cols):
            if Q[i, j] == 0:
                g.add_edge(i, j)
    return g


def maximal_cliques(g: nx.Graph) -> List[FrozenSet[int]]:
    return [frozenset(c) for c in nx.find_cliques(g)]


def _check_quadratic_matching(graph: WeightedGraph, b: RatVector, Q: RatMatrix) -> None:
    ensure_dimension(graph.edge_count, MAX_MATCHING_EDGES, '二次匹配博弈的边数')
    if len(b) != graph.edge_count or Q.shape != (graph.edge_count, graph.edge_count):
        raise DimensionError("二次匹配博弈的 b 与 Q 必须按边编号")
    if not Q.is_symmetric():
        raise UsageError("二次项矩阵 Q 必须对称")
    if any(Q[j, j] != 0 for j in range(Q.n_rows)):
        raise UsageError("二次匹配博弈要求 Q 的对角线为 0")
    if any(Q[i, j] > 0 for i in range(Q.n_rows) for j in range(Q.n_cols)):
        raise UsageError("二次匹配博弈要求 Q 的非对角元 ≤ 0")


def quadratic_matching_game(graph: WeightedGraph, b: Sequence, Q: RatMatrix, name: str = '') -> GameInstance:
    """二次匹配博弈：顶点为玩家，A 为关联矩阵，f(x) = bᵀx + xᵀQx"""
    b = as_vector(b)
    _check_quadratic_matching(graph, b, Q)
    return GameInstance(
        A=graph.incidence_matrix(),
        sense=PACKING,
        domain=BooleanDomain(graph.edge_count),
        objective=QuadraticObjective(b, Q),
        name=name or 'quadratic-matching',
    )


def _anchor(g: GameInstance):
    return solve_optimal(anchor_problem(g, grand_coalition(g.n)), '大联盟锚定 LP ')


def qmatching_core_check(graph: WeightedGraph, b: Sequence, Q: RatMatrix) -> CoreReport:
    """
    二次匹配博弈的闭式核判定

    在冲突图 G′ 的每个极大团上按 b 求最大权匹配，核非空当且仅当其最大值等于 anchor(1)
    """
    b = as_vector(b)
    g = quadratic_matching_game(graph, b, Q)
    sol = _anchor(g)
    weighted = graph.with_weights(b)
    cliques = maximal_cliques(conflict_graph(Q))
    best = MatchingResult(Fraction(0), ())
    for clique in cliques:
        result = max_weight_matching(weighted, allowed=sorted(clique))
        if result.value > best.value:
            best = result
        if best.value == sol.value:
            break
    nonempty = best.value == sol.value
    logger.info(f"二次匹配: {len(cliques)} 个极大团，最优团匹配 {format_rational(best.value)}，"
                f"anchor(1) = {format_rational(sol.value)}")
    return CoreReport(
        nonempty=nonempty,
        nu_grand=best.value if nonempty else None,
        anchor_grand=sol.value,
        member=dual_to_member(g, sol.dual) if nonempty else None,
        gamma_min=None,
        theorem_used='quadratic-matching-closed-form',
        details={
            'clique_count': len(cliques),
            'best_clique_matching': best.to_dict(),
        },
    )


def ratio_matching_game(graph: WeightedGraph, c: Sequence, d: Sequence, d0, name: str = '') -> GameInstance:
    """比值匹配博弈：f(x) = cᵀx / (d0 + dᵀx)"""
    ensure_dimension(graph.edge_count, MAX_MATCHING_EDGES, '比值匹配博弈的边数')
    objective = RatioObjective(as_vector(c), as_vector(d), to_rational(d0))
    if objective.dimension != graph.edge_count:
        raise DimensionError("比值匹配博弈的 c 与 d 必须按边编号")
    return GameInstance(
        A=graph.incidence_matrix(),
        sense=PACKING,
        domain=BooleanDomain(graph.edge_count),
        objective=objective,
        name=name or 'ratio-matching',
    )


def rmatching_core_check(graph: WeightedGraph, c: Sequence, d: Sequence, d0) -> CoreReport:
    """
    比值匹配博弈的闭式核判定

    G′ 删去 d_e > 0 的边并以 c/d0 为权；核非空当且仅当
    anchor(1) = max{ max_e c_e/(d0+d_e), G′ 的最大权匹配 }
    """
    g = ratio_matching_game(graph, c, d, d0)
    f = g.objective
    sol = _anchor(g)
    single = max(ci / (f.d0 + di) for ci, di in zip(f.c, f.d))
    kept = [j for j in range(graph.edge_count) if f.d[j] == 0]
    reduced = graph.with_weights([ci / f.d0 for ci in f.c])
    matching = max_weight_matching(reduced, allowed=kept)
    best = max(single, matching.value)
    nonempty = best == sol.value
    return CoreReport(
        nonempty=nonempty,
        nu_grand=best if nonempty else None,
        anchor_grand=sol.value,
        member=dual_to_member(g, sol.dual) if nonempty else None,
        theorem_used='ratio-matching-closed-form',
        details={
            'best_single_ratio': format_rational(single),
            'reduced_matching': matching.to_dict(),
            'reduced_edges': kept,
        },
    )
