"""
(3,B2)-SAT 到带冲突最大匹配的归约
每个变量恰好正出现两次、负出现两次；每个子句恰好三个文字

文本格式：
    c 注释
    p 3b2sat <n> <k>
    1 2 3
    -1 -2 -3
子句行末尾可以带 DIMACS 风格的 0
"""

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from coregame.config import MAX_SAT_VARIABLES
from coregame.services.exact import RatMatrix
from coregame.services.game import GameInstance
from coregame.services.matching import WeightedGraph, max_weight_matching, quadratic_matching_game
from coregame.utils.errors import UsageError
from coregame.utils.helpers import ensure_dimension

logger = logging.getLogger(__name__)

Clause = Tuple[int, int, int]


@dataclass(frozen=True)
class SatInstance:
    n: int
    clauses: Tuple[Clause, ...]

    def __post_init__(self):
        clauses = tuple(tuple(int(l) for l in c) for c in self.clauses)
        object.__setattr__(self, 'clauses', clauses)
        if self.n < 1:
            raise UsageError("变量数必须为正")
        for c in clauses:
            if len(c) != 3:
                raise UsageError(f"子句 {c} 不是恰好三个文字")
            for lit in c:
                if lit == 0 or abs(lit) > self.n:
                    raise UsageError(f"文字 {lit} 超出变量范围 1..{self.n}")
        for var in range(1, self.n + 1):
            pos = sum(c.count(var) for c in clauses)
            neg = sum(c.count(-var) for c in clauses)
            if pos != 2 or neg != 2:
                raise UsageError(
                    f"不是 (3,B2) 实例：变量 {var} 正出现 {pos} 次、负出现 {neg} 次（应各为 2）"
                )

    @property
    def k(self) -> int:
        return len(self.clauses)

    def satisfied_by(self, assignment: Sequence[bool]) -> bool:
        return all(any(assignment[abs(l) - 1] == (l > 0) for l in c) for c in self.clauses)


def parse_sat(text: str) -> SatInstance:
    """解析 p 3b2sat 文本"""
    header = None
    clauses = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith('c'):
            continue
        parts = line.split()
        if parts[0] == 'p':
            if len(parts) != 4 or parts[1] != '3b2sat':
                raise UsageError(f"第 {lineno} 行: 头部应为 'p 3b2sat n k'")
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise UsageError(f"第 {lineno} 行: n 与 k 必须为整数")
            continue
        if header is None:
            raise UsageError(f"第 {lineno} 行: 子句出现在头部之前")
        try:
            lits = [int(p) for p in parts]
        except ValueError:
            raise UsageError(f"第 {lineno} 行: 无法解析文字 {line!r}")
        if lits and lits[-1] == 0:
            lits = lits[:-1]
        clauses.append(tuple(lits))
    if header is None:
        raise UsageError("缺少 'p 3b2sat n k' 头部")
    n, k = header
    if len(clauses) != k:
        raise UsageError(f"头部声明 {k} 个子句，实际 {len(clauses)} 个")
    return SatInstance(n, tuple(clauses))


def serialize_sat(sat: SatInstance) -> str:
    lines = [f"p 3b2sat {sat.n} {sat.k}"]
    lines.extend(' '.join(str(l) for l in c) for c in sat.clauses)
    return '\n'.join(lines) + '\n'


@dataclass(frozen=True)
class ConflictStructure:
    """
    归约得到的图 G_I 与冲突集

    Attributes:
        graph: 4n 条环边加 3k 条爪边
        conflicts: 不能同时选中的边对
        edge_names: 每条边的名字，例如 x1_1、~x1_2、e(x1_1)
    """
    graph: WeightedGraph
    conflicts: FrozenSet[Tuple[int, int]]
    edge_names: Tuple[str, ...]

    def edge_index(self, name: str) -> int:
        return self.edge_names.index(name)

    def to_dict(self) -> Dict:
        return {
            'n_vertices': self.graph.n_vertices,
            'edges': [list(e) for e in self.graph.edges],
            'edge_names': list(self.edge_names),
            'conflicts': sorted(list(p) for p in self.conflicts),
        }


def _literal_name(var: int, positive: bool, occurrence: int) -> str:
    return f"{'' if positive else '~'}x{var}_{occurrence}"


def sat_reduction(sat: SatInstance) -> ConflictStructure:
    """
    构造 G_I

    变量 i 对应四元环 a-b-c-d，边 x_i1=(a,b)、~x_i1=(b,c)、x_i2=(c,d)、~x_i2=(d,a)；
    子句 j 对应以 C_j 为中心的爪，每个文字出现一次对应一条爪边 e(·)，
    文字的第一次出现记为下标 1，第二次记为下标 2。
    冲突对为 (x_ir, e(~x_ir)) 与 (~x_ir, e(x_ir))，r = 1, 2
    """
    edges: List[Tuple[int, int]] = []
    names: List[str] = []
    for var in range(1, sat.n + 1):
        a, b, c, d = (4 * (var - 1) + t for t in range(4))
        for (u, v), positive, occ in (((a, b), True, 1), ((b, c), False, 1),
                                      ((c, d), True, 2), ((d, a), False, 2)):
            edges.append((u, v))
            names.append(_literal_name(var, positive, occ))
    next_vertex = 4 * sat.n
    seen: Dict[int, int] = {}
    for clause in sat.clauses:
        center = next_vertex
        next_vertex += 1
        for lit in clause:
            seen[lit] = seen.get(lit, 0) + 1
            leaf = next_vertex
            next_vertex += 1
            edges.append((center, leaf))
            names.append(f"e({_literal_name(abs(lit), lit > 0, seen[lit])})")
    index = {name: j for j, name in enumerate(names)}
    conflicts = set()
    for var in range(1, sat.n + 1):
        for occ in (1, 2):
            for positive in (True, False):
                cycle = index[_literal_name(var, positive, occ)]
                claw = index[f"e({_literal_name(var, not positive, occ)})"]
                conflicts.add((cycle, claw))
    graph = WeightedGraph(next_vertex, tuple(edges))
    logger.info(f"归约完成: {graph.n_vertices} 个顶点，{graph.edge_count} 条边，{len(conflicts)} 个冲突对")
    return ConflictStructure(graph, frozenset(conflicts), tuple(names))


def brute_force_sat(sat: SatInstance) -> Optional[Tuple[bool, ...]]:
    """穷举赋值，返回第一个满足赋值或 None"""
    ensure_dimension(sat.n, MAX_SAT_VARIABLES, 'SAT 变量数')
    for bits in itertools.product((False, True), repeat=sat.n):
        if sat.satisfied_by(bits):
            return bits
    return None


@dataclass
class ReductionCheck:
    max_conflict_matching: int
    target: int
    satisfiable: bool
    assignment: Optional[Tuple[bool, ...]] = None
    matching_edges: Tuple[int, ...] = ()

    @property
    def agrees(self) -> bool:
        return (self.max_conflict_matching == self.target) == self.satisfiable

    def to_dict(self) -> Dict:
        return {
            'max_conflict_matching': self.max_conflict_matching,
            'target': self.target,
            'satisfiable': self.satisfiable,
            'assignment': None if self.assignment is None else [int(v) for v in self.assignment],
            'matching_edges': list(self.matching_edges),
            'agrees': self.agrees,
        }


def verify_reduction(sat: SatInstance) -> ReductionCheck:
    """
    穷举验证归约：带冲突最大匹配达到 2n + k 当且仅当实例可满足
    """
    structure = sat_reduction(sat)
    result = max_weight_matching(structure.graph, conflicts=structure.conflicts)
    assignment = brute_force_sat(sat)
    check = ReductionCheck(
        max_conflict_matching=int(result.value),
        target=2 * sat.n + sat.k,
        satisfiable=assignment is not None,
        assignment=assignment,
        matching_edges=result.edges,
    )
    logger.info(f"归约校验: 最大冲突匹配 {check.max_conflict_matching}，目标 {check.target}，"
                f"{'可满足' if check.satisfiable else '不可满足'}")
    return check


def sat_quadratic_matching_game(sat: SatInstance) -> Tuple[GameInstance, ConflictStructure, RatMatrix]:
    """
    把归约结果包装成二次匹配博弈：b = 1，冲突边对 q_ij = q_ji = -1，其余为 0

    选中一对冲突边与都不选的目标值相同，因此 ν(1) 等于带冲突最大匹配
    """
    structure = sat_reduction(sat)
    m = structure.graph.edge_count
    rows = [[Fraction(0)] * m for _ in range(m)]
    for i, j in structure.conflicts:
        rows[i][j] = rows[j][i] = Fraction(-1)
    Q = RatMatrix(rows)
    b = (Fraction(1),) * m
    g = quadratic_matching_game(structure.graph, b, Q, name='sat-quadratic-matching')
    return g, structure, Q
