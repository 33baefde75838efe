"""
精确有理数线性规划
两阶段单纯形法（Bland 规则防循环），从最终基中提取对偶解并做强对偶校验

约定：
- 行约束类型为 '<=', '>=', '='
- 变量符号为 'nonneg', 'nonpos', 'free'
- 对偶变量符号：max 问题中 '<=' 行非负、'>=' 行非正；min 问题相反；'=' 行自由
"""

import logging
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from coregame.config import DUAL_VERTEX_CAP
from coregame.services.exact import RatMatrix, RatVector, as_vector, dot, format_vector, gauss_solve
from coregame.utils.errors import DimensionError, InvariantError, SolverStatusError, UsageError

logger = logging.getLogger(__name__)

OPTIMAL = 'optimal'
INFEASIBLE = 'infeasible'
UNBOUNDED = 'unbounded'

ROW_SENSES = ('<=', '>=', '=')
VAR_SIGNS = ('nonneg', 'nonpos', 'free')
_FLIP = {'<=': '>=', '>=': '<=', '=': '='}

ZERO = Fraction(0)


@dataclass(frozen=True)
class LpProblem:
    """
    线性规划问题

    Attributes:
        sense: 'max' 或 'min'
        c: 目标系数
        A: 约束矩阵（行数 × 变量数）
        row_senses: 每行的约束类型
        rhs: 右端向量
        var_signs: 每个变量的符号约束，默认全部非负
    """
    sense: str
    c: RatVector
    A: RatMatrix
    row_senses: Tuple[str, ...]
    rhs: RatVector
    var_signs: Tuple[str, ...] = None

    def __post_init__(self):
        if self.sense not in ('max', 'min'):
            raise UsageError(f"目标方向必须是 max 或 min，得到 {self.sense!r}")
        object.__setattr__(self, 'c', as_vector(self.c))
        object.__setattr__(self, 'rhs', as_vector(self.rhs))
        object.__setattr__(self, 'row_senses', tuple(self.row_senses))
        signs = self.var_signs if self.var_signs is not None else ('nonneg',) * len(self.c)
        object.__setattr__(self, 'var_signs', tuple(signs))
        nv = len(self.c)
        if self.A.n_cols != nv and self.A.n_rows > 0:
            raise DimensionError(f"约束矩阵有 {self.A.n_cols} 列，目标有 {nv} 个系数")
        if len(self.rhs) != self.A.n_rows or len(self.row_senses) != self.A.n_rows:
            raise DimensionError("右端向量、行类型与约束矩阵行数不一致")
        if len(self.var_signs) != nv:
            raise DimensionError("变量符号数与变量数不一致")
        for s in self.row_senses:
            if s not in ROW_SENSES:
                raise UsageError(f"未知的约束类型 {s!r}")
        for s in self.var_signs:
            if s not in VAR_SIGNS:
                raise UsageError(f"未知的变量符号 {s!r}")

    @property
    def n_vars(self) -> int:
        return len(self.c)

    @property
    def n_rows(self) -> int:
        return len(self.rhs)


@dataclass
class LpSolution:
    """线性规划求解结果，optimal 时 primal/dual 满足强对偶"""
    status: str
    value: Optional[Fraction] = None
    primal: Optional[RatVector] = None
    dual: Optional[RatVector] = None
    basis: Tuple[int, ...] = ()

    @property
    def is_optimal(self) -> bool:
        return self.status == OPTIMAL

    def to_dict(self) -> Dict:
        return {
            'status': self.status,
            'value': None if self.value is None else str(self.value),
            'primal': None if self.primal is None else format_vector(self.primal),
            'dual': None if self.dual is None else format_vector(self.dual),
            'basis': list(self.basis),
        }


class _Tableau:
    """
    标准形 max c'z, A'z = b', z ≥ 0, b' ≥ 0 上的单纯形表

    列顺序：结构列、松弛/剩余列、人工列
    """

    def __init__(self, p: LpProblem):
        self.problem = p
        self.col_map: List[List[Tuple[int, int]]] = []
        cost: List[Fraction] = []
        obj_sign = 1 if p.sense == 'max' else -1
        for j, sign in enumerate(p.var_signs):
            parts = []
            if sign in ('nonneg', 'free'):
                parts.append((len(cost), 1))
                cost.append(obj_sign * p.c[j])
            if sign in ('nonpos', 'free'):
                parts.append((len(cost), -1))
                cost.append(-obj_sign * p.c[j])
            self.col_map.append(parts)
        self.n_struct = len(cost)

        self.row_flip: List[int] = []
        senses: List[str] = []
        rows: List[List[Fraction]] = []
        rhs: List[Fraction] = []
        for i in range(p.n_rows):
            flip = -1 if p.rhs[i] < 0 else 1
            self.row_flip.append(flip)
            senses.append(p.row_senses[i] if flip == 1 else _FLIP[p.row_senses[i]])
            row = [ZERO] * self.n_struct
            for j in range(p.n_vars):
                a = p.A[i, j]
                if a:
                    for idx, s in self.col_map[j]:
                        row[idx] = flip * s * a
            rows.append(row)
            rhs.append(flip * p.rhs[i])

        n_slack = sum(1 for s in senses if s != '=')
        n_art = sum(1 for s in senses if s != '<=')
        self.n_slack = n_slack
        total = self.n_struct + n_slack + n_art
        self.art_start = self.n_struct + n_slack
        self.basis: List[int] = []
        slack_idx = self.n_struct
        art_idx = self.art_start
        for i, s in enumerate(senses):
            rows[i] = rows[i] + [ZERO] * (total - self.n_struct)
            if s != '=':
                rows[i][slack_idx] = Fraction(1) if s == '<=' else Fraction(-1)
                if s == '<=':
                    self.basis.append(slack_idx)
                slack_idx += 1
            if s != '<=':
                rows[i][art_idx] = Fraction(1)
                self.basis.append(art_idx)
                art_idx += 1
        self.cost = cost + [ZERO] * (total - self.n_struct)
        self.original_rows = [list(r) for r in rows]
        self.T = rows
        self.rhs = rhs
        self.row_ids = list(range(p.n_rows))
        self.n_cols = total

    def copy(self) -> '_Tableau':
        other = object.__new__(_Tableau)
        other.__dict__.update(self.__dict__)
        other.T = [list(r) for r in self.T]
        other.rhs = list(self.rhs)
        other.basis = list(self.basis)
        other.row_ids = list(self.row_ids)
        return other

    def pivot(self, r: int, col: int) -> None:
        p = self.T[r][col]
        prow = [v / p for v in self.T[r]]
        prhs = self.rhs[r] / p
        self.T[r] = prow
        self.rhs[r] = prhs
        for i in range(len(self.T)):
            if i != r:
                f = self.T[i][col]
                if f:
                    row = self.T[i]
                    self.T[i] = [a - f * b for a, b in zip(row, prow)]
                    self.rhs[i] -= f * prhs
        self.basis[r] = col

    def reduced_costs(self, cost: Sequence[Fraction]) -> List[Fraction]:
        cb = [cost[b] for b in self.basis]
        return [
            cost[j] - sum((cb[i] * self.T[i][j] for i in range(len(self.T)) if cb[i]), ZERO)
            for j in range(self.n_cols)
        ]

    def ratio_rows(self, col: int) -> List[int]:
        """最小比值行（可能多个并列）"""
        best = None
        rows = []
        for i, row in enumerate(self.T):
            a = row[col]
            if a > 0:
                ratio = self.rhs[i] / a
                if best is None or ratio < best:
                    best, rows = ratio, [i]
                elif ratio == best:
                    rows.append(i)
        return rows

    def optimize(self, cost: Sequence[Fraction], allowed: int) -> str:
        """按 Bland 规则最大化 cost·z，只允许前 allowed 列入基"""
        iterations = 0
        while True:
            d = self.reduced_costs(cost)
            basic = set(self.basis)
            entering = next((j for j in range(allowed) if j not in basic and d[j] > 0), None)
            if entering is None:
                logger.debug(f"单纯形收敛，共 {iterations} 次转轴")
                return OPTIMAL
            rows = self.ratio_rows(entering)
            if not rows:
                return UNBOUNDED
            leave = min(rows, key=lambda i: self.basis[i])
            self.pivot(leave, entering)
            iterations += 1

    def objective(self, cost: Sequence[Fraction]) -> Fraction:
        return sum((cost[b] * self.rhs[i] for i, b in enumerate(self.basis)), ZERO)

    def phase_one(self) -> bool:
        """求初始可行基；可行时去掉人工列并删除冗余行"""
        if self.art_start == self.n_cols:
            return True
        art_cost = [ZERO] * self.art_start + [Fraction(-1)] * (self.n_cols - self.art_start)
        self.optimize(art_cost, self.n_cols)
        if self.objective(art_cost) < 0:
            return False
        r = 0
        while r < len(self.T):
            if self.basis[r] >= self.art_start:
                col = next((j for j in range(self.art_start) if self.T[r][j] != 0), None)
                if col is None:
                    logger.debug(f"第 {self.row_ids[r]} 行冗余，已删除")
                    del self.T[r]
                    del self.rhs[r]
                    del self.basis[r]
                    del self.row_ids[r]
                    continue
                self.pivot(r, col)
            r += 1
        return True

    def structural_values(self) -> List[Fraction]:
        z = [ZERO] * self.n_cols
        for i, b in enumerate(self.basis):
            z[b] = self.rhs[i]
        return z

    def primal(self) -> RatVector:
        z = self.structural_values()
        return tuple(sum((s * z[idx] for idx, s in parts), ZERO) for parts in self.col_map)

    def dual(self) -> RatVector:
        """解 y'ᵀB = c_B，再还原行翻转与目标方向"""
        p = self.problem
        k = len(self.basis)
        y_full = [ZERO] * p.n_rows
        if k:
            # 删除过冗余行时 B 不是方阵，取 k 个线性无关的行求解，其余分量置零
            keep = _independent_rows(
                [[self.original_rows[i][b] for b in self.basis] for i in range(p.n_rows)], k
            )
            B_t = RatMatrix(
                [[self.original_rows[i][b] for i in keep] for b in self.basis],
                n_cols=k,
            )
            y_red = gauss_solve(B_t, [self.cost[b] for b in self.basis])
            for i, rid in enumerate(keep):
                y_full[rid] = y_red[i]
        obj_sign = 1 if p.sense == 'max' else -1
        return tuple(obj_sign * self.row_flip[i] * y_full[i] for i in range(p.n_rows))


def _independent_rows(rows: List[List[Fraction]], k: int) -> List[int]:
    """贪心选出 k 个线性无关的行下标"""
    echelon: List[Tuple[int, List[Fraction]]] = []
    chosen = []
    for idx, row in enumerate(rows):
        v = list(row)
        for pc, e in echelon:
            if v[pc]:
                f = v[pc]
                v = [a - f * b for a, b in zip(v, e)]
        pc = next((j for j, a in enumerate(v) if a != 0), None)
        if pc is None:
            continue
        v = [a / v[pc] for a in v]
        echelon.append((pc, v))
        chosen.append(idx)
        if len(chosen) == k:
            break
    if len(chosen) < k:
        raise InvariantError("基矩阵秩不足")
    return chosen


def _run(p: LpProblem) -> Tuple[str, Optional[_Tableau]]:
    tab = _Tableau(p)
    if not tab.phase_one():
        return INFEASIBLE, tab
    status = tab.optimize(tab.cost, tab.art_start)
    return status, tab


def primal_feasible(p: LpProblem, x: Sequence[Fraction]) -> bool:
    """代入检查原问题可行性"""
    if len(x) != p.n_vars:
        return False
    for j, s in enumerate(p.var_signs):
        if (s == 'nonneg' and x[j] < 0) or (s == 'nonpos' and x[j] > 0):
            return False
    lhs = p.A.matvec(tuple(x)) if p.n_rows else ()
    for v, s, b in zip(lhs, p.row_senses, p.rhs):
        if (s == '<=' and v > b) or (s == '>=' and v < b) or (s == '=' and v != b):
            return False
    return True


def dual_row_signs(p: LpProblem) -> Tuple[str, ...]:
    """对偶变量的符号约束"""
    out = []
    for s in p.row_senses:
        if s == '=':
            out.append('free')
        elif (s == '<=') == (p.sense == 'max'):
            out.append('nonneg')
        else:
            out.append('nonpos')
    return tuple(out)


def dual_feasible(p: LpProblem, y: Sequence[Fraction]) -> bool:
    """代入检查形式对偶的可行性"""
    if len(y) != p.n_rows:
        return False
    for v, s in zip(y, dual_row_signs(p)):
        if (s == 'nonneg' and v < 0) or (s == 'nonpos' and v > 0):
            return False
    yA = p.A.vecmat(tuple(y)) if p.n_rows else (ZERO,) * p.n_vars
    for j, sign in enumerate(p.var_signs):
        lhs, c = yA[j], p.c[j]
        if sign == 'free':
            if lhs != c:
                return False
        elif (sign == 'nonneg') == (p.sense == 'max'):
            if lhs < c:
                return False
        elif lhs > c:
            return False
    return True


def solve(p: LpProblem) -> LpSolution:
    """
    精确求解线性规划

    Args:
        p: 线性规划问题

    Returns:
        LpSolution；optimal 时附带原始解、对偶解与最终基

    Raises:
        InvariantError: 强对偶校验失败（程序缺陷）
    """
    status, tab = _run(p)
    if status != OPTIMAL:
        logger.info(f"线性规划状态: {status}")
        return LpSolution(status=status)
    x = tab.primal()
    y = tab.dual()
    value = dot(p.c, x)
    if not primal_feasible(p, x):
        raise InvariantError(f"原始解不可行: {format_vector(x)}")
    if not dual_feasible(p, y):
        raise InvariantError(f"对偶解不可行: {format_vector(y)}")
    if dot(p.rhs, y) != value:
        raise InvariantError(f"强对偶不成立: 原始值 {value}，对偶值 {dot(p.rhs, y)}")
    logger.debug(f"线性规划最优值 {value}")
    return LpSolution(status=OPTIMAL, value=value, primal=x, dual=y, basis=tuple(tab.basis))


def solve_optimal(p: LpProblem, context: str = '线性规划') -> LpSolution:
    """求解并要求最优，否则抛出 SolverStatusError"""
    sol = solve(p)
    if not sol.is_optimal:
        raise SolverStatusError(f"{context}{'不可行' if sol.status == INFEASIBLE else '无界'}", sol.status)
    return sol


def is_dual_optimal(p: LpProblem, y: Sequence[Fraction]) -> bool:
    """
    判断 y 是否为 p 的对偶最优解

    Raises:
        SolverStatusError: p 没有最优解
    """
    sol = solve_optimal(p)
    y = as_vector(y)
    if not dual_feasible(p, y):
        return False
    return dot(p.rhs, y) == sol.value


def dual_problem(p: LpProblem) -> LpProblem:
    """构造形式对偶问题"""
    var_signs = dual_row_signs(p)
    senses = []
    for sign in p.var_signs:
        if sign == 'free':
            senses.append('=')
        elif (sign == 'nonneg') == (p.sense == 'max'):
            senses.append('>=')
        else:
            senses.append('<=')
    return LpProblem(
        sense='min' if p.sense == 'max' else 'max',
        c=p.rhs,
        A=p.A.transpose() if p.n_rows else RatMatrix([], n_cols=0),
        row_senses=tuple(senses),
        rhs=p.c,
        var_signs=var_signs,
    )


@dataclass
class DualVertexEnumeration:
    """最优对偶顶点枚举结果，truncated 表示达到上限"""
    vertices: List[RatVector] = field(default_factory=list)
    bases_visited: int = 0
    truncated: bool = False

    def to_dict(self) -> Dict:
        return {
            'vertices': [format_vector(v) for v in self.vertices],
            'bases_visited': self.bases_visited,
            'truncated': self.truncated,
        }


def enumerate_optimal_dual_vertices(p: LpProblem, cap: int = DUAL_VERTEX_CAP) -> DualVertexEnumeration:
    """
    枚举最优对偶面的全部基本解

    在对偶问题上追加 "目标值 = 最优值" 的等式行得到最优面，
    再从一个可行基出发做广度优先搜索，遍历所有可行基

    Args:
        p: 原问题
        cap: 访问基数上限

    Raises:
        SolverStatusError: p 没有最优解
    """
    sol = solve_optimal(p)
    dp = dual_problem(p)
    face_rows = list(dp.A.rows) + [dp.c]
    face = LpProblem(
        sense=dp.sense,
        c=dp.c,
        A=RatMatrix(face_rows, n_cols=dp.n_vars),
        row_senses=dp.row_senses + ('=',),
        rhs=dp.rhs + (sol.value,),
        var_signs=dp.var_signs,
    )
    status, tab = _run(face)
    if status != OPTIMAL:
        raise InvariantError(f"最优对偶面求解状态异常: {status}")

    result = DualVertexEnumeration()
    seen_vertices = set()
    start = frozenset(tab.basis)
    visited = {start}
    queue = deque([tab])
    while queue:
        cur = queue.popleft()
        result.bases_visited += 1
        y = cur.primal()
        if y not in seen_vertices:
            seen_vertices.add(y)
            result.vertices.append(y)
        basic = set(cur.basis)
        for col in range(cur.art_start):
            if col in basic:
                continue
            for r in cur.ratio_rows(col):
                key = frozenset(cur.basis[:r] + [col] + cur.basis[r + 1:])
                if key in visited:
                    continue
                if len(visited) >= cap:
                    result.truncated = True
                    continue
                visited.add(key)
                nxt = cur.copy()
                nxt.pivot(r, col)
                queue.append(nxt)
    if result.truncated:
        logger.warning(f"最优对偶顶点枚举达到上限 {cap} 个基，结果不完整")
    logger.info(f"最优对偶面共 {len(result.vertices)} 个顶点（访问 {result.bases_visited} 个基）")
    return result
