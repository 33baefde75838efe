"""
实例文件与报告的 JSON 编解码
有理数一律以 "p/q" 或整数字符串表示，矩阵按行存储；
定义域与目标函数是带 "kind" 判别字段的对象
"""

import json
import logging
import os
from typing import Any, Dict, List, Optional

from coregame.services.domain import (
    BooleanCardinalityDomain, BooleanDomain, BooleanKnapsackDomain, CoalitionIndexedDomain,
    DomainSpec, ExplicitDomain, GeneratorConeDomain, IntegerBoxDomain, make_coalition
)
from coregame.services.exact import RatMatrix, as_vector, format_rational, format_vector, to_rational
from coregame.services.game import GameInstance
from coregame.services.objective import (
    CoalitionDependentObjective, LinearObjective, MaxObjective, MinObjective, ObjectiveSpec,
    PrecomposedObjective, QuadraticObjective, RatioObjective, ScaledObjective, SumObjective,
    TableObjective
)
from coregame.utils.errors import DimensionError, UsageError

logger = logging.getLogger(__name__)


def _matrix(rows: Any, what: str) -> RatMatrix:
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise UsageError(f"{what} 必须是按行给出的二维数组")
    return RatMatrix(rows)


def _coalition_key(w) -> str:
    return ''.join(str(b) for b in w)


def _require_object(doc: Any, what: str) -> Dict:
    if not isinstance(doc, dict):
        raise UsageError(f"{what} 必须是 JSON 对象，实际为 {type(doc).__name__}")
    return doc


def _parse_coalition(key: str, n: int):
    if len(key) != n or set(key) - {'0', '1'}:
        raise UsageError(f"联盟键 {key!r} 应为长度 {n} 的 0/1 串")
    return make_coalition([int(c) for c in key], n)


def parse_domain(doc: Dict, m: int) -> DomainSpec:
    """解析单个定义域对象"""
    kind = _require_object(doc, "定义域").get('kind')
    if kind == 'boolean':
        return BooleanDomain(m)
    if kind == 'boolean_cardinality':
        return BooleanCardinalityDomain(m, int(doc['k']))
    if kind == 'boolean_knapsack':
        return BooleanKnapsackDomain(m, _matrix(doc['weights'], 'weights'), as_vector(doc['capacity']))
    if kind == 'integer_box':
        return IntegerBoxDomain(m, int(doc['upper']))
    if kind == 'explicit':
        return ExplicitDomain.of(doc['points'], m)
    raise UsageError(f"未知的定义域类型 {kind!r}")


def encode_domain(d: DomainSpec) -> Dict:
    if isinstance(d, BooleanDomain):
        return {'kind': d.kind}
    if isinstance(d, BooleanCardinalityDomain):
        return {'kind': d.kind, 'k': d.k}
    if isinstance(d, BooleanKnapsackDomain):
        return {'kind': d.kind, 'weights': d.weights.to_lists(), 'capacity': format_vector(d.capacity)}
    if isinstance(d, IntegerBoxDomain):
        return {'kind': d.kind, 'upper': d.upper}
    if isinstance(d, ExplicitDomain):
        return {'kind': d.kind, 'points': [format_vector(p) for p in d.point_list]}
    raise UsageError(f"{d.kind} 定义域不能单独编码")


def parse_objective(doc: Dict, m: int, n: int) -> ObjectiveSpec:
    """递归解析目标函数对象"""
    kind = _require_object(doc, "目标函数").get('kind')
    if kind == 'linear':
        return LinearObjective(as_vector(doc['c']))
    if kind == 'quadratic':
        return QuadraticObjective(as_vector(doc['b']), _matrix(doc['Q'], 'Q'))
    if kind == 'ratio':
        return RatioObjective(as_vector(doc['c']), as_vector(doc['d']), to_rational(doc['d0']))
    if kind == 'table':
        return TableObjective(m, {tuple(e['x']): e['value'] for e in doc['values']})
    if kind == 'scaled':
        return ScaledObjective(to_rational(doc['alpha']), parse_objective(doc['inner'], m, n))
    if kind == 'sum':
        return SumObjective(tuple(parse_objective(t, m, n) for t in doc['terms']))
    if kind in ('max', 'min'):
        cls = MaxObjective if kind == 'max' else MinObjective
        return cls(parse_objective(doc['left'], m, n), parse_objective(doc['right'], m, n))
    if kind == 'precomposed':
        M = _matrix(doc['M'], 'M')
        return PrecomposedObjective(M, parse_objective(doc['inner'], M.n_rows, n))
    if kind == 'coalition_dependent':
        table = {
            (tuple(e['x']), tuple(_parse_coalition(e['w'], n))): e['value'] for e in doc['values']
        }
        return CoalitionDependentObjective(m, n, table)
    raise UsageError(f"未知的目标函数类型 {kind!r}")


def encode_objective(f: ObjectiveSpec) -> Dict:
    if isinstance(f, LinearObjective):
        return {'kind': f.kind, 'c': format_vector(f.c)}
    if isinstance(f, QuadraticObjective):
        return {'kind': f.kind, 'b': format_vector(f.b), 'Q': f.Q.to_lists()}
    if isinstance(f, RatioObjective):
        return {'kind': f.kind, 'c': format_vector(f.c), 'd': format_vector(f.d), 'd0': format_rational(f.d0)}
    if isinstance(f, TableObjective):
        return {'kind': f.kind, 'values': [
            {'x': format_vector(x), 'value': format_rational(v)} for x, v in f.values.items()
        ]}
    if isinstance(f, ScaledObjective):
        return {'kind': f.kind, 'alpha': format_rational(f.alpha), 'inner': encode_objective(f.inner)}
    if isinstance(f, SumObjective):
        return {'kind': f.kind, 'terms': [encode_objective(t) for t in f.terms]}
    if isinstance(f, (MaxObjective, MinObjective)):
        return {'kind': f.kind, 'left': encode_objective(f.left), 'right': encode_objective(f.right)}
    if isinstance(f, PrecomposedObjective):
        return {'kind': f.kind, 'M': f.M.to_lists(), 'inner': encode_objective(f.inner)}
    if isinstance(f, CoalitionDependentObjective):
        return {'kind': f.kind, 'values': [
            {'x': format_vector(x), 'w': _coalition_key(w), 'value': format_rational(v)}
            for (x, w), v in f.table.items()
        ]}
    raise UsageError(f"无法编码 {f.kind} 目标函数")


def parse_instance(doc: Dict) -> GameInstance:
    """
    把实例 JSON 对象解析为 GameInstance

    Raises:
        UsageError: 缺少字段、类型错误或维度不一致
    """
    if not isinstance(doc, dict):
        raise UsageError("实例文件的顶层必须是 JSON 对象")
    try:
        A = _matrix(doc['A'], 'A')
        n = int(doc.get('n', A.n_rows))
        m = int(doc.get('m', A.n_cols))
        if (n, m) != A.shape:
            raise DimensionError(f"声明的 n={n}, m={m} 与 A 的形状 {A.shape} 不符")
        if 'domain_family' in doc:
            subs = _require_object(doc['domain_family'], "domain_family")
            family = {_parse_coalition(key, n): parse_domain(sub, m) for key, sub in subs.items()}
            domain = CoalitionIndexedDomain(m, family)
        else:
            domain = parse_domain(doc.get('domain', {'kind': 'boolean'}), m)
        if 'generators' in doc:
            domain = GeneratorConeDomain(domain, _matrix(doc['generators'], 'generators'))
        objective = parse_objective(doc['objective'], m, n)
        return GameInstance(
            A=A,
            sense=doc.get('sense', 'packing'),
            domain=domain,
            objective=objective,
            rhs_scale=to_rational(doc.get('rhs_scale', '1')),
            name=str(doc.get('name', '')),
        )
    except KeyError as e:
        raise UsageError(f"实例缺少字段 {e}")
    except (AttributeError, TypeError, ValueError) as e:
        raise UsageError(f"实例字段格式错误: {e}")


def instance_to_dict(g: GameInstance) -> Dict:
    doc = {
        'name': g.name,
        'n': g.n,
        'm': g.m,
        'A': g.A.to_lists(),
        'sense': g.sense,
        'rhs_scale': format_rational(g.rhs_scale),
        'objective': encode_objective(g.objective),
    }
    domain = g.domain
    if isinstance(domain, GeneratorConeDomain):
        doc['generators'] = domain.generators.to_lists()
        domain = domain.base
    if isinstance(domain, CoalitionIndexedDomain):
        doc['domain_family'] = {_coalition_key(w): encode_domain(d) for w, d in domain.family.items()}
    else:
        doc['domain'] = encode_domain(domain)
    return doc


def read_json(path: str) -> Any:
    if not os.path.isfile(path):
        raise UsageError(f"文件不存在: {path}")
    try:
        with open(path, 'r', encoding='utf-8') as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise UsageError(f"{path} 不是合法的 JSON: {e}")


def load_instance(path: str) -> GameInstance:
    g = parse_instance(read_json(path))
    logger.info(f"已加载实例 {path}: n={g.n}, m={g.m}, {g.sense}")
    return g


def load_vector(path: str):
    """读取分配向量文件：数组，或带 "y" 字段的对象"""
    doc = read_json(path)
    if isinstance(doc, dict):
        doc = doc.get('y')
    if not isinstance(doc, list):
        raise UsageError(f"{path} 应包含有理数数组")
    return as_vector(doc)


def to_json(payload: Any) -> str:
    return json.dumps(payload, ensure_ascii=False, indent=2)


def write_output(text: str, path: Optional[str] = None) -> None:
    """写入文件，未给路径时输出到标准输出"""
    if path is None:
        print(text)
        return
    with open(path, 'w', encoding='utf-8') as f:
        f.write(text if text.endswith('\n') else text + '\n')
    logger.info(f"已写入 {path}")


def dump_instance(g: GameInstance, path: Optional[str] = None) -> str:
    text = to_json(instance_to_dict(g))
    write_output(text, path)
    return text


def render_text(payload: Dict, indent: int = 0) -> str:
    """报告的人类可读形式"""
    lines: List[str] = []
    pad = '  ' * indent
    for key, value in payload.items():
        if isinstance(value, dict):
            lines.append(f"{pad}{key}:")
            lines.append(render_text(value, indent + 1))
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            lines.append(f"{pad}{key}:")
            for item in value:
                lines.append(render_text(item, indent + 1))
        elif isinstance(value, list):
            lines.append(f"{pad}{key}: ({', '.join(str(v) for v in value)})")
        elif value is None:
            lines.append(f"{pad}{key}: -")
        else:
            lines.append(f"{pad}{key}: {value}")
    return '\n'.join(line for line in lines if line)
