"""
coregame 配置
集中管理所有配置常量
"""

import os

# 版本
VERSION = '1.0.0'

# 枚举上限（维度，即最多 2^24 个点），可用环境变量 COREGAME_ENUM_CAP 覆盖
DEFAULT_ENUM_CAP = 24
ENUM_CAP_ENV = 'COREGAME_ENUM_CAP'

# 各类穷举的规模上限
MAX_CLASS_CHECK_DIM = 12    # 函数类检查 2^m
MAX_ORACLE_PLAYERS = 20     # Bondareva 预言机 2^n 个联盟
MAX_TBC_PLAYERS = 16        # 全平衡覆盖博弈 LP 列数 2^n - 1
MAX_PROBE_PLAYERS = 12      # 超可加性探测 3^n 对
MAX_MATCHING_EDGES = 24     # 穷举匹配
MAX_SAT_VARIABLES = 20      # 穷举赋值
DUAL_VERTEX_CAP = 10000     # 最优对偶顶点 BFS 的基数上限

# 退出码
EXIT_OK = 0
EXIT_USAGE = 1
EXIT_SOLVER = 2
EXIT_ASSUMPTION = 3
EXIT_INTERNAL = 4

# 日志配置（CLI 默认只输出警告，保持 stdout 干净）
LOG_FORMAT = '%(asctime)s - %(levelname)s - %(message)s'
LOG_LEVEL = os.environ.get('COREGAME_LOG_LEVEL', 'WARNING').upper()
