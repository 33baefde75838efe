"""
异常定义
所有异常都继承 CoreGameError，并携带 CLI 使用的退出码
"""

from coregame.config import EXIT_USAGE, EXIT_SOLVER, EXIT_ASSUMPTION, EXIT_INTERNAL


class CoreGameError(Exception):
    """coregame 异常基类"""
    exit_code = EXIT_INTERNAL


class UsageError(CoreGameError):
    """参数或实例文件格式错误"""
    exit_code = EXIT_USAGE


class DimensionError(UsageError):
    """维度不匹配"""
    pass


class SingularMatrixError(CoreGameError):
    """矩阵奇异，无法求解"""
    exit_code = EXIT_SOLVER


class RankDeficientError(SingularMatrixError):
    """生成元矩阵列线性相关"""
    pass


class SolverStatusError(CoreGameError):
    """线性规划不可行或无界"""
    exit_code = EXIT_SOLVER

    def __init__(self, message: str, status: str):
        super().__init__(message)
        self.status = status


class InfeasibleSubprogramError(CoreGameError):
    """覆盖/划分博弈中某联盟的子问题可行集为空"""
    exit_code = EXIT_SOLVER

    def __init__(self, message: str, coalition=None):
        super().__init__(message)
        self.coalition = coalition


class AssumptionViolation(CoreGameError):
    """结构假设或个体次可加性假设不成立，定理不适用"""
    exit_code = EXIT_ASSUMPTION

    def __init__(self, message: str, violations=None):
        super().__init__(message)
        self.violations = list(violations or [])


class UndefinedPointError(CoreGameError):
    """表函数在该点没有定义"""
    exit_code = EXIT_ASSUMPTION


class TooLargeError(CoreGameError):
    """超出枚举上限"""
    exit_code = EXIT_USAGE


class InfiniteDomainError(TooLargeError):
    """定义域不可枚举"""
    pass


class EmptyCoreError(CoreGameError):
    """核为空，无法提取核成员"""
    exit_code = EXIT_SOLVER


class ZeroGrandValueError(CoreGameError):
    """大联盟值不为正，gamma 无定义"""
    exit_code = EXIT_SOLVER


class InvariantError(CoreGameError):
    """内部精确不变量被破坏（程序缺陷）"""
    exit_code = EXIT_INTERNAL
