"""
工具模块
"""
from coregame.utils.errors import (
    CoreGameError,
    UsageError,
    DimensionError,
    SingularMatrixError,
    RankDeficientError,
    SolverStatusError,
    InfeasibleSubprogramError,
    AssumptionViolation,
    UndefinedPointError,
    TooLargeError,
    InfiniteDomainError,
    EmptyCoreError,
    ZeroGrandValueError,
    InvariantError,
)
from coregame.utils.helpers import (
    enum_cap,
    ensure_dimension,
    ensure_enumerable,
    boolean_vectors,
    all_coalitions,
    unit_vector,
    ones,
    zeros,
)
