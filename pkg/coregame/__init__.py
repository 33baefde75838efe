"""
coregame
非线性参数规划诱导的合作博弈的核分析：LP 松弛刻画、Bondareva-Shapley 预言机与应用族闭式判定
"""

from coregame.config import VERSION

__version__ = VERSION
