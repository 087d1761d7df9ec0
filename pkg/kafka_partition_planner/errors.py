"""
Exception hierarchy

「找不到可行解」不是例外，而是 SolveOutcome.plan 為 None 的正常結果。
"""


class PlannerError(Exception):
    """Base class for planner errors"""


class ConfigError(PlannerError, ValueError):
    """設定文件解析或驗證失敗"""


class StructuralInfeasibilityError(PlannerError):
    """r > B: broker bound r <= b <= B is empty, no search is attempted"""

    def __init__(self, replication_factor: int, available_brokers: int):
        self.replication_factor = replication_factor
        self.available_brokers = available_brokers
        super().__init__(
            f"Structurally infeasible: replication factor r={replication_factor} "
            f"exceeds available brokers B={available_brokers} (requires r <= b <= B)"
        )


class DegenerateRangeError(PlannerError, ValueError):
    """MS-CNFL 抽樣區間為空"""
