"""
Core data models for the Kafka partition planner

定義量測輸入、應用需求、候選方案 (P, b) 與其衍生指標，以及 sweep 的輸入輸出契約。
所有單位一致：時間為 ms，速率為 MB/s。
"""

from enum import Enum
from typing import List, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


NO_FEASIBLE_MESSAGE = "No feasible solution found."


class MeasuredInputs(BaseModel):
    """
    Cluster 實測特性 (T_p, T_c, H_max, l_r, u)

    預設值取自公開的 Kafka benchmark 與 partition 建議報告。
    """
    model_config = ConfigDict(frozen=True, extra="forbid", strict=True)

    producer_throughput_per_partition: float = Field(10.0, gt=0, description="T_p, MB/s per partition")
    consumer_throughput_per_partition: float = Field(20.0, gt=0, description="T_c, MB/s per partition")
    max_open_file_handles: int = Field(10000, gt=0, description="H_max, open file handles per broker")
    replication_latency_per_partition: float = Field(1.0, gt=0, description="l_r, ms")
    leader_election_time: float = Field(5.0, gt=0, description="u, ms per partition")


class Requirements(BaseModel):
    """應用層需求與限制 (T, c, r, L, U, B)"""
    model_config = ConfigDict(frozen=True, extra="forbid", strict=True)

    target_throughput: float = Field(100.0, gt=0, description="T, MB/s")
    consumers: int = Field(100, ge=1, description="c, consumers in the group")
    replication_factor: int = Field(3, ge=1, description="r")
    max_replication_latency: float = Field(200.0, gt=0, description="L, ms")
    max_unavailability: float = Field(2000.0, gt=0, description="U, ms")
    available_brokers: int = Field(10, ge=1, description="B")


class Plan(BaseModel):
    """候選方案：partition 數 P 與 broker 數 b"""
    model_config = ConfigDict(frozen=True, extra="forbid", strict=True)

    partitions: int = Field(..., ge=1, description="P")
    brokers: int = Field(..., ge=1, description="b")


class ConstraintPass(BaseModel):
    """每條限制式是否通過"""
    model_config = ConfigDict(frozen=True)

    throughput: bool
    os_load: bool
    latency: bool
    unavailability: bool
    broker_bound: bool

    @property
    def all_pass(self) -> bool:
        return all(self.model_dump().values())

    def violations(self) -> List[str]:
        """未通過的限制式名稱 (依欄位順序)"""
        return [name for name, ok in self.model_dump().items() if not ok]


class PlanMetrics(BaseModel):
    """
    方案衍生指標

    replication_latency = P·r·l_r / b, unavailability = P·u / b,
    handles_per_broker = P·r / b (平均值)。
    """
    model_config = ConfigDict(frozen=True)

    replication_latency: float = Field(..., description="ms")
    unavailability: float = Field(..., description="ms")
    handles_per_broker: float
    partitions_per_broker: float
    producer_capacity: float = Field(..., description="P·T_p, MB/s")
    consumer_capacity: float = Field(..., description="P·T_c, MB/s")
    per_constraint_pass: ConstraintPass


class Method(str, Enum):
    BROMIN = "bromin"
    BROMAX = "bromax"
    MSCNFL = "mscnfl"
    BRUTE_FORCE_MAX = "brute_force_max"
    BRUTE_FORCE_MIN_BROKERS = "brute_force_min_brokers"
    LP_RELAX = "lp_relax"


SWEEP_METHODS = (Method.BROMIN, Method.BROMAX, Method.MSCNFL)


class SolveOutcome(BaseModel):
    """
    Solver 結果

    plan 為 None 代表 "No feasible solution found."。
    MS-CNFL 與 LP rounding 的 plan 不保證可行，以 feasible 表示驗證結果。
    """
    model_config = ConfigDict(frozen=True)

    method: Method
    plan: Optional[Plan] = None
    feasible: bool = False
    message: str = ""
    violations: List[str] = Field(default_factory=list, description="rounded/benchmark plan 違反的限制式")

    @property
    def found(self) -> bool:
        return self.plan is not None


class RealPlan(BaseModel):
    """LP relaxation 的實數解"""
    model_config = ConfigDict(frozen=True)

    partitions_real: float = Field(..., ge=0)
    brokers_real: float = Field(..., ge=0)
    feasible: bool = Field(..., description="實數可行域是否非空")


class SweepAxis(str, Enum):
    CONSUMERS = "consumers"
    AVAILABLE_BROKERS = "brokers"
    REPLICATION_FACTOR = "replication"

    @property
    def requirement_field(self) -> str:
        return {
            SweepAxis.CONSUMERS: "consumers",
            SweepAxis.AVAILABLE_BROKERS: "available_brokers",
            SweepAxis.REPLICATION_FACTOR: "replication_factor",
        }[self]


class SweepSpec(BaseModel):
    """一組實驗：單一變動軸，其餘需求固定"""
    model_config = ConfigDict(frozen=True, extra="forbid")

    axis: SweepAxis
    axis_values: List[int] = Field(..., description="嚴格遞增的正整數")
    base_requirements: Requirements = Field(default_factory=Requirements)
    base_measured: MeasuredInputs = Field(default_factory=MeasuredInputs)
    methods: List[Method] = Field(default_factory=lambda: list(SWEEP_METHODS))
    mscnfl_trials: int = Field(1000, ge=1)
    master_seed: int = 42
    mscnfl_include_replicas: bool = Field(False, description="Confluent 上限是否乘上 r")

    @field_validator("axis_values")
    @classmethod
    def _strictly_increasing(cls, values: List[int]) -> List[int]:
        if not values:
            raise ValueError("axis_values must be non-empty")
        if any(v < 1 for v in values):
            raise ValueError("axis_values must be positive integers")
        if any(b <= a for a, b in zip(values, values[1:])):
            raise ValueError("axis_values must be strictly increasing")
        return values

    @field_validator("methods")
    @classmethod
    def _sweep_methods_only(cls, methods: List[Method]) -> List[Method]:
        unsupported = [m.value for m in methods if m not in SWEEP_METHODS]
        if unsupported:
            raise ValueError(f"methods not available in sweeps: {unsupported}")
        if len(set(methods)) != len(methods):
            raise ValueError("methods must not repeat")
        return methods


class MsCnflAggregate(BaseModel):
    """MS-CNFL 多次抽樣的平均指標與違規比例"""
    model_config = ConfigDict(frozen=True)

    trials: int
    mean_partitions: float
    mean_brokers: float
    std_partitions: float
    std_brokers: float
    mean_replication_latency: float
    mean_unavailability: float
    mean_handles_per_broker: float
    mean_partitions_per_broker: float
    throughput_violation_rate: float
    os_violation_rate: float
    latency_violation_rate: float
    unavail_violation_rate: float
    broker_bound_violation_rate: float
    feasible_rate: float


class MethodResult(BaseModel):
    """
    單一 method 在單一設定點的結果

    無解的 heuristic 保留為 gap：feasible=False 且指標為 None。
    MS-CNFL 的指標為多次抽樣的平均，feasible 表示所有抽樣皆可行。
    """
    model_config = ConfigDict(frozen=True)

    method: Method
    feasible: bool
    status: str = Field("ok", description="ok | no_feasible | structural_infeasible | degenerate_range")
    partitions: Optional[Union[int, float]] = None
    brokers: Optional[Union[int, float]] = None
    replication_latency: Optional[float] = None
    unavailability: Optional[float] = None
    handles_per_broker: Optional[float] = None
    partitions_per_broker: Optional[float] = None
    latency_violation_rate: Optional[float] = None
    unavail_violation_rate: Optional[float] = None
    os_violation_rate: Optional[float] = None

    @property
    def has_metrics(self) -> bool:
        return self.partitions is not None


class SweepRow(MethodResult):
    """Sweep 結果的一列 (axis_value, method)"""

    axis_value: int


class SweepResult(BaseModel):
    """單一實驗家族的表格結果，依 axis_value、method 排序"""
    model_config = ConfigDict(frozen=True)

    axis: SweepAxis
    rows: List[SweepRow] = Field(default_factory=list)

    def column(self, method: Method, name: str) -> List[Optional[Union[int, float]]]:
        """取出某 method 的單一欄位 (依 axis_value 順序)"""
        return [getattr(row, name) for row in self.rows if row.method == method]

    @model_validator(mode="after")
    def _ordered(self) -> "SweepResult":
        keys = [(row.axis_value, row.method.value) for row in self.rows]
        if keys != sorted(keys) or len(set(keys)) != len(keys):
            raise ValueError("rows must be unique and ordered by (axis_value, method)")
        return self
