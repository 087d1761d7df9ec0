"""
MS-CNFL industry benchmark

結合兩條業界經驗法則的隨機設定：
- Microsoft：每個 broker (含 replicas) 不超過 1000 partitions → P ∈_R [1, floor(1000·B/r)]
- Confluent：重視 latency 時 P 不超過 100·B (選用 ·r) → P ∈_R [1, 100·B]
取兩者較小值，b ∈_R [1, B]。結果刻意不保證可行，違規程度即為量測目標。
"""

from typing import Optional, Tuple
import logging

from kafka_partition_planner.errors import DegenerateRangeError
from kafka_partition_planner.models import MeasuredInputs, Method, Plan, Requirements, SolveOutcome
from kafka_partition_planner.planning.constraints import constraint_pass
from kafka_partition_planner.utils.rng import SplitMix64

logger = logging.getLogger(__name__)

MICROSOFT_PARTITIONS_PER_BROKER = 1000
CONFLUENT_PARTITIONS_PER_BROKER = 100


def mscnfl_ranges(req: Requirements, include_replicas: bool = False) -> Tuple[int, int]:
    """
    兩個抽樣區間的上界

    Args:
        req: 應用需求
        include_replicas: Confluent 上限是否乘上 r

    Returns:
        (Microsoft 上界, Confluent 上界)

    Raises:
        DegenerateRangeError: floor(1000·B/r) < 1
    """
    r, B = req.replication_factor, req.available_brokers
    microsoft_upper = MICROSOFT_PARTITIONS_PER_BROKER * B // r
    if microsoft_upper < 1:
        raise DegenerateRangeError(
            f"MS-CNFL range [1, floor(1000*B/r)] is empty for B={B}, r={r}"
        )
    confluent_upper = CONFLUENT_PARTITIONS_PER_BROKER * B * (r if include_replicas else 1)
    return microsoft_upper, confluent_upper


def ms_cnfl(
    req: Requirements,
    seed: int,
    meas: Optional[MeasuredInputs] = None,
    include_replicas: bool = False
) -> SolveOutcome:
    """
    抽出一組 MS-CNFL 設定

    抽樣順序固定為 Microsoft、Confluent、broker，相同 seed 得到相同結果。

    Args:
        req: 應用需求
        seed: SplitMix64 seed
        meas: 用於可行性判定的量測輸入 (None = 預設量測值)
        include_replicas: Confluent 上限是否乘上 r

    Returns:
        SolveOutcome (plan 一定存在；feasible 為整數限制式的檢驗結果)
    """
    microsoft_upper, confluent_upper = mscnfl_ranges(req, include_replicas)
    rng = SplitMix64(seed)

    microsoft_draw = rng.uniform_int(microsoft_upper)
    confluent_draw = rng.uniform_int(confluent_upper)
    brokers = rng.uniform_int(req.available_brokers)

    plan = Plan(partitions=min(microsoft_draw, confluent_draw), brokers=brokers)
    passes = constraint_pass(plan, req, meas or MeasuredInputs())

    return SolveOutcome(
        method=Method.MSCNFL,
        plan=plan,
        feasible=passes.all_pass,
        violations=passes.violations()
    )
