"""
Topic partitioning model: constraint predicates and plan metrics

限制式 (皆為非嚴格不等式，邊界相等視為可行)：
    throughput:      P >= max(T/T_p, T/T_c, c)
    OS load:         P·r <= b·H_max
    latency:         P·r·l_r <= b·L
    unavailability:  P·u <= b·U
    broker bound:    r <= b <= B

整數值輸入以精確整數運算比較；小數輸入以浮點運算比較 (無容差)。
由除法推導的門檻值以 Fraction 計算。
"""

import math
from fractions import Fraction
from typing import Union
import logging

from kafka_partition_planner.models import (
    ConstraintPass,
    MeasuredInputs,
    Plan,
    PlanMetrics,
    Requirements,
)

logger = logging.getLogger(__name__)

Number = Union[int, float]


def exact(value: Number) -> Number:
    """整數值的 float 轉為 int，使比較走精確整數運算"""
    if isinstance(value, float) and value.is_integer():
        return int(value)
    return value


def throughput_lower_bound(req: Requirements, meas: MeasuredInputs) -> Fraction:
    """max(T/T_p, T/T_c, c) over the rationals"""
    t = Fraction(req.target_throughput)
    return max(
        t / Fraction(meas.producer_throughput_per_partition),
        t / Fraction(meas.consumer_throughput_per_partition),
        Fraction(req.consumers),
    )


def min_partitions(req: Requirements, meas: MeasuredInputs) -> int:
    """
    滿足 throughput 限制式的最小整數 P

    Args:
        req: 應用需求
        meas: 量測輸入

    Returns:
        ceil(max(T/T_p, T/T_c, c))
    """
    return math.ceil(throughput_lower_bound(req, meas))


def max_partitions_os(b: int, req: Requirements, meas: MeasuredInputs) -> int:
    """
    OS load 允許的最大 P (給定 broker 數 b)

    Returns:
        floor(b·H_max / r)
    """
    return (b * meas.max_open_file_handles) // req.replication_factor


def check_throughput(plan: Plan, req: Requirements, meas: MeasuredInputs) -> bool:
    return plan.partitions >= min_partitions(req, meas)


def check_os_load(plan: Plan, req: Requirements, meas: MeasuredInputs) -> bool:
    return plan.partitions * req.replication_factor <= plan.brokers * meas.max_open_file_handles


def check_latency(plan: Plan, req: Requirements, meas: MeasuredInputs) -> bool:
    """P·r·l_r <= b·L"""
    lhs = plan.partitions * req.replication_factor * exact(meas.replication_latency_per_partition)
    return lhs <= plan.brokers * exact(req.max_replication_latency)


def check_unavailability(plan: Plan, req: Requirements, meas: MeasuredInputs) -> bool:
    """P·u <= b·U"""
    lhs = plan.partitions * exact(meas.leader_election_time)
    return lhs <= plan.brokers * exact(req.max_unavailability)


def check_broker_bound(plan: Plan, req: Requirements) -> bool:
    return req.replication_factor <= plan.brokers <= req.available_brokers


def constraint_pass(plan: Plan, req: Requirements, meas: MeasuredInputs) -> ConstraintPass:
    """逐條檢查限制式"""
    return ConstraintPass(
        throughput=check_throughput(plan, req, meas),
        os_load=check_os_load(plan, req, meas),
        latency=check_latency(plan, req, meas),
        unavailability=check_unavailability(plan, req, meas),
        broker_bound=check_broker_bound(plan, req),
    )


def is_feasible(plan: Plan, req: Requirements, meas: MeasuredInputs) -> bool:
    """方案是否同時滿足全部限制式"""
    return (
        check_broker_bound(plan, req)
        and check_throughput(plan, req, meas)
        and check_os_load(plan, req, meas)
        and check_latency(plan, req, meas)
        and check_unavailability(plan, req, meas)
    )


def evaluate_plan(plan: Plan, req: Requirements, meas: MeasuredInputs) -> PlanMetrics:
    """
    計算方案的衍生指標

    指標以實數計算；per_constraint_pass 與各 predicate 的結果一致。

    Args:
        plan: 候選方案
        req: 應用需求
        meas: 量測輸入

    Returns:
        PlanMetrics
    """
    p, b, r = plan.partitions, plan.brokers, req.replication_factor
    return PlanMetrics(
        replication_latency=p * r * meas.replication_latency_per_partition / b,
        unavailability=p * meas.leader_election_time / b,
        handles_per_broker=p * r / b,
        partitions_per_broker=p / b,
        producer_capacity=p * meas.producer_throughput_per_partition,
        consumer_capacity=p * meas.consumer_throughput_per_partition,
        per_constraint_pass=constraint_pass(plan, req, meas),
    )
