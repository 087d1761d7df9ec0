"""
Partition planning solvers

BroMin / BroMax：以 broker 數 b 為外層迴圈、P 由大到小為內層，回傳第一組通過
latency 與 unavailability 檢查的 (P, b)。BroMin 由 b=r 往上，BroMax 由 b=B 往下。

由於兩個檢查對 P 單調，內層第一個命中等於
min(floor(b·H_max/r), floor(b·L/(r·l_r)), floor(b·U/u))，
故每個 b 只需 O(1)；逐一掃描的版本保留為 literal_scan 作為測試 oracle。
"""

import math
from fractions import Fraction
from typing import Iterable, Optional, Tuple
import logging

import numpy as np

from kafka_partition_planner.errors import StructuralInfeasibilityError
from kafka_partition_planner.models import (
    NO_FEASIBLE_MESSAGE,
    MeasuredInputs,
    Method,
    Plan,
    RealPlan,
    Requirements,
    SolveOutcome,
)
from kafka_partition_planner.planning.constraints import (
    check_latency,
    check_unavailability,
    constraint_pass,
    exact,
    max_partitions_os,
    min_partitions,
    throughput_lower_bound,
)

logger = logging.getLogger(__name__)


def require_structure(req: Requirements) -> None:
    """r > B 時 broker 限制式無解，搜尋前直接失敗"""
    if req.replication_factor > req.available_brokers:
        raise StructuralInfeasibilityError(req.replication_factor, req.available_brokers)


def _floor_ratio(numerator, denominator) -> int:
    return math.floor(Fraction(numerator) / Fraction(denominator))


def _passes_inner_checks(p: int, b: int, req: Requirements, meas: MeasuredInputs) -> bool:
    plan = Plan(partitions=p, brokers=b)
    return check_latency(plan, req, meas) and check_unavailability(plan, req, meas)


def largest_partitions(b: int, req: Requirements, meas: MeasuredInputs) -> int:
    """
    給定 b，內層掃描會命中的 P (未套用 throughput 下界)

    先以精確有理數取 floor，再以 predicate 本身校正邊界，
    確保與逐一掃描的結果一致 (小數輸入時亦然)。

    Args:
        b: broker 數
        req: 應用需求
        meas: 量測輸入

    Returns:
        最大的 P (<= floor(b·H_max/r))；可能 < 1 代表此 b 無解
    """
    r = req.replication_factor
    os_cap = max_partitions_os(b, req, meas)
    cap = min(
        os_cap,
        _floor_ratio(b * exact(req.max_replication_latency), r * Fraction(meas.replication_latency_per_partition)),
        _floor_ratio(b * exact(req.max_unavailability), Fraction(meas.leader_election_time)),
    )

    while cap + 1 <= os_cap and _passes_inner_checks(cap + 1, b, req, meas):
        cap += 1
    while cap >= 1 and not _passes_inner_checks(cap, b, req, meas):
        cap -= 1
    return cap


def _heuristic(
    req: Requirements,
    meas: MeasuredInputs,
    method: Method,
    broker_order: Iterable[int]
) -> SolveOutcome:
    require_structure(req)
    p_min = min_partitions(req, meas)

    for b in broker_order:
        p = largest_partitions(b, req, meas)
        if p >= p_min:
            logger.debug(f"{method.value}: P={p}, b={b} (P_min={p_min})")
            return SolveOutcome(method=method, plan=Plan(partitions=p, brokers=b), feasible=True)

    logger.debug(f"{method.value}: no feasible plan (P_min={p_min})")
    return SolveOutcome(method=method, message=NO_FEASIBLE_MESSAGE)


def bromin(req: Requirements, meas: MeasuredInputs) -> SolveOutcome:
    """
    BroMin：最少 broker 數下的最大 partition 數

    Raises:
        StructuralInfeasibilityError: r > B
    """
    r, B = req.replication_factor, req.available_brokers
    return _heuristic(req, meas, Method.BROMIN, range(r, B + 1))


def bromax(req: Requirements, meas: MeasuredInputs) -> SolveOutcome:
    """
    BroMax：用滿可用 broker，取最大 partition 數

    可行性對 b 單調，因此回傳的方案必定 b = B。

    Raises:
        StructuralInfeasibilityError: r > B
    """
    r, B = req.replication_factor, req.available_brokers
    return _heuristic(req, meas, Method.BROMAX, range(B, r - 1, -1))


def literal_scan(
    req: Requirements,
    meas: MeasuredInputs,
    descending_brokers: bool = False
) -> SolveOutcome:
    """
    BroMin/BroMax 的逐一掃描版本 (僅供小規模驗證)

    Args:
        req: 應用需求
        meas: 量測輸入
        descending_brokers: True = BroMax 掃描順序

    Returns:
        SolveOutcome
    """
    require_structure(req)
    r, B = req.replication_factor, req.available_brokers
    method = Method.BROMAX if descending_brokers else Method.BROMIN
    brokers = range(B, r - 1, -1) if descending_brokers else range(r, B + 1)
    p_min = min_partitions(req, meas)

    for b in brokers:
        p = max_partitions_os(b, req, meas)
        while p >= p_min:
            if _passes_inner_checks(p, b, req, meas):
                return SolveOutcome(method=method, plan=Plan(partitions=p, brokers=b), feasible=True)
            p -= 1

    return SolveOutcome(method=method, message=NO_FEASIBLE_MESSAGE)


def feasible_partitions(b: int, req: Requirements, meas: MeasuredInputs) -> np.ndarray:
    """
    列舉 b 固定時所有可行的 P (遞增)

    向量化版本的 is_feasible，運算順序與 scalar predicate 相同。
    """
    upper = max_partitions_os(b, req, meas)
    if upper < 1:
        return np.empty(0, dtype=np.int64)

    r = req.replication_factor
    p = np.arange(1, upper + 1, dtype=np.int64)
    mask = p >= min_partitions(req, meas)
    mask &= p * r <= b * meas.max_open_file_handles
    mask &= p * r * exact(meas.replication_latency_per_partition) <= b * exact(req.max_replication_latency)
    mask &= p * exact(meas.leader_election_time) <= b * exact(req.max_unavailability)
    return p[mask]


def brute_force_max(req: Requirements, meas: MeasuredInputs) -> SolveOutcome:
    """
    整數規劃的窮舉解：最大化 P，同分取最大 b

    Raises:
        StructuralInfeasibilityError: r > B
    """
    require_structure(req)
    best: Optional[Plan] = None

    for b in range(req.replication_factor, req.available_brokers + 1):
        candidates = feasible_partitions(b, req, meas)
        if candidates.size and (best is None or int(candidates[-1]) >= best.partitions):
            best = Plan(partitions=int(candidates[-1]), brokers=b)

    if best is None:
        return SolveOutcome(method=Method.BRUTE_FORCE_MAX, message=NO_FEASIBLE_MESSAGE)
    return SolveOutcome(method=Method.BRUTE_FORCE_MAX, plan=best, feasible=True)


def brute_force_min_brokers(req: Requirements, meas: MeasuredInputs) -> SolveOutcome:
    """
    窮舉解：最小化 b，同分取最大 P

    Raises:
        StructuralInfeasibilityError: r > B
    """
    require_structure(req)

    for b in range(req.replication_factor, req.available_brokers + 1):
        candidates = feasible_partitions(b, req, meas)
        if candidates.size:
            plan = Plan(partitions=int(candidates[-1]), brokers=b)
            return SolveOutcome(method=Method.BRUTE_FORCE_MIN_BROKERS, plan=plan, feasible=True)

    return SolveOutcome(method=Method.BRUTE_FORCE_MIN_BROKERS, message=NO_FEASIBLE_MESSAGE)


def lp_relax(req: Requirements, meas: MeasuredInputs) -> Tuple[RealPlan, SolveOutcome]:
    """
    Linear relaxation baseline：去掉整數限制求解後無條件捨去

    兩變數 LP 的最佳解為 b* = B, P* = B·min(H_max/r, L/(r·l_r), U/u)。
    捨去後的方案可能違反 throughput 下界，因此重新以整數限制式檢驗。

    Args:
        req: 應用需求
        meas: 量測輸入

    Returns:
        (實數解, 捨去後的方案與可行性判定)；實數可行域為空時 plan 為 None
    """
    r, B = req.replication_factor, req.available_brokers
    if B < r:
        logger.debug("lp_relax: broker bound empty over the reals")
        real = RealPlan(partitions_real=0.0, brokers_real=0.0, feasible=False)
        return real, SolveOutcome(method=Method.LP_RELAX, message="LP relaxation infeasible: r > B")

    per_broker = min(
        Fraction(meas.max_open_file_handles, r),
        Fraction(req.max_replication_latency) / (r * Fraction(meas.replication_latency_per_partition)),
        Fraction(req.max_unavailability) / Fraction(meas.leader_election_time),
    )
    p_star = B * per_broker
    lower = throughput_lower_bound(req, meas)

    if p_star < lower:
        real = RealPlan(partitions_real=float(p_star), brokers_real=float(B), feasible=False)
        return real, SolveOutcome(
            method=Method.LP_RELAX,
            message=f"LP relaxation infeasible: P*={float(p_star):.6g} < lower bound {float(lower):.6g}"
        )

    real = RealPlan(partitions_real=float(p_star), brokers_real=float(B), feasible=True)
    rounded = Plan(partitions=math.floor(p_star), brokers=B)
    passes = constraint_pass(rounded, req, meas)
    message = "" if passes.all_pass else f"Rounded LP solution violates: {', '.join(passes.violations())}"
    logger.debug(f"lp_relax: P*={float(p_star):.6g}, rounded={rounded}, feasible={passes.all_pass}")

    return real, SolveOutcome(
        method=Method.LP_RELAX,
        plan=rounded,
        feasible=passes.all_pass,
        message=message,
        violations=passes.violations()
    )
