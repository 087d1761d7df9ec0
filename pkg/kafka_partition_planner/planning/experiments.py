"""
Parameter sweeps

對單一軸 (consumers / brokers / replication factor) 逐點執行各 method 並計算指標。
MS-CNFL 以 (master_seed, point index, trial index) 推導 per-trial seed 後取平均，
結果與執行順序及平行度無關。
"""

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, List, Optional, Sequence
import logging

import numpy as np

from kafka_partition_planner.errors import DegenerateRangeError, StructuralInfeasibilityError
from kafka_partition_planner.models import (
    SWEEP_METHODS,
    MeasuredInputs,
    Method,
    MethodResult,
    MsCnflAggregate,
    Requirements,
    SolveOutcome,
    SweepAxis,
    SweepResult,
    SweepRow,
    SweepSpec,
)
from kafka_partition_planner.planning.benchmark import ms_cnfl
from kafka_partition_planner.planning.constraints import evaluate_plan
from kafka_partition_planner.planning.solvers import bromax, bromin
from kafka_partition_planner.utils.rng import derive_seed

logger = logging.getLogger(__name__)

HEURISTICS: Dict[Method, Callable[[Requirements, MeasuredInputs], SolveOutcome]] = {
    Method.BROMIN: bromin,
    Method.BROMAX: bromax,
}

# 各實驗家族的預設範圍與固定參數 (原始圖表未標示座標，此為重建值)
DEFAULT_FAMILIES = {
    SweepAxis.CONSUMERS: (range(50, 1001, 50), {"available_brokers": 20, "replication_factor": 3}),
    SweepAxis.AVAILABLE_BROKERS: (range(3, 51), {"consumers": 100, "replication_factor": 3}),
    SweepAxis.REPLICATION_FACTOR: (range(2, 16), {"consumers": 100, "available_brokers": 20}),
}

DEFAULT_MSCNFL_TRIALS = 1000
DEFAULT_MASTER_SEED = 42


def axis_range(start: int, stop: int, step: int = 1) -> List[int]:
    """
    [start, stop] 的等差數列 (含 stop 若剛好落在步距上)

    Raises:
        ValueError: 範圍為空或 step < 1
    """
    if step < 1:
        raise ValueError(f"step must be >= 1, got {step}")
    if start < 1:
        raise ValueError(f"axis values must be positive, got from={start}")
    if stop < start:
        raise ValueError(f"empty range: from={start} > to={stop}")
    return list(range(start, stop + 1, step))


def default_sweep_spec(
    axis: SweepAxis,
    base_requirements: Optional[Requirements] = None,
    base_measured: Optional[MeasuredInputs] = None,
    methods: Optional[Sequence[Method]] = None,
    mscnfl_trials: int = DEFAULT_MSCNFL_TRIALS,
    master_seed: int = DEFAULT_MASTER_SEED,
    mscnfl_include_replicas: bool = False
) -> SweepSpec:
    """
    建立預設實驗家族

    base_requirements 中的 T、L、U 保留；家族固定的 c/B/r 會覆寫。
    """
    values, fixed = DEFAULT_FAMILIES[axis]
    base = (base_requirements or Requirements()).model_dump()
    base.update(fixed)

    return SweepSpec(
        axis=axis,
        axis_values=list(values),
        base_requirements=Requirements(**base),
        base_measured=base_measured or MeasuredInputs(),
        methods=list(methods) if methods is not None else list(SWEEP_METHODS),
        mscnfl_trials=mscnfl_trials,
        master_seed=master_seed,
        mscnfl_include_replicas=mscnfl_include_replicas,
    )


def aggregate_mscnfl(
    req: Requirements,
    meas: MeasuredInputs,
    trials: int,
    seed: int,
    point_index: int = 0,
    include_replicas: bool = False
) -> MsCnflAggregate:
    """
    MS-CNFL 多次抽樣的平均指標

    Args:
        req: 應用需求
        meas: 量測輸入
        trials: 抽樣次數 (>= 1)
        seed: master seed
        point_index: sweep 中的點序號 (參與 seed 推導)
        include_replicas: Confluent 上限是否乘上 r

    Returns:
        MsCnflAggregate

    Raises:
        DegenerateRangeError: 抽樣區間為空
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")

    plans = [
        ms_cnfl(req, derive_seed(seed, point_index, trial), meas, include_replicas).plan
        for trial in range(trials)
    ]
    metrics = [evaluate_plan(plan, req, meas) for plan in plans]

    partitions = np.array([plan.partitions for plan in plans], dtype=float)
    brokers = np.array([plan.brokers for plan in plans], dtype=float)

    def mean_of(name: str) -> float:
        return float(np.mean([getattr(m, name) for m in metrics]))

    def violation_rate(name: str) -> float:
        return float(np.mean([not getattr(m.per_constraint_pass, name) for m in metrics]))

    return MsCnflAggregate(
        trials=trials,
        mean_partitions=float(partitions.mean()),
        mean_brokers=float(brokers.mean()),
        std_partitions=float(partitions.std()),
        std_brokers=float(brokers.std()),
        mean_replication_latency=mean_of("replication_latency"),
        mean_unavailability=mean_of("unavailability"),
        mean_handles_per_broker=mean_of("handles_per_broker"),
        mean_partitions_per_broker=mean_of("partitions_per_broker"),
        throughput_violation_rate=violation_rate("throughput"),
        os_violation_rate=violation_rate("os_load"),
        latency_violation_rate=violation_rate("latency"),
        unavail_violation_rate=violation_rate("unavailability"),
        broker_bound_violation_rate=violation_rate("broker_bound"),
        feasible_rate=float(np.mean([m.per_constraint_pass.all_pass for m in metrics])),
    )


def evaluate_method(
    method: Method,
    req: Requirements,
    meas: MeasuredInputs,
    mscnfl_trials: int = DEFAULT_MSCNFL_TRIALS,
    seed: int = DEFAULT_MASTER_SEED,
    point_index: int = 0,
    include_replicas: bool = False
) -> MethodResult:
    """
    在單一設定點執行一個 method

    結構性無解與退化區間轉為標記列，不中斷呼叫端。
    """
    if method == Method.MSCNFL:
        try:
            agg = aggregate_mscnfl(req, meas, mscnfl_trials, seed, point_index, include_replicas)
        except DegenerateRangeError as e:
            logger.warning(f"MS-CNFL skipped: {e}")
            return MethodResult(method=method, feasible=False, status="degenerate_range")
        return MethodResult(
            method=method,
            feasible=agg.feasible_rate == 1.0,
            partitions=agg.mean_partitions,
            brokers=agg.mean_brokers,
            replication_latency=agg.mean_replication_latency,
            unavailability=agg.mean_unavailability,
            handles_per_broker=agg.mean_handles_per_broker,
            partitions_per_broker=agg.mean_partitions_per_broker,
            latency_violation_rate=agg.latency_violation_rate,
            unavail_violation_rate=agg.unavail_violation_rate,
            os_violation_rate=agg.os_violation_rate,
        )

    if method not in HEURISTICS:
        raise ValueError(f"Unsupported method: {method.value}")

    try:
        outcome = HEURISTICS[method](req, meas)
    except StructuralInfeasibilityError as e:
        logger.info(f"{method.value}: {e}")
        return MethodResult(method=method, feasible=False, status="structural_infeasible")

    if not outcome.found:
        return MethodResult(method=method, feasible=False, status="no_feasible")

    plan = outcome.plan
    metrics = evaluate_plan(plan, req, meas)
    passes = metrics.per_constraint_pass
    return MethodResult(
        method=method,
        feasible=passes.all_pass,
        partitions=plan.partitions,
        brokers=plan.brokers,
        replication_latency=metrics.replication_latency,
        unavailability=metrics.unavailability,
        handles_per_broker=metrics.handles_per_broker,
        partitions_per_broker=metrics.partitions_per_broker,
        latency_violation_rate=float(not passes.latency),
        unavail_violation_rate=float(not passes.unavailability),
        os_violation_rate=float(not passes.os_load),
    )


def point_requirements(spec: SweepSpec, value: int) -> Requirements:
    """以 axis 值覆寫 base_requirements"""
    data = spec.base_requirements.model_dump()
    data[spec.axis.requirement_field] = value
    return Requirements(**data)


def _evaluate_point(spec: SweepSpec, point_index: int, value: int) -> List[SweepRow]:
    req = point_requirements(spec, value)
    rows = []
    for method in spec.methods:
        result = evaluate_method(
            method,
            req,
            spec.base_measured,
            mscnfl_trials=spec.mscnfl_trials,
            seed=spec.master_seed,
            point_index=point_index,
            include_replicas=spec.mscnfl_include_replicas,
        )
        rows.append(SweepRow(axis_value=value, **result.model_dump()))
    return rows


def run_sweep(spec: SweepSpec, max_workers: Optional[int] = None) -> SweepResult:
    """
    執行一組 sweep

    Args:
        spec: SweepSpec
        max_workers: > 1 時以 thread pool 平行計算各點

    Returns:
        SweepResult (依 axis_value、method 名稱排序)
    """
    logger.info(
        f"Sweep {spec.axis.value}: {len(spec.axis_values)} points "
        f"[{spec.axis_values[0]}..{spec.axis_values[-1]}], "
        f"methods={[m.value for m in spec.methods]}, trials={spec.mscnfl_trials}"
    )

    points = list(enumerate(spec.axis_values))
    if max_workers and max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as executor:
            per_point = list(executor.map(lambda iv: _evaluate_point(spec, *iv), points))
    else:
        per_point = [_evaluate_point(spec, i, v) for i, v in points]

    rows = sorted(
        (row for point_rows in per_point for row in point_rows),
        key=lambda row: (row.axis_value, row.method.value)
    )
    gaps = sum(1 for row in rows if not row.has_metrics)
    logger.info(f"Sweep {spec.axis.value} complete: {len(rows)} rows ({gaps} gap rows)")

    return SweepResult(axis=spec.axis, rows=rows)
