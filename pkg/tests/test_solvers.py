"""
Tests for BroMin / BroMax, brute-force oracles and the LP relaxation baseline
"""

import numpy as np
import pytest

from kafka_partition_planner.errors import StructuralInfeasibilityError
from kafka_partition_planner.models import NO_FEASIBLE_MESSAGE, MeasuredInputs, Method, Plan, Requirements
from kafka_partition_planner.planning.constraints import is_feasible
from kafka_partition_planner.planning.solvers import (
    brute_force_max,
    brute_force_min_brokers,
    bromax,
    bromin,
    literal_scan,
    lp_relax,
)

# Settings
seed = 20240611
n_oracle = 500
n_fuzz = 10000


def create_requirements(consumers: int = 100, replication_factor: int = 3, brokers_available: int = 10,
                        **overrides) -> Requirements:
    """Helper: 預設需求 (T=100, L=200, U=2000)"""
    return Requirements(
        consumers=consumers,
        replication_factor=replication_factor,
        available_brokers=brokers_available,
        **overrides
    )


def random_instance(rng: np.random.Generator, max_brokers: int = 30, max_handles: int = 10000,
                    enumeration_limit: int = 10 ** 5):
    """
    產生隨機 instance

    r ∈ [1, 10], B ∈ [r, max_brokers]，H_max 限制在 B·H_max/r <= enumeration_limit。
    約四分之一的 instance 使用小數 l_r / u。
    """
    r = int(rng.integers(1, 11))
    B = int(rng.integers(r, max(r, max_brokers) + 1))
    h_cap = max(1, min(max_handles, enumeration_limit * r // B))
    fractional = rng.random() < 0.25

    req = Requirements(
        target_throughput=float(rng.integers(1, 2001)),
        consumers=int(rng.integers(1, 1500)),
        replication_factor=r,
        max_replication_latency=float(rng.integers(1, 400)),
        max_unavailability=float(rng.integers(1, 4000)),
        available_brokers=B,
    )
    meas = MeasuredInputs(
        producer_throughput_per_partition=float(rng.integers(1, 40)),
        consumer_throughput_per_partition=float(rng.integers(1, 40)),
        max_open_file_handles=int(rng.integers(1, h_cap + 1)),
        replication_latency_per_partition=float(rng.integers(1, 8)) / (4 if fractional else 1),
        leader_election_time=float(rng.integers(1, 12)) / (2 if fractional else 1),
    )
    return req, meas


rng = np.random.default_rng(seed)
oracle_instances = [random_instance(rng) for _ in range(n_oracle)]
small_instances = [random_instance(rng, max_brokers=8, max_handles=100) for _ in range(100)]


def test_exact_points():
    """預設量測值下的精確解"""
    meas = MeasuredInputs()

    assert bromin(create_requirements(consumers=100), meas).plan == Plan(partitions=200, brokers=3)
    assert bromin(create_requirements(consumers=500), meas).plan == Plan(partitions=533, brokers=8)
    assert bromax(create_requirements(consumers=100), meas).plan == Plan(partitions=666, brokers=10)
    assert bromax(create_requirements(consumers=100, brokers_available=3), meas).plan == \
        Plan(partitions=200, brokers=3)


def test_no_feasible_solution():
    """c=1000 需要 b >= 15，超過 B=10"""
    req, meas = create_requirements(consumers=1000), MeasuredInputs()

    for solver in (bromin, bromax, brute_force_max, brute_force_min_brokers):
        outcome = solver(req, meas)
        assert outcome.plan is None
        assert not outcome.feasible
        assert outcome.message == NO_FEASIBLE_MESSAGE


def test_structural_infeasibility():
    """r > B 在搜尋前即失敗"""
    req, meas = create_requirements(replication_factor=5, brokers_available=4), MeasuredInputs()

    for solver in (bromin, bromax, brute_force_max, brute_force_min_brokers, literal_scan):
        with pytest.raises(StructuralInfeasibilityError):
            solver(req, meas)


def test_brute_force_examples():
    """測試窮舉 oracle"""
    meas = MeasuredInputs()

    assert brute_force_max(create_requirements(consumers=100), meas).plan == Plan(partitions=666, brokers=10)
    assert brute_force_max(create_requirements(consumers=10, brokers_available=3), meas).plan == \
        Plan(partitions=200, brokers=3)
    assert brute_force_min_brokers(create_requirements(consumers=100), meas).plan == \
        Plan(partitions=200, brokers=3)
    assert brute_force_min_brokers(create_requirements(consumers=500), meas).plan == \
        Plan(partitions=533, brokers=8)


def test_method_tags():
    """SolveOutcome.method 標記正確"""
    req, meas = create_requirements(), MeasuredInputs()
    assert bromin(req, meas).method == Method.BROMIN
    assert bromax(req, meas).method == Method.BROMAX
    assert brute_force_max(req, meas).method == Method.BRUTE_FORCE_MAX
    assert brute_force_min_brokers(req, meas).method == Method.BRUTE_FORCE_MIN_BROKERS
    assert lp_relax(req, meas)[1].method == Method.LP_RELAX


@pytest.mark.parametrize("req,meas", small_instances)
def test_closed_form_matches_literal_scan(req, meas):
    """O(1) per-broker 版本與逐一掃描結果相同"""
    assert bromin(req, meas).plan == literal_scan(req, meas).plan
    assert bromax(req, meas).plan == literal_scan(req, meas, descending_brokers=True).plan


@pytest.mark.parametrize("req,meas", oracle_instances)
def test_oracle_equivalence(req, meas):
    """bromax ≡ brute_force_max, bromin ≡ brute_force_min_brokers (含無解)"""
    assert bromax(req, meas).plan == brute_force_max(req, meas).plan
    assert bromin(req, meas).plan == brute_force_min_brokers(req, meas).plan


def test_soundness_fuzz():
    """隨機 instance 下 heuristics 回傳的方案必定可行"""
    fuzz_rng = np.random.default_rng(seed + 1)
    found = 0

    for _ in range(n_fuzz):
        req, meas = random_instance(fuzz_rng, enumeration_limit=10 ** 7)
        low, high = bromin(req, meas), bromax(req, meas)

        # 兩者搜尋相同的可行域
        assert low.found == high.found
        if not low.found:
            continue

        found += 1
        assert is_feasible(low.plan, req, meas)
        assert is_feasible(high.plan, req, meas)
        assert high.plan.brokers == req.available_brokers
        assert low.plan.brokers <= high.plan.brokers
        assert low.plan.partitions <= high.plan.partitions

    # 確認 fuzz 同時涵蓋有解與無解的情況
    assert 0 < found < n_fuzz


@pytest.mark.parametrize("field,values,direction", [
    ("brokers_available", [3, 4, 7, 12, 20], "up"),
    ("max_replication_latency", [50.0, 100.0, 200.0, 400.0], "up"),
    ("max_unavailability", [300.0, 700.0, 2000.0, 9000.0], "up"),
    ("replication_factor", [1, 2, 3, 5, 8], "down"),
])
def test_bromax_monotone_in_requirements(field, values, direction):
    """bromax.P 隨 B、L、U 不遞減，隨 r 不遞增"""
    meas = MeasuredInputs(max_open_file_handles=300)
    partitions = []
    for value in values:
        outcome = bromax(create_requirements(consumers=10, **{field: value}), meas)
        assert outcome.found
        partitions.append(outcome.plan.partitions)

    expected = sorted(partitions) if direction == "up" else sorted(partitions, reverse=True)
    assert partitions == expected


@pytest.mark.parametrize("field,values,direction", [
    ("max_open_file_handles", [70, 200, 5000], "up"),
    ("replication_latency_per_partition", [0.25, 1.0, 2.0, 3.0], "down"),
    ("leader_election_time", [1.0, 5.0, 20.0, 60.0], "down"),
])
def test_bromax_monotone_in_measured(field, values, direction):
    """bromax.P 隨 H_max 不遞減，隨 l_r、u 不遞增"""
    req = create_requirements(consumers=10)
    partitions = []
    for value in values:
        outcome = bromax(req, MeasuredInputs(**{field: value}))
        assert outcome.found
        partitions.append(outcome.plan.partitions)

    expected = sorted(partitions) if direction == "up" else sorted(partitions, reverse=True)
    assert partitions == expected


def test_lp_relax_feasible_rounding():
    """預設設定下 LP 捨去後仍可行"""
    real, outcome = lp_relax(create_requirements(consumers=100), MeasuredInputs())

    assert real.feasible
    assert real.partitions_real == pytest.approx(666.6667, rel=1e-6)
    assert real.brokers_real == 10
    assert outcome.plan == Plan(partitions=666, brokers=10)
    assert outcome.feasible
    assert outcome.violations == []
    assert outcome.plan == brute_force_max(create_requirements(consumers=100), MeasuredInputs()).plan


def test_lp_relax_rounding_failure():
    """實數可行但捨去後違反 throughput，heuristics 正確回報無解"""
    req = Requirements(target_throughput=6665.0, consumers=1, replication_factor=3, available_brokers=10)
    meas = MeasuredInputs()

    real, outcome = lp_relax(req, meas)
    assert real.feasible
    assert real.partitions_real == pytest.approx(666.6667, rel=1e-6)
    assert outcome.plan == Plan(partitions=666, brokers=10)
    assert not outcome.feasible
    assert outcome.violations == ["throughput"]
    assert outcome.feasible == is_feasible(outcome.plan, req, meas)

    assert not bromin(req, meas).found
    assert not bromax(req, meas).found


def test_lp_relax_real_infeasible():
    """B < r 時實數可行域為空"""
    real, outcome = lp_relax(create_requirements(replication_factor=5, brokers_available=4), MeasuredInputs())

    assert not real.feasible
    assert outcome.plan is None
    assert not outcome.feasible


def test_lp_relax_verdict_matches_is_feasible():
    """LP 判定與 is_feasible 一致"""
    for req, meas in oracle_instances[:100]:
        real, outcome = lp_relax(req, meas)
        if outcome.found:
            assert outcome.feasible == is_feasible(outcome.plan, req, meas)
        else:
            assert not real.feasible
