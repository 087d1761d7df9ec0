"""
Tests for config document loading and dumping
"""

import logging

import pytest

from kafka_partition_planner.config import dump_config, load_config, load_config_file
from kafka_partition_planner.errors import ConfigError
from kafka_partition_planner.models import MeasuredInputs, Method, Requirements, SweepAxis, SweepSpec
from kafka_partition_planner.utils.hashing import config_hash


def test_empty_document_defaults(caplog):
    """空文件 → 全部使用預設值並記錄提示"""
    with caplog.at_level(logging.INFO):
        req, meas, sweep = load_config("")

    assert req == Requirements()
    assert meas == MeasuredInputs()
    assert sweep is None
    assert "Measured inputs not set, using defaults" in caplog.text


def test_empty_measured_section():
    """measured 區段為空 → 預設量測值"""
    req, meas, _ = load_config("measured:\nrequirements:\n  consumers: 500\n")
    assert meas == MeasuredInputs()
    assert req.consumers == 500
    assert req.target_throughput == 100.0


def test_partial_measured_logs_missing_keys(caplog):
    """只列出未設定的量測值"""
    with caplog.at_level(logging.INFO):
        _, meas, _ = load_config("measured:\n  max_open_file_handles: 500\n")

    assert meas.max_open_file_handles == 500
    assert "leader_election_time" in caplog.text
    assert "max_open_file_handles," not in caplog.text


def test_zero_replication_factor():
    """r=0 → 驗證錯誤並指出 key"""
    with pytest.raises(ConfigError) as exc_info:
        load_config("requirements:\n  replication_factor: 0\n")
    assert "requirements.replication_factor" in str(exc_info.value)


def test_unknown_keys_rejected():
    """未知 key 與未知區段都拒絕"""
    with pytest.raises(ConfigError):
        load_config("measured:\n  max_handles: 10\n")
    with pytest.raises(ConfigError):
        load_config("cluster:\n  brokers: 3\n")


def test_unit_strings_rejected():
    """不做單位轉換"""
    with pytest.raises(ConfigError):
        load_config("requirements:\n  max_replication_latency: 200ms\n")


def test_parse_error_reports_line():
    """YAML 語法錯誤附行號"""
    with pytest.raises(ConfigError) as exc_info:
        load_config("requirements:\n  consumers: 10\n  replication_factor: [3, 4\n")
    assert "Config parse error at line" in str(exc_info.value)


def test_non_mapping_document():
    with pytest.raises(ConfigError):
        load_config("- 1\n- 2\n")


def test_overrides_take_precedence():
    """flag overrides > 設定檔 > 預設值"""
    text = "requirements:\n  consumers: 50\n  available_brokers: 20\n"
    req, _, _ = load_config(text, {"requirements": {"consumers": 70}, "measured": {}})

    assert req.consumers == 70
    assert req.available_brokers == 20
    assert req.replication_factor == 3


def test_sweep_from_to():
    """from/to/step 轉為 axis_values"""
    text = "sweep:\n  axis: consumers\n  from: 100\n  to: 1000\n  step: 450\n"
    req, _, sweep = load_config(text)

    assert sweep.axis == SweepAxis.CONSUMERS
    assert sweep.axis_values == [100, 550, 1000]
    assert sweep.base_requirements == req
    assert sweep.methods == [Method.BROMIN, Method.BROMAX, Method.MSCNFL]


def test_sweep_range_forms_exclusive():
    """axis_values 與 from/to 不可同時出現"""
    with pytest.raises(ConfigError):
        load_config("sweep:\n  axis: brokers\n  axis_values: [3, 4]\n  from: 3\n  to: 4\n")
    with pytest.raises(ConfigError):
        load_config("sweep:\n  axis: brokers\n  from: 3\n")
    with pytest.raises(ConfigError):
        load_config("sweep:\n  axis: brokers\n  from: 10\n  to: 5\n")


def test_round_trip():
    """dump 後再 load 得到相同物件"""
    req = Requirements(consumers=250, replication_factor=2, available_brokers=12, max_unavailability=1500.0)
    meas = MeasuredInputs(replication_latency_per_partition=0.5, max_open_file_handles=4000)
    sweep = SweepSpec(
        axis=SweepAxis.REPLICATION_FACTOR,
        axis_values=[1, 2, 4, 8],
        base_requirements=req,
        base_measured=meas,
        methods=[Method.BROMAX, Method.MSCNFL],
        mscnfl_trials=250,
        master_seed=7,
        mscnfl_include_replicas=True,
    )

    loaded = load_config(dump_config(req, meas, sweep))
    assert loaded == (req, meas, sweep)


def test_round_trip_without_sweep():
    req, meas = Requirements(), MeasuredInputs()
    assert load_config(dump_config(req, meas)) == (req, meas, None)


def test_load_config_file(tmp_path):
    """從檔案載入；檔案不存在時為 ConfigError"""
    path = tmp_path / "planner.yaml"
    path.write_text("requirements:\n  consumers: 500\n", encoding="utf-8")

    req, meas, _ = load_config_file(path)
    assert req.consumers == 500
    assert meas == MeasuredInputs()

    with pytest.raises(ConfigError):
        load_config_file(tmp_path / "missing.yaml")


def test_load_config_file_without_path():
    """path 為 None → 只套用 overrides"""
    req, _, _ = load_config_file(None, {"requirements": {"available_brokers": 4}})
    assert req.available_brokers == 4


def test_config_hash_stable():
    """相同設定相同 hash，key 順序無關"""
    first = {"requirements": Requirements().model_dump(), "measured": MeasuredInputs().model_dump()}
    second = {"measured": MeasuredInputs().model_dump(), "requirements": Requirements().model_dump()}
    changed = {"requirements": Requirements(consumers=101).model_dump(), "measured": MeasuredInputs().model_dump()}

    assert config_hash(first) == config_hash(second)
    assert config_hash(first) != config_hash(changed)
    assert len(config_hash(first)) == 16
