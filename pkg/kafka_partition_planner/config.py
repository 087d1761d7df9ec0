"""
Configuration document schema using Pydantic

設定文件為 YAML，包含 measured / requirements / sweep 三個區段，
key 名稱與 domain model 欄位一致。優先序：CLI flag > 設定檔 > 內建預設值。
"""

from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union
import logging

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from kafka_partition_planner.errors import ConfigError
from kafka_partition_planner.models import (
    SWEEP_METHODS,
    MeasuredInputs,
    Method,
    Requirements,
    SweepAxis,
    SweepSpec,
)
from kafka_partition_planner.planning.experiments import (
    DEFAULT_MASTER_SEED,
    DEFAULT_MSCNFL_TRIALS,
    axis_range,
)

logger = logging.getLogger(__name__)

CONFIG_ENV_VAR = "KPP_CONFIG"
SECTIONS = ("measured", "requirements", "sweep")


class SweepSection(BaseModel):
    """sweep 區段：axis_values 或 from/to/step 擇一"""
    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    axis: SweepAxis
    axis_values: Optional[List[int]] = Field(None, description="明確列出的軸值")
    start: Optional[int] = Field(None, alias="from")
    stop: Optional[int] = Field(None, alias="to")
    step: int = Field(1, description="from/to 的步距")
    methods: List[Method] = Field(default_factory=lambda: list(SWEEP_METHODS))
    mscnfl_trials: int = Field(DEFAULT_MSCNFL_TRIALS, ge=1)
    master_seed: int = DEFAULT_MASTER_SEED
    mscnfl_include_replicas: bool = False

    @model_validator(mode="after")
    def _one_range_form(self) -> "SweepSection":
        ranged = self.start is not None or self.stop is not None
        if self.axis_values is not None and ranged:
            raise ValueError("use either axis_values or from/to/step, not both")
        if self.axis_values is None and (self.start is None or self.stop is None):
            raise ValueError("sweep needs axis_values or both from and to")
        if self.axis_values is None:
            axis_range(self.start, self.stop, self.step)
        return self

    def resolved_values(self) -> List[int]:
        if self.axis_values is not None:
            return list(self.axis_values)
        return axis_range(self.start, self.stop, self.step)

    def to_spec(self, requirements: Requirements, measured: MeasuredInputs) -> SweepSpec:
        return SweepSpec(
            axis=self.axis,
            axis_values=self.resolved_values(),
            base_requirements=requirements,
            base_measured=measured,
            methods=self.methods,
            mscnfl_trials=self.mscnfl_trials,
            master_seed=self.master_seed,
            mscnfl_include_replicas=self.mscnfl_include_replicas,
        )


class ConfigDocument(BaseModel):
    """完整設定 schema"""
    model_config = ConfigDict(extra="forbid")

    measured: MeasuredInputs = Field(default_factory=MeasuredInputs, description="量測輸入")
    requirements: Requirements = Field(default_factory=Requirements, description="應用需求")
    sweep: Optional[SweepSection] = Field(None, description="選用的 sweep 設定")

    @model_validator(mode="before")
    @classmethod
    def _empty_sections(cls, data: Any) -> Any:
        if isinstance(data, dict):
            data = dict(data)
            for section in ("measured", "requirements"):
                if data.get(section) is None:
                    data.pop(section, None)
        return data


def _format_validation_error(exc: ValidationError) -> str:
    parts = []
    for err in exc.errors():
        key = ".".join(str(p) for p in err["loc"]) or "<document>"
        parts.append(f"{key}: {err['msg']}")
    return "; ".join(parts)


def _parse_yaml(text: str) -> Dict[str, Any]:
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        where = f"line {mark.line + 1}, column {mark.column + 1}" if mark else "unknown position"
        problem = getattr(e, "problem", None) or str(e)
        raise ConfigError(f"Config parse error at {where}: {problem}") from e

    if raw is None:
        return {}
    if not isinstance(raw, dict):
        raise ConfigError(f"Config document must be a mapping with sections {list(SECTIONS)}")
    return raw


def _log_defaults(raw: Dict[str, Any]) -> None:
    measured = raw.get("measured") or {}
    if not isinstance(measured, dict):
        return
    defaulted = [key for key in MeasuredInputs.model_fields if key not in measured]
    if defaulted:
        logger.info(f"Measured inputs not set, using defaults: {', '.join(defaulted)}")


def load_config(
    text: str,
    overrides: Optional[Dict[str, Dict[str, Any]]] = None
) -> Tuple[Requirements, MeasuredInputs, Optional[SweepSpec]]:
    """
    解析設定文件

    Args:
        text: YAML 文字 (可為空字串)
        overrides: {section: {key: value}}，覆寫設定檔中的值 (CLI flags)

    Returns:
        (Requirements, MeasuredInputs, SweepSpec 或 None)

    Raises:
        ConfigError: 解析錯誤 (含行號) 或驗證錯誤 (含 key 路徑)
    """
    raw = _parse_yaml(text)

    for section, values in (overrides or {}).items():
        if not values:
            continue
        current = raw.get(section) or {}
        if not isinstance(current, dict):
            raise ConfigError(f"{section}: section must be a mapping")
        raw[section] = {**current, **values}

    _log_defaults(raw)

    try:
        doc = ConfigDocument(**raw)
        sweep = doc.sweep.to_spec(doc.requirements, doc.measured) if doc.sweep else None
    except ValidationError as e:
        raise ConfigError(f"Invalid config: {_format_validation_error(e)}") from e

    return doc.requirements, doc.measured, sweep


def load_config_file(
    path: Optional[Union[str, Path]],
    overrides: Optional[Dict[str, Dict[str, Any]]] = None
) -> Tuple[Requirements, MeasuredInputs, Optional[SweepSpec]]:
    """從 YAML 檔案載入設定 (path 為 None 時只使用預設值與 overrides)"""
    text = ""
    if path:
        try:
            with open(path, "r", encoding="utf-8") as f:
                text = f.read()
        except OSError as e:
            raise ConfigError(f"Cannot read config file {path}: {e}") from e
        logger.info(f"Loading config: {path}")
    return load_config(text, overrides)


def dump_config(
    requirements: Requirements,
    measured: MeasuredInputs,
    sweep: Optional[SweepSpec] = None
) -> str:
    """
    產生設定文件 (load_config 可還原為相同物件)

    sweep.base_requirements / base_measured 不另外輸出，以 requirements / measured 區段為準。
    """
    doc: Dict[str, Any] = {
        "measured": measured.model_dump(),
        "requirements": requirements.model_dump(),
    }
    if sweep is not None:
        doc["sweep"] = {
            "axis": sweep.axis.value,
            "axis_values": list(sweep.axis_values),
            "methods": [m.value for m in sweep.methods],
            "mscnfl_trials": sweep.mscnfl_trials,
            "master_seed": sweep.master_seed,
            "mscnfl_include_replicas": sweep.mscnfl_include_replicas,
        }
    return yaml.safe_dump(doc, sort_keys=False)
