"""
CSV result store

單一結果格式：逗號分隔、小數點、LF 換行、與 locale 無關，方便 golden-file 比對。
浮點數取 6 位有效數字；gap row 的指標欄位留空。
"""

import csv
import io
from pathlib import Path
from typing import Any, Dict, List, Optional, Union
import logging

from kafka_partition_planner.models import SweepResult, SweepRow

logger = logging.getLogger(__name__)

CSV_HEADER = [
    "axis",
    "axis_value",
    "method",
    "feasible",
    "partitions",
    "brokers",
    "latency_ms",
    "unavailability_ms",
    "handles_per_broker",
    "partitions_per_broker",
    "latency_violation_rate",
    "unavail_violation_rate",
    "os_violation_rate",
]

INTEGER_COLUMNS = {"axis_value"}
COUNT_COLUMNS = {"partitions", "brokers"}


def format_value(value: Optional[Union[bool, int, float]]) -> str:
    """單一欄位格式化"""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    return format(value, ".6g")


def _row_cells(axis: str, row: SweepRow) -> List[str]:
    values = [
        row.axis_value,
        row.feasible,
        row.partitions,
        row.brokers,
        row.replication_latency,
        row.unavailability,
        row.handles_per_broker,
        row.partitions_per_broker,
        row.latency_violation_rate,
        row.unavail_violation_rate,
        row.os_violation_rate,
    ]
    cells = [format_value(v) for v in values]
    return [axis, cells[0], row.method.value] + cells[1:]


def write_csv(result: SweepResult) -> str:
    """
    SweepResult 轉為 CSV 文字

    Args:
        result: SweepResult

    Returns:
        CSV 文字 (含 header，LF 換行)
    """
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in result.rows:
        writer.writerow(_row_cells(result.axis.value, row))
    return buffer.getvalue()


def _parse_cell(column: str, cell: str) -> Any:
    if cell == "":
        return None
    if column in INTEGER_COLUMNS:
        return int(cell)
    if column == "feasible":
        return cell == "true"
    if column in COUNT_COLUMNS:
        try:
            return int(cell)
        except ValueError:
            return float(cell)
    if column in ("axis", "method"):
        return cell
    return float(cell)


def read_csv(text: str) -> List[Dict[str, Any]]:
    """
    解析 write_csv 的輸出

    整數欄位 (axis_value 與 heuristic 的 partitions/brokers) 精確還原。

    Raises:
        ValueError: header 不符
    """
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header != CSV_HEADER:
        raise ValueError(f"Unexpected CSV header: {header}")
    return [
        {column: _parse_cell(column, cell) for column, cell in zip(CSV_HEADER, cells)}
        for cells in reader
    ]


def save_csv(result: SweepResult, path: Union[str, Path]) -> Path:
    """寫入 CSV 檔案 (自動建立目錄)"""
    file_path = Path(path)
    file_path.parent.mkdir(parents=True, exist_ok=True)

    with open(file_path, 'w', encoding='utf-8', newline='') as f:
        f.write(write_csv(result))

    logger.info(f"Written {len(result.rows)} rows: {file_path}")
    return file_path
