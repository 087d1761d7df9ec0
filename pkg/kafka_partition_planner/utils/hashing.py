"""Hashing utilities for configuration fingerprints."""

import hashlib
import json
from typing import Any, Dict


def config_hash(config_dict: Dict[str, Any]) -> str:
    """
    產生 config hash

    相同的有效設定 (flags + 檔案 + 預設值合併後) 得到相同 hash，
    可用來比對兩次輸出是否來自同一組輸入。

    Args:
        config_dict: 設定字典 (JSON-serializable)

    Returns:
        SHA256 hash (hex, 前 16 字元)
    """
    json_str = json.dumps(config_dict, sort_keys=True, ensure_ascii=False, default=str)
    return hashlib.sha256(json_str.encode('utf-8')).hexdigest()[:16]
