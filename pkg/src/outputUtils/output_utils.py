#!/usr/bin/env python3
"""
Output utilities for writing result tables as CSV or JSON with fixed float formatting.
"""

import json
import logging
import sys
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Optional, TextIO

import numpy as np
import pandas as pd

logger = logging.getLogger(__name__)

# 17 significant digits reproduce every double exactly
FLOAT_FORMAT = "%.17g"


class OutputFormat(str, Enum):
    CSV = "csv"
    JSON = "json"


@dataclass
class OutputConfig:
    """Where and how a command writes its result."""
    output_format: OutputFormat = OutputFormat.CSV
    output_path: Optional[Path] = None
    float_format: str = FLOAT_FORMAT

    def __post_init__(self):
        self.output_format = OutputFormat(self.output_format)
        if self.output_path is not None:
            self.output_path = Path(self.output_path)


def _plain(value: Any) -> Any:
    """Convert numpy scalars and arrays to JSON-native values."""
    if isinstance(value, dict):
        return {k: _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, Enum):
        return value.value
    return value


def frame_to_records(frame: pd.DataFrame) -> list:
    return [_plain(row) for row in frame.to_dict(orient='records')]


def table_to_csv(frame: pd.DataFrame, float_format: str = FLOAT_FORMAT) -> str:
    """CSV text with '.' decimals, no index and '\\n' line endings."""
    return frame.to_csv(float_format=float_format, index=False, lineterminator="\n")


def to_json(payload: Dict[str, Any]) -> str:
    return json.dumps(_plain(payload), indent=2) + "\n"


def _emit(text: str, config: OutputConfig, stream: Optional[TextIO] = None) -> None:
    if config.output_path is None:
        (stream or sys.stdout).write(text)
        return
    config.output_path.parent.mkdir(parents=True, exist_ok=True)
    config.output_path.write_text(text, encoding='utf-8')
    logger.info(f"Wrote {len(text)} characters to {config.output_path}")


def write_table(frame: pd.DataFrame, config: OutputConfig, extra: Optional[Dict[str, Any]] = None,
                stream: Optional[TextIO] = None) -> None:
    """
    Write a result table.

    Args:
        frame: Table to write.
        config: Format and destination (stdout when output_path is None).
        extra: Additional top-level JSON fields (e.g. a verdict); ignored for CSV.
        stream: Override for stdout.

    Raises:
        OSError: if the destination cannot be written.
    """
    if config.output_format is OutputFormat.CSV:
        _emit(table_to_csv(frame, config.float_format), config, stream)
        return

    # JSON: extra fields first, then the rows
    payload = dict(extra or {})
    payload['rows'] = frame_to_records(frame)
    _emit(to_json(payload), config, stream)


def write_json(payload: Dict[str, Any], config: OutputConfig, stream: Optional[TextIO] = None) -> None:
    """Write a JSON document regardless of config.output_format."""
    _emit(to_json(payload), config, stream)
