"""JSON report writer.

One top-level object: ``command``, ``metadata`` (the preamble pairs as a
mapping), one array of row objects per table and any nested payload.
Keys are sorted and floats pass through the 17-digit rule, so identical
runs give identical bytes.
"""

import json
import math
from pathlib import Path
from typing import Any, Dict, List, Tuple

from src.reports.base_reporter import BaseReporter, format_float, plain_value
from src.reports.report_models import ResultReport

INDENT = "  "


def _float_literal(value: float) -> str:
    """17-digit JSON number; non-finite values as the strings "nan", "inf", "-inf"."""
    if not math.isfinite(value):
        return json.dumps(format_float(value))
    text = format_float(value)
    if not any(c in text for c in '.e'):
        text += ".0"
    return text


class JSONReporter(BaseReporter):
    """Generate JSON reports.

    Non-finite floats are written as the strings "nan", "inf" and "-inf"
    so the output stays strict JSON.

    Example:
        >>> result = JSONReporter().generate(report, Path("surface.json"))
        >>> print(result.success)
        True
    """

    format_name = "json"

    def render(self, report: ResultReport) -> str:
        data: Dict[str, Any] = {
            'command': report.command,
            'metadata': {key: value for key, value in report.metadata},
        }
        for table in report.tables:
            data[table.name] = table.records()
        for key, value in report.payload.items():
            if key in data:
                raise ValueError(f"Payload key '{key}' collides with a report section")
            data[key] = value
        return self._encode(data, 0) + "\n"

    def validate_output(self, output_path: Path) -> Tuple[bool, List[str]]:
        if not output_path.exists():
            return False, ["Output file does not exist"]
        try:
            with open(output_path, 'r', encoding='utf-8') as f:
                data = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            return False, [f"Invalid JSON: {e}"]

        if not isinstance(data, dict):
            return False, ["Top-level value is not an object"]
        missing = [key for key in ('command', 'metadata') if key not in data]
        if missing:
            return False, [f"Missing required field(s): {missing}"]
        return True, []

    def _encode(self, value: Any, depth: int) -> str:
        """JSON text in the json.dumps(indent=2, sort_keys=True) layout with 17-digit floats."""
        value = plain_value(value)
        if hasattr(value, 'tolist'):
            value = value.tolist()
        inner = "\n" + INDENT * (depth + 1)
        if isinstance(value, dict):
            if not value:
                return "{}"
            items = sorted(((str(k), v) for k, v in value.items()), key=lambda kv: kv[0])
            body = ("," + inner).join(f"{json.dumps(k)}: {self._encode(v, depth + 1)}"
                                      for k, v in items)
            return "{" + inner + body + "\n" + INDENT * depth + "}"
        if isinstance(value, (list, tuple)):
            if not value:
                return "[]"
            body = ("," + inner).join(self._encode(v, depth + 1) for v in value)
            return "[" + inner + body + "\n" + INDENT * depth + "]"
        if isinstance(value, float):
            return _float_literal(value)
        return json.dumps(value)

    def __repr__(self) -> str:
        return "JSONReporter(format=json)"
