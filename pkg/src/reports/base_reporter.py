"""Abstract base reporter interface.

Defines the common interface of the format-specific writers and the value
formatting they share. Output is deterministic: no timestamps, and every
float goes through ``format_float``.
"""

import math
import sys
from abc import ABC, abstractmethod
from enum import Enum
from pathlib import Path
from typing import Any, List, Optional, TextIO, Tuple

import numpy as np

from src.reports.report_models import ReportResult, ResultReport

# Significant digits of every serialised float (round-trip exact for doubles).
FLOAT_DIGITS = 17


def format_float(value: float) -> str:
    """17-significant-digit text of a float; non-finite values as nan/inf/-inf."""
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return format(value, f".{FLOAT_DIGITS}g")


def plain_value(value: Any) -> Any:
    """Reduce numpy scalars, enums and paths to plain Python values."""
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, Path):
        return str(value)
    return value


class BaseReporter(ABC):
    """Abstract base class for report writers.

    Subclasses implement ``render`` (report to text) and ``validate_output``
    (re-read and check a written file); ``generate`` handles the output
    destination and wraps the outcome in a ReportResult.
    """

    format_name = ""

    @abstractmethod
    def render(self, report: ResultReport) -> str:
        """Serialise a report to text."""

    @abstractmethod
    def validate_output(self, output_path: Path) -> Tuple[bool, List[str]]:
        """Validate a written report.

        Returns:
            Tuple of (is_valid, error_messages)
        """

    def generate(self, report: ResultReport, output_path: Optional[Path] = None,
                 stream: Optional[TextIO] = None) -> ReportResult:
        """Write a report to a file, or to ``stream`` (default stdout) without a path.

        Example:
            >>> result = CSVReporter().generate(report, Path("sweep.csv"))
            >>> result.success
            True
        """
        try:
            text = self.render(report)
        except (TypeError, ValueError) as e:
            return ReportResult(output_path, self.format_name, success=False,
                                validation_passed=False, error_message=str(e))

        if output_path is None:
            target = stream if stream is not None else sys.stdout
            target.write(text)
            target.flush()
            return ReportResult(None, self.format_name, success=True,
                                file_size_bytes=len(text.encode('utf-8')))

        try:
            self._ensure_directory(output_path)
            with open(output_path, 'w', newline='', encoding='utf-8') as f:
                f.write(text)
        except OSError as e:
            return ReportResult(output_path, self.format_name, success=False,
                                validation_passed=False, error_message=str(e))

        validation_passed, warnings = self.validate_output(output_path)
        return ReportResult(
            output_path=output_path,
            format=self.format_name,
            success=True,
            validation_passed=validation_passed,
            warnings=warnings,
            file_size_bytes=self._get_file_size(output_path)
        )

    def _get_file_size(self, path: Path) -> int:
        try:
            return path.stat().st_size
        except OSError:
            return 0

    def _ensure_directory(self, path: Path) -> None:
        """Create the parent directories of the output path."""
        path.parent.mkdir(parents=True, exist_ok=True)
