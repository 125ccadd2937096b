"""Report generator with a format -> writer factory."""

import logging
from pathlib import Path
from typing import List, Optional, TextIO, Union

from src.config.config_models import ReportFormat
from src.reports.base_reporter import BaseReporter
from src.reports.csv_reporter import CSVReporter
from src.reports.json_reporter import JSONReporter
from src.reports.report_models import ReportResult, ResultReport

logger = logging.getLogger(__name__)


# Factory pattern mapping: format -> reporter class
REPORTER_CLASSES = {
    'csv': CSVReporter,
    'json': JSONReporter,
}


class ReportGenerator:
    """Writes a ResultReport in the configured format.

    Example:
        >>> generator = ReportGenerator(ReportFormat.JSON)
        >>> result = generator.generate_report(report, Path("critical.json"))
    """

    def __init__(self, default_format: Union[ReportFormat, str] = ReportFormat.CSV):
        self._default_format = self._format_name(default_format)

    @property
    def supported_formats(self) -> List[str]:
        return sorted(REPORTER_CLASSES)

    @staticmethod
    def _format_name(value: Union[ReportFormat, str]) -> str:
        name = value.value if isinstance(value, ReportFormat) else str(value).lower()
        if name not in REPORTER_CLASSES:
            raise ValueError(f"Unsupported format '{name}'. "
                             f"Supported formats: {sorted(REPORTER_CLASSES)}")
        return name

    def get_reporter(self, format: Optional[Union[ReportFormat, str]] = None) -> BaseReporter:
        name = self._default_format if format is None else self._format_name(format)
        return REPORTER_CLASSES[name]()

    def generate_report(self, report: ResultReport, output_path: Optional[Path] = None,
                        format: Optional[Union[ReportFormat, str]] = None,
                        stream: Optional[TextIO] = None) -> ReportResult:
        """Write ``report`` to ``output_path`` (or ``stream``/stdout without one).

        Raises:
            ValueError: If format is unsupported
        """
        reporter = self.get_reporter(format)
        result = reporter.generate(report, output_path, stream)
        if not result.success:
            logger.error("report %s failed: %s", report.command, result.error_message)
        elif not result.validation_passed:
            logger.warning("report %s failed validation: %s", report.command, result.warnings)
        else:
            logger.info("%s", result)
        return result
