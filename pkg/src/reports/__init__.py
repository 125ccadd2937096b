"""Report generation: deterministic CSV and JSON writers."""

from src.reports.base_reporter import BaseReporter, format_float
from src.reports.csv_reporter import CSVReporter
from src.reports.json_reporter import JSONReporter
from src.reports.report_generator import REPORTER_CLASSES, ReportGenerator
from src.reports.report_models import ReportResult, ResultReport, ResultTable

__all__ = [
    'BaseReporter',
    'CSVReporter',
    'JSONReporter',
    'REPORTER_CLASSES',
    'ReportGenerator',
    'ReportResult',
    'ResultReport',
    'ResultTable',
    'format_float',
]
