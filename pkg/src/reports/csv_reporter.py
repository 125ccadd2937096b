"""CSV report writer.

Layout, readable by spreadsheet tools and by gnuplot (``index`` selects a
table):

    # command: sweep
    # omega_a: 1
    # ...
    # table: sweep
    gamma,per_atom_energy,...
    0.40000000000000002,-0.5,...


    # table: minima
    ...
"""

import csv
import io
from pathlib import Path
from typing import Any, List, Tuple

from src.reports.base_reporter import BaseReporter, format_float, plain_value
from src.reports.report_models import ResultReport


class CSVReporter(BaseReporter):
    """Comma-separated tables behind a ``# key: value`` preamble.

    Example:
        >>> reporter = CSVReporter()
        >>> result = reporter.generate(report, Path("./critical.csv"))
        >>> if result.success:
        ...     print(f"CSV report saved to {result.output_path}")
    """

    format_name = "csv"

    # Blank lines between tables; two separate gnuplot data blocks.
    TABLE_SEPARATOR = "\n\n"

    def render(self, report: ResultReport) -> str:
        buffer = io.StringIO()
        buffer.write(f"# command: {report.command}\n")
        for key, value in report.metadata:
            buffer.write(f"# {key}: {self._format_value(value)}\n")

        for i, table in enumerate(report.tables):
            if i:
                buffer.write(self.TABLE_SEPARATOR)
            buffer.write(f"# table: {table.name}\n")
            writer = csv.writer(buffer, lineterminator='\n')
            writer.writerow(table.columns)
            writer.writerows([self._format_value(v) for v in row] for row in table.rows)
        return buffer.getvalue()

    def validate_output(self, output_path: Path) -> Tuple[bool, List[str]]:
        """Check that every table has a header and rectangular rows."""
        if not output_path.exists():
            return False, ["Output file does not exist"]
        if output_path.stat().st_size == 0:
            return False, ["Output file is empty"]

        warnings: List[str] = []
        try:
            with open(output_path, 'r', encoding='utf-8', newline='') as f:
                lines = f.read().split('\n')
        except OSError as e:
            return False, [f"Error reading CSV file: {e}"]

        header = None
        tables = 0
        for number, line in enumerate(lines, start=1):
            if line.startswith('#'):
                if line.startswith('# table:'):
                    header = None
                continue
            if not line:
                continue
            row = next(csv.reader([line]))
            if header is None:
                header = row
                tables += 1
                continue
            if len(row) != len(header):
                return False, [f"Line {number}: {len(row)} values for {len(header)} columns"]

        if tables == 0:
            return False, ["CSV file has no header"]
        return True, warnings

    @staticmethod
    def _format_value(value: Any) -> str:
        """Floats with 17 significant digits, booleans as true/false, None as empty."""
        value = plain_value(value)
        if value is None:
            return ""
        if isinstance(value, bool):
            return "true" if value else "false"
        if isinstance(value, float):
            return format_float(value)
        return str(value)

    def __repr__(self) -> str:
        return "CSVReporter(format=csv)"
