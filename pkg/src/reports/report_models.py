"""Report data models.

A command assembles a ResultReport (metadata plus named tables plus an
optional nested payload); a reporter serialises it and returns a
ReportResult describing what was written.
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple


@dataclass(frozen=True)
class ResultTable:
    """One rectangular table of a report.

    Attributes:
        name: Table name (grid, minima, section, sweep, critical, checks, ...)
        columns: Column names, in output order
        rows: Row values, one entry per column
    """
    name: str
    columns: Tuple[str, ...]
    rows: Tuple[Tuple[Any, ...], ...] = ()

    def __post_init__(self):
        for i, row in enumerate(self.rows):
            if len(row) != len(self.columns):
                raise ValueError(
                    f"Table '{self.name}' row {i} has {len(row)} values for "
                    f"{len(self.columns)} columns")

    @classmethod
    def build(cls, name: str, columns: Sequence[str],
              rows: Sequence[Sequence[Any]]) -> 'ResultTable':
        return cls(name, tuple(columns), tuple(tuple(r) for r in rows))

    def records(self) -> List[Dict[str, Any]]:
        """Rows as column -> value mappings."""
        return [dict(zip(self.columns, row)) for row in self.rows]

    def column(self, name: str) -> List[Any]:
        index = self.columns.index(name)
        return [row[index] for row in self.rows]


@dataclass(frozen=True)
class ResultReport:
    """Everything one command run emits.

    Attributes:
        command: Command name (surface, critical, sweep, validate)
        metadata: Ordered (key, value) pairs: model, tolerances, version
        tables: Tables in output order
        payload: Extra nested values (JSON only)
    """
    command: str
    metadata: Tuple[Tuple[str, Any], ...]
    tables: Tuple[ResultTable, ...]
    payload: Dict[str, Any] = field(default_factory=dict)

    def table(self, name: str) -> ResultTable:
        for table in self.tables:
            if table.name == name:
                return table
        raise KeyError(name)


@dataclass(frozen=True)
class ReportResult:
    """Report generation result.

    Attributes:
        output_path: Path of the written report (None for standard output)
        format: Report format ('csv' or 'json')
        success: Whether report generation succeeded
        validation_passed: Whether output validation passed
        warnings: List of warning messages
        file_size_bytes: Size of the written report in bytes
        error_message: Failure description
    """
    output_path: Optional[Path]
    format: str
    success: bool
    validation_passed: bool = True
    warnings: List[str] = field(default_factory=list)
    file_size_bytes: int = 0
    error_message: Optional[str] = None

    def __str__(self) -> str:
        status = "SUCCESS" if self.success else "FAILED"
        validation = "PASS" if self.validation_passed else "FAIL"
        target = self.output_path if self.output_path is not None else "<stdout>"
        result = (f"ReportResult[{status}]: {self.format.upper()} report "
                  f"at {target} ({self.file_size_bytes} bytes) validation={validation}")
        if self.error_message:
            result += f" error='{self.error_message}'"
        return result
