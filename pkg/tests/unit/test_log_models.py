"""Unit tests for LogEntry dataclass."""

from datetime import datetime

import pytest

from src.logging.log_models import LogEntry

TIMESTAMP = datetime(2026, 1, 12, 10, 30, 15, 234000)


class TestLogEntry:
    """Test suite for LogEntry dataclass."""

    def test_creation(self):
        """Test required fields and empty optionals."""
        entry = LogEntry(timestamp=TIMESTAMP, level="INFO", source="critical",
                         message="gamma_c = 0.552")

        assert entry.level == "INFO"
        assert entry.details is None
        assert entry.operation is None
        assert entry.elapsed is None

    def test_immutable(self):
        """Test that LogEntry is frozen."""
        entry = LogEntry(timestamp=TIMESTAMP, level="INFO", source="sweep", message="row")
        with pytest.raises(AttributeError):
            entry.level = "ERROR"

    def test_to_string(self):
        """Test the pipe-separated line format."""
        entry = LogEntry(timestamp=TIMESTAMP, level="INFO", source="critical",
                         message="gamma_c = 0.552", operation="critical_coupling",
                         elapsed=1.25)

        assert entry.to_string() == (
            "2026-01-12 10:30:15.234 | INFO    | critical        | gamma_c = 0.552"
            " | OP: critical_coupling | TIME: 1.250s")

    def test_to_string_minimal(self):
        """Test optional parts are omitted."""
        entry = LogEntry(timestamp=TIMESTAMP, level="WARNING", source="ground_state",
                         message="residual above tolerance")

        assert entry.to_string() == (
            "2026-01-12 10:30:15.234 | WARNING | ground_state    | residual above tolerance")
