"""Log data models for run logging.

Immutable records of what a run did: which operation started, what it
returned, how long it took and what went wrong.
"""

from dataclasses import dataclass
from datetime import datetime
from typing import Any, Dict, Optional


@dataclass(frozen=True)
class LogEntry:
    """Immutable log entry of one run event.

    Attributes:
        timestamp: When the event occurred
        level: Log level (DEBUG, INFO, WARNING, ERROR)
        source: Component name (sweep, critical, ground_state, cli, ...)
        message: Human-readable message describing the event
        details: Additional structured data (arbitrary dict)
        operation: Operation the event belongs to (optional)
        elapsed: Wall time of the operation in seconds (optional)

    Example:
        >>> entry = LogEntry(
        ...     timestamp=datetime.now(),
        ...     level="INFO",
        ...     source="critical",
        ...     message="gamma_c = 0.552"
        ... )
        >>> entry.to_string()
        '2026-01-12 10:30:15.234 | INFO    | critical        | gamma_c = 0.552'
    """

    timestamp: datetime
    level: str
    source: str
    message: str
    details: Optional[Dict[str, Any]] = None
    operation: Optional[str] = None
    elapsed: Optional[float] = None

    def to_string(self) -> str:
        """Format as "YYYY-MM-DD HH:MM:SS.mmm | LEVEL | SOURCE | MESSAGE"."""
        timestamp_str = self.timestamp.strftime("%Y-%m-%d %H:%M:%S.%f")[:-3]
        base = f"{timestamp_str} | {self.level:7} | {self.source:15} | {self.message}"
        if self.operation:
            base += f" | OP: {self.operation}"
        if self.elapsed is not None:
            base += f" | TIME: {self.elapsed:.3f}s"
        return base
