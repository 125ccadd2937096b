"""Run logger.

The CLI owns one RunLogger per invocation. Library modules log through the
standard ``logging`` module; ``RunLogger.attach`` routes their records into
the same destinations (stderr, optional file, in-memory buffer) so a run
has a single ordered log.
"""

import logging
import sys
import time
from collections import deque
from contextlib import contextmanager
from datetime import datetime
from threading import Lock
from typing import Any, Dict, Iterator, List, Optional, Union

from src.config.config_models import LogLevel, LoggingConfig
from src.core.exceptions import DickeSacsError, error_context
from src.logging.file_handler import FileHandler
from src.logging.log_models import LogEntry

LIBRARY_LOGGER = "src"


class RunLogger:
    """Central coordinator of the run log.

    Attributes:
        log_level: Current log level (DEBUG, INFO, WARNING, ERROR)
        enable_file: Whether file logging is enabled
        enable_console: Whether console logging is enabled
        log_file_path: Path to log file (if file logging enabled)

    Example:
        >>> with RunLogger(log_level=LogLevel.INFO) as run_log:
        ...     with run_log.operation("critical_coupling", source="critical"):
        ...         result = critical_coupling(params)
        ...     run_log.log_result("critical", "gamma_c found", {"gamma_c": result.gamma_c})
    """

    _LEVEL_PRIORITY = {
        "DEBUG": 0,
        "INFO": 1,
        "WARNING": 2,
        "ERROR": 3
    }

    def __init__(
        self,
        log_level: Union[LogLevel, str] = LogLevel.WARNING,
        enable_file: bool = False,
        enable_console: bool = True,
        log_file_path: Optional[str] = None,
        buffer_size: int = 1000
    ):
        """Initialize the destinations.

        Raises:
            ValueError: If enable_file=True but log_file_path is None
        """
        self.log_level = log_level.value if isinstance(log_level, LogLevel) else log_level
        self.enable_file = enable_file
        self.enable_console = enable_console
        self.log_file_path = log_file_path

        self._lock = Lock()
        self._buffer: deque = deque(maxlen=buffer_size)
        self._bridge: Optional['_LibraryBridge'] = None

        self._file_handler: Optional[FileHandler] = None
        if self.enable_file:
            if not log_file_path:
                raise ValueError("log_file_path required when enable_file=True")
            try:
                self._file_handler = FileHandler(log_file_path=log_file_path)
            except OSError as e:
                print(f"WARNING: Failed to initialize file logging: {e}", file=sys.stderr)
                self._file_handler = None

    @classmethod
    def from_config(cls, config: LoggingConfig) -> 'RunLogger':
        """Logger configured by the ``logging`` config section.

        A disabled section yields a logger that only buffers errors.
        """
        if not config.enabled:
            return cls(log_level=LogLevel.ERROR, enable_console=False)
        return cls(
            log_level=config.level,
            enable_file=config.log_to_file and bool(config.log_file_path),
            enable_console=config.log_to_console,
            log_file_path=config.log_file_path,
        )

    def log(self, entry: LogEntry) -> None:
        """Send an entry to every enabled destination if it passes the level filter."""
        if not self._should_log(entry.level):
            return

        with self._lock:
            self._buffer.append(entry)
            if self._file_handler:
                self._file_handler.write(entry)
            if self.enable_console:
                self._write_to_console(entry)

    def _should_log(self, entry_level: str) -> bool:
        entry_priority = self._LEVEL_PRIORITY.get(entry_level, 0)
        current_priority = self._LEVEL_PRIORITY.get(self.log_level, 0)
        return entry_priority >= current_priority

    def _write_to_console(self, entry: LogEntry) -> None:
        try:
            print(entry.to_string(), file=sys.stderr)
        except (OSError, ValueError):
            pass

    def _emit(self, level: str, source: str, message: str,
              details: Optional[Dict[str, Any]] = None,
              operation: Optional[str] = None, elapsed: Optional[float] = None) -> None:
        self.log(LogEntry(
            timestamp=datetime.now(),
            level=level,
            source=source,
            message=message,
            details=details,
            operation=operation,
            elapsed=elapsed
        ))

    def log_operation(self, source: str, operation: str,
                      details: Optional[Dict[str, Any]] = None) -> None:
        """Record the start of an operation (INFO).

        Example:
            >>> run_log.log_operation("sweep", "sweep", {"points": 61, "surface": "sacs_even"})
        """
        self._emit("INFO", source, f"Starting {operation}", details, operation)

    def log_result(self, source: str, message: str,
                   details: Optional[Dict[str, Any]] = None,
                   operation: Optional[str] = None,
                   elapsed: Optional[float] = None) -> None:
        """Record the outcome of an operation (INFO)."""
        self._emit("INFO", source, message, details, operation, elapsed)

    def log_warning(self, source: str, message: str,
                    details: Optional[Dict[str, Any]] = None) -> None:
        self._emit("WARNING", source, message, details)

    def log_error(self, source: str, error: Union[str, BaseException],
                  details: Optional[Dict[str, Any]] = None) -> None:
        """Record a failure (ERROR); exceptions contribute their type and context.

        Example:
            >>> run_log.log_error("critical", exc, {"n_atoms": 20})
        """
        merged: Dict[str, Any] = dict(details or {})
        if isinstance(error, DickeSacsError):
            merged.update(error_context(error))
        elif isinstance(error, BaseException):
            merged["type"] = type(error).__name__
        self._emit("ERROR", source, str(error), merged or None)

    @contextmanager
    def operation(self, operation: str, source: str = "cli",
                  details: Optional[Dict[str, Any]] = None) -> Iterator[None]:
        """Bracket an operation with start and finish entries and its wall time.

        The finish entry counts the warnings logged while the operation ran.
        Exceptions are logged and re-raised.
        """
        self.log_operation(source, operation, details)
        started_at = datetime.now()
        start = time.perf_counter()
        try:
            yield
        except Exception as e:
            self.log_error(source, e, {'operation': operation})
            raise
        warnings = sum(1 for entry in self.get_entries()
                       if entry.level == "WARNING" and entry.timestamp >= started_at)
        message = f"Finished {operation}"
        if warnings:
            message += f" ({warnings} warnings)"
        self._emit("INFO", source, message, None, operation, time.perf_counter() - start)

    def attach(self, logger_name: str = LIBRARY_LOGGER) -> None:
        """Route records of the named stdlib logger (and children) into this run log."""
        if self._bridge is not None:
            return
        bridge = _LibraryBridge(self, logger_name)
        target = logging.getLogger(logger_name)
        target.addHandler(bridge)
        target.setLevel(getattr(logging, self.log_level, logging.WARNING))
        self._bridge = bridge

    def detach(self) -> None:
        if self._bridge is None:
            return
        logging.getLogger(self._bridge.logger_name).removeHandler(self._bridge)
        self._bridge = None

    def get_entries(self, limit: Optional[int] = None) -> List[LogEntry]:
        """Buffered entries, oldest first (the last ``limit`` when given)."""
        with self._lock:
            entries = list(self._buffer)
            if limit:
                entries = entries[-limit:]
            return entries

    def flush(self) -> None:
        if self._file_handler:
            self._file_handler.flush()

    def close(self) -> None:
        """Detach from the library logger and close the file. Idempotent."""
        self.detach()
        if self._file_handler:
            self._file_handler.close()
            self._file_handler = None

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        self.close()
        return False


class _LibraryBridge(logging.Handler):
    """stdlib handler that forwards records to a RunLogger."""

    def __init__(self, run_logger: RunLogger, logger_name: str = LIBRARY_LOGGER):
        super().__init__()
        self.run_logger = run_logger
        self.logger_name = logger_name

    def emit(self, record: logging.LogRecord) -> None:
        level = record.levelname if record.levelname in RunLogger._LEVEL_PRIORITY else (
            "ERROR" if record.levelno >= logging.ERROR else "DEBUG")
        try:
            message = record.getMessage()
        except (TypeError, ValueError):
            message = str(record.msg)
        self.run_logger.log(LogEntry(
            timestamp=datetime.fromtimestamp(record.created),
            level=level,
            source=record.name.rsplit('.', 1)[-1],
            message=message,
        ))
