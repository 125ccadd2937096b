"""File destination of the run log with size-based rotation."""

import os
import sys
from pathlib import Path
from threading import Lock
from typing import Optional, TextIO

from src.logging.log_models import LogEntry


class FileHandler:
    """Thread-safe append-only log file.

    Rotates to <name>.1, <name>.2, ... once the file exceeds the size limit,
    keeping at most ``backup_count`` old files.

    Example:
        >>> handler = FileHandler("runs/critical.log", max_size_mb=5)
        >>> handler.write(entry)
        >>> handler.close()
    """

    def __init__(self, log_file_path: str, max_size_mb: int = 10, backup_count: int = 3):
        """Open (and create the directory of) the log file.

        Raises:
            OSError: If the log directory cannot be created
        """
        self.log_file_path = Path(log_file_path).expanduser().resolve()
        self.max_size_bytes = max_size_mb * 1024 * 1024
        self.backup_count = backup_count
        self._lock = Lock()
        self._file_handle: Optional[TextIO] = None
        self._is_closed = False

        self.log_file_path.parent.mkdir(parents=True, exist_ok=True)
        self._open_file()

    def _open_file(self) -> None:
        try:
            self._file_handle = open(self.log_file_path, mode='a', encoding='utf-8')
        except OSError as e:
            print(f"ERROR: Failed to open log file {self.log_file_path}: {e}", file=sys.stderr)
            self._file_handle = None

    def write(self, entry: LogEntry) -> bool:
        """Append one entry; returns False when the file is unusable."""
        if self._is_closed or self._file_handle is None:
            return False

        with self._lock:
            try:
                self._rotate_if_needed()
                if self._file_handle is None:
                    return False
                self._file_handle.write(entry.to_string() + '\n')
                self._file_handle.flush()
                return True
            except OSError as e:
                print(f"ERROR: Failed to write log entry: {e}", file=sys.stderr)
                return False

    def _rotate_if_needed(self) -> None:
        """Shift backups up by one and start a fresh file. Caller holds the lock."""
        if self._file_handle is None or self.backup_count < 1:
            return
        try:
            if os.path.getsize(self.log_file_path) < self.max_size_bytes:
                return
            self._file_handle.close()
            for i in range(self.backup_count - 1, 0, -1):
                src = Path(f"{self.log_file_path}.{i}")
                if src.exists():
                    src.replace(Path(f"{self.log_file_path}.{i + 1}"))
            self.log_file_path.replace(Path(f"{self.log_file_path}.1"))
        except OSError as e:
            print(f"WARNING: Log rotation failed: {e}", file=sys.stderr)
        finally:
            if self._file_handle is None or self._file_handle.closed:
                self._open_file()

    def flush(self) -> None:
        if self._file_handle is None or self._is_closed:
            return
        with self._lock:
            try:
                self._file_handle.flush()
                os.fsync(self._file_handle.fileno())
            except OSError as e:
                print(f"ERROR: Failed to flush log file: {e}", file=sys.stderr)

    def close(self) -> None:
        """Flush and close. Idempotent."""
        if self._is_closed:
            return
        with self._lock:
            try:
                if self._file_handle and not self._file_handle.closed:
                    self._file_handle.flush()
                    self._file_handle.close()
            except OSError as e:
                print(f"ERROR: Failed to close log file: {e}", file=sys.stderr)
            finally:
                self._file_handle = None
                self._is_closed = True

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        self.close()
        return False
