"""Run logging.

Structured, level-filtered logging of CLI runs to stderr, an optional file
and an in-memory buffer.
"""

from src.logging.file_handler import FileHandler
from src.logging.log_models import LogEntry
from src.logging.run_logger import RunLogger

__all__ = ['LogEntry', 'FileHandler', 'RunLogger']
