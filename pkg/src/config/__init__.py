"""Configuration management package.

Provides centralized configuration access with defaults, YAML file loading,
environment variable and command-line overrides.
"""

from src.config.config_manager import ConfigManager
from src.config.config_models import (
    RunConfig,
    ModelConfig,
    VariationalConfig,
    SearchSection,
    TolerancesConfig,
    OracleConfig,
    GridConfig,
    ValidationConfig,
    ReportingConfig,
    LoggingConfig,
    ParallelConfig,
    ReportFormat,
    LogLevel
)

__all__ = [
    'ConfigManager',
    'RunConfig',
    'ModelConfig',
    'VariationalConfig',
    'SearchSection',
    'TolerancesConfig',
    'OracleConfig',
    'GridConfig',
    'ValidationConfig',
    'ReportingConfig',
    'LoggingConfig',
    'ParallelConfig',
    'ReportFormat',
    'LogLevel',
]
