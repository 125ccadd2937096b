"""Command functions of the dicke-sacs CLI; each returns an exit code."""

from src.cli.commands import (
    EXIT_CONFIG,
    EXIT_NUMERICAL,
    EXIT_OK,
    EXIT_VALIDATION,
    cmd_critical,
    cmd_surface,
    cmd_sweep,
    cmd_validate,
)

__all__ = [
    'EXIT_CONFIG',
    'EXIT_NUMERICAL',
    'EXIT_OK',
    'EXIT_VALIDATION',
    'cmd_critical',
    'cmd_surface',
    'cmd_sweep',
    'cmd_validate',
]
