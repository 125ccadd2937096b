"""Configuration subcommands: show, validate, generate and schema."""

import json
import sys
from pathlib import Path
from typing import Any, Dict, Optional, TextIO

import yaml

from src.config.config_manager import ConfigManager
from src.config.config_schema import ConfigSchema
from src.config.defaults import DEFAULT_CONFIG_FILE, get_default_config
from src.core.exceptions import ConfigError


def show_config_command(stream: Optional[TextIO] = None) -> int:
    """Print every configuration value with its source (default, file, env, cli).

    Returns:
        Exit code (0 for success, 1 when the manager is not initialized)
    """
    out = stream or sys.stdout
    try:
        shown = ConfigManager.instance().show_config()
    except RuntimeError as e:
        print(f"Error showing configuration: {e}", file=sys.stderr)
        return 1

    for section, values in shown.items():
        out.write(f"{section}:\n")
        for key, entry in values.items():
            out.write(f"  {key}: {entry['value']!r} (source: {entry['source']})\n")
    return 0


def validate_config_command(config_path: str, stream: Optional[TextIO] = None) -> int:
    """Validate a YAML file against the schema and the semantic checks.

    Returns:
        Exit code (0 if valid, 1 if invalid or unreadable)
    """
    out = stream or sys.stdout
    try:
        config_dict = ConfigManager._load_from_file(Path(config_path))
    except ConfigError as e:
        print(f"Error: {e}", file=sys.stderr)
        return 1

    is_valid, errors = ConfigSchema.validate_config(config_dict, strict=True)
    if is_valid:
        out.write(f"[OK] {config_path} is valid\n")
        return 0
    out.write(f"[ERROR] {config_path} has {len(errors)} error(s):\n")
    for i, error in enumerate(errors, 1):
        out.write(f"{i}. {error}\n")
    return 1


def default_config_dict() -> Dict[str, Any]:
    """Defaults in file layout (None values dropped; YAML has no use for them)."""
    return {section: {k: v for k, v in values.items() if v is not None and v != []}
            for section, values in get_default_config().to_dict().items()}


def generate_config_command(output_path: str = DEFAULT_CONFIG_FILE, force: bool = False) -> int:
    """Write the default configuration as YAML.

    Returns:
        Exit code (0 for success, 1 if the file exists and force is False)
    """
    output_file = Path(output_path)
    if output_file.exists() and not force:
        print(f"Error: File already exists: {output_path}", file=sys.stderr)
        print("Use --force to overwrite", file=sys.stderr)
        return 1

    try:
        output_file.parent.mkdir(parents=True, exist_ok=True)
        with open(output_file, 'w', encoding='utf-8') as f:
            f.write("# dicke-sacs configuration\n")
            f.write("# Generated with default values\n\n")
            yaml.safe_dump(default_config_dict(), f, default_flow_style=False, sort_keys=False)
    except OSError as e:
        print(f"Error generating configuration: {e}", file=sys.stderr)
        return 1

    print(f"[OK] Default configuration generated: {output_file}", file=sys.stderr)
    return 0


def config_schema_command(stream: Optional[TextIO] = None) -> int:
    """Print the JSON schema of the configuration file."""
    out = stream or sys.stdout
    out.write(json.dumps(ConfigSchema.get_schema(), indent=2) + "\n")
    return 0
