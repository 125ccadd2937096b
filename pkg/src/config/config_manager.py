"""Configuration manager for dicke-sacs.

Provides singleton access to the run configuration with layered loading:
defaults, then a YAML file, then DICKE_SACS_<SECTION>_<KEY> environment
variables, then command-line overrides. The source of every value is
tracked.
"""

import os
from copy import deepcopy
from pathlib import Path
from typing import Any, Dict, Mapping, Optional

import yaml

from src.config.config_models import (
    GridConfig,
    LoggingConfig,
    LogLevel,
    ModelConfig,
    OracleConfig,
    ParallelConfig,
    ReportFormat,
    ReportingConfig,
    RunConfig,
    SearchSection,
    TolerancesConfig,
    ValidationConfig,
    VariationalConfig,
)
from src.config.config_schema import ConfigSchema
from src.config.defaults import DEFAULT_CONFIG_FILE, get_default_config
from src.core.exceptions import ConfigError
from src.core.optimizer import Surface
from src.core.sacs_surface import ParitySector

ENV_PREFIX = "DICKE_SACS_"

_SECTIONS = {
    'model': ModelConfig,
    'search': SearchSection,
    'tolerances': TolerancesConfig,
    'oracle': OracleConfig,
    'grid': GridConfig,
    'validation': ValidationConfig,
    'parallel': ParallelConfig,
}


class ConfigManager:
    """Singleton configuration manager.

    Layered loading:
    1. Load defaults
    2. Load from file (explicit path, else ./dicke-sacs.yaml if present)
    3. Apply environment variable overrides
    4. Apply command-line overrides
    5. Validate against the JSON schema and semantic checks
    6. Return validated RunConfig object
    """

    _instance: Optional['ConfigManager'] = None

    def __init__(self):
        """Private constructor. Use instance() or initialize() class methods."""
        if ConfigManager._instance is not None:
            raise RuntimeError("Use ConfigManager.instance() instead of constructor")
        self._config: Optional[RunConfig] = None
        self._config_source: Dict[str, str] = {}
        self._config_path: Optional[Path] = None

    @classmethod
    def instance(cls) -> 'ConfigManager':
        """Get singleton instance of ConfigManager.

        Raises:
            RuntimeError: If not yet initialized.
        """
        if cls._instance is None:
            raise RuntimeError("ConfigManager not initialized. Call initialize() first.")
        return cls._instance

    @classmethod
    def initialize(cls,
                   config_path: Optional[Path] = None,
                   cli_overrides: Optional[Dict[str, Dict[str, Any]]] = None,
                   environ: Optional[Mapping[str, str]] = None) -> 'ConfigManager':
        """Initialize ConfigManager with configuration.

        Args:
            config_path: Path to a YAML config file. If None, ./dicke-sacs.yaml
                is used when it exists.
            cli_overrides: {section: {key: value}} from command-line flags
            environ: Environment to read overrides from (default os.environ)

        Returns:
            ConfigManager: Initialized singleton instance.

        Raises:
            ConfigError: If the file cannot be read or the result is invalid
        """
        cls._instance = None
        manager = cls()
        cls._instance = manager

        config_dict = get_default_config().to_dict()
        manager._mark_source(config_dict, "default")

        if config_path is None:
            default_path = Path(DEFAULT_CONFIG_FILE)
            config_path = default_path if default_path.is_file() else None
        elif not Path(config_path).is_file():
            raise ConfigError("Config file not found", source=str(config_path))

        if config_path is not None:
            file_config = cls._load_from_file(Path(config_path))
            config_dict = cls._merge_configs(config_dict, file_config)
            manager._mark_source(file_config, "file")
            manager._config_path = Path(config_path)

        env_overrides = cls._apply_env_overrides(os.environ if environ is None else environ)
        if env_overrides:
            config_dict = cls._merge_configs(config_dict, env_overrides)
            manager._mark_source(env_overrides, "env")

        if cli_overrides:
            cli_overrides = {s: {k: v for k, v in values.items() if v is not None}
                             for s, values in cli_overrides.items()}
            config_dict = cls._merge_configs(config_dict, cli_overrides)
            manager._mark_source(cli_overrides, "cli")

        manager._align_surface_with_sector(config_dict)

        is_valid, validation_errors = ConfigSchema.validate_config(config_dict, strict=True)
        if not is_valid:
            source = str(manager._config_path) if manager._config_path else None
            raise ConfigError("Configuration validation failed", validation_errors, source)

        manager._config = cls._dict_to_config(config_dict)
        return manager

    @staticmethod
    def _load_from_file(path: Path) -> Dict[str, Any]:
        """Load configuration from YAML file.

        Raises:
            ConfigError: If the file is unreadable or not a YAML mapping.
        """
        try:
            with open(path, 'r', encoding='utf-8') as f:
                config_dict = yaml.safe_load(f)
        except (OSError, yaml.YAMLError) as e:
            raise ConfigError(f"Cannot load config file: {e}", source=str(path)) from e

        if config_dict is None:
            return {}
        if not isinstance(config_dict, dict):
            raise ConfigError("Config file must contain a mapping of sections", source=str(path))
        return config_dict

    @staticmethod
    def _apply_env_overrides(environ: Mapping[str, str]) -> Dict[str, Any]:
        """Collect environment variable overrides.

        Environment variables use format: DICKE_SACS_SECTION_KEY
        Examples:
            DICKE_SACS_MODEL_N_ATOMS=40
            DICKE_SACS_TOLERANCES_GRAD=1e-9
            DICKE_SACS_MODEL_N_ATOMS_LIST=10,20,40,80

        Returns:
            Dictionary with environment overrides.
        """
        overrides: Dict[str, Dict[str, Any]] = {}
        for env_name in sorted(environ):
            if not env_name.startswith(ENV_PREFIX):
                continue
            parts = env_name[len(ENV_PREFIX):].lower().split('_', 1)
            if len(parts) != 2:
                continue
            section, key = parts
            overrides.setdefault(section, {})[key] = ConfigManager._parse_env_value(
                environ[env_name])
        return overrides

    @staticmethod
    def _parse_env_value(value: str) -> Any:
        """Parse environment variable value to bool, None, int, float, list or str."""
        lowered = value.strip().lower()
        if lowered in ('true', 'yes', 'on'):
            return True
        if lowered in ('false', 'no', 'off'):
            return False
        if lowered in ('none', 'null', ''):
            return None
        if ',' in value:
            return [ConfigManager._parse_env_value(v) for v in value.split(',') if v.strip()]
        for convert in (int, float):
            try:
                return convert(value)
            except ValueError:
                pass
        return value

    @staticmethod
    def _merge_configs(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
        """Merge two configuration dictionaries (override takes precedence)."""
        merged = deepcopy(base)
        for section, section_values in override.items():
            if isinstance(section_values, dict) and isinstance(merged.get(section), dict):
                merged[section].update(section_values)
            else:
                merged[section] = section_values
        return merged

    def _mark_source(self, config: Dict[str, Any], source: str):
        """Mark source ("default", "file", "env", "cli") of configuration values."""
        for section, section_values in config.items():
            if isinstance(section_values, dict):
                for key in section_values.keys():
                    self._config_source[f"{section}.{key}"] = source

    def _align_surface_with_sector(self, config_dict: Dict[str, Any]):
        """An explicitly chosen sector selects the matching SACS surface."""
        variational = config_dict.get('variational')
        if not isinstance(variational, dict):
            return
        sector_set = self._config_source.get('variational.sector', 'default') != 'default'
        surface_set = self._config_source.get('variational.surface', 'default') != 'default'
        if (sector_set and not surface_set
                and variational.get('surface') in ('sacs_even', 'sacs_odd')):
            variational['surface'] = f"sacs_{variational.get('sector')}"

    @staticmethod
    def _dict_to_config(config_dict: Dict[str, Any]) -> RunConfig:
        """Convert a validated configuration dictionary to a RunConfig."""
        sections = {name: model(**config_dict.get(name, {})) for name, model in _SECTIONS.items()}

        variational_dict = config_dict.get('variational', {})
        variational = VariationalConfig(
            surface=Surface.parse(variational_dict.get('surface', 'sacs_even')),
            sector=ParitySector.parse(variational_dict.get('sector', 'even'))
        )

        report_dict = config_dict.get('reporting', {})
        reporting = ReportingConfig(
            format=ReportFormat(report_dict.get('format', 'csv')),
            output_path=report_dict.get('output_path')
        )

        log_dict = config_dict.get('logging', {})
        logging = LoggingConfig(
            enabled=log_dict.get('enabled', True),
            level=LogLevel(str(log_dict.get('level', 'WARNING')).upper()),
            log_to_file=log_dict.get('log_to_file', False),
            log_to_console=log_dict.get('log_to_console', True),
            log_file_path=log_dict.get('log_file_path')
        )

        model_dict = dict(config_dict.get('model', {}))
        model_dict['n_atoms_list'] = list(model_dict.get('n_atoms_list') or [])
        sections['model'] = ModelConfig(**model_dict)

        return RunConfig(variational=variational, reporting=reporting, logging=logging,
                         **sections)

    def get_config(self) -> RunConfig:
        """Get current configuration object.

        Raises:
            RuntimeError: If configuration not loaded.
        """
        if self._config is None:
            raise RuntimeError("Configuration not loaded. Call initialize() first.")
        return self._config

    def show_config(self) -> Dict[str, Any]:
        """Current configuration with the source of every value.

        Example:
            {"model": {"n_atoms": {"value": 20, "source": "default"}}}
        """
        config_dict = self.get_config().to_dict()
        result: Dict[str, Any] = {}
        for section, section_values in config_dict.items():
            result[section] = {
                key: {"value": value,
                      "source": self._config_source.get(f"{section}.{key}", "unknown")}
                for key, value in section_values.items()
            }
        return result

    @classmethod
    def reset(cls):
        """Reset singleton instance (for testing)."""
        cls._instance = None
