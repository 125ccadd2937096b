"""Unit tests for layered configuration loading."""

import shutil
import tempfile
from pathlib import Path

import pytest

from src.config.config_manager import ConfigManager
from src.config.config_models import LogLevel, ReportFormat
from src.core.exceptions import ConfigError
from src.core.optimizer import Surface
from src.core.sacs_surface import ParitySector


@pytest.fixture(autouse=True)
def reset_manager():
    """Each test starts without a singleton."""
    ConfigManager.reset()
    yield
    ConfigManager.reset()


@pytest.fixture
def temp_dir():
    """Create temporary directory for config files."""
    temp_path = Path(tempfile.mkdtemp())
    yield temp_path
    shutil.rmtree(temp_path)


def _write(path: Path, text: str) -> Path:
    path.write_text(text, encoding='utf-8')
    return path


class TestSingleton:
    """Test singleton access."""

    def test_instance_before_initialize(self):
        """Test instance() raises until initialize() ran."""
        with pytest.raises(RuntimeError):
            ConfigManager.instance()

    def test_direct_construction_blocked(self, temp_dir):
        """Test the constructor refuses a second instance."""
        ConfigManager.initialize(environ={}, config_path=_write(temp_dir / "c.yaml", ""))
        with pytest.raises(RuntimeError):
            ConfigManager()

    def test_instance_after_initialize(self, temp_dir):
        """Test instance() returns the initialized manager."""
        manager = ConfigManager.initialize(config_path=_write(temp_dir / "c.yaml", ""), environ={})
        assert ConfigManager.instance() is manager


class TestDefaults:
    """Test zero-config operation."""

    def test_defaults(self, temp_dir):
        """Test an empty file yields the resonant N = 20 defaults."""
        config = ConfigManager.initialize(
            config_path=_write(temp_dir / "c.yaml", ""), environ={}).get_config()

        assert config.model.n_atoms == 20
        assert config.model.omega_a == 1.0
        assert config.variational.surface is Surface.SACS_EVEN
        assert config.variational.sector is ParitySector.EVEN
        assert config.tolerances.bisect == 1e-4
        assert config.oracle.nu_max is None
        assert config.reporting.format is ReportFormat.CSV
        assert config.logging.level is LogLevel.WARNING

    def test_helpers(self, temp_dir):
        """Test the derived model, grid and solver settings."""
        config = ConfigManager.initialize(
            config_path=_write(temp_dir / "c.yaml", ""), environ={}).get_config()

        assert config.model_params().gamma == 0.552
        assert config.model_params(gamma=0.7, n_atoms=40).n_atoms == 40
        assert config.atom_numbers() == [20]
        grid = config.gamma_grid()
        assert grid[0] == 0.4
        assert grid[-1] == pytest.approx(0.7)
        assert len(grid) == 61
        assert config.search_config().grad_tol == 1e-8
        assert config.truncation_settings().cap == 4096


class TestLayering:
    """Test file, environment and command-line layers."""

    def test_file_values(self, temp_dir):
        """Test YAML values override defaults."""
        path = _write(temp_dir / "c.yaml", "model:\n  n_atoms: 40\n  n_atoms_list: [10, 20]\n"
                                           "reporting:\n  format: json\n")
        manager = ConfigManager.initialize(config_path=path, environ={})
        config = manager.get_config()

        assert config.model.n_atoms == 40
        assert config.atom_numbers() == [10, 20]
        assert config.reporting.format is ReportFormat.JSON
        assert manager.show_config()['model']['n_atoms'] == {"value": 40, "source": "file"}
        assert manager.show_config()['model']['omega_a']['source'] == "default"

    def test_env_overrides_file(self, temp_dir):
        """Test DICKE_SACS_<SECTION>_<KEY> beats the file."""
        path = _write(temp_dir / "c.yaml", "model:\n  n_atoms: 40\n")
        environ = {"DICKE_SACS_MODEL_N_ATOMS": "80", "DICKE_SACS_TOLERANCES_GRAD": "1e-9",
                   "DICKE_SACS_ORACLE_FIDELITY": "yes", "UNRELATED": "1"}
        manager = ConfigManager.initialize(config_path=path, environ=environ)
        config = manager.get_config()

        assert config.model.n_atoms == 80
        assert config.tolerances.grad == 1e-9
        assert config.oracle.fidelity is True
        assert manager.show_config()['model']['n_atoms']['source'] == "env"

    def test_cli_overrides_env(self, temp_dir):
        """Test command-line values win and None values are ignored."""
        path = _write(temp_dir / "c.yaml", "")
        manager = ConfigManager.initialize(
            config_path=path,
            cli_overrides={"model": {"n_atoms": 10, "gamma": None}},
            environ={"DICKE_SACS_MODEL_N_ATOMS": "80"})

        assert manager.get_config().model.n_atoms == 10
        assert manager.get_config().model.gamma == 0.552
        assert manager.show_config()['model']['n_atoms']['source'] == "cli"

    def test_env_list(self, temp_dir):
        """Test comma-separated environment values become lists."""
        manager = ConfigManager.initialize(
            config_path=_write(temp_dir / "c.yaml", ""),
            environ={"DICKE_SACS_MODEL_N_ATOMS_LIST": "10,20,40"})
        assert manager.get_config().atom_numbers() == [10, 20, 40]

    def test_sector_selects_surface(self, temp_dir):
        """Test an explicit odd sector switches the default even surface."""
        manager = ConfigManager.initialize(
            config_path=_write(temp_dir / "c.yaml", ""),
            cli_overrides={"variational": {"sector": "odd"}}, environ={})
        assert manager.get_config().variational.surface is Surface.SACS_ODD

    def test_explicit_contradiction_rejected(self, temp_dir):
        """Test an explicit sacs_even surface with an odd sector is invalid."""
        with pytest.raises(ConfigError):
            ConfigManager.initialize(
                config_path=_write(temp_dir / "c.yaml", ""),
                cli_overrides={"variational": {"sector": "odd", "surface": "sacs_even"}},
                environ={})


class TestEnvParsing:
    """Test environment value conversion."""

    @pytest.mark.parametrize("raw,expected", [
        ("true", True),
        ("Off", False),
        ("none", None),
        ("", None),
        ("42", 42),
        ("1e-9", 1e-9),
        ("1", 1),
        ("0.5,0.6", [0.5, 0.6]),
        ("csv", "csv"),
    ])
    def test_parse(self, raw, expected):
        """Test bool, None, int, float, list and string values."""
        assert ConfigManager._parse_env_value(raw) == expected


class TestErrors:
    """Test invalid configurations."""

    def test_missing_file(self, temp_dir):
        """Test an explicit path that does not exist."""
        with pytest.raises(ConfigError) as exc_info:
            ConfigManager.initialize(config_path=temp_dir / "missing.yaml", environ={})
        assert exc_info.value.source.endswith("missing.yaml")

    def test_unknown_key(self, temp_dir):
        """Test unknown keys are rejected with a readable message."""
        path = _write(temp_dir / "c.yaml", "model:\n  n_atom: 40\n")
        with pytest.raises(ConfigError) as exc_info:
            ConfigManager.initialize(config_path=path, environ={})
        assert any("n_atom" in e for e in exc_info.value.errors)

    def test_bad_value(self, temp_dir):
        """Test out-of-range values are rejected."""
        path = _write(temp_dir / "c.yaml", "tolerances:\n  grad: -1.0\n")
        with pytest.raises(ConfigError) as exc_info:
            ConfigManager.initialize(config_path=path, environ={})
        assert "grad" in exc_info.value.errors[0]

    def test_not_a_mapping(self, temp_dir):
        """Test a YAML list is not a configuration."""
        with pytest.raises(ConfigError):
            ConfigManager.initialize(config_path=_write(temp_dir / "c.yaml", "- 1\n- 2\n"),
                                     environ={})

    def test_unparseable_yaml(self, temp_dir):
        """Test malformed YAML is a configuration error."""
        with pytest.raises(ConfigError):
            ConfigManager.initialize(config_path=_write(temp_dir / "c.yaml", "model: [1,\n"),
                                     environ={})

    def test_unknown_env_section(self, temp_dir):
        """Test environment variables for unknown sections are rejected."""
        with pytest.raises(ConfigError):
            ConfigManager.initialize(config_path=_write(temp_dir / "c.yaml", ""),
                                     environ={"DICKE_SACS_PLOT_DPI": "300"})
