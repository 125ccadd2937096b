"""Unit tests for the CLI command implementations."""

import io
import json
import math
import shutil
import tempfile
from dataclasses import replace
from pathlib import Path

import pytest

from src.config.config_models import (
    GridConfig,
    LoggingConfig,
    ModelConfig,
    OracleConfig,
    ReportFormat,
    ReportingConfig,
    RunConfig,
    SearchSection,
    TolerancesConfig,
    ValidationConfig,
    VariationalConfig,
)
from src.core.exceptions import ConfigError
from src.core.model import ModelParams
from src.core.optimizer import Surface
from src.core.sacs_surface import ParitySector, sacs_at_mean_field_point
from src.oracle.ground_state import TruncationSettings, ground_state
from src.cli.commands import (
    CRITICAL_COLUMNS,
    EXIT_CONFIG,
    EXIT_NUMERICAL,
    EXIT_OK,
    EXIT_VALIDATION,
    build_surface_report,
    build_sweep_report,
    build_validation_report,
    cmd_critical,
    cmd_surface,
    cmd_sweep,
    cmd_validate,
    validation_options,
)


def _config(surface=Surface.MEAN_FIELD, **sections) -> RunConfig:
    """Small, quiet configuration for fast commands."""
    base = RunConfig(
        model=ModelConfig(n_atoms=4, gamma=0.3, gamma_lo=0.2, gamma_hi=0.3, gamma_step=0.1),
        variational=VariationalConfig(surface=surface, sector=ParitySector.EVEN),
        search=SearchSection(grid_q=11, grid_theta=11),
        grid=GridConfig(q_points=5, theta_points=4, section_samples=11),
        oracle=OracleConfig(nu_max=20),
        validation=ValidationConfig(gradient_samples=3, embedding_samples=3),
        logging=LoggingConfig(log_to_console=False),
    )
    return replace(base, **sections)


@pytest.fixture
def temp_dir():
    """Create temporary directory for report files."""
    temp_path = Path(tempfile.mkdtemp())
    yield temp_path
    shutil.rmtree(temp_path)


class TestSurface:
    """Test the surface command."""

    def test_report_tables(self):
        """Test grid, minima and grid-minima tables of the mean-field surface."""
        report = build_surface_report(_config())
        names = [t.name for t in report.tables]

        assert names[:3] == ['grid', 'minima', 'grid_minima']
        assert len(report.table('grid').rows) == 20
        minima = report.table('minima').records()
        assert len(minima) == 1
        assert minima[0]['per_atom_energy'] == pytest.approx(-0.5, abs=1e-10)
        assert minima[0]['basin_label'] is None

    def test_default_q_range(self):
        """Test the q range defaults to the symmetric search domain."""
        metadata = dict(build_surface_report(_config()).metadata)

        assert metadata['q_min'] == -metadata['q_max']
        assert metadata['gamma'] == 0.3
        assert 'version' in metadata

    def test_explicit_q_range(self):
        """Test configured grid bounds are used."""
        config = _config(grid=GridConfig(q_min=-1.0, q_max=2.0, q_points=3, theta_points=2))
        q_values = sorted(set(build_surface_report(config).table('grid').column('q')))
        assert q_values == [-1.0, 0.5, 2.0]

    def test_exact_surface_rejected(self):
        """Test the exact source has no landscape to tabulate."""
        with pytest.raises(ConfigError):
            build_surface_report(_config(Surface.EXACT))
        assert cmd_surface(_config(Surface.EXACT), stream=io.StringIO()) == EXIT_CONFIG

    def test_cmd_writes_csv(self):
        """Test the command writes the CSV layout to the stream."""
        stream = io.StringIO()

        assert cmd_surface(_config(), stream=stream) == EXIT_OK
        text = stream.getvalue()
        assert text.startswith("# command: surface\n")
        assert "# table: grid\nq,theta,energy,per_atom_energy\n" in text


class TestSweep:
    """Test the sweep command."""

    def test_mean_field_rows(self):
        """Test one row per coupling in the normal phase."""
        report = build_sweep_report(_config())
        rows = report.table('sweep').records()

        assert [r['gamma'] for r in rows] == [0.2, 0.3]
        assert all(r['per_atom_energy'] == pytest.approx(-0.5, abs=1e-10) for r in rows)
        assert 'var_q' not in report.table('sweep').columns
        assert report.table('minima').column('gamma') == [0.2, 0.3]

    def test_sacs_rows_carry_fluctuations(self):
        """Test SACS rows sit between the exact and decoupled energies and add fluctuations."""
        config = _config(Surface.SACS_EVEN)
        rows = build_sweep_report(config).table('sweep').records()

        for row in rows:
            params = ModelParams(1.0, row['gamma'], 4)
            exact = ground_state(params, ParitySector.EVEN, TruncationSettings(nu_max=40))
            assert row['diagnostic'] is None
            assert row['per_atom_energy'] <= -0.5 + 1e-10
            assert row['per_atom_energy'] >= exact.energy / 4 - 1e-10
            assert row['var_q'] > 0
            assert row['energy_sacs_at_mf'] == pytest.approx(-0.5, abs=1e-12)

    def test_odd_sector_mean_field_energy(self):
        """Test the odd sweep evaluates the odd state at the mean-field point."""
        config = _config(Surface.SACS_ODD,
                         model=ModelConfig(n_atoms=4, gamma_lo=0.7, gamma_hi=0.8, gamma_step=0.1),
                         variational=VariationalConfig(surface=Surface.SACS_ODD,
                                                       sector=ParitySector.ODD))
        rows = build_sweep_report(config).table('sweep').records()

        for row in rows:
            params = ModelParams(1.0, row['gamma'], 4)
            odd = sacs_at_mean_field_point(params, ParitySector.ODD) / 4
            assert row['energy_sacs_at_mf'] == pytest.approx(odd, rel=1e-12)
            assert row['energy_sacs_at_mf'] != pytest.approx(
                sacs_at_mean_field_point(params) / 4, rel=1e-9)

    def test_odd_sector_normal_phase_is_nan(self):
        """Test the vanishing odd state at the origin gives NaN without a diagnostic."""
        config = _config(Surface.SACS_ODD,
                         variational=VariationalConfig(surface=Surface.SACS_ODD,
                                                       sector=ParitySector.ODD))
        rows = build_sweep_report(config).table('sweep').records()

        for row in rows:
            assert math.isnan(row['energy_sacs_at_mf'])
            assert 'DegenerateStateError' not in (row['diagnostic'] or '')

    def test_exact_rows_with_extras(self):
        """Test exact rows with the susceptibility and overlap columns."""
        config = _config(Surface.EXACT,
                         model=ModelConfig(n_atoms=2, gamma_lo=0.2, gamma_hi=0.3, gamma_step=0.1),
                         oracle=OracleConfig(nu_max=20, fidelity=True, overlap=True))
        table = build_sweep_report(config).table('sweep')
        rows = table.records()

        assert 'chi_fidelity' in table.columns and 'overlap' in table.columns
        for row in rows:
            assert row['nu_max_used'] == 20
            assert row['chi_fidelity'] >= 0.0
            assert 0.9 < row['overlap'] <= 1.0
            assert row['parity_expectation'] == pytest.approx(1.0)

    def test_cmd_json_file(self, temp_dir):
        """Test a JSON report written to a file."""
        output = temp_dir / "sweep.json"
        config = _config(reporting=ReportingConfig(format=ReportFormat.JSON,
                                                   output_path=str(output)))

        assert cmd_sweep(config) == EXIT_OK
        data = json.loads(output.read_text(encoding='utf-8'))
        assert data['command'] == 'sweep'
        assert len(data['sweep']) == 2
        assert data['metadata']['gamma_step'] == 0.1


class TestCritical:
    """Test the critical command exit codes."""

    def test_invalid_tolerance_is_numerical_failure(self):
        """Test arguments the solver rejects map to exit 2."""
        config = _config(Surface.SACS_EVEN, tolerances=TolerancesConfig(bisect=0.0))
        assert cmd_critical(config, stream=io.StringIO()) == EXIT_NUMERICAL

    def test_columns(self):
        """Test the critical table layout."""
        assert CRITICAL_COLUMNS[:2] == ('n_atoms', 'gamma_c')
        assert CRITICAL_COLUMNS[-1] == 'diagnostic'


class TestValidate:
    """Test the validate command."""

    def test_options_from_config(self):
        """Test suite settings follow the configuration."""
        options = validation_options(_config(), coupling_sign=-1.0)

        assert options.params.n_atoms == 4
        assert options.gradient_samples == 3
        assert options.nu_max == 20
        assert options.coupling_sign == -1.0

    def test_pass(self):
        """Test a passing subset exits 0 and lists its checks."""
        stream = io.StringIO()

        assert cmd_validate(_config(), stream=stream, only=['parity']) == EXIT_OK
        assert "parity_blocks,true" in stream.getvalue()

    def test_flipped_coupling_fails(self):
        """Test the mutation check exits 3."""
        config = _config(oracle=OracleConfig(nu_max=40))
        stream = io.StringIO()

        code = cmd_validate(config, stream=stream, only=['embedding_coherent'],
                            coupling_sign=-1.0)

        assert code == EXIT_VALIDATION
        assert "embedding_coherent,false" in stream.getvalue()

    def test_report_payload(self):
        """Test the overall verdict is part of the report."""
        report, passed = build_validation_report(_config(), only=['decoupled'])

        assert passed
        assert report.payload == {'passed': True}
        assert report.table('checks').records()[0]['check'] == 'decoupled_spectrum'
        assert not math.isnan(report.table('checks').records()[0]['residual'])
