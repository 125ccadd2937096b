"""Default configuration values for zero-config operation.

This module provides the defaults for all configuration sections, so a
bare `dicke-sacs critical` reproduces the resonant N = 20 even-sector run.
"""

import math

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
from src.core.optimizer import Surface
from src.core.sacs_surface import ParitySector

# Default name of the config file looked up in the working directory.
DEFAULT_CONFIG_FILE = "dicke-sacs.yaml"


def get_default_config() -> RunConfig:
    """Get default configuration.

    Returns:
        RunConfig: Complete configuration with all defaults populated.

    Default Values:
        - Model: resonance (omega_a = 1), N = 20, gamma 0.552, sweep 0.4..0.7
        - Variational: even SACS surface
        - Search: 41 x 41 starts, q range 3 sqrt(N) gamma
        - Tolerances: grad 1e-8, bisect 1e-4, eig 1e-10, conv 1e-8
        - Oracle: automatic cutoff, cap 4096
        - Reporting: CSV to stdout
        - Logging: WARNING level, console output
        - Parallel: Disabled by default
    """
    return RunConfig(
        model=ModelConfig(
            omega_a=1.0,  # Resonance
            n_atoms=20,
            n_atoms_list=[],
            gamma=0.552,
            gamma_lo=0.4,
            gamma_hi=0.7,
            gamma_step=0.005
        ),
        variational=VariationalConfig(
            surface=Surface.SACS_EVEN,
            sector=ParitySector.EVEN
        ),
        search=SearchSection(
            grid_q=41,
            grid_theta=41,
            q_max_factor=3.0,  # Covers the 2 sqrt(j) gamma scale with margin
            max_iterations=200,
            dedup_tol=1e-6,
            fd_step=1e-5
        ),
        tolerances=TolerancesConfig(
            grad=1e-8,
            bisect=1e-4,
            eig=1e-10,
            conv=1e-8
        ),
        oracle=OracleConfig(
            nu_max=None,  # Escalate from 4 ceil(N gamma^2) + 20
            nu_cap=4096,
            fidelity=False,
            fidelity_step=1e-3,
            overlap=False
        ),
        grid=GridConfig(
            q_min=None,
            q_max=None,
            theta_min=0.0,
            theta_max=0.5 * math.pi - 1e-6,
            q_points=121,
            theta_points=121,
            section_samples=201
        ),
        validation=ValidationConfig(
            gradient_samples=100,
            embedding_samples=50,
            fd_tol=1e-6,
            embed_tol=1e-6,
            seed=20
        ),
        reporting=ReportingConfig(
            format=ReportFormat.CSV,
            output_path=None  # stdout
        ),
        logging=LoggingConfig(
            enabled=True,
            level=LogLevel.WARNING,
            log_to_file=False,
            log_to_console=True,
            log_file_path=None
        ),
        parallel=ParallelConfig(
            enabled=False,
            max_workers=4
        )
    )
