"""Configuration data models for dicke-sacs.

This module defines immutable configuration dataclasses with defaults that
reproduce the resonant N = 20 setting, so a bare invocation needs no
config file. All dataclasses are frozen for immutability.
"""

import math
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

from src.core.model import ModelParams
from src.core.optimizer import SearchConfig, Surface
from src.core.sacs_surface import ParitySector
from src.oracle.ground_state import TruncationSettings


class ReportFormat(Enum):
    """Report output format."""
    CSV = "csv"
    JSON = "json"


class LogLevel(Enum):
    """Logging level."""
    DEBUG = "DEBUG"
    INFO = "INFO"
    WARNING = "WARNING"
    ERROR = "ERROR"


@dataclass(frozen=True)
class ModelConfig:
    """Physical parameters and the coupling grid.

    Attributes:
        omega_a: Atomic splitting in field-frequency units
        n_atoms: Atom number N
        n_atoms_list: Atom numbers of a critical-coupling table (empty: n_atoms only)
        gamma: Coupling of single-point commands
        gamma_lo: First coupling of a sweep
        gamma_hi: Last coupling of a sweep
        gamma_step: Sweep step
    """
    omega_a: float = 1.0
    n_atoms: int = 20
    n_atoms_list: List[int] = field(default_factory=list)
    gamma: float = 0.552
    gamma_lo: float = 0.4
    gamma_hi: float = 0.7
    gamma_step: float = 0.005


@dataclass(frozen=True)
class VariationalConfig:
    """Surface selection."""
    surface: Surface = Surface.SACS_EVEN
    sector: ParitySector = ParitySector.EVEN


@dataclass(frozen=True)
class SearchSection:
    """Multi-start minimization settings."""
    grid_q: int = 41
    grid_theta: int = 41
    q_max_factor: float = 3.0
    max_iterations: int = 200
    dedup_tol: float = 1e-6
    fd_step: float = 1e-5


@dataclass(frozen=True)
class TolerancesConfig:
    """Numerical tolerances.

    Attributes:
        grad: Gradient norm of an accepted minimum
        bisect: Final bracket width of the critical-coupling search
        eig: Eigenpair residual norm
        conv: Successive ground energies across the cutoff ladder
    """
    grad: float = 1e-8
    bisect: float = 1e-4
    eig: float = 1e-10
    conv: float = 1e-8


@dataclass(frozen=True)
class OracleConfig:
    """Exact-diagonalization settings.

    Attributes:
        nu_max: Fixed photon cutoff (None escalates automatically)
        nu_cap: Largest cutoff of the escalation
        fidelity: Add the fidelity susceptibility column to exact sweeps
        fidelity_step: Coupling step of the susceptibility stencil
        overlap: Add the overlap with the SACS minimum to exact sweeps
    """
    nu_max: Optional[int] = None
    nu_cap: int = 4096
    fidelity: bool = False
    fidelity_step: float = 1e-3
    overlap: bool = False


@dataclass(frozen=True)
class GridConfig:
    """Surface tabulation for plotting (None ranges follow the search domain)."""
    q_min: Optional[float] = None
    q_max: Optional[float] = None
    theta_min: float = 0.0
    theta_max: float = 0.5 * math.pi - 1e-6
    q_points: int = 121
    theta_points: int = 121
    section_samples: int = 201


@dataclass(frozen=True)
class ValidationConfig:
    """Oracle-suite settings."""
    gradient_samples: int = 100
    embedding_samples: int = 50
    fd_tol: float = 1e-6
    embed_tol: float = 1e-6
    seed: int = 20


@dataclass(frozen=True)
class ReportingConfig:
    """Report output configuration."""
    format: ReportFormat = ReportFormat.CSV
    output_path: Optional[str] = None


@dataclass(frozen=True)
class LoggingConfig:
    """Run logging configuration.

    Attributes:
        enabled: Whether the run log is written
        level: Log verbosity level (DEBUG, INFO, WARNING, ERROR)
        log_to_file: Whether to write the log to a file
        log_to_console: Whether to write the log to stderr
        log_file_path: Path of the log file
    """
    enabled: bool = True
    level: LogLevel = LogLevel.WARNING
    log_to_file: bool = False
    log_to_console: bool = True
    log_file_path: Optional[str] = None


@dataclass(frozen=True)
class ParallelConfig:
    """Parallel execution of per-gamma and per-N work."""
    enabled: bool = False
    max_workers: int = 4


@dataclass(frozen=True)
class RunConfig:
    """Complete configuration object with all sections."""
    model: ModelConfig = field(default_factory=ModelConfig)
    variational: VariationalConfig = field(default_factory=VariationalConfig)
    search: SearchSection = field(default_factory=SearchSection)
    tolerances: TolerancesConfig = field(default_factory=TolerancesConfig)
    oracle: OracleConfig = field(default_factory=OracleConfig)
    grid: GridConfig = field(default_factory=GridConfig)
    validation: ValidationConfig = field(default_factory=ValidationConfig)
    reporting: ReportingConfig = field(default_factory=ReportingConfig)
    logging: LoggingConfig = field(default_factory=LoggingConfig)
    parallel: ParallelConfig = field(default_factory=ParallelConfig)

    def to_dict(self) -> Dict[str, Any]:
        """Convert configuration to dictionary.

        Returns:
            Dictionary representation with nested sections.
        """
        def convert_value(obj: Any) -> Any:
            """Recursively convert dataclass and enum values."""
            if isinstance(obj, Enum):
                return obj.value
            elif hasattr(obj, '__dataclass_fields__'):
                return {k: convert_value(v) for k, v in asdict(obj).items()}
            elif isinstance(obj, (list, tuple)):
                return [convert_value(item) for item in obj]
            elif isinstance(obj, dict):
                return {k: convert_value(v) for k, v in obj.items()}
            return obj

        return convert_value(asdict(self))

    def model_params(self, gamma: Optional[float] = None,
                     n_atoms: Optional[int] = None) -> ModelParams:
        return ModelParams(
            omega_a=self.model.omega_a,
            gamma=self.model.gamma if gamma is None else gamma,
            n_atoms=self.model.n_atoms if n_atoms is None else n_atoms,
        )

    def atom_numbers(self) -> List[int]:
        return list(self.model.n_atoms_list) or [self.model.n_atoms]

    def gamma_grid(self) -> List[float]:
        """Couplings gamma_lo, gamma_lo + step, ... up to gamma_hi inclusive."""
        lo, hi, step = self.model.gamma_lo, self.model.gamma_hi, self.model.gamma_step
        count = int(math.floor((hi - lo) / step + 1e-9)) + 1
        return [round(lo + i * step, 12) for i in range(count)]

    def search_config(self) -> SearchConfig:
        return SearchConfig(
            grid_q=self.search.grid_q,
            grid_theta=self.search.grid_theta,
            q_max_factor=self.search.q_max_factor,
            grad_tol=self.tolerances.grad,
            dedup_tol=self.search.dedup_tol,
            fd_step=self.search.fd_step,
            max_iterations=self.search.max_iterations,
        )

    def truncation_settings(self) -> TruncationSettings:
        return TruncationSettings(
            tol=self.tolerances.conv,
            nu_max=self.oracle.nu_max,
            cap=self.oracle.nu_cap,
            eig_tol=self.tolerances.eig,
        )

    def metadata(self) -> List[Tuple[str, Any]]:
        """Ordered (key, value) pairs for report preambles."""
        return [
            ('omega_a', self.model.omega_a),
            ('n_atoms', self.model.n_atoms),
            ('surface', self.variational.surface.value),
            ('sector', self.variational.sector.value),
            ('tol_grad', self.tolerances.grad),
            ('tol_bisect', self.tolerances.bisect),
            ('tol_eig', self.tolerances.eig),
            ('tol_conv', self.tolerances.conv),
        ]
