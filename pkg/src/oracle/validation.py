"""Cross-module oracle suite.

Every check compares two independent computations of one quantity and
reports the worst residual against its threshold. Sample points come
from a seeded generator, so repeated runs give identical reports.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from src.core.exceptions import DickeSacsError
from src.core.mean_field import coherent_energy_total
from src.core.model import FieldMatterPoint, ModelParams
from src.core.optimizer import SearchConfig, Surface, find_local_minima
from src.core.sacs_surface import (
    ParitySector,
    StableExponent,
    residual_to_gradient,
    sacs_energy,
    sacs_gradient,
    sacs_stationarity_residual,
)
from src.oracle.basis import TruncatedBasis
from src.oracle.embedding import embed_coherent, embed_sacs, expectation
from src.oracle.ground_state import TruncationSettings, ground_state, parity_gap, solve_in_basis
from src.oracle.hamiltonian import build_hamiltonian

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ValidationOptions:
    """Settings of the oracle suite.

    Attributes:
        params: Model the checks run on
        gradient_samples: Random points per sector for gradient checks
        embedding_samples: Random points per state for embedding checks
        fd_step: Finite-difference step (Richardson-extrapolated)
        fd_tol: Relative tolerance of the gradient checks
        embed_tol: Absolute energy tolerance of the embedding checks
        bound_tol: Slack of the variational bound
        bound_gammas: Couplings of the variational-bound check
        nu_max: Photon cutoff of the embedding basis
        seed: Seed of the sample generator
        coupling_sign: -1 flips the exact coupling (mutation check)
    """
    params: ModelParams = ModelParams(1.0, 0.552, 20)
    gradient_samples: int = 100
    embedding_samples: int = 50
    fd_step: float = 1e-5
    fd_tol: float = 1e-6
    embed_tol: float = 1e-6
    bound_tol: float = 1e-6
    bound_gammas: Tuple[float, ...] = (0.4, 0.5, 0.55, 0.6, 0.7)
    nu_max: int = 60
    seed: int = 20
    coupling_sign: float = 1.0
    search: SearchConfig = field(default_factory=SearchConfig)
    truncation: TruncationSettings = field(default_factory=TruncationSettings)


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one check."""
    name: str
    passed: bool
    residual: float
    threshold: float
    detail: str = ""


@dataclass(frozen=True)
class ValidationReport:
    """All check outcomes of one run."""
    checks: List[CheckResult]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> List[CheckResult]:
        return [c for c in self.checks if not c.passed]


def sample_points(params: ModelParams, count: int, rng: np.random.Generator,
                  sector: Optional[ParitySector] = None, planar: bool = False
                  ) -> List[FieldMatterPoint]:
    """Interior points away from the singular ring and the odd origin."""
    points: List[FieldMatterPoint] = []
    while len(points) < count:
        q = rng.uniform(-2.5, 2.5)
        p = 0.0 if planar else rng.uniform(-1.0, 1.0)
        theta = rng.uniform(0.1, 1.3)
        phi = 0.0 if planar else rng.uniform(0.0, 2.0 * math.pi)
        point = FieldMatterPoint(q, p, theta, phi)
        if sector is ParitySector.ODD:
            if StableExponent.from_point(params, point).one_plus(-1) < 1e-2:
                continue
        points.append(point)
    return points


def richardson_gradient(energy: Callable[[FieldMatterPoint], float],
                        point: FieldMatterPoint, step: float) -> np.ndarray:
    """Central differences at h and h/2 combined to cancel the h^2 error."""
    coords = np.array(point.as_tuple())

    def central(h: float) -> np.ndarray:
        out = np.empty(4)
        for i in range(4):
            plus, minus = coords.copy(), coords.copy()
            plus[i] += h
            minus[i] -= h
            out[i] = (energy(FieldMatterPoint(*plus)) - energy(FieldMatterPoint(*minus))) / (2 * h)
        return out

    return (4.0 * central(0.5 * step) - central(step)) / 3.0


def _relative(analytic: np.ndarray, reference: np.ndarray) -> float:
    return float(np.max(np.abs(analytic - reference)) / max(1.0, float(np.max(np.abs(analytic)))))


def check_gradient(options: ValidationOptions, sector: ParitySector,
                   rng: np.random.Generator) -> CheckResult:
    params = options.params
    worst = 0.0
    for point in sample_points(params, options.gradient_samples, rng, sector):
        fd = richardson_gradient(lambda x: sacs_energy(params, x, sector), point, options.fd_step)
        worst = max(worst, _relative(sacs_gradient(params, point, sector), fd))
    return CheckResult(f"gradient_fd_{sector.value}", worst <= options.fd_tol, worst,
                       options.fd_tol, f"{options.gradient_samples} points")


def check_stationarity(options: ValidationOptions, rng: np.random.Generator) -> CheckResult:
    params = options.params
    worst = 0.0
    for point in sample_points(params, options.gradient_samples, rng, planar=True):
        z = math.cos(point.theta)
        scaled = sacs_stationarity_residual(params, point.q, z, scaled=True)
        from_residual = np.array(residual_to_gradient(params, point.q, z, scaled))
        grad = sacs_gradient(params, point, ParitySector.EVEN)[[0, 2]]
        worst = max(worst, _relative(grad, from_residual))
    return CheckResult("stationarity_residual", worst <= options.fd_tol, worst, options.fd_tol,
                       "bracket form vs analytic gradient")


def check_embedding(options: ValidationOptions, sector: Optional[ParitySector],
                    rng: np.random.Generator) -> CheckResult:
    params = options.params
    basis = TruncatedBasis(params.n_atoms, options.nu_max)
    hamiltonian = build_hamiltonian(params, basis, options.coupling_sign)
    worst = 0.0
    for point in sample_points(params, options.embedding_samples, rng, sector):
        if sector is None:
            state = embed_coherent(params, point, basis)
            reference = coherent_energy_total(params, point)
        else:
            state = embed_sacs(params, point, sector, basis)
            reference = sacs_energy(params, point, sector)
        worst = max(worst, abs(expectation(hamiltonian, state) - reference))
    name = "embedding_coherent" if sector is None else f"embedding_sacs_{sector.value}"
    return CheckResult(name, worst <= options.embed_tol, worst, options.embed_tol,
                       f"{options.embedding_samples} points, nu_max={options.nu_max}")


def check_variational_bound(options: ValidationOptions) -> CheckResult:
    worst = -math.inf
    for gamma in options.bound_gammas:
        params = options.params.with_gamma(gamma)
        minima = find_local_minima(params, Surface.SACS_EVEN, options.search)
        exact = ground_state(params, ParitySector.EVEN, options.truncation)
        if minima:
            worst = max(worst, exact.energy - minima[0].total_energy)
    return CheckResult("variational_bound", worst <= options.bound_tol, worst,
                       options.bound_tol, "E_exact - min E_even over gammas")


def check_parity_blocks(options: ValidationOptions) -> CheckResult:
    params = options.params
    basis = TruncatedBasis(params.n_atoms, min(options.nu_max, 30))
    hamiltonian = build_hamiltonian(params, basis, options.coupling_sign)
    coo = hamiltonian.matrix.tocoo()
    parity = basis.parity
    cross = np.abs(coo.data[parity[coo.row] != parity[coo.col]])
    residual = max(float(cross.max()) if cross.size else 0.0, hamiltonian.asymmetry())
    return CheckResult("parity_blocks", residual == 0.0, residual, 0.0,
                       "cross-parity elements and max |H - H^T|")


def check_decoupled_spectrum(options: ValidationOptions) -> CheckResult:
    params = options.params.with_gamma(0.0)
    basis = TruncatedBasis(params.n_atoms, 10)
    values, _, _ = solve_in_basis(params, basis, count=basis.dimension)
    expected = np.sort(basis.nu + params.omega_a * basis.m)
    spectrum_error = float(np.max(np.abs(values - expected)))
    gap = parity_gap(params, TruncationSettings(nu_max=10))
    gap_error = abs(gap - min(1.0, params.omega_a))
    residual = max(spectrum_error, gap_error)
    return CheckResult("decoupled_spectrum", residual <= 1e-12, residual, 1e-12,
                       "gamma = 0 spectrum vs nu + omega_a m, parity gap vs min(1, omega_a)")


def check_truncation_monotonic(options: ValidationOptions) -> CheckResult:
    params = options.params
    ladder = [10, 20, 40, 80]
    energies = [float(solve_in_basis(params, TruncatedBasis(params.n_atoms, nu,
                                                            ParitySector.EVEN))[0][0])
                for nu in ladder]
    rise = max(b - a for a, b in zip(energies, energies[1:]))
    tol = 1e-12 * max(1.0, abs(energies[-1]))
    return CheckResult("truncation_monotonic", rise <= tol, max(rise, 0.0), tol,
                       f"nu_max ladder {ladder}")


def _guarded(name: str, check: Callable[[], CheckResult]) -> CheckResult:
    try:
        return check()
    except DickeSacsError as e:
        logger.warning("check %s raised %s", name, e)
        return CheckResult(name, False, math.nan, math.nan, f"{type(e).__name__}: {e}")


def run_validation(options: Optional[ValidationOptions] = None,
                   only: Optional[Sequence[str]] = None) -> ValidationReport:
    """Run the oracle suite and collect a pass/fail matrix.

    Args:
        options: Suite settings
        only: Restrict to checks whose name starts with one of these prefixes
    """
    options = options or ValidationOptions()
    rng = np.random.default_rng(options.seed)
    plan = [
        ("gradient_fd_even", lambda: check_gradient(options, ParitySector.EVEN, rng)),
        ("gradient_fd_odd", lambda: check_gradient(options, ParitySector.ODD, rng)),
        ("stationarity_residual", lambda: check_stationarity(options, rng)),
        ("embedding_sacs_even", lambda: check_embedding(options, ParitySector.EVEN, rng)),
        ("embedding_sacs_odd", lambda: check_embedding(options, ParitySector.ODD, rng)),
        ("embedding_coherent", lambda: check_embedding(options, None, rng)),
        ("variational_bound", lambda: check_variational_bound(options)),
        ("parity_blocks", lambda: check_parity_blocks(options)),
        ("decoupled_spectrum", lambda: check_decoupled_spectrum(options)),
        ("truncation_monotonic", lambda: check_truncation_monotonic(options)),
    ]
    checks = []
    for name, check in plan:
        if only and not any(name.startswith(prefix) for prefix in only):
            continue
        result = _guarded(name, check)
        logger.info("%-24s %s (residual %.3e)", name, "PASS" if result.passed else "FAIL",
                    result.residual)
        checks.append(result)
    return ValidationReport(checks)
