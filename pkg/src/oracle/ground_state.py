"""Lowest eigenpairs of the truncated Dicke Hamiltonian.

The photon cutoff is escalated by doubling until successive ground
energies agree; each solve is dense for small bases and ARPACK Lanczos
(eigsh, smallest algebraic) otherwise.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.sparse.linalg import eigsh

from src.core.exceptions import LevelCrossingError, TruncationConvergenceError
from src.core.model import ModelParams
from src.core.sacs_surface import ParitySector
from src.oracle.basis import TruncatedBasis
from src.oracle.hamiltonian import HamiltonianMatrix, build_hamiltonian
from src.oracle.observables import Observables, state_observables

logger = logging.getLogger(__name__)

# Bases up to this dimension are diagonalized densely.
DENSE_LIMIT = 1500


@dataclass(frozen=True)
class TruncationSettings:
    """Cutoff escalation and eigensolver settings.

    Attributes:
        tol: Successive ground energies must differ by less than this
        nu_max: Fixed cutoff; disables escalation when set
        cap: Largest cutoff escalation may reach
        eig_tol: Residual norm ||H v - E v|| tolerated per eigenpair
    """
    tol: float = 1e-8
    nu_max: Optional[int] = None
    cap: int = 4096
    eig_tol: float = 1e-10


@dataclass(frozen=True, eq=False)
class GroundStateRecord:
    """Converged lowest eigenpair of one parity sector.

    Attributes:
        energy: Total ground energy
        amplitudes: Real amplitudes on `basis`, unit norm, largest entry positive
        basis: Basis of the final solve
        nu_max_used: Photon cutoff of the final solve
        convergence_gap: |E(nu_max) - E(nu_max / 2)|
        observables: Observables of the ground state
        residual: ||H v - E v|| of the returned pair
        gamma: Coupling of the run
    """
    energy: float
    amplitudes: np.ndarray
    basis: TruncatedBasis
    nu_max_used: int
    convergence_gap: float
    observables: Observables
    residual: float
    gamma: float

    @property
    def sector(self) -> Optional[ParitySector]:
        return self.basis.sector


def _fix_sign(vector: np.ndarray) -> np.ndarray:
    pivot = np.argmax(np.abs(vector))
    return -vector if vector[pivot] < 0 else vector


def lowest_eigenpairs(hamiltonian: HamiltonianMatrix, count: int = 1
                      ) -> Tuple[np.ndarray, np.ndarray]:
    """Lowest `count` eigenvalues (ascending) and eigenvectors as columns."""
    dim = hamiltonian.dimension
    count = min(count, dim)
    if dim <= DENSE_LIMIT or count >= dim - 1:
        values, vectors = np.linalg.eigh(hamiltonian.to_dense())
        values, vectors = values[:count], vectors[:, :count]
    else:
        v0 = np.ones(dim) / math.sqrt(dim)
        values, vectors = eigsh(hamiltonian.matrix, k=count, which='SA', v0=v0,
                                ncv=min(dim, max(2 * count + 1, 40)))
        order = np.argsort(values)
        values, vectors = values[order], vectors[:, order]
    vectors = np.column_stack([_fix_sign(vectors[:, i]) for i in range(count)])
    return values, vectors


def solve_in_basis(params: ModelParams, basis: TruncatedBasis, count: int = 1,
                   coupling_sign: float = 1.0) -> Tuple[np.ndarray, np.ndarray, float]:
    """Lowest eigenpairs on a fixed basis plus the ground-state residual norm."""
    hamiltonian = build_hamiltonian(params, basis, coupling_sign)
    values, vectors = lowest_eigenpairs(hamiltonian, count)
    ground = vectors[:, 0]
    residual = float(np.linalg.norm(hamiltonian.apply(ground) - values[0] * ground))
    return values, vectors, residual


def initial_cutoff(params: ModelParams) -> int:
    """Starting photon cutoff 4 * ceil(N gamma^2) + 20."""
    return 4 * math.ceil(params.n_atoms * params.gamma ** 2) + 20


def _record(params: ModelParams, basis: TruncatedBasis, settings: TruncationSettings,
            gap: float, solution=None) -> GroundStateRecord:
    values, vectors, residual = solution or solve_in_basis(params, basis)
    if residual > settings.eig_tol * max(1.0, abs(values[0])):
        logger.warning("gamma=%.6g nu_max=%d: eigenpair residual %.3e above %.1e",
                       params.gamma, basis.nu_max, residual, settings.eig_tol)
    ground = vectors[:, 0]
    return GroundStateRecord(
        energy=float(values[0]),
        amplitudes=ground,
        basis=basis,
        nu_max_used=basis.nu_max,
        convergence_gap=gap,
        observables=state_observables(basis, ground),
        residual=residual,
        gamma=params.gamma,
    )


def _energy(params: ModelParams, n_atoms: int, nu_max: int, sector) -> float:
    values, _, _ = solve_in_basis(params, TruncatedBasis(n_atoms, nu_max, sector))
    return float(values[0])


def ground_state(params: ModelParams, sector=ParitySector.EVEN,
                 settings: Optional[TruncationSettings] = None) -> GroundStateRecord:
    """Ground state of one parity sector with a converged photon cutoff.

    sector=None diagonalizes the full basis.

    Raises:
        TruncationConvergenceError: If doubling the cutoff would pass
            settings.cap before successive energies agree within settings.tol
    """
    settings = settings or TruncationSettings()
    if settings.tol <= 0:
        raise ValueError("convergence tolerance must be positive")
    sector = None if sector is None else ParitySector.parse(sector)
    n = params.n_atoms

    if settings.nu_max is not None:
        nu_max = settings.nu_max
        basis = TruncatedBasis(n, nu_max, sector)
        solution = solve_in_basis(params, basis)
        gap = (abs(_energy(params, n, nu_max // 2, sector) - float(solution[0][0]))
               if nu_max >= 2 else math.nan)
        return _record(params, basis, settings, gap, solution)

    nu_max = min(initial_cutoff(params), settings.cap)
    previous = _energy(params, n, nu_max, sector)
    gap = math.inf
    while 2 * nu_max <= settings.cap:
        nu_max *= 2
        basis = TruncatedBasis(n, nu_max, sector)
        solution = solve_in_basis(params, basis)
        current = float(solution[0][0])
        gap = abs(current - previous)
        logger.debug("gamma=%.6g nu_max=%d: E=%.15g gap=%.3e", params.gamma, nu_max, current, gap)
        if gap < settings.tol:
            return _record(params, basis, settings, gap, solution)
        previous = current
    raise TruncationConvergenceError("photon cutoff cap reached before convergence",
                                     nu_max, gap)


def parity_gap(params: ModelParams, settings: Optional[TruncationSettings] = None) -> float:
    """E_odd - E_even of the two sector ground states."""
    even = ground_state(params, ParitySector.EVEN, settings)
    odd = ground_state(params, ParitySector.ODD, settings)
    return odd.energy - even.energy


def check_nondegenerate(values: np.ndarray, gamma: float, threshold: float) -> None:
    """Raise LevelCrossingError when the two lowest levels are closer than threshold."""
    if values.size >= 2:
        splitting = float(values[1] - values[0])
        if splitting < threshold:
            raise LevelCrossingError("ground state is degenerate", gamma, splitting)
