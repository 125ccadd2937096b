"""Coherent and symmetry-adapted states expanded in a truncated basis.

Field amplitudes exp(-|alpha|^2/2) alpha^nu / sqrt(nu!) and spin
amplitudes sqrt(C(N, k)) cos(theta/2)^(N-k) (sin(theta/2) e^(-i phi))^k
are built in the log domain with gammaln, so large nu and N cannot
overflow. With |-alpha, -zeta> the component on |nu, k> only changes by
(-1)^(nu + k), which makes the parity projection a mask.
"""

import math
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy.special import gammainc, gammaln, xlogy

from src.core.exceptions import (
    DimensionMismatchError,
    DomainError,
    InsufficientCutoffError,
)
from src.core.model import FieldMatterPoint, ModelParams
from src.core.sacs_surface import ParitySector, sacs_norm_sq_inv
from src.oracle.basis import TruncatedBasis
from src.oracle.hamiltonian import HamiltonianMatrix
from src.oracle.observables import Observables, state_observables

# Largest tolerated fraction of the norm lost to the photon cutoff.
MAX_LEAKAGE = 1e-10


@dataclass(frozen=True, eq=False)
class EmbeddedState:
    """Normalized amplitude vector of a variational state.

    Attributes:
        amplitudes: Complex amplitudes on `basis`, unit norm
        basis: Basis the state is expanded in
        leakage: Norm fraction outside the photon cutoff before renormalizing
    """
    amplitudes: np.ndarray
    basis: TruncatedBasis
    leakage: float


def field_amplitudes(point: FieldMatterPoint, nu_max: int) -> np.ndarray:
    """<nu|alpha> for nu = 0..nu_max."""
    nu = np.arange(nu_max + 1)
    mod_sq = 0.5 * point.r_sq
    log_mod = -0.5 * mod_sq + xlogy(nu, math.sqrt(mod_sq)) - 0.5 * gammaln(nu + 1.0)
    phase = np.exp(1j * nu * math.atan2(point.p, point.q))
    return np.exp(log_mod) * phase


def spin_amplitudes(point: FieldMatterPoint, n_atoms: int) -> np.ndarray:
    """<j, k - j|zeta> for k = 0..N."""
    k = np.arange(n_atoms + 1)
    log_binom = gammaln(n_atoms + 1.0) - gammaln(k + 1.0) - gammaln(n_atoms - k + 1.0)
    half = 0.5 * point.theta
    log_mod = (0.5 * log_binom + xlogy(n_atoms - k, math.cos(half))
               + xlogy(k, math.sin(half)))
    return np.exp(log_mod) * np.exp(-1j * k * point.phi)


def embedding_cutoff(point: FieldMatterPoint) -> int:
    """Photon cutoff holding a coherent amplitude to within MAX_LEAKAGE.

    Mean photon number plus 12 standard deviations plus a floor of 30.
    """
    mean = 0.5 * point.r_sq
    return int(math.ceil(mean + 12.0 * math.sqrt(mean) + 30.0))


def _field_leakage(point: FieldMatterPoint, nu_max: int) -> float:
    """Poisson tail P(nu > nu_max) at mean |alpha|^2."""
    mod_sq = 0.5 * point.r_sq
    if mod_sq == 0.0:
        return 0.0
    return float(gammainc(nu_max + 1.0, mod_sq))


def _product(point: FieldMatterPoint, basis: TruncatedBasis) -> np.ndarray:
    field = field_amplitudes(point, basis.nu_max)
    spin = spin_amplitudes(point, basis.n_atoms)
    return field[basis.nu] * spin[basis.k]


def _normalized(raw: np.ndarray, basis: TruncatedBasis, leakage: float) -> EmbeddedState:
    if leakage > MAX_LEAKAGE:
        raise InsufficientCutoffError("state leaks out of the photon cutoff", leakage,
                                      basis.nu_max)
    norm = np.linalg.norm(raw)
    return EmbeddedState(raw / norm, basis, leakage)


def embed_coherent(params: ModelParams, point: FieldMatterPoint,
                   basis: TruncatedBasis) -> EmbeddedState:
    """Unprojected product |alpha> |zeta> on the full basis.

    Raises:
        DomainError: If the basis keeps a single parity sector
        InsufficientCutoffError: If more than 1e-10 of the norm is cut off
    """
    if basis.sector is not None:
        raise DomainError("a coherent state needs the full basis", "sector", basis.sector.value)
    if basis.n_atoms != params.n_atoms:
        raise ValueError(f"basis built for N={basis.n_atoms}, model has N={params.n_atoms}")
    return _normalized(_product(point, basis), basis, _field_leakage(point, basis.nu_max))


def embed_sacs(params: ModelParams, point: FieldMatterPoint, sector,
               basis: TruncatedBasis) -> EmbeddedState:
    """Even or odd symmetry-adapted state on a sector (or full) basis.

    Raises:
        DegenerateStateError: For the odd sector where the state vanishes
        DomainError: If the basis keeps the other parity sector
        InsufficientCutoffError: If more than 1e-10 of the norm is cut off
    """
    sector = ParitySector.parse(sector)
    if basis.sector is not None and basis.sector is not sector:
        raise DomainError("basis holds the other parity sector", "sector", basis.sector.value)
    if basis.n_atoms != params.n_atoms:
        raise ValueError(f"basis built for N={basis.n_atoms}, model has N={params.n_atoms}")
    exact_norm_sq = sacs_norm_sq_inv(params, point, sector)
    keep = basis.parity == sector.sign
    raw = np.where(keep, 2.0 * _product(point, basis), 0.0)
    truncated_norm_sq = float(np.vdot(raw, raw).real)
    leakage = max(0.0, 1.0 - truncated_norm_sq / exact_norm_sq)
    return _normalized(raw, basis, leakage)


def _amplitudes(state: Union[EmbeddedState, np.ndarray]) -> np.ndarray:
    return state.amplitudes if isinstance(state, EmbeddedState) else np.asarray(state)


def overlap(a: Union[EmbeddedState, np.ndarray], b: Union[EmbeddedState, np.ndarray]) -> float:
    """|<a|b>|^2 of two normalized states of the same basis.

    Raises:
        DimensionMismatchError: If the vectors have different lengths
    """
    left, right = _amplitudes(a), _amplitudes(b)
    if left.shape != right.shape:
        raise DimensionMismatchError("states live in different bases", left.size, right.size)
    if isinstance(a, EmbeddedState) and isinstance(b, EmbeddedState):
        if not a.basis.compatible(b.basis):
            raise DimensionMismatchError("states live in different bases",
                                         a.basis.dimension, b.basis.dimension)
    return float(min(1.0, abs(np.vdot(left, right)) ** 2))


def expectation(hamiltonian: HamiltonianMatrix, state: Union[EmbeddedState, np.ndarray]) -> float:
    """<state|H|state> for a normalized state."""
    return hamiltonian.expectation(_amplitudes(state))


def sacs_observables(params: ModelParams, point: FieldMatterPoint, sector,
                     basis: TruncatedBasis) -> Observables:
    """Observables of a symmetry-adapted state, including its fluctuations."""
    state = embed_sacs(params, point, sector, basis)
    return state_observables(basis, state.amplitudes)
