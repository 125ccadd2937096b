"""Ground-state fidelity susceptibility.

    chi(gamma) = 2 (1 - |<psi(gamma - d/2)|psi(gamma + d/2)>|) / d^2

Both ground states are computed on one common basis, sized by the
converged cutoff at the larger coupling.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from src.core.model import ModelParams
from src.core.sacs_surface import ParitySector
from src.oracle.basis import TruncatedBasis
from src.oracle.ground_state import (
    TruncationSettings,
    check_nondegenerate,
    ground_state,
    solve_in_basis,
)

logger = logging.getLogger(__name__)

DEFAULT_STEP = 1e-3

# Two lowest levels closer than this (relative to max(1, |E|)) are degenerate.
DEGENERACY_RTOL = 1e-10


@dataclass(frozen=True)
class FidelityPoint:
    """Susceptibility at one coupling.

    Attributes:
        gamma: Centre of the difference stencil
        chi: Fidelity susceptibility
        fidelity: |<psi(gamma_lo)|psi(gamma_hi)>|
        step: Stencil width actually used
        nu_max: Photon cutoff of the common basis
    """
    gamma: float
    chi: float
    fidelity: float
    step: float
    nu_max: int


def fidelity_point(params: ModelParams, sector=ParitySector.EVEN, step: float = DEFAULT_STEP,
                   settings: Optional[TruncationSettings] = None) -> FidelityPoint:
    """Fidelity susceptibility with its diagnostics.

    Near gamma = 0 the stencil is shifted to [0, step].

    Raises:
        LevelCrossingError: If either ground state is degenerate
        TruncationConvergenceError: If the cutoff does not converge
    """
    if not 0.0 < step <= 1e-2:
        raise ValueError(f"step must lie in (0, 1e-2], got {step}")
    sector = None if sector is None else ParitySector.parse(sector)
    lo = max(0.0, params.gamma - 0.5 * step)
    hi = lo + step
    upper = ground_state(params.with_gamma(hi), sector, settings)
    basis = TruncatedBasis(params.n_atoms, upper.nu_max_used, sector)

    states = []
    for gamma in (lo, hi):
        values, vectors, _ = solve_in_basis(params.with_gamma(gamma), basis, count=2)
        check_nondegenerate(values, gamma, DEGENERACY_RTOL * max(1.0, abs(values[0])))
        states.append(vectors[:, 0])

    fidelity = float(abs(np.vdot(states[0], states[1])))
    chi = max(0.0, 2.0 * (1.0 - fidelity) / step ** 2)
    logger.debug("gamma=%.6g: chi=%.6g (nu_max=%d)", params.gamma, chi, basis.nu_max)
    return FidelityPoint(params.gamma, chi, fidelity, step, basis.nu_max)


def fidelity_susceptibility(params: ModelParams, sector=ParitySector.EVEN,
                            step: float = DEFAULT_STEP,
                            settings: Optional[TruncationSettings] = None) -> float:
    """Fidelity susceptibility chi >= 0 at params.gamma."""
    return fidelity_point(params, sector, step, settings).chi
