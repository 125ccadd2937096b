"""Matrix-free observables of a state on a truncated basis.

Operators act on the dense (nu, k) amplitude grid; the field grid is padded
by one photon so a^dag never loses weight at the cutoff.
"""

from dataclasses import dataclass

import numpy as np

from src.oracle.basis import TruncatedBasis
from src.oracle.hamiltonian import spin_lowering, spin_raising


@dataclass(frozen=True)
class Observables:
    """Ground-state (or embedded-state) observables.

    Attributes:
        photon_per_atom: <a^dag a> / N
        excited_fraction: (j + <J_z>) / N
        var_q: Variance of q = (a + a^dag) / sqrt(2)
        var_Jx: Variance of J_x = (J_+ + J_-) / 2
        parity_expectation: <(-1)^(nu + j + m)>
    """
    photon_per_atom: float
    excited_fraction: float
    var_q: float
    var_Jx: float
    parity_expectation: float

    def as_dict(self):
        return {
            'photon_per_atom': self.photon_per_atom,
            'excited_fraction': self.excited_fraction,
            'var_q': self.var_q,
            'var_Jx': self.var_Jx,
            'parity_expectation': self.parity_expectation,
        }


def _apply_q(grid: np.ndarray) -> np.ndarray:
    """(a + a^dag) / sqrt(2) on a grid, returned with one extra photon row."""
    n_rows = grid.shape[0]
    out = np.zeros((n_rows + 1, grid.shape[1]), dtype=grid.dtype)
    root = np.sqrt(np.arange(1, n_rows))[:, None]
    out[:n_rows - 1] += root * grid[1:]
    out[1:n_rows + 1] += np.sqrt(np.arange(1, n_rows + 1))[:, None] * grid
    return out / np.sqrt(2.0)


def _apply_jx(grid: np.ndarray, n_atoms: int) -> np.ndarray:
    k = np.arange(n_atoms + 1)
    out = np.zeros_like(grid)
    out[:, 1:] += spin_raising(n_atoms, k[:-1]) * grid[:, :-1]
    out[:, :-1] += spin_lowering(n_atoms, k[1:]) * grid[:, 1:]
    return 0.5 * out


def _variance(grid: np.ndarray, image: np.ndarray) -> float:
    padded = np.zeros_like(image)
    padded[:grid.shape[0]] = grid
    mean = np.real(np.vdot(padded, image))
    second = np.real(np.vdot(image, image))
    return float(second - mean * mean)


def state_observables(basis: TruncatedBasis, vector: np.ndarray) -> Observables:
    """Observables of a normalized amplitude vector."""
    weights = np.abs(vector) ** 2
    total = weights.sum()
    weights = weights / total
    grid = basis.to_grid(vector / np.sqrt(total))
    n = basis.n_atoms
    return Observables(
        photon_per_atom=float(weights @ basis.nu) / n,
        excited_fraction=float(weights @ basis.k) / n,
        var_q=_variance(grid, _apply_q(grid)),
        var_Jx=_variance(grid, _apply_jx(grid, n)),
        parity_expectation=float(weights @ basis.parity),
    )
