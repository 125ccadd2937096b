"""Sparse Dicke Hamiltonian on a truncated basis.

    H = a^dag a + omega_a J_z + (gamma / sqrt(N)) (a^dag + a)(J_+ + J_-)

Only the a^dag J_(+/-) elements are generated; their transposes are
appended with identical values, so the matrix is symmetric by
construction.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import sparse

from src.core.model import ModelParams
from src.oracle.basis import TruncatedBasis


@dataclass(frozen=True, eq=False)
class HamiltonianMatrix:
    """Assembled Hamiltonian and the basis it acts on."""
    basis: TruncatedBasis
    matrix: sparse.csr_matrix

    @property
    def dimension(self) -> int:
        return self.basis.dimension

    def asymmetry(self) -> float:
        """max |H - H^T|."""
        diff = (self.matrix - self.matrix.T).tocoo()
        return float(np.abs(diff.data).max()) if diff.nnz else 0.0

    def apply(self, vector: np.ndarray) -> np.ndarray:
        return self.matrix @ vector

    def expectation(self, vector: np.ndarray) -> float:
        """<v|H|v> / <v|v>."""
        norm_sq = np.real(np.vdot(vector, vector))
        return float(np.real(np.vdot(vector, self.matrix @ vector)) / norm_sq)

    def to_dense(self) -> np.ndarray:
        return self.matrix.toarray()


def spin_raising(n_atoms: int, k: np.ndarray) -> np.ndarray:
    """<k+1|J_+|k> = sqrt(j(j+1) - m(m+1)) = sqrt((N - k)(k + 1))."""
    return np.sqrt((n_atoms - k) * (k + 1.0))


def spin_lowering(n_atoms: int, k: np.ndarray) -> np.ndarray:
    """<k-1|J_-|k> = sqrt(j(j+1) - m(m-1)) = sqrt(k (N - k + 1))."""
    return np.sqrt(k * (n_atoms - k + 1.0))


def build_hamiltonian(params: ModelParams, basis: TruncatedBasis,
                      coupling_sign: float = 1.0) -> HamiltonianMatrix:
    """Assemble the Hamiltonian in CSR form.

    Args:
        params: Model parameters; params.n_atoms must match the basis
        basis: Truncated basis
        coupling_sign: Multiplies the coupling; -1 injects a sign error
            for mutation checks of the validation suite
    """
    if params.n_atoms != basis.n_atoms:
        raise ValueError(f"basis built for N={basis.n_atoms}, model has N={params.n_atoms}")
    n = params.n_atoms
    g = coupling_sign * params.gamma / math.sqrt(n)
    nu, k = basis.nu, basis.k
    dim = basis.dimension

    rows = [np.arange(dim)]
    cols = [np.arange(dim)]
    data = [nu + params.omega_a * basis.m]

    if g != 0.0:
        photon = np.sqrt(nu + 1.0)
        for dk, spin in ((1, spin_raising(n, k)), (-1, spin_lowering(n, k))):
            target = basis.lookup(nu + 1, k + dk)
            keep = (target >= 0) & (spin != 0.0)
            values = g * photon[keep] * spin[keep]
            source = np.flatnonzero(keep)
            rows += [target[keep], source]
            cols += [source, target[keep]]
            data += [values, values]

    matrix = sparse.coo_matrix(
        (np.concatenate(data), (np.concatenate(rows), np.concatenate(cols))),
        shape=(dim, dim),
    ).tocsr()
    return HamiltonianMatrix(basis, matrix)
