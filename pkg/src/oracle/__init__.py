"""Exact diagonalization oracle.

Truncated parity-resolved basis, sparse Hamiltonian, converged ground
states, embeddings of variational states and the fidelity susceptibility.
"""

from src.oracle.basis import TruncatedBasis
from src.oracle.hamiltonian import HamiltonianMatrix, build_hamiltonian
from src.oracle.observables import Observables
from src.oracle.ground_state import GroundStateRecord, TruncationSettings, ground_state, parity_gap
from src.oracle.embedding import (
    EmbeddedState,
    embed_coherent,
    embed_sacs,
    overlap,
    sacs_observables,
)
from src.oracle.fidelity import fidelity_susceptibility

__all__ = [
    'TruncatedBasis',
    'HamiltonianMatrix',
    'build_hamiltonian',
    'Observables',
    'GroundStateRecord',
    'TruncationSettings',
    'ground_state',
    'parity_gap',
    'EmbeddedState',
    'embed_coherent',
    'embed_sacs',
    'overlap',
    'sacs_observables',
    'fidelity_susceptibility',
]
