"""Dicke SACS - variational and exact ground states of the Dicke model.

This package provides:
- Mean-field and symmetry-adapted coherent-state energy surfaces
- Multi-start minimization and finite-N critical couplings
- Exact diagonalization in a truncated parity-resolved basis
- Deterministic CSV/JSON reports for plotting
"""

__version__ = "0.1.0"
