"""Truncated photon x collective-spin basis.

States are |nu, k> with photon number nu in [0, nu_max] and k = j + m in
[0, N]. The excitation number nu + k has a conserved parity, so a basis
may keep only one parity sector. States are ordered nu-major.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from src.core.exceptions import ConfigError
from src.core.sacs_surface import ParitySector


@dataclass(frozen=True, eq=False)
class TruncatedBasis:
    """Photon-truncated, optionally parity-resolved basis.

    Attributes:
        n_atoms: Number of atoms N (spin j = N/2)
        nu_max: Photon cutoff
        sector: Parity sector kept, or None for the full basis
        nu: Photon number of every basis state
        k: j + m of every basis state
    """
    n_atoms: int
    nu_max: int
    sector: Optional[ParitySector] = None
    nu: np.ndarray = field(init=False, repr=False)
    k: np.ndarray = field(init=False, repr=False)
    _lookup: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.nu_max < 1:
            raise ConfigError("nu_max must be at least 1", [f"nu_max={self.nu_max}"])
        if self.n_atoms < 1:
            raise ConfigError("n_atoms must be at least 1", [f"n_atoms={self.n_atoms}"])
        if self.sector is not None:
            object.__setattr__(self, 'sector', ParitySector.parse(self.sector))
        nu, k = np.meshgrid(np.arange(self.nu_max + 1), np.arange(self.n_atoms + 1),
                            indexing='ij')
        nu, k = nu.ravel(), k.ravel()
        if self.sector is not None:
            keep = (nu + k) % 2 == (0 if self.sector is ParitySector.EVEN else 1)
            nu, k = nu[keep], k[keep]
        lookup = np.full((self.nu_max + 1, self.n_atoms + 1), -1, dtype=np.int64)
        lookup[nu, k] = np.arange(nu.size)
        object.__setattr__(self, 'nu', nu)
        object.__setattr__(self, 'k', k)
        object.__setattr__(self, '_lookup', lookup)

    @property
    def j(self) -> float:
        return self.n_atoms / 2

    @property
    def dimension(self) -> int:
        return int(self.nu.size)

    @property
    def m(self) -> np.ndarray:
        """Spin projection m = k - j of every basis state."""
        return self.k - self.j

    @property
    def parity(self) -> np.ndarray:
        """(-1)^(nu + j + m) of every basis state."""
        return np.where((self.nu + self.k) % 2 == 0, 1, -1)

    def index_of(self, nu: int, m: float) -> int:
        """Flat index of |nu, m>.

        Raises:
            KeyError: If the state is outside the basis
        """
        k = m + self.j
        if not float(k).is_integer() or not (0 <= nu <= self.nu_max and 0 <= k <= self.n_atoms):
            raise KeyError(f"|nu={nu}, m={m}> is outside the basis")
        index = int(self._lookup[nu, int(k)])
        if index < 0:
            raise KeyError(f"|nu={nu}, m={m}> is outside the {self.sector.value} sector")
        return index

    def lookup(self, nu: np.ndarray, k: np.ndarray) -> np.ndarray:
        """Vectorized index lookup, -1 for states outside the basis."""
        nu = np.asarray(nu)
        k = np.asarray(k)
        inside = (nu >= 0) & (nu <= self.nu_max) & (k >= 0) & (k <= self.n_atoms)
        result = np.full(nu.shape, -1, dtype=np.int64)
        result[inside] = self._lookup[nu[inside], k[inside]]
        return result

    def compatible(self, other: 'TruncatedBasis') -> bool:
        return ((self.n_atoms, self.nu_max, self.sector)
                == (other.n_atoms, other.nu_max, other.sector))

    def to_grid(self, vector: np.ndarray) -> np.ndarray:
        """Amplitudes on a dense (nu_max + 1, N + 1) grid, zero off-basis."""
        grid = np.zeros((self.nu_max + 1, self.n_atoms + 1), dtype=np.result_type(vector, float))
        grid[self.nu, self.k] = vector
        return grid
