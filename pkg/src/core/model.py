"""Model conventions and variational coordinates.

The field frequency is the unit of energy, so a model is fixed by the
atomic splitting omega_a, the dimensionless coupling gamma and the atom
number N (spin j = N/2, fully symmetric representation).

Trial states are products of a field coherent state |alpha> and a spin
coherent state |zeta>, parametrized by quadratures (q, p) and Bloch
angles (theta, phi):

    alpha = (q + i p) / sqrt(2),    zeta = tan(theta / 2) exp(-i phi)
"""

import cmath
import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Tuple

from src.core.exceptions import DomainError, PoleError

TWO_PI = 2.0 * math.pi


class Phase(Enum):
    """Mean-field phase of a critical point."""
    NORMAL = "normal"
    SUPERRADIANT = "superradiant"


@dataclass(frozen=True)
class ModelParams:
    """Physical control parameters in field-frequency units.

    Attributes:
        omega_a: Atomic level splitting (> 0)
        gamma: Atom-field coupling (>= 0)
        n_atoms: Number of two-level atoms N (>= 1)
    """
    omega_a: float = 1.0
    gamma: float = 0.0
    n_atoms: int = 20

    def __post_init__(self):
        if isinstance(self.n_atoms, bool) or int(self.n_atoms) != self.n_atoms:
            raise DomainError("n_atoms must be an integer", "n_atoms", self.n_atoms)
        object.__setattr__(self, 'n_atoms', int(self.n_atoms))
        if self.n_atoms < 1:
            raise DomainError("n_atoms must be at least 1", "n_atoms", self.n_atoms)
        if not math.isfinite(self.omega_a) or self.omega_a <= 0:
            raise DomainError("omega_a must be positive", "omega_a", self.omega_a)
        if not math.isfinite(self.gamma) or self.gamma < 0:
            raise DomainError("gamma must be non-negative", "gamma", self.gamma)

    @property
    def j(self) -> float:
        """Collective spin j = N/2 (exact for every integer N)."""
        return self.n_atoms / 2

    def with_gamma(self, gamma: float) -> 'ModelParams':
        """Copy with a different coupling."""
        return replace(self, gamma=gamma)

    def with_atoms(self, n_atoms: int) -> 'ModelParams':
        """Copy with a different atom number."""
        return replace(self, n_atoms=n_atoms)


@dataclass(frozen=True)
class FieldMatterPoint:
    """Point (q, p, theta, phi) of the product phase space.

    theta must lie in [0, pi]; phi is reduced modulo 2 pi on construction.
    """
    q: float
    p: float
    theta: float
    phi: float = 0.0

    def __post_init__(self):
        for name in ('q', 'p', 'theta', 'phi'):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise DomainError("coordinates must be finite", name, value)
            object.__setattr__(self, name, float(value))
        if not 0.0 <= self.theta <= math.pi:
            raise DomainError("theta must lie in [0, pi]", "theta", self.theta)
        phi = math.fmod(self.phi, TWO_PI)
        if phi < 0:
            phi += TWO_PI
        if phi >= TWO_PI:
            phi = 0.0
        object.__setattr__(self, 'phi', phi)

    @property
    def r_sq(self) -> float:
        """q^2 + p^2 (= 2 |alpha|^2)."""
        return self.q * self.q + self.p * self.p

    def as_tuple(self) -> Tuple[float, float, float, float]:
        return (self.q, self.p, self.theta, self.phi)

    def parity_partner(self) -> 'FieldMatterPoint':
        """(-q, -p, theta, phi + pi): labels the same symmetry-adapted state."""
        return FieldMatterPoint(-self.q, -self.p, self.theta, self.phi + math.pi)


ORIGIN = FieldMatterPoint(0.0, 0.0, 0.0, 0.0)


@dataclass(frozen=True)
class MeanFieldCritical:
    """Closed-form mean-field minimum.

    Attributes:
        point: Location of the minimum
        total_energy: Energy of the N-atom system
        per_atom_energy: total_energy / N
        phase: Mean-field phase the point belongs to
        degenerate: True when gamma is within machine epsilon of gamma_c
    """
    point: FieldMatterPoint
    total_energy: float
    per_atom_energy: float
    phase: Phase
    degenerate: bool = False


def gamma_c_tdl(params: ModelParams) -> float:
    """Critical coupling in the thermodynamic limit, sqrt(omega_a) / 2.

    This is the only value for which the normal energy -2 N gamma_c^2
    equals the decoupled ground energy -N omega_a / 2.

    Raises:
        DomainError: If omega_a is not positive
    """
    if not params.omega_a > 0:
        raise DomainError("omega_a must be positive", "omega_a", params.omega_a)
    return math.sqrt(params.omega_a) / 2.0


def alpha_zeta_of(point: FieldMatterPoint) -> Tuple[complex, complex]:
    """Complex coherent-state labels (alpha, zeta) of a point.

    Raises:
        PoleError: At theta = pi, where zeta diverges
    """
    if point.theta == math.pi:
        raise PoleError("zeta has a pole at theta = pi", "theta", point.theta)
    alpha = complex(point.q, point.p) / math.sqrt(2.0)
    zeta = math.tan(point.theta / 2.0) * cmath.exp(-1j * point.phi)
    return alpha, zeta
