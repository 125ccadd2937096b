"""Symmetry-adapted energy surface (SAES).

The even/odd parity states

    |alpha, zeta>_(+/-) = N_(+/-) (|alpha>|zeta> +/- |-alpha>|-zeta>)

have overlap O = <alpha,zeta|-alpha,-zeta> = exp(-(q^2 + p^2)) cos(theta)^N
and total energy

    E_(+/-) = (A +/- O h) / (1 +/- O)

where A is the coherent-state energy (N times the mean-field surface) and
h = -(q^2 + p^2)/2 - (N omega_a / 2) / cos(theta)
    + sqrt(2N) gamma p tan(theta) sin(phi)
is the normalized cross matrix element. Multiplying h by O cancels the
1/cos(theta) factors, and |O| <= 1, so every intermediate stays bounded
for any N; the large factor exp(q^2 + p^2) cos(theta)^-N is only ever
handled through its logarithm (StableExponent).

All energies here are TOTAL energies; nothing is divided by N.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Tuple

import numpy as np

from src.core.exceptions import DegenerateStateError, DomainError, NearSingularDomainError
from src.core.mean_field import (
    coherent_energy_array,
    coherent_gradient_array,
    mean_field_critical_points,
)
from src.core.model import FieldMatterPoint, ModelParams, Phase

# |cos(theta)| at or below this is the excluded singular ring.
SINGULAR_RING_TOL = 1e-12

# Odd states with 1 - O below this are treated as the vanishing state.
ODD_DEGENERACY_TOL = 1e-8


class ParitySector(Enum):
    """Parity sector of a symmetry-adapted state."""
    EVEN = "even"
    ODD = "odd"

    @property
    def sign(self) -> int:
        """+1 for even (upper signs), -1 for odd (lower signs)."""
        return 1 if self is ParitySector.EVEN else -1

    @classmethod
    def parse(cls, value) -> 'ParitySector':
        if isinstance(value, cls):
            return value
        return cls(str(value).lower())


@dataclass(frozen=True)
class StableExponent:
    """Log-domain form of exp(q^2 + p^2) cos(theta)^-N.

    Attributes:
        t: (q^2 + p^2) - N ln|cos(theta)|
        sign_z_pow: sign of cos(theta)^N
    """
    t: float
    sign_z_pow: int

    @classmethod
    def from_point(cls, params: ModelParams, point: FieldMatterPoint) -> 'StableExponent':
        z = math.cos(point.theta)
        if z == 0.0:
            return cls(math.inf, 1)
        n = params.n_atoms
        sign = -1 if (z < 0 and n % 2 == 1) else 1
        return cls(point.r_sq - n * math.log(abs(z)), sign)

    def overlap(self) -> float:
        """O = exp(-(q^2 + p^2)) cos(theta)^N, always in [-1, 1]."""
        return self.sign_z_pow * math.exp(-self.t)

    def one_plus(self, sign: int) -> float:
        """1 + sign * O, accurate when O is close to 1."""
        if sign * self.sign_z_pow < 0:
            return -math.expm1(-self.t)
        return 1.0 + math.exp(-self.t)

    def value(self) -> float:
        """exp(q^2 + p^2) cos(theta)^-N itself (inf when it overflows)."""
        try:
            return self.sign_z_pow * math.exp(self.t)
        except OverflowError:
            return self.sign_z_pow * math.inf


def weighted_power(r_sq, z, k: int):
    """exp(-r_sq) * z**k for integer k >= 0, computed in the log domain."""
    if k == 0:
        return np.exp(-r_sq) + 0.0 * z
    with np.errstate(divide='ignore'):
        log_abs = np.log(np.abs(z))
    magnitude = np.exp(-r_sq + k * log_abs)
    if k % 2 == 1:
        return np.where(z < 0, -magnitude, magnitude)
    return magnitude


def _cross_term(params: ModelParams, r_sq, z, sin_t, p, sin_f, w_n, w_n1):
    """B = O h, with the 1/cos(theta) factors already cancelled."""
    n = params.n_atoms
    coupling = math.sqrt(2.0 * n) * params.gamma
    return (-0.5 * r_sq * w_n
            - 0.5 * n * params.omega_a * w_n1
            + coupling * p * sin_t * sin_f * w_n1)


def _denominator(sign: int, r_sq, z, n: int, w_n):
    """1 + sign * O, using expm1 where the odd state nearly vanishes."""
    if sign > 0:
        return 1.0 + w_n
    with np.errstate(divide='ignore'):
        t = r_sq - n * np.log(np.abs(z))
    accurate = -np.expm1(-t)
    return np.where(w_n > 0, accurate, 1.0 - w_n)


def sacs_energy_array(params: ModelParams, sector: ParitySector, q, p, theta, phi):
    """Total SAES energy for broadcastable coordinate arrays.

    No domain checks: the singular ring and the odd origin yield
    non-finite values instead of exceptions.
    """
    n = params.n_atoms
    sign = sector.sign
    r_sq = q * q + p * p
    z = np.cos(theta)
    sin_t = np.sin(theta)
    w_n = weighted_power(r_sq, z, n)
    w_n1 = weighted_power(r_sq, z, n - 1)
    a = coherent_energy_array(params, q, p, theta, phi)
    b = _cross_term(params, r_sq, z, sin_t, p, np.sin(phi), w_n, w_n1)
    with np.errstate(divide='ignore', invalid='ignore'):
        return (a + sign * b) / _denominator(sign, r_sq, z, n, w_n)


def sacs_gradient_array(params: ModelParams, sector: ParitySector, q, p, theta, phi):
    """Gradient of the total SAES energy, stacked on the last axis."""
    n = params.n_atoms
    sign = sector.sign
    coupling = math.sqrt(2.0 * n) * params.gamma
    half_nw = 0.5 * n * params.omega_a

    r_sq = q * q + p * p
    z = np.cos(theta)
    sin_t = np.sin(theta)
    sin_f, cos_f = np.sin(phi), np.cos(phi)
    w_n = weighted_power(r_sq, z, n)
    w_n1 = weighted_power(r_sq, z, n - 1)
    w_n2 = weighted_power(r_sq, z, n - 2) if n >= 2 else 0.0 * z

    a = coherent_energy_array(params, q, p, theta, phi)
    grad_a = coherent_gradient_array(params, q, p, theta, phi)
    b = _cross_term(params, r_sq, z, sin_t, p, sin_f, w_n, w_n1)

    with np.errstate(divide='ignore', invalid='ignore'):
        denom = _denominator(sign, r_sq, z, n, w_n)
        energy = (a + sign * b) / denom

        o_q = -2.0 * q * w_n
        o_p = -2.0 * p * w_n
        o_theta = -n * sin_t * w_n1

        b_q = -2.0 * q * b - q * w_n
        b_p = -2.0 * p * b - p * w_n + coupling * sin_t * sin_f * w_n1
        b_theta = (0.5 * r_sq * n * sin_t * w_n1
                   + half_nw * (n - 1) * sin_t * w_n2
                   + coupling * p * sin_f * (z * w_n1 - (n - 1) * sin_t * sin_t * w_n2))
        b_phi = coupling * p * sin_t * cos_f * w_n1

        d_q = (grad_a[..., 0] + sign * (b_q - energy * o_q)) / denom
        d_p = (grad_a[..., 1] + sign * (b_p - energy * o_p)) / denom
        d_theta = (grad_a[..., 2] + sign * (b_theta - energy * o_theta)) / denom
        d_phi = (grad_a[..., 3] + sign * b_phi) / denom
    return np.stack(np.broadcast_arrays(d_q, d_p, d_theta, d_phi), axis=-1)


def _check_point(params: ModelParams, point: FieldMatterPoint,
                 sector: ParitySector) -> StableExponent:
    if abs(math.cos(point.theta)) <= SINGULAR_RING_TOL:
        raise NearSingularDomainError(
            "SACS surface is not evaluated on the cos(theta) = 0 ring", "theta", point.theta)
    exponent = StableExponent.from_point(params, point)
    if sector is ParitySector.ODD and exponent.one_plus(-1) <= ODD_DEGENERACY_TOL:
        raise DegenerateStateError("odd SACS vanishes at this point",
                                   2.0 * exponent.one_plus(-1))
    return exponent


def sacs_norm_sq_inv(params: ModelParams, point: FieldMatterPoint,
                     sector: ParitySector) -> float:
    """Inverse squared normalization 2 (1 +/- exp(-2|alpha|^2) cos(theta)^N).

    Raises:
        DegenerateStateError: For the odd sector where the state vanishes
    """
    sector = ParitySector.parse(sector)
    value = 2.0 * StableExponent.from_point(params, point).one_plus(sector.sign)
    if sector is ParitySector.ODD and value <= 2.0 * ODD_DEGENERACY_TOL:
        raise DegenerateStateError("odd SACS vanishes at this point", value)
    return value


def sacs_energy(params: ModelParams, point: FieldMatterPoint,
                sector: ParitySector) -> float:
    """Total energy of the symmetry-adapted state at a point.

    Raises:
        NearSingularDomainError: If |cos(theta)| <= 1e-12
        DegenerateStateError: For the odd sector near the origin
    """
    sector = ParitySector.parse(sector)
    _check_point(params, point, sector)
    return float(sacs_energy_array(params, sector, point.q, point.p, point.theta, point.phi))


def sacs_gradient(params: ModelParams, point: FieldMatterPoint,
                  sector: ParitySector) -> np.ndarray:
    """Gradient (dE/dq, dE/dp, dE/dtheta, dE/dphi) of the total SAES energy."""
    sector = ParitySector.parse(sector)
    _check_point(params, point, sector)
    return np.asarray(
        sacs_gradient_array(params, sector, point.q, point.p, point.theta, point.phi),
        dtype=float,
    )


def sacs_stationarity_residual(params: ModelParams, q: float, z: float,
                               scaled: bool = False) -> np.ndarray:
    """Bracketed stationarity conditions of the even surface at p = 0, phi = 0.

    With O = exp(-q^2) z^N the brackets relate to the gradient by

        dE+/dq     = exp(-2 q^2) bracket_q     / (z   (1 + O)^2)
        dE+/dtheta = exp(-2 q^2) bracket_theta / (z^2 (1 + O)^2)

    Args:
        params: Model parameters
        q: Field quadrature
        z: cos(theta) in (0, 1]; z = 1 is the theta = 0 axis
        scaled: Return exp(-2 q^2) * bracket, which never overflows

    Raises:
        DomainError: If z is outside (0, 1]
    """
    if not 0.0 < z <= 1.0:
        raise DomainError("z = cos(theta) must lie in (0, 1]", "z", z)
    j = params.j
    gamma = params.gamma
    omega = params.omega_a
    n = params.n_atoms
    s = math.sqrt(1.0 - z * z)
    sq_j = math.sqrt(j)
    root = math.sqrt(j - j * z * z)
    overlap = float(weighted_power(q * q, z, n))  # exp(-q^2) z^(2j)

    bracket_q = (-q * z * overlap * overlap
                 + z * (q + 2.0 * root * gamma)
                 + 2.0 * overlap * (q ** 3 * z + z * root * gamma
                                    + 2.0 * q * q * z * root * gamma
                                    - j * q * (z * z - 1.0) * omega))
    bracket_theta = (-j * overlap * overlap * s * omega
                     + (2.0 * sq_j * q * z ** 3 * gamma + j * z * z * s * omega)
                     + overlap * sq_j * (2.0 * q * z ** 3 * gamma
                                         - 4.0 * j * q * z * (z * z - 1.0) * gamma
                                         + 2.0 * j ** 1.5 * s ** 3 * omega
                                         + sq_j * s * (2.0 * q * q * z + (z * z - 1.0) * omega)))
    residual = np.array([bracket_q, bracket_theta])
    if scaled:
        return residual
    try:
        growth = math.exp(2.0 * q * q)
    except OverflowError:
        growth = math.inf
    return residual * growth


def residual_to_gradient(params: ModelParams, q: float, z: float,
                         scaled_residual: np.ndarray) -> Tuple[float, float]:
    """Convert a scaled stationarity residual to (dE+/dq, dE+/dtheta)."""
    overlap = float(weighted_power(q * q, z, params.n_atoms))
    factor = (1.0 + overlap) ** 2
    return (float(scaled_residual[0] / (z * factor)),
            float(scaled_residual[1] / (z * z * factor)))


def sacs_at_mean_field_point(params: ModelParams, sector=ParitySector.EVEN) -> float:
    """SACS energy of one parity sector at the closed-form mean-field minimum (phi_c = 0).

    This is the earlier, non-variational use of the SACS: the coherent-state
    critical point is kept and only the parity is restored.

    Raises:
        DegenerateStateError: For the odd sector in the normal phase
    """
    critical = mean_field_critical_points(params)
    chosen = next((c for c in critical if c.phase is Phase.SUPERRADIANT and c.point.phi == 0.0),
                  critical[0])
    return sacs_energy(params, chosen.point, sector)
