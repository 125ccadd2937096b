"""Mean-field (unprojected coherent-state) energy surface.

Per-atom surface:

    E(q, p, theta, phi) = (p^2 + q^2) / (2N) - (omega_a / 2) cos(theta)
                          + sqrt(2) gamma / sqrt(N) * q sin(theta) cos(phi)

The array helpers work on the total energy N * E and accept numpy arrays
so the optimizer can evaluate whole grids of starts at once.
"""

import math
import sys
from typing import List

import numpy as np

from src.core.model import (
    FieldMatterPoint,
    MeanFieldCritical,
    ModelParams,
    Phase,
    gamma_c_tdl,
)

# Relative distance to gamma_c treated as the degenerate (x = 1) case.
DEGENERACY_EPS = 4.0 * sys.float_info.epsilon


def coherent_energy_array(params: ModelParams, q, p, theta, phi):
    """Total coherent-state energy N * E for broadcastable arrays."""
    n = params.n_atoms
    coupling = math.sqrt(2.0 * n) * params.gamma
    return (0.5 * (q * q + p * p)
            - 0.5 * n * params.omega_a * np.cos(theta)
            + coupling * q * np.sin(theta) * np.cos(phi))


def coherent_gradient_array(params: ModelParams, q, p, theta, phi):
    """Partials of the total coherent energy, stacked on the last axis."""
    n = params.n_atoms
    coupling = math.sqrt(2.0 * n) * params.gamma
    sin_t, cos_t = np.sin(theta), np.cos(theta)
    sin_f, cos_f = np.sin(phi), np.cos(phi)
    d_q = q + coupling * sin_t * cos_f
    d_p = p
    d_theta = 0.5 * n * params.omega_a * sin_t + coupling * q * cos_t * cos_f
    d_phi = -coupling * q * sin_t * sin_f
    return np.stack(np.broadcast_arrays(d_q, d_p, d_theta, d_phi), axis=-1)


def mean_field_energy(params: ModelParams, point: FieldMatterPoint) -> float:
    """Per-atom mean-field energy at a point."""
    total = coherent_energy_array(params, point.q, point.p, point.theta, point.phi)
    return float(total) / params.n_atoms


def coherent_energy_total(params: ModelParams, point: FieldMatterPoint) -> float:
    """Total coherent-state energy, N times mean_field_energy."""
    return float(coherent_energy_array(params, point.q, point.p, point.theta, point.phi))


def mean_field_gradient(params: ModelParams, point: FieldMatterPoint) -> np.ndarray:
    """Gradient (dE/dq, dE/dp, dE/dtheta, dE/dphi) of the per-atom surface."""
    grad = coherent_gradient_array(params, point.q, point.p, point.theta, point.phi)
    return np.asarray(grad, dtype=float) / params.n_atoms


def _superradiant_pair(params: ModelParams, degenerate: bool) -> List[MeanFieldCritical]:
    gamma_c = gamma_c_tdl(params)
    n = params.n_atoms
    ratio_sq = (gamma_c / params.gamma) ** 2
    theta_c = math.acos(min(ratio_sq, 1.0))
    q_magnitude = (2.0 * math.sqrt(params.j) * params.gamma
                   * math.sqrt(max(1.0 - ratio_sq ** 2, 0.0)))
    x = params.gamma / gamma_c
    total = -n * gamma_c ** 2 * x ** 2 * (1.0 + x ** -4)
    pair = []
    for phi_c, q_c in ((0.0, -q_magnitude), (math.pi, q_magnitude)):
        point = FieldMatterPoint(q_c, 0.0, theta_c, phi_c)
        pair.append(MeanFieldCritical(point, total, total / n, Phase.SUPERRADIANT, degenerate))
    return pair


def mean_field_critical_points(params: ModelParams) -> List[MeanFieldCritical]:
    """Closed-form minima of the mean-field surface.

    Below gamma_c the single normal point at the origin; above it the
    superradiant pair (phi_c = 0 with q_c < 0, and its phi_c = pi partner).
    Within machine epsilon of gamma_c both branches are returned with the
    degenerate flag set.
    """
    gamma_c = gamma_c_tdl(params)
    n = params.n_atoms
    normal_energy = -2.0 * n * gamma_c ** 2
    degenerate = abs(params.gamma - gamma_c) <= DEGENERACY_EPS * gamma_c
    normal = MeanFieldCritical(
        FieldMatterPoint(0.0, 0.0, 0.0, 0.0), normal_energy, normal_energy / n,
        Phase.NORMAL, degenerate,
    )
    if degenerate:
        return [normal, _superradiant_pair(params, True)[0]]
    if params.gamma < gamma_c:
        return [normal]
    return _superradiant_pair(params, False)
