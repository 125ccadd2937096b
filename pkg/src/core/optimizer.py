"""Multi-start local minimization of the variational energy surfaces.

Minima live in the p = 0, phi = 0 plane. The search works on the symmetric
extension theta in (-pi/2, pi/2), where E(q, theta) = E(-q, -theta), and
every minimum is canonicalized to theta >= 0 before it is reported.

All starts of the uniform grid are refined together as numpy arrays:
damped Newton with a central-difference Hessian of the analytic gradient,
falling back to steepest descent wherever that Hessian is not positive
definite, with Armijo backtracking in both cases.
"""

import logging
import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import List, Optional, Sequence, Tuple

import numpy as np

from src.core.exceptions import RefinementError
from src.core.mean_field import coherent_energy_array, coherent_gradient_array
from src.core.model import FieldMatterPoint, ModelParams
from src.core.sacs_surface import (
    SINGULAR_RING_TOL,
    ParitySector,
    sacs_energy_array,
    sacs_gradient_array,
    weighted_power,
)

logger = logging.getLogger(__name__)

HALF_PI = 0.5 * math.pi

# (q, theta) spacing of the start cluster placed around each seed.
SEED_OFFSETS = (0.25, 0.1)


class Surface(Enum):
    """Energy surface (or exact source) a result was computed on."""
    MEAN_FIELD = "mean_field"
    SACS_EVEN = "sacs_even"
    SACS_ODD = "sacs_odd"
    EXACT = "exact"

    @property
    def sector(self) -> Optional[ParitySector]:
        if self is Surface.SACS_EVEN:
            return ParitySector.EVEN
        if self is Surface.SACS_ODD:
            return ParitySector.ODD
        return None

    @property
    def is_variational(self) -> bool:
        return self is not Surface.EXACT

    @classmethod
    def for_sector(cls, sector) -> 'Surface':
        sector = ParitySector.parse(sector)
        return cls.SACS_EVEN if sector is ParitySector.EVEN else cls.SACS_ODD

    @classmethod
    def parse(cls, value) -> 'Surface':
        if isinstance(value, cls):
            return value
        return cls(str(value).lower())


class BasinLabel(Enum):
    """Which of the two competing basins a minimum belongs to."""
    LOW_Q = "low_q"
    HIGH_Q = "high_q"


@dataclass(frozen=True)
class SearchConfig:
    """Multi-start search settings.

    Attributes:
        grid_q: Number of starts along q
        grid_theta: Number of starts along theta
        q_max_factor: q range is +/- q_max_factor * sqrt(N) * gamma
        q_max_floor: Smallest q range used (gamma = 0 would collapse it)
        theta_margin: Distance kept from theta = pi/2
        grad_tol: Gradient norm a refined point must reach
        dedup_tol: Minima closer than this in (q, theta) are merged
        fd_step: Central-difference step of the numerical Hessian
        max_iterations: Newton iteration cap per start
    """
    grid_q: int = 41
    grid_theta: int = 41
    q_max_factor: float = 3.0
    q_max_floor: float = 1.0
    theta_margin: float = 1e-6
    grad_tol: float = 1e-8
    dedup_tol: float = 1e-6
    fd_step: float = 1e-5
    max_iterations: int = 200

    def q_max(self, params: ModelParams) -> float:
        return max(self.q_max_factor * math.sqrt(params.n_atoms) * params.gamma,
                   self.q_max_floor)

    def theta_max(self) -> float:
        return HALF_PI - self.theta_margin


@dataclass(frozen=True)
class OrderParameters:
    """Order parameters attached to a minimum.

    photon_per_atom = (q^2 + p^2) / (2N) and excited_fraction =
    (1 - cos(theta)) / 2 are the coherent-state values; half_q and
    cos_theta are the raw pair (q/2, cos(theta)) as quoted in the
    literature.
    """
    photon_per_atom: float
    excited_fraction: float
    half_q: float
    cos_theta: float

    def as_pair(self) -> Tuple[float, float]:
        return (self.photon_per_atom, self.excited_fraction)


@dataclass(frozen=True)
class LocalMinimum:
    """Refined local minimum in the p = 0, phi = 0 plane."""
    point: FieldMatterPoint
    total_energy: float
    hessian_eigs: Tuple[float, float]
    order_params: OrderParameters
    gradient_norm: float
    surface: Surface
    basin_label: Optional[BasinLabel] = None

    @property
    def abs_q(self) -> float:
        return abs(self.point.q)

    @property
    def coords(self) -> Tuple[float, float]:
        return (self.point.q, self.point.theta)

    def distance_to(self, other: 'LocalMinimum') -> float:
        return math.hypot(self.point.q - other.point.q, self.point.theta - other.point.theta)

    def per_atom_energy(self, params: ModelParams) -> float:
        return self.total_energy / params.n_atoms


def order_parameters(params: ModelParams, minimum) -> OrderParameters:
    """Photon number per atom and excited fraction of a minimum.

    Accepts a LocalMinimum or a bare FieldMatterPoint.
    """
    point = minimum.point if hasattr(minimum, 'point') else minimum
    cos_theta = math.cos(point.theta)
    return OrderParameters(
        photon_per_atom=point.r_sq / (2.0 * params.n_atoms),
        excited_fraction=0.5 * (1.0 - cos_theta),
        half_q=0.5 * point.q,
        cos_theta=cos_theta,
    )


def surface_energy(params: ModelParams, surface: Surface, q, theta):
    """Total energy of a variational surface on the p = 0, phi = 0 plane."""
    if surface is Surface.MEAN_FIELD:
        return coherent_energy_array(params, q, 0.0, theta, 0.0)
    return sacs_energy_array(params, surface.sector, q, 0.0, theta, 0.0)


def surface_gradient(params: ModelParams, surface: Surface, q, theta):
    """(dE/dq, dE/dtheta) of a variational surface, stacked on the last axis."""
    if surface is Surface.MEAN_FIELD:
        full = coherent_gradient_array(params, q, 0.0, theta, 0.0)
    else:
        full = sacs_gradient_array(params, surface.sector, q, 0.0, theta, 0.0)
    return full[..., (0, 2)]


def numerical_hessian(params: ModelParams, surface: Surface, q, theta, step: float):
    """Symmetrized central-difference Hessian in (q, theta), shape (..., 2, 2)."""
    dq = (surface_gradient(params, surface, q + step, theta)
          - surface_gradient(params, surface, q - step, theta)) / (2.0 * step)
    dt = (surface_gradient(params, surface, q, theta + step)
          - surface_gradient(params, surface, q, theta - step)) / (2.0 * step)
    off = 0.5 * (dq[..., 1] + dt[..., 0])
    row0 = np.stack([dq[..., 0], off], axis=-1)
    row1 = np.stack([off, dt[..., 1]], axis=-1)
    return np.stack([row0, row1], axis=-2)


def _valid_start_mask(params: ModelParams, surface: Surface, q, theta):
    mask = np.abs(np.cos(theta)) > SINGULAR_RING_TOL
    if surface is Surface.SACS_ODD:
        overlap = weighted_power(q * q, np.cos(theta), params.n_atoms)
        mask &= overlap < 1.0 - 1e-6
    return mask


def _refine(params: ModelParams, surface: Surface, q: np.ndarray, theta: np.ndarray,
            search: SearchConfig) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Damped Newton from every start; returns (q, theta, gradient norm)."""
    q = q.astype(float).copy()
    theta = theta.astype(float).copy()
    limit = search.theta_max()
    inner_tol = 1e-3 * search.grad_tol
    active = np.ones(q.size, dtype=bool)
    dropped = np.zeros(q.size, dtype=bool)

    for iteration in range(search.max_iterations):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        qa, ta = q[idx], theta[idx]
        grad = surface_gradient(params, surface, qa, ta)
        gnorm = np.hypot(grad[:, 0], grad[:, 1])
        finished = (gnorm < inner_tol) | ~np.isfinite(gnorm)
        active[idx[finished]] = False
        keep = ~finished
        idx, qa, ta, grad = idx[keep], qa[keep], ta[keep], grad[keep]
        if idx.size == 0:
            break

        hess = numerical_hessian(params, surface, qa, ta, search.fd_step)
        h00, h01, h11 = hess[:, 0, 0], hess[:, 0, 1], hess[:, 1, 1]
        det = h00 * h11 - h01 * h01
        positive = (h00 > 0) & (det > 0) & np.isfinite(det)
        with np.errstate(divide='ignore', invalid='ignore'):
            newton_q = -(h11 * grad[:, 0] - h01 * grad[:, 1]) / det
            newton_t = -(h00 * grad[:, 1] - h01 * grad[:, 0]) / det
        step_q = np.where(positive, newton_q, -grad[:, 0])
        step_t = np.where(positive, newton_t, -grad[:, 1])
        slope = grad[:, 0] * step_q + grad[:, 1] * step_t

        energy0 = surface_energy(params, surface, qa, ta)
        slack = 8.0 * np.finfo(float).eps * np.maximum(1.0, np.abs(energy0))
        scale = np.ones(idx.size)
        accepted = np.zeros(idx.size, dtype=bool)
        new_q, new_t = qa.copy(), ta.copy()
        for _ in range(60):
            trial_q = qa + scale * step_q
            trial_t = np.clip(ta + scale * step_t, -limit, limit)
            with np.errstate(invalid='ignore', over='ignore'):
                trial_e = surface_energy(params, surface, trial_q, trial_t)
            ok = (np.isfinite(trial_e)
                  & (trial_e <= energy0 + 1e-4 * scale * slope + slack)
                  & ~accepted)
            new_q[ok], new_t[ok] = trial_q[ok], trial_t[ok]
            accepted |= ok
            if accepted.all():
                break
            scale = np.where(accepted, scale, 0.5 * scale)

        moved = np.hypot(new_q - qa, new_t - ta)
        q[idx], theta[idx] = new_q, new_t
        stalled = ~accepted | (moved < 1e-15)
        active[idx[stalled]] = False

        if iteration % 8 == 7:
            live = np.flatnonzero(active)
            if live.size > 1:
                key = np.round(np.stack([q[live], theta[live]], axis=1), 7)
                _, first = np.unique(key, axis=0, return_index=True)
                duplicate = np.ones(live.size, dtype=bool)
                duplicate[first] = False
                active[live[duplicate]] = False
                dropped[live[duplicate]] = True

    grad = surface_gradient(params, surface, q, theta)
    gnorm = np.hypot(grad[:, 0], grad[:, 1])
    gnorm[dropped] = np.inf
    return q, theta, gnorm


def _canonical(q: float, theta: float) -> Tuple[float, float]:
    if theta < 0:
        q, theta = -q, -theta
    if theta == 0.0:
        q = abs(q)
    return q, theta


def _build_minimum(params: ModelParams, surface: Surface, q: float, theta: float,
                   search: SearchConfig) -> Optional[LocalMinimum]:
    q, theta = _canonical(q, theta)
    grad = surface_gradient(params, surface, np.array([q]), np.array([theta]))[0]
    gnorm = float(math.hypot(grad[0], grad[1]))
    hess = numerical_hessian(params, surface, np.array([q]), np.array([theta]), search.fd_step)[0]
    eigs = np.linalg.eigvalsh(hess)
    if not (eigs[0] > 0 and gnorm < search.grad_tol):
        return None
    point = FieldMatterPoint(q, 0.0, theta, 0.0)
    energy = float(surface_energy(params, surface, q, theta))
    return LocalMinimum(
        point=point,
        total_energy=energy,
        hessian_eigs=(float(eigs[0]), float(eigs[1])),
        order_params=order_parameters(params, point),
        gradient_norm=gnorm,
        surface=surface,
    )


def label_basins(minima: Sequence[LocalMinimum]) -> List[LocalMinimum]:
    """Tag the smallest-|q| minimum low_q and the others high_q.

    A lone minimum is returned unlabelled; only continuation in gamma can
    tell which basin it belongs to.
    """
    if len(minima) < 2:
        return list(minima)
    smallest = min(range(len(minima)), key=lambda i: (minima[i].abs_q, minima[i].point.theta))
    return [replace(m, basin_label=BasinLabel.LOW_Q if i == smallest else BasinLabel.HIGH_Q)
            for i, m in enumerate(minima)]


def _variational(surface) -> Surface:
    surface = Surface.parse(surface)
    if not surface.is_variational:
        raise ValueError("find_local_minima needs a variational surface")
    return surface


def find_local_minima(params: ModelParams, surface, search: Optional[SearchConfig] = None
                      ) -> List[LocalMinimum]:
    """All distinct local minima of a variational surface.

    Returns minima with gradient norm below search.grad_tol and a positive
    definite Hessian, deduplicated, sorted by ascending total energy. An
    empty list means every converged start ended on a saddle.

    Raises:
        RefinementError: If no start converged at all
    """
    surface = _variational(surface)
    search = search or SearchConfig()
    if search.grid_q < 1 or search.grid_theta < 1:
        raise ValueError("search grid must be non-empty")

    q_axis = np.linspace(-search.q_max(params), search.q_max(params), search.grid_q)
    t_axis = np.linspace(0.0, search.theta_max(), search.grid_theta)
    q0, t0 = (a.ravel() for a in np.meshgrid(q_axis, t_axis))
    valid = _valid_start_mask(params, surface, q0, t0)
    return _collect_minima(params, surface, q0[valid], t0[valid], search)


def minima_near(params: ModelParams, surface, seeds: Sequence[FieldMatterPoint],
                search: Optional[SearchConfig] = None) -> List[LocalMinimum]:
    """Local minima reached from a 3 x 3 cluster of starts around each seed.

    The cluster spacing is SEED_OFFSETS, so a basin that moved slightly
    since its seed was found is still reached. Basins far from every seed
    are not searched.

    Raises:
        RefinementError: If no start converged at all
    """
    surface = _variational(surface)
    search = search or SearchConfig()
    dq, dt = SEED_OFFSETS
    starts = [(seed.q + i * dq, seed.theta + k * dt)
              for seed in seeds for i in (-1, 0, 1) for k in (-1, 0, 1)]
    if not starts:
        return []
    q0 = np.array([s[0] for s in starts])
    t0 = np.clip(np.array([s[1] for s in starts]), 0.0, search.theta_max())
    valid = _valid_start_mask(params, surface, q0, t0)
    return _collect_minima(params, surface, q0[valid], t0[valid], search)


def _collect_minima(params: ModelParams, surface: Surface, q0: np.ndarray, t0: np.ndarray,
                    search: SearchConfig) -> List[LocalMinimum]:
    """Refine the starts and return the deduplicated, labelled true minima."""
    q, theta, gnorm = _refine(params, surface, q0, t0, search)
    converged = np.flatnonzero(gnorm < search.grad_tol)
    if converged.size == 0:
        finite = gnorm[np.isfinite(gnorm)]
        best = float(finite.min()) if finite.size else math.inf
        raise RefinementError("no start converged to a stationary point", best, int(q0.size))

    minima: List[LocalMinimum] = []
    for i in converged[np.argsort(gnorm[converged], kind='stable')]:
        candidate = _build_minimum(params, surface, float(q[i]), float(theta[i]), search)
        if candidate is None:
            continue
        duplicate = next((k for k, m in enumerate(minima)
                          if m.distance_to(candidate) <= search.dedup_tol), None)
        if duplicate is None:
            minima.append(candidate)
        elif candidate.total_energy < minima[duplicate].total_energy:
            minima[duplicate] = candidate

    minima.sort(key=lambda m: (m.total_energy, m.abs_q))
    logger.debug("%s gamma=%.6g: %d minima from %d starts",
                 surface.value, params.gamma, len(minima), q0.size)
    return label_basins(minima)


@dataclass(frozen=True)
class Section:
    """1-D cut of a surface along the straight line through two minima."""
    q: np.ndarray
    theta: np.ndarray
    energy: np.ndarray


def two_minima_section(params: ModelParams, surface, first: LocalMinimum,
                       second: LocalMinimum, samples: int = 201,
                       extend: float = 0.5) -> Section:
    """Energy along the line theta(q) through two minima.

    The line is extended by `extend` times the separation beyond each
    minimum. When both minima share q the line is parametrized by theta.
    """
    surface = Surface.parse(surface)
    (q1, t1), (q2, t2) = first.coords, second.coords
    s = np.linspace(-extend, 1.0 + extend, samples)
    q = q1 + s * (q2 - q1)
    theta = t1 + s * (t2 - t1)
    with np.errstate(invalid='ignore', divide='ignore'):
        energy = surface_energy(params, surface, q, theta)
    energy = np.where(np.abs(np.cos(theta)) > SINGULAR_RING_TOL, energy, np.nan)
    return Section(q=q, theta=theta, energy=energy)


@dataclass(frozen=True)
class SurfaceGrid:
    """Energy grid over (q, theta), rows indexed by theta and columns by q.

    Attributes:
        q_values: Column coordinates
        theta_values: Row coordinates
        energies: Total energies, NaN in masked cells
        mask: True where a cell lies outside the valid domain
        minima: Refined minima of the surface
        grid_minima: (row, column) of cells lower than all neighbours
        section: Cut through the two deepest minima, when there are two
    """
    q_values: np.ndarray
    theta_values: np.ndarray
    energies: np.ndarray
    mask: np.ndarray
    minima: List[LocalMinimum]
    grid_minima: List[Tuple[int, int]]
    section: Optional[Section] = None


def _discrete_minima(energies: np.ndarray) -> List[Tuple[int, int]]:
    padded = np.pad(np.where(np.isnan(energies), np.inf, energies), 1, constant_values=np.inf)
    core = padded[1:-1, 1:-1]
    lower = np.isfinite(core)
    rows, cols = core.shape
    for dr in (-1, 0, 1):
        for dc in (-1, 0, 1):
            if dr == 0 and dc == 0:
                continue
            lower &= core <= padded[1 + dr:1 + dr + rows, 1 + dc:1 + dc + cols]
    return [(int(r), int(c)) for r, c in zip(*np.nonzero(lower))]


def surface_grid(params: ModelParams, surface, q_range: Tuple[float, float],
                 theta_range: Tuple[float, float], resolution: Tuple[int, int],
                 search: Optional[SearchConfig] = None,
                 section_samples: int = 201) -> SurfaceGrid:
    """Tabulate a surface on a rectangular (q, theta) grid.

    Cells on the singular ring, or where the odd state vanishes, are masked
    rather than aborting. The refined minima and the two-minima section are
    attached for plotting.
    """
    surface = Surface.parse(surface)
    q_lo, q_hi = q_range
    t_lo, t_hi = theta_range
    n_q, n_t = resolution
    if q_lo > q_hi or t_lo > t_hi or n_q < 1 or n_t < 1:
        raise ValueError("grid ranges must be ordered and the resolution positive")
    q_values = np.linspace(q_lo, q_hi, n_q)
    theta_values = np.linspace(t_lo, t_hi, n_t)
    q_mesh, t_mesh = np.meshgrid(q_values, theta_values)
    with np.errstate(invalid='ignore', divide='ignore', over='ignore'):
        energies = np.asarray(surface_energy(params, surface, q_mesh, t_mesh), dtype=float)
    mask = ~_valid_start_mask(params, surface, q_mesh, t_mesh) | ~np.isfinite(energies)
    energies = np.where(mask, np.nan, energies)

    minima = find_local_minima(params, surface, search)
    section = None
    if len(minima) >= 2:
        section = two_minima_section(params, surface, minima[0], minima[1],
                                     samples=section_samples)
    return SurfaceGrid(q_values, theta_values, energies, mask, minima,
                       _discrete_minima(energies), section)
