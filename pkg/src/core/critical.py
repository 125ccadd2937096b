"""Finite-N critical coupling from the equal-depth condition.

For finite N the even SACS surface has two competing basins near the
transition: one at small |q| and one at large |q|. The critical coupling
is where they have the same depth; it is located by bisection on which
basin holds the global minimum.

Only the bracket ends get the full multi-start grid. Midpoints are
searched from clusters around the basin minima of the current bracket
ends, falling back to the grid when no seeded start converges.
"""

import logging
import math
from dataclasses import dataclass, replace
from typing import List, Optional, Sequence, Tuple

from src.core.exceptions import BasinTrackingError, NoTransitionError, RefinementError
from src.core.model import ModelParams, gamma_c_tdl
from src.core.optimizer import (
    BasinLabel,
    LocalMinimum,
    SearchConfig,
    Surface,
    find_local_minima,
    minima_near,
)
from src.core.sacs_surface import ParitySector

logger = logging.getLogger(__name__)

# Default bracket widths above gamma_c in the thermodynamic limit.
DEFAULT_WIDTHS = (0.3, 0.6)

# A lone minimum must be this much closer to one reference than the other.
AMBIGUITY_RATIO = 0.9


@dataclass(frozen=True)
class CriticalResult:
    """Located equal-depth coupling.

    Attributes:
        gamma_c: Midpoint of the final bracket
        minima_at_crossing: (low_q, high_q) minima at gamma_c
        energy_gap_at_tol: E(low_q) - E(high_q) at gamma_c
        bracket: Final (gamma_lo, gamma_hi)
        order_param_jump: |change| in (photon_per_atom, excited_fraction)
        gap_tolerance: 10 * tol * |d(E_low - E_high)/d gamma| from the bracket
        n_atoms: Atom number of the run
    """
    gamma_c: float
    minima_at_crossing: Tuple[LocalMinimum, LocalMinimum]
    energy_gap_at_tol: float
    bracket: Tuple[float, float]
    order_param_jump: Tuple[float, float]
    gap_tolerance: float
    n_atoms: int


@dataclass
class _BasinState:
    """Basin bookkeeping at one coupling."""
    gamma: float
    minima: List[LocalMinimum]
    low: Optional[LocalMinimum]
    high: Optional[LocalMinimum]
    high_is_global: bool

    @property
    def delta(self) -> Optional[float]:
        if self.low is None or self.high is None:
            return None
        return self.low.total_energy - self.high.total_energy


def split_basins(minima: Sequence[LocalMinimum]) -> Tuple[LocalMinimum, LocalMinimum]:
    """(smallest-|q|, largest-|q|) pair out of two or more minima."""
    ordered = sorted(minima, key=lambda m: (m.abs_q, m.point.theta))
    return (replace(ordered[0], basin_label=BasinLabel.LOW_Q),
            replace(ordered[-1], basin_label=BasinLabel.HIGH_Q))


class _BasinBisector:
    """Bisection state: the bracket plus the basin references at its ends."""

    def __init__(self, params: ModelParams, surface: Surface, search: SearchConfig):
        self.params = params
        self.surface = surface
        self.search = search
        self.ref_low: Optional[LocalMinimum] = None
        self.ref_high: Optional[LocalMinimum] = None

    def minima(self, gamma: float) -> List[LocalMinimum]:
        return find_local_minima(self.params.with_gamma(gamma), self.surface, self.search)

    def seeded_minima(self, gamma: float) -> List[LocalMinimum]:
        """Minima near the current basin references; the full grid when none is found."""
        seeds = [m.point for m in (self.ref_low, self.ref_high) if m is not None]
        try:
            minima = minima_near(self.params.with_gamma(gamma), self.surface, seeds, self.search)
        except RefinementError:
            minima = []
        return minima or self.minima(gamma)

    def basin_state(self, gamma: float) -> _BasinState:
        minima = self.seeded_minima(gamma)
        if not minima:
            raise BasinTrackingError("no minimum found", gamma, self._references())
        if len(minima) >= 2:
            low, high = split_basins(minima)
            return _BasinState(gamma, minima, low, high, high.total_energy < low.total_energy)
        return self._classify_single(gamma, minima)

    def _classify_single(self, gamma: float, minima: List[LocalMinimum]) -> _BasinState:
        only = minima[0]
        if self.ref_low is None or self.ref_high is None:
            raise BasinTrackingError("cannot classify a lone minimum without references",
                                     gamma, self._references())
        to_low = only.distance_to(self.ref_low)
        to_high = only.distance_to(self.ref_high)
        if min(to_low, to_high) > AMBIGUITY_RATIO * max(to_low, to_high):
            raise BasinTrackingError("lone minimum is equidistant from both basins",
                                     gamma, self._references())
        if to_low < to_high:
            low = replace(only, basin_label=BasinLabel.LOW_Q)
            return _BasinState(gamma, minima, low, None, False)
        high = replace(only, basin_label=BasinLabel.HIGH_Q)
        return _BasinState(gamma, minima, None, high, True)

    def _references(self) -> List[Tuple[float, float]]:
        return [m.coords for m in (self.ref_low, self.ref_high) if m is not None]

    def run(self, lo: float, hi: float, tol: float) -> CriticalResult:
        bracket = (lo, hi)
        lo_minima = self.minima(lo)
        hi_minima = self.minima(hi)
        if not lo_minima or not hi_minima:
            raise NoTransitionError("no minimum at a bracket end", bracket)

        # The global minimum at each end fixes the reference of its basin.
        lo_state = self._endpoint(lo, lo_minima, want_high=False)
        hi_state = self._endpoint(hi, hi_minima, want_high=True)
        if lo_state.high_is_global or not hi_state.high_is_global:
            raise NoTransitionError("global minimum stays in one basin", bracket)
        self.ref_low, self.ref_high = lo_state.low, hi_state.high
        if self.ref_low.distance_to(self.ref_high) <= self.search.dedup_tol:
            raise NoTransitionError("both bracket ends share one basin", bracket)

        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            state = self.basin_state(mid)
            if state.high_is_global:
                hi, hi_state = mid, state
                self.ref_high = state.high
            else:
                lo, lo_state = mid, state
                self.ref_low = state.low
            logger.debug("bisect N=%d: [%.8f, %.8f]", self.params.n_atoms, lo, hi)

        gamma_c = 0.5 * (lo + hi)
        centre = self.seeded_minima(gamma_c)
        if len(centre) < 2:
            centre = self.minima(gamma_c)
        if len(centre) < 2:
            raise NoTransitionError("only one basin at the crossing", (lo, hi))
        low, high = split_basins(centre)
        gap = low.total_energy - high.total_energy
        return CriticalResult(
            gamma_c=gamma_c,
            minima_at_crossing=(low, high),
            energy_gap_at_tol=gap,
            bracket=(lo, hi),
            order_param_jump=(
                abs(high.order_params.photon_per_atom - low.order_params.photon_per_atom),
                abs(high.order_params.excited_fraction - low.order_params.excited_fraction),
            ),
            gap_tolerance=self._gap_tolerance(lo_state, hi_state, tol),
            n_atoms=self.params.n_atoms,
        )

    def _endpoint(self, gamma: float, minima: List[LocalMinimum], want_high: bool) -> _BasinState:
        if len(minima) >= 2:
            low, high = split_basins(minima)
            return _BasinState(gamma, minima, low, high, high.total_energy < low.total_energy)
        only = minima[0]
        label = BasinLabel.HIGH_Q if want_high else BasinLabel.LOW_Q
        tagged = replace(only, basin_label=label)
        if want_high:
            return _BasinState(gamma, minima, None, tagged, True)
        return _BasinState(gamma, minima, tagged, None, False)

    def _gap_tolerance(self, lo_state: _BasinState, hi_state: _BasinState, tol: float) -> float:
        if lo_state.delta is None or hi_state.delta is None or hi_state.gamma == lo_state.gamma:
            return math.inf
        slope = (hi_state.delta - lo_state.delta) / (hi_state.gamma - lo_state.gamma)
        return 10.0 * tol * abs(slope)


def default_brackets(params: ModelParams) -> List[Tuple[float, float]]:
    """[gamma_c_tdl, gamma_c_tdl + 0.3], then the once-widened +0.6."""
    lo = gamma_c_tdl(params)
    return [(lo, lo + width) for width in DEFAULT_WIDTHS]


def critical_coupling(params: ModelParams, sector=ParitySector.EVEN,
                      bracket: Optional[Tuple[float, float]] = None,
                      tol: float = 1e-4,
                      search: Optional[SearchConfig] = None) -> CriticalResult:
    """Coupling where the low-|q| and high-|q| basins have equal depth.

    Args:
        params: Model parameters (gamma is ignored)
        sector: Parity sector of the SACS surface
        bracket: (gamma_lo, gamma_hi); the default is tried at width 0.3,
            then once at 0.6
        tol: Final bracket width
        search: Multi-start settings for every minimization

    Raises:
        NoTransitionError: If no bracket shows the global minimum changing basin
        BasinTrackingError: If a lone minimum cannot be assigned to a basin
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    surface = Surface.for_sector(sector)
    search = search or SearchConfig()
    brackets = [bracket] if bracket is not None else default_brackets(params)
    last_error: Optional[NoTransitionError] = None
    for lo, hi in brackets:
        if not lo < hi:
            raise ValueError(f"bracket must satisfy lo < hi, got ({lo}, {hi})")
        try:
            result = _BasinBisector(params, surface, search).run(lo, hi, tol)
        except NoTransitionError as e:
            logger.info("N=%d: %s", params.n_atoms, e)
            last_error = e
            continue
        logger.info("N=%d: gamma_c = %.6f (gap %.3e)", params.n_atoms,
                    result.gamma_c, result.energy_gap_at_tol)
        return result
    assert last_error is not None
    raise last_error
