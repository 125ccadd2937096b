"""Coupling sweeps over a variational surface or the exact ground state.

Each coupling is an independent work item and may run on a thread pool;
rows are assembled in grid order. Basin labels need the neighbouring
rows, so they are assigned afterwards in one sequential pass.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field, replace
from typing import Any, Dict, List, Optional, Sequence

from src.core.exceptions import BasinTrackingError, DickeSacsError
from src.core.model import ModelParams
from src.core.optimizer import (
    BasinLabel,
    LocalMinimum,
    SearchConfig,
    Surface,
    find_local_minima,
)
from src.core.sacs_surface import ParitySector

logger = logging.getLogger(__name__)

# Continuation sanity bound: for steps up to TRACKING_STEP a matched
# minimum may move at most TRACKING_MOVE in (q, theta).
TRACKING_STEP = 1e-3
TRACKING_MOVE = 0.2

# Relative energy difference below which two minima are degenerate.
TIE_RTOL = 1e-12


@dataclass
class SweepRow:
    """Result at one coupling.

    Attributes:
        gamma: Coupling of the row
        source: Surface (or exact) the row was computed on
        all_minima: Labelled minima, ascending energy (empty for exact rows)
        global_minimum: Lowest minimum, ties broken toward low_q
        per_atom_energy: Global (or exact ground) energy divided by N
        degenerate: Two minima within TIE_RTOL of each other
        diagnostic: Error text when the row could not be computed
        exact: Ground-state record for exact rows
        extras: Additional report columns keyed by name
    """
    gamma: float
    source: Surface
    all_minima: List[LocalMinimum] = field(default_factory=list)
    global_minimum: Optional[LocalMinimum] = None
    per_atom_energy: float = math.nan
    degenerate: bool = False
    diagnostic: Optional[str] = None
    exact: Any = None
    extras: Dict[str, float] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.diagnostic is None

    @property
    def photon_per_atom(self) -> float:
        if self.exact is not None:
            return self.exact.observables.photon_per_atom
        if self.global_minimum is not None:
            return self.global_minimum.order_params.photon_per_atom
        return math.nan

    @property
    def excited_fraction(self) -> float:
        if self.exact is not None:
            return self.exact.observables.excited_fraction
        if self.global_minimum is not None:
            return self.global_minimum.order_params.excited_fraction
        return math.nan


def _variational_row(params: ModelParams, surface: Surface, gamma: float,
                     search: SearchConfig) -> SweepRow:
    try:
        minima = find_local_minima(params.with_gamma(gamma), surface, search)
    except DickeSacsError as e:
        logger.warning("gamma=%.6g: %s: %s", gamma, type(e).__name__, e)
        return SweepRow(gamma, surface, diagnostic=f"{type(e).__name__}: {e}")
    if not minima:
        return SweepRow(gamma, surface, diagnostic="no minimum found")
    return SweepRow(gamma, surface, all_minima=minima)


def _exact_row(params: ModelParams, gamma: float, oracle, sector: ParitySector) -> SweepRow:
    from src.oracle.ground_state import ground_state

    try:
        record = ground_state(params.with_gamma(gamma), sector, oracle)
    except DickeSacsError as e:
        logger.warning("gamma=%.6g: %s: %s", gamma, type(e).__name__, e)
        return SweepRow(gamma, Surface.EXACT, diagnostic=f"{type(e).__name__}: {e}")
    return SweepRow(gamma, Surface.EXACT, per_atom_energy=record.energy / params.n_atoms,
                    exact=record)


def _nearest_label(minimum: LocalMinimum, prev_low: Optional[LocalMinimum],
                   prev_high: Optional[LocalMinimum]) -> BasinLabel:
    if prev_low is not None and prev_high is not None:
        if minimum.distance_to(prev_low) <= minimum.distance_to(prev_high):
            return BasinLabel.LOW_Q
        return BasinLabel.HIGH_Q
    if prev_high is not None:
        return BasinLabel.HIGH_Q
    return BasinLabel.LOW_Q


def label_rows(rows: Sequence[SweepRow], n_atoms: int) -> None:
    """Assign basin labels and global minima in place, in ascending gamma.

    With two or more minima the labels follow |q|. A lone minimum takes the
    label of the nearest basin seen in the previous labelled row.
    """
    prev: Dict[BasinLabel, LocalMinimum] = {}
    prev_gamma: Optional[float] = None
    for row in rows:
        if not row.all_minima:
            continue
        minima = row.all_minima
        if len(minima) >= 2:
            low = min(minima, key=lambda m: (m.abs_q, m.point.theta))
            labelled = [replace(m, basin_label=BasinLabel.LOW_Q if m is low else BasinLabel.HIGH_Q)
                        for m in minima]
        else:
            label = _nearest_label(minima[0], prev.get(BasinLabel.LOW_Q),
                                   prev.get(BasinLabel.HIGH_Q))
            labelled = [replace(minima[0], basin_label=label)]

        if prev_gamma is not None and row.gamma - prev_gamma <= TRACKING_STEP:
            for m in labelled:
                before = prev.get(m.basin_label)
                if before is not None and m.distance_to(before) > TRACKING_MOVE:
                    error = BasinTrackingError(f"{m.basin_label.value} basin jumped",
                                               row.gamma, [before.coords])
                    row.diagnostic = f"{type(error).__name__}: {error}"
                    logger.warning("%s", error)

        row.all_minima = labelled
        lowest = min(m.total_energy for m in labelled)
        tol = TIE_RTOL * max(1.0, abs(lowest))
        tied = [m for m in labelled if m.total_energy - lowest <= tol]
        row.degenerate = len(tied) > 1
        row.global_minimum = min(tied, key=lambda m: (m.basin_label is not BasinLabel.LOW_Q,
                                                      m.total_energy))
        row.per_atom_energy = row.global_minimum.total_energy / n_atoms

        for m in labelled:
            prev[m.basin_label] = m
        prev_gamma = row.gamma


def sweep(params: ModelParams, surface, gamma_grid: Sequence[float],
          search: Optional[SearchConfig] = None, oracle=None,
          max_workers: int = 1, sector=ParitySector.EVEN) -> List[SweepRow]:
    """One row per coupling of an ascending grid.

    Args:
        params: Model parameters (gamma is taken from the grid)
        surface: mean_field, sacs_even, sacs_odd or exact
        gamma_grid: Ascending couplings
        search: Multi-start settings for variational surfaces
        oracle: Truncation settings for exact rows
        max_workers: Thread-pool size; 1 runs sequentially
        sector: Parity sector of exact rows

    Per-coupling failures become row diagnostics; the sweep never aborts
    because of one row.
    """
    surface = Surface.parse(surface)
    sector = ParitySector.parse(sector)
    grid = [float(g) for g in gamma_grid]
    if any(b < a for a, b in zip(grid, grid[1:])):
        raise ValueError("gamma_grid must be sorted ascending")
    search = search or SearchConfig()

    def compute(gamma: float) -> SweepRow:
        if surface is Surface.EXACT:
            return _exact_row(params, gamma, oracle, sector)
        return _variational_row(params, surface, gamma, search)

    rows: List[Optional[SweepRow]] = [None] * len(grid)
    if max_workers <= 1 or len(grid) <= 1:
        for i, gamma in enumerate(grid):
            rows[i] = compute(gamma)
    else:
        with ThreadPoolExecutor(max_workers=max_workers) as executor:
            futures = {executor.submit(compute, gamma): i for i, gamma in enumerate(grid)}
            for future in as_completed(futures):
                rows[futures[future]] = future.result()

    done: List[SweepRow] = [row for row in rows if row is not None]
    if surface.is_variational:
        label_rows(done, params.n_atoms)
    logger.info("sweep %s: %d rows, %d with diagnostics", surface.value, len(done),
                sum(1 for r in done if not r.ok))
    return done
