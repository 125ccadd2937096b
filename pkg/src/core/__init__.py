"""Variational layer: model conventions, energy surfaces and minimization.

This package provides the mean-field and symmetry-adapted energy surfaces
of the Dicke model, the multi-start minimizer, the finite-N critical
coupling search and coupling sweeps.
"""

from src.core.exceptions import (
    DickeSacsError,
    DomainError,
    PoleError,
    NearSingularDomainError,
    DegenerateStateError,
    NumericalError,
    RefinementError,
    NoTransitionError,
    BasinTrackingError,
    TruncationConvergenceError,
    InsufficientCutoffError,
    LevelCrossingError,
    DimensionMismatchError,
    ConfigError,
)
from src.core.model import ModelParams, FieldMatterPoint, Phase, gamma_c_tdl
from src.core.mean_field import mean_field_energy, mean_field_gradient, mean_field_critical_points
from src.core.sacs_surface import ParitySector, StableExponent, sacs_energy, sacs_gradient
from src.core.optimizer import (
    Surface,
    BasinLabel,
    SearchConfig,
    LocalMinimum,
    find_local_minima,
    order_parameters,
    surface_grid,
)
from src.core.critical import CriticalResult, critical_coupling
from src.core.sweep import SweepRow, sweep

__all__ = [
    'ModelParams',
    'FieldMatterPoint',
    'Phase',
    'gamma_c_tdl',
    'mean_field_energy',
    'mean_field_gradient',
    'mean_field_critical_points',
    'ParitySector',
    'StableExponent',
    'sacs_energy',
    'sacs_gradient',
    'Surface',
    'BasinLabel',
    'SearchConfig',
    'LocalMinimum',
    'find_local_minima',
    'order_parameters',
    'surface_grid',
    'CriticalResult',
    'critical_coupling',
    'SweepRow',
    'sweep',
    'DickeSacsError',
    'DomainError',
    'PoleError',
    'NearSingularDomainError',
    'DegenerateStateError',
    'NumericalError',
    'RefinementError',
    'NoTransitionError',
    'BasinTrackingError',
    'TruncationConvergenceError',
    'InsufficientCutoffError',
    'LevelCrossingError',
    'DimensionMismatchError',
    'ConfigError',
]
