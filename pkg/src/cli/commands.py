"""Command implementations of the dicke-sacs CLI.

Each ``build_*`` function turns a RunConfig into a ResultReport without
touching the filesystem; each ``cmd_*`` function builds the report,
writes it and returns the process exit code:

    0  success
    1  configuration error
    2  numerical or domain failure
    3  failed validation
"""

import math
import sys
from concurrent.futures import ThreadPoolExecutor, as_completed
from pathlib import Path
from typing import Any, Callable, List, Optional, Sequence, TextIO, Tuple

from src import __version__
from src.config.config_models import RunConfig
from src.core.critical import CriticalResult, critical_coupling
from src.core.exceptions import ConfigError, DegenerateStateError, DickeSacsError, NumericalError
from src.core.model import ModelParams, gamma_c_tdl
from src.core.optimizer import LocalMinimum, Surface, find_local_minima, surface_grid
from src.core.sacs_surface import sacs_at_mean_field_point
from src.core.sweep import SweepRow, sweep
from src.logging.run_logger import RunLogger
from src.oracle.basis import TruncatedBasis
from src.oracle.embedding import embed_sacs, embedding_cutoff, overlap, sacs_observables
from src.oracle.fidelity import fidelity_susceptibility
from src.oracle.validation import ValidationOptions, run_validation
from src.reports.report_generator import ReportGenerator
from src.reports.report_models import ResultReport, ResultTable

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERICAL = 2
EXIT_VALIDATION = 3

MINIMA_COLUMNS = (
    'basin_label', 'q', 'abs_q', 'theta', 'total_energy', 'per_atom_energy',
    'photon_per_atom', 'excited_fraction', 'half_q', 'cos_theta',
    'hessian_min', 'hessian_max', 'gradient_norm',
)

CRITICAL_COLUMNS = (
    'n_atoms', 'gamma_c', 'bracket_lo', 'bracket_hi', 'energy_gap', 'gap_tolerance',
    'jump_photon_per_atom', 'jump_excited_fraction',
    'low_q', 'low_theta', 'low_per_atom_energy',
    'high_q', 'high_theta', 'high_per_atom_energy',
    'gamma_c_tdl', 'diagnostic',
)


def _metadata(config: RunConfig, **extra: Any) -> Tuple[Tuple[str, Any], ...]:
    pairs = list(config.metadata())
    pairs.extend(extra.items())
    pairs.append(('version', __version__))
    return tuple(pairs)


def _minimum_values(minimum: LocalMinimum, n_atoms: int) -> List[Any]:
    order = minimum.order_params
    return [
        minimum.basin_label.value if minimum.basin_label is not None else None,
        minimum.point.q, minimum.abs_q, minimum.point.theta,
        minimum.total_energy, minimum.total_energy / n_atoms,
        order.photon_per_atom, order.excited_fraction, order.half_q, order.cos_theta,
        min(minimum.hessian_eigs), max(minimum.hessian_eigs), minimum.gradient_norm,
    ]


def _ordered_map(func: Callable[[Any], Any], items: Sequence[Any], config: RunConfig) -> List[Any]:
    """func over items, on the thread pool when enabled, results in input order."""
    workers = config.parallel.max_workers if config.parallel.enabled else 1
    if workers <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    results: List[Any] = [None] * len(items)
    with ThreadPoolExecutor(max_workers=workers) as executor:
        futures = {executor.submit(func, item): i for i, item in enumerate(items)}
        for future in as_completed(futures):
            results[futures[future]] = future.result()
    return results


# ---------------------------------------------------------------------------
# surface
# ---------------------------------------------------------------------------

def build_surface_report(config: RunConfig) -> ResultReport:
    """Energy grid, refined minima and two-minima section at a single gamma.

    Raises:
        ConfigError: If the configured surface is not variational
    """
    surface = config.variational.surface
    if not surface.is_variational:
        raise ConfigError("surface command needs a variational surface",
                          [f"surface '{surface.value}' has no energy landscape"], "variational")
    params = config.model_params()
    search = config.search_config()
    q_extent = search.q_max(params)
    q_range = (config.grid.q_min if config.grid.q_min is not None else -q_extent,
               config.grid.q_max if config.grid.q_max is not None else q_extent)
    theta_range = (config.grid.theta_min, config.grid.theta_max)

    grid = surface_grid(params, surface, q_range, theta_range,
                        (config.grid.q_points, config.grid.theta_points), search,
                        section_samples=config.grid.section_samples)

    n = params.n_atoms
    grid_rows = []
    for i, theta in enumerate(grid.theta_values):
        for k, q in enumerate(grid.q_values):
            energy = float(grid.energies[i, k])
            grid_rows.append((float(q), float(theta), energy, energy / n))

    minima_rows = [_minimum_values(m, n) for m in grid.minima]
    cell_rows = [(r, c, float(grid.q_values[c]), float(grid.theta_values[r]),
                  float(grid.energies[r, c])) for r, c in grid.grid_minima]

    tables = [
        ResultTable.build('grid', ('q', 'theta', 'energy', 'per_atom_energy'), grid_rows),
        ResultTable.build('minima', MINIMA_COLUMNS, minima_rows),
        ResultTable.build('grid_minima', ('row', 'column', 'q', 'theta', 'energy'), cell_rows),
    ]
    if grid.section is not None:
        section = grid.section
        tables.append(ResultTable.build(
            'section', ('q', 'theta', 'energy', 'per_atom_energy'),
            [(float(q), float(t), float(e), float(e) / n)
             for q, t, e in zip(section.q, section.theta, section.energy)]))

    return ResultReport(
        command='surface',
        metadata=_metadata(config, gamma=params.gamma,
                           q_min=q_range[0], q_max=q_range[1],
                           theta_min=theta_range[0], theta_max=theta_range[1]),
        tables=tuple(tables),
    )


# ---------------------------------------------------------------------------
# critical
# ---------------------------------------------------------------------------

def _critical_row(params: ModelParams, result: Optional[CriticalResult],
                  diagnostic: Optional[str]) -> Tuple[Any, ...]:
    n = params.n_atoms
    if result is None:
        nan = math.nan
        return (n, nan, nan, nan, nan, nan, nan, nan, nan, nan, nan, nan, nan, nan,
                gamma_c_tdl(params), diagnostic)
    low, high = result.minima_at_crossing
    return (n, result.gamma_c, result.bracket[0], result.bracket[1],
            result.energy_gap_at_tol, result.gap_tolerance,
            result.order_param_jump[0], result.order_param_jump[1],
            low.point.q, low.point.theta, low.total_energy / n,
            high.point.q, high.point.theta, high.total_energy / n,
            gamma_c_tdl(params), None)


def critical_table(config: RunConfig) -> Tuple[ResultTable, int]:
    """Critical-coupling rows for every configured N, plus the count that failed.

    A numerical failure for one N becomes a diagnostic row.
    """
    sector = config.variational.sector
    search = config.search_config()
    tol = config.tolerances.bisect

    def run(n_atoms: int) -> Tuple[Any, ...]:
        params = config.model_params(n_atoms=n_atoms)
        try:
            return _critical_row(params, critical_coupling(params, sector, tol=tol,
                                                           search=search), None)
        except NumericalError as e:
            return _critical_row(params, None, f"{type(e).__name__}: {e}")

    rows = _ordered_map(run, config.atom_numbers(), config)
    failed = sum(1 for row in rows if row[-1] is not None)
    return ResultTable.build('critical', CRITICAL_COLUMNS, rows), failed


def _critical_report(config: RunConfig) -> Tuple[ResultReport, int]:
    table, failed = critical_table(config)
    report = ResultReport(
        command='critical',
        metadata=_metadata(config, atom_numbers=' '.join(str(n) for n in config.atom_numbers())),
        tables=(table,),
    )
    return report, failed


def build_critical_report(config: RunConfig) -> ResultReport:
    return _critical_report(config)[0]


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------

def _variational_columns(surface: Surface) -> Tuple[str, ...]:
    columns = ('gamma', 'per_atom_energy', 'photon_per_atom', 'excited_fraction',
               'basin_label', 'q', 'abs_q', 'theta', 'n_minima', 'degenerate')
    if surface.sector is not None:
        columns += ('var_q', 'var_Jx', 'energy_sacs_at_mf')
    return columns + ('diagnostic',)


def _exact_columns(config: RunConfig) -> Tuple[str, ...]:
    columns = ('gamma', 'per_atom_energy', 'photon_per_atom', 'excited_fraction',
               'var_q', 'var_Jx', 'parity_expectation', 'nu_max_used', 'convergence_gap')
    if config.oracle.fidelity:
        columns += ('chi_fidelity',)
    if config.oracle.overlap:
        columns += ('overlap',)
    return columns + ('diagnostic',)


def _sacs_extras(params: ModelParams, surface: Surface, row: SweepRow) -> None:
    """Fluctuations at the global minimum and the SACS-at-mean-field energy."""
    n = params.n_atoms
    point_params = params.with_gamma(row.gamma)
    try:
        row.extras['energy_sacs_at_mf'] = sacs_at_mean_field_point(point_params, surface.sector) / n
    except DegenerateStateError:
        row.extras['energy_sacs_at_mf'] = math.nan
    except DickeSacsError as e:
        row.extras['energy_sacs_at_mf'] = math.nan
        row.diagnostic = row.diagnostic or f"{type(e).__name__}: {e}"
    if row.global_minimum is None:
        return
    point = row.global_minimum.point
    basis = TruncatedBasis(n, embedding_cutoff(point), surface.sector)
    try:
        observables = sacs_observables(point_params, point, surface.sector, basis)
    except DickeSacsError as e:
        row.diagnostic = row.diagnostic or f"{type(e).__name__}: {e}"
        return
    row.extras['var_q'] = observables.var_q
    row.extras['var_Jx'] = observables.var_Jx


def _exact_extras(params: ModelParams, config: RunConfig, row: SweepRow) -> None:
    """Optional fidelity susceptibility and overlap with the SACS minimum."""
    if row.exact is None:
        return
    point_params = params.with_gamma(row.gamma)
    sector = config.variational.sector
    if config.oracle.fidelity:
        try:
            row.extras['chi_fidelity'] = fidelity_susceptibility(
                point_params, sector, config.oracle.fidelity_step, config.truncation_settings())
        except DickeSacsError as e:
            row.diagnostic = row.diagnostic or f"{type(e).__name__}: {e}"
    if config.oracle.overlap:
        try:
            minima = find_local_minima(point_params, Surface.for_sector(sector),
                                       config.search_config())
            if minima:
                state = embed_sacs(point_params, minima[0].point, sector, row.exact.basis)
                row.extras['overlap'] = overlap(row.exact.amplitudes, state)
        except DickeSacsError as e:
            row.diagnostic = row.diagnostic or f"{type(e).__name__}: {e}"


def _row_values(row: SweepRow, columns: Sequence[str]) -> Tuple[Any, ...]:
    best = row.global_minimum
    observables = row.exact.observables if row.exact is not None else None
    known = {
        'gamma': row.gamma,
        'per_atom_energy': row.per_atom_energy,
        'photon_per_atom': row.photon_per_atom,
        'excited_fraction': row.excited_fraction,
        'basin_label': best.basin_label.value if best is not None and best.basin_label else None,
        'q': best.point.q if best is not None else math.nan,
        'abs_q': best.abs_q if best is not None else math.nan,
        'theta': best.point.theta if best is not None else math.nan,
        'n_minima': len(row.all_minima),
        'degenerate': row.degenerate,
        'nu_max_used': row.exact.nu_max_used if row.exact is not None else None,
        'convergence_gap': row.exact.convergence_gap if row.exact is not None else math.nan,
        'parity_expectation': (observables.parity_expectation
                               if observables is not None else math.nan),
        'diagnostic': row.diagnostic,
    }
    if observables is not None:
        known['var_q'] = observables.var_q
        known['var_Jx'] = observables.var_Jx
    known.update(row.extras)
    return tuple(known.get(column, math.nan) for column in columns)


def sweep_table(config: RunConfig) -> Tuple[ResultTable, List[SweepRow]]:
    """Per-gamma rows of the configured surface over the configured grid."""
    surface = config.variational.surface
    params = config.model_params()
    workers = config.parallel.max_workers if config.parallel.enabled else 1
    rows = sweep(params, surface, config.gamma_grid(), config.search_config(),
                 oracle=config.truncation_settings(), max_workers=workers,
                 sector=config.variational.sector)

    if surface is Surface.EXACT:
        columns = _exact_columns(config)
        for row in rows:
            _exact_extras(params, config, row)
    else:
        columns = _variational_columns(surface)
        if surface.sector is not None:
            for row in rows:
                _sacs_extras(params, surface, row)

    table = ResultTable.build('sweep', columns, [_row_values(row, columns) for row in rows])
    return table, rows


def build_sweep_report(config: RunConfig) -> ResultReport:
    table, rows = sweep_table(config)
    minima_rows = [[row.gamma] + _minimum_values(m, config.model.n_atoms)
                   for row in rows for m in row.all_minima]
    tables = [table]
    if minima_rows:
        tables.append(ResultTable.build('minima', ('gamma',) + MINIMA_COLUMNS, minima_rows))
    return ResultReport(
        command='sweep',
        metadata=_metadata(config, gamma_lo=config.model.gamma_lo,
                           gamma_hi=config.model.gamma_hi, gamma_step=config.model.gamma_step),
        tables=tuple(tables),
    )


# ---------------------------------------------------------------------------
# validate
# ---------------------------------------------------------------------------

def validation_options(config: RunConfig, coupling_sign: float = 1.0) -> ValidationOptions:
    """Oracle-suite settings from the run configuration.

    coupling_sign = -1 flips the exact coupling; used to confirm that the
    embedding checks detect a wrong Hamiltonian.
    """
    defaults = ValidationOptions()
    return ValidationOptions(
        params=config.model_params(),
        gradient_samples=config.validation.gradient_samples,
        embedding_samples=config.validation.embedding_samples,
        fd_tol=config.validation.fd_tol,
        embed_tol=config.validation.embed_tol,
        nu_max=config.oracle.nu_max or defaults.nu_max,
        seed=config.validation.seed,
        coupling_sign=coupling_sign,
        search=config.search_config(),
        truncation=config.truncation_settings(),
    )


def build_validation_report(config: RunConfig, only: Optional[Sequence[str]] = None,
                            coupling_sign: float = 1.0) -> Tuple[ResultReport, bool]:
    """Pass/fail matrix of the oracle suite and the overall verdict."""
    report = run_validation(validation_options(config, coupling_sign), only)
    rows = [(c.name, c.passed, c.residual, c.threshold, c.detail) for c in report.checks]
    result = ResultReport(
        command='validate',
        metadata=_metadata(config, fd_tol=config.validation.fd_tol,
                           embed_tol=config.validation.embed_tol, seed=config.validation.seed),
        tables=(ResultTable.build('checks', ('check', 'passed', 'residual', 'threshold',
                                             'detail'), rows),),
        payload={'passed': report.passed},
    )
    return result, report.passed


# ---------------------------------------------------------------------------
# command runners
# ---------------------------------------------------------------------------

def _write(config: RunConfig, report: ResultReport, stream: Optional[TextIO]) -> bool:
    output = config.reporting.output_path
    result = ReportGenerator(config.reporting.format).generate_report(
        report, None if output is None else Path(output), stream=stream)
    if not result.success:
        print(f"Error: cannot write report: {result.error_message}", file=sys.stderr)
    return result.success


def _run(name: str, config: RunConfig,
         build: Callable[[RunLogger], Tuple[ResultReport, int]],
         run_log: Optional[RunLogger], stream: Optional[TextIO]) -> int:
    """Build and write a report; map failures to exit codes."""
    owned = run_log is None
    if run_log is None:
        run_log = RunLogger.from_config(config.logging)
    try:
        try:
            with run_log.operation(name, source='cli'):
                report, code = build(run_log)
        except ConfigError as e:
            print(f"Error: {e}", file=sys.stderr)
            return EXIT_CONFIG
        except (DickeSacsError, ValueError) as e:
            print(f"Error: {type(e).__name__}: {e}", file=sys.stderr)
            return EXIT_NUMERICAL
        if not _write(config, report, stream):
            return EXIT_NUMERICAL
        return code
    finally:
        if owned:
            run_log.close()


def cmd_surface(config: RunConfig, run_log: Optional[RunLogger] = None,
                stream: Optional[TextIO] = None) -> int:
    """Write the (q, theta) grid, the minima and the two-minima section."""
    return _run('surface', config, lambda log: (build_surface_report(config), EXIT_OK),
                run_log, stream)


def cmd_critical(config: RunConfig, run_log: Optional[RunLogger] = None,
                 stream: Optional[TextIO] = None) -> int:
    """Write the critical-coupling table; exit 2 only when every N failed."""
    def build(log: RunLogger) -> Tuple[ResultReport, int]:
        report, failed = _critical_report(config)
        total = len(report.tables[0].rows)
        if failed:
            log.log_warning('critical', f"{failed} of {total} rows have diagnostics")
        return report, EXIT_NUMERICAL if failed == total else EXIT_OK

    return _run('critical', config, build, run_log, stream)


def cmd_sweep(config: RunConfig, run_log: Optional[RunLogger] = None,
              stream: Optional[TextIO] = None) -> int:
    """Write per-gamma rows; row failures stay in the diagnostic column."""
    def build(log: RunLogger) -> Tuple[ResultReport, int]:
        report = build_sweep_report(config)
        failed = sum(1 for value in report.table('sweep').column('diagnostic') if value)
        if failed:
            log.log_warning('sweep', f"{failed} rows have diagnostics")
        return report, EXIT_OK

    return _run('sweep', config, build, run_log, stream)


def cmd_validate(config: RunConfig, run_log: Optional[RunLogger] = None,
                 stream: Optional[TextIO] = None, only: Optional[Sequence[str]] = None,
                 coupling_sign: float = 1.0) -> int:
    """Write the pass/fail matrix; exit 3 when any check failed."""
    def build(log: RunLogger) -> Tuple[ResultReport, int]:
        report, passed = build_validation_report(config, only, coupling_sign)
        if not passed:
            failed = [row[0] for row in report.table('checks').rows if not row[1]]
            log.log_error('validate', f"failed checks: {', '.join(failed)}")
        return report, EXIT_OK if passed else EXIT_VALIDATION

    return _run('validate', config, build, run_log, stream)
