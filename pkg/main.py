"""dicke-sacs - variational and exact ground states of the Dicke model.

Command-line front end: energy surfaces, finite-N critical couplings,
coupling sweeps and the oracle self-check, written as CSV or JSON.
"""

import argparse
import sys
from typing import Any, Dict, List, Optional

from src import __version__
from src.cli.commands import (
    EXIT_CONFIG,
    cmd_critical,
    cmd_surface,
    cmd_sweep,
    cmd_validate,
)
from src.config import ConfigManager
from src.config import config_cli
from src.config.config_schema import ConfigSchema
from src.core.exceptions import ConfigError
from src.logging import RunLogger

COMMANDS = {
    'surface': cmd_surface,
    'critical': cmd_critical,
    'sweep': cmd_sweep,
    'validate': cmd_validate,
}


class _ArgumentParser(argparse.ArgumentParser):
    """Usage errors are configuration errors (exit 1)."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        print(f"Error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_CONFIG)


def parse_gamma_range(text: str) -> Dict[str, float]:
    """'lo:hi:step' -> {gamma_lo, gamma_hi, gamma_step}.

    Raises:
        ConfigError: If the text is not three numbers separated by colons
    """
    parts = text.split(':')
    try:
        if len(parts) != 3:
            raise ValueError(text)
        lo, hi, step = (float(p) for p in parts)
    except ValueError:
        raise ConfigError("Invalid --gamma-range", [f"expected lo:hi:step, got '{text}'"], "cli")
    return {'gamma_lo': lo, 'gamma_hi': hi, 'gamma_step': step}


def parse_atom_list(text: str) -> List[int]:
    try:
        return [int(v) for v in text.replace(' ', '').split(',') if v]
    except ValueError:
        raise ConfigError("Invalid --n-atoms-list", [f"expected N1,N2,..., got '{text}'"], "cli")


def cli_overrides(args: argparse.Namespace) -> Dict[str, Dict[str, Any]]:
    """Map parsed flags onto {section: {key: value}}; unset flags stay None."""
    model: Dict[str, Any] = {
        'omega_a': args.omega_a,
        'n_atoms': args.n_atoms,
        'gamma': args.gamma,
    }
    if args.n_atoms_list:
        model['n_atoms_list'] = parse_atom_list(args.n_atoms_list)
    if args.gamma_range:
        model.update(parse_gamma_range(args.gamma_range))

    parallel: Dict[str, Any] = {}
    if args.workers is not None:
        parallel = {'enabled': args.workers > 1, 'max_workers': args.workers}

    logging: Dict[str, Any] = {'level': args.log_level}
    if args.log_file:
        logging.update({'log_to_file': True, 'log_file_path': args.log_file})
    if args.quiet:
        logging['log_to_console'] = False

    return {
        'model': model,
        'variational': {'surface': args.surface, 'sector': args.sector},
        'tolerances': {
            'grad': args.tol_grad,
            'bisect': args.tol_bisect,
            'eig': args.tol_eig,
            'conv': args.tol_conv,
        },
        'oracle': {
            'nu_max': args.nu_max,
            'nu_cap': args.nu_cap,
            'fidelity': args.fidelity,
            'overlap': args.overlap,
        },
        'reporting': {'format': args.format, 'output_path': args.out},
        'logging': logging,
        'parallel': parallel,
    }


def _add_run_options(parser: argparse.ArgumentParser) -> None:
    model = parser.add_argument_group('model')
    model.add_argument('--omega-a', type=float, help='Atomic splitting (default: 1.0)')
    model.add_argument('--n-atoms', type=int, help='Atom number N (default: 20)')
    model.add_argument('--n-atoms-list', metavar='N1,N2,...',
                       help='Atom numbers of a critical-coupling table')
    model.add_argument('--gamma', type=float, help='Coupling of the surface command')
    model.add_argument('--gamma-range', metavar='LO:HI:STEP', help='Sweep grid (inclusive)')

    surface = parser.add_argument_group('surface')
    surface.add_argument('--surface', choices=ConfigSchema.SURFACES,
                         help='Energy surface (default: sacs_even)')
    surface.add_argument('--sector', choices=ConfigSchema.SECTORS,
                         help='Parity sector (default: even)')

    oracle = parser.add_argument_group('exact oracle')
    oracle.add_argument('--nu-max', type=int, help='Fixed photon cutoff (default: escalate)')
    oracle.add_argument('--nu-cap', type=int, help='Largest escalated cutoff (default: 4096)')
    oracle.add_argument('--fidelity', action='store_true', default=None,
                        help='Add the fidelity susceptibility to exact sweeps')
    oracle.add_argument('--overlap', action='store_true', default=None,
                        help='Add the overlap with the SACS minimum to exact sweeps')

    tolerances = parser.add_argument_group('tolerances')
    tolerances.add_argument('--tol-grad', type=float, help='Gradient norm of a minimum (1e-8)')
    tolerances.add_argument('--tol-bisect', type=float, help='Final bisection bracket (1e-4)')
    tolerances.add_argument('--tol-eig', type=float, help='Eigenpair residual (1e-10)')
    tolerances.add_argument('--tol-conv', type=float, help='Cutoff convergence (1e-8)')

    output = parser.add_argument_group('output')
    output.add_argument('--format', choices=['csv', 'json'], help='Report format (default: csv)')
    output.add_argument('--out', metavar='PATH', help='Report file (default: standard output)')
    output.add_argument('--config', metavar='PATH',
                        help='YAML config file (default: ./dicke-sacs.yaml if present)')
    output.add_argument('--workers', type=int, help='Thread-pool size for per-gamma/per-N work')
    output.add_argument('--log-level', choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'],
                        help='Run log level (default: WARNING)')
    output.add_argument('--log-file', metavar='PATH', help='Also write the run log to a file')
    output.add_argument('--quiet', action='store_true', help='No run log on standard error')


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog='dicke-sacs',
        description="Symmetry-adapted coherent states of the Dicke model",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  %(prog)s critical                                        # gamma_c for N = 20
  %(prog)s critical --n-atoms-list 10,20,40,80 --workers 4
  %(prog)s surface --gamma 0.550 --out surface.csv
  %(prog)s sweep --surface exact --gamma-range 0.4:0.7:0.005 --fidelity
  %(prog)s validate --format json
  %(prog)s config show --n-atoms 40
        """
    )
    parser.add_argument('--version', action='version', version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest='command', metavar='COMMAND')

    helps = {
        'surface': 'Tabulate a surface, its minima and the two-minima section',
        'critical': 'Locate the finite-N critical coupling',
        'sweep': 'Per-gamma minima or exact ground states',
        'validate': 'Run the oracle self-check',
    }
    for name, text in helps.items():
        sub = subparsers.add_parser(name, help=text)
        _add_run_options(sub)
        if name == 'validate':
            sub.add_argument('--only', action='append', metavar='PREFIX',
                             help='Run only checks whose name starts with PREFIX')

    config_parser = subparsers.add_parser('config', help='Inspect or generate configuration')
    config_sub = config_parser.add_subparsers(dest='config_command', metavar='ACTION')
    show = config_sub.add_parser('show', help='Print values with their sources')
    _add_run_options(show)
    check = config_sub.add_parser('validate', help='Validate a YAML config file')
    check.add_argument('path')
    generate = config_sub.add_parser('generate', help='Write the default config file')
    generate.add_argument('--out', default='dicke-sacs.yaml')
    generate.add_argument('--force', action='store_true')
    config_sub.add_parser('schema', help='Print the JSON schema of the config file')
    return parser


def _config_command(args: argparse.Namespace) -> int:
    if args.config_command == 'validate':
        return config_cli.validate_config_command(args.path)
    if args.config_command == 'generate':
        return config_cli.generate_config_command(args.out, args.force)
    if args.config_command == 'schema':
        return config_cli.config_schema_command()
    if args.config_command == 'show':
        try:
            ConfigManager.initialize(args.config, cli_overrides(args))
        except ConfigError as e:
            print(f"Error: {e}", file=sys.stderr)
            return EXIT_CONFIG
        return config_cli.show_config_command()
    print("Error: config needs an action (show, validate, generate, schema)", file=sys.stderr)
    return EXIT_CONFIG


def main(argv: Optional[List[str]] = None) -> int:
    """Entry point; returns the process exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.command is None:
        parser.print_help()
        return 0
    if args.command == 'config':
        return _config_command(args)

    try:
        manager = ConfigManager.initialize(args.config, cli_overrides(args))
    except ConfigError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    config = manager.get_config()

    with RunLogger.from_config(config.logging) as run_log:
        run_log.attach()
        if args.command == 'validate':
            return cmd_validate(config, run_log, only=args.only)
        return COMMANDS[args.command](config, run_log)


if __name__ == '__main__':
    sys.exit(main())
