#!/usr/bin/env python
# This file is part of the spherical-catenoid project
#
# Copyright (c) 2026 The spherical-catenoid developers - MIT License
# SPDX-License-Identifier: MIT
"""CLI for spherical-catenoid.

Single shot computations print a table to stdout (or --out PATH),
sweeps read a config file and write their table plus a sidecar
run record next to it.
"""

import sys
import typing as typ
import logging
import datetime as dt

import click
import pathlib2 as pl

from . import reports
from . import __version__
from . import sweepfile
from . import asymptotics
from .numerics import Tolerance
from .numerics import DomainError
from .numerics import NumericsError
from .sweepfile import ConfigError

try:
    import pretty_traceback

    pretty_traceback.install(envvar='ENABLE_PRETTY_TRACEBACK')
except ImportError:
    pass  # no need to fail because of missing dev dependency

logger = logging.getLogger('spherical_catenoid')

ExitCode = int

EXIT_OK           = 0
EXIT_DOMAIN_ERROR = 2
EXIT_SOLVER_ERROR = 3
EXIT_CONFIG_ERROR = 4

LOG_FORMAT = "%(levelname)s %(message)s"

DEFAULT_GRIDS = {
    'large'     : (1e2 , 1e6 , 5),
    'degenerate': (1e-6, 1e-2, 5),
}


class Options(typ.NamedTuple):

    tol          : typ.Optional[Tolerance]
    output_format: typ.Optional[str]
    out          : typ.Optional[str]


def _configure_logging(verbose: bool, quiet: bool) -> None:
    if verbose:
        level = logging.DEBUG
    elif quiet:
        level = logging.WARNING
    else:
        level = logging.INFO
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr)
    logger.setLevel(level)


def _parse_tol(tol_abs: typ.Optional[float], tol_rel: typ.Optional[float]) -> typ.Optional[Tolerance]:
    if tol_abs is None and tol_rel is None:
        return None
    default = Tolerance()
    return Tolerance(
        abs_tol=default.abs_tol if tol_abs is None else tol_abs,
        rel_tol=default.rel_tol if tol_rel is None else tol_rel,
    ).validated()


def _meta(command: str, opts: Options) -> typ.Dict[str, typ.Any]:
    return {
        'command'     : command,
        'tool_version': __version__,
        'tol_abs'     : opts.tol.abs_tol if opts.tol else None,
        'tol_rel'     : opts.tol.rel_tol if opts.tol else None,
    }


def _emit(opts: Options, text: str) -> None:
    if opts.out:
        sweepfile.dump(text, pl.Path(opts.out))
    else:
        click.echo(text, nl=False)


def _emit_table(command: str, opts: Options, table: sweepfile.Table) -> None:
    output_format = opts.output_format or 'csv'
    _emit(opts, sweepfile.dumps(table, output_format, _meta(command, opts)))


@click.group()
@click.version_option(version=__version__)
@click.option('--tol-abs', type=float, default=None, help="Absolute tolerance override.")
@click.option('--tol-rel', type=float, default=None, help="Relative tolerance override.")
@click.option(
    '--format', 'output_format', type=click.Choice(sweepfile.FORMATS), default=None, help="Output format."
)
@click.option('--out', type=click.Path(dir_okay=False), default=None, help="Write output to PATH.")
@click.option('-q', '--quiet'  , is_flag=True, default=False, help="Only log warnings and errors.")
@click.option('-v', '--verbose', is_flag=True, default=False, help="Log solver progress.")
@click.pass_context
def cli(
    ctx          : click.Context,
    tol_abs      : typ.Optional[float],
    tol_rel      : typ.Optional[float],
    output_format: typ.Optional[str],
    out          : typ.Optional[str],
    quiet        : bool,
    verbose      : bool,
) -> None:
    """Numerical lab for critical spherical catenoids in hyperbolic space."""
    _configure_logging(verbose, quiet)
    ctx.obj = Options(_parse_tol(tol_abs, tol_rel), output_format, out)


@cli.command()
@click.option('--a'    , 'a', type=float, required=True, help="Neck parameter, a > 1/2.")
@click.option('--s-min', type=float, default=-1.0, show_default=True)
@click.option('--s-max', type=float, default=1.0 , show_default=True)
@click.option('--n'    , 'n', type=int  , default=21  , show_default=True, help="Number of samples.")
@click.pass_obj
def profile(opts: Options, a: float, s_min: float, s_max: float, n: int) -> None:
    """Meridian profile sampled on [s_min, s_max]."""
    table = reports.profile_table(a, s_min, s_max, n, opts.tol)
    _emit_table('profile', opts, table)


@cli.command()
@click.option('--a', 'a', type=float, required=True, help="Neck parameter, a > 1/2.")
@click.pass_obj
def radius(opts: Options, a: float) -> None:
    """Free boundary height s0 and ball radius r for one catenoid."""
    table = reports.radius_table([a], opts.tol)
    if (opts.output_format or 'json') == 'json':
        _emit(opts, sweepfile.dumps_record(table))
    else:
        _emit(opts, sweepfile.dumps_csv(table))


@cli.command()
@click.option('--a'     , 'a', type=float, required=True, help="Neck parameter, a > 1/2.")
@click.option('--k'     , 'k', type=int  , required=True, help="Angular mode, k >= 0.")
@click.option('--mu-max', type=float, default=1.0, show_default=True)
@click.pass_obj
def spectrum(opts: Options, a: float, k: int, mu_max: float) -> None:
    """Radial Jacobi eigenvalues of mode k below mu_max."""
    if k < 0:
        raise DomainError(f"angular mode must satisfy k >= 0, got k={k}")
    try:
        table = reports.spectrum_table(a, k, mu_max, opts.tol)
    except reports.IncompleteTable as ex:
        logger.warning(f"partial spectrum: {ex}")
        _emit_table('spectrum', opts, ex.table)
        raise
    _emit_table('spectrum', opts, table)


@cli.command()
@click.option('--a'    , 'a_values', type=float, multiple=True, required=True, help="May be repeated.")
@click.option('--k-max', type=int, default=3, show_default=True)
@click.option('--jobs' , type=int, default=1, show_default=True)
@click.pass_obj
def index(opts: Options, a_values: typ.Tuple[float, ...], k_max: int, jobs: int) -> None:
    """Negative radial eigenvalue counts per angular mode (EXPLORATORY)."""
    table = reports.index_table(list(a_values), k_max, opts.tol, jobs)
    _emit_table('index', opts, table)


@cli.command(name='asymptotics')
@click.option('--side', type=click.Choice(sorted(DEFAULT_GRIDS)), default='large', show_default=True)
@click.option('--grid-min', type=float, default=None, help="Smallest a (large) or eps (degenerate).")
@click.option('--grid-max', type=float, default=None, help="Largest a (large) or eps (degenerate).")
@click.option('--count'   , type=int  , default=None, help="Number of geometric grid points.")
@click.pass_obj
def asymptotics_cmd(
    opts    : Options,
    side    : str,
    grid_min: typ.Optional[float],
    grid_max: typ.Optional[float],
    count   : typ.Optional[int],
) -> None:
    """Convergence of r and s0 towards their limits."""
    default_min, default_max, default_count = DEFAULT_GRIDS[side]
    grid = asymptotics.geometric_grid(
        default_min if grid_min is None else grid_min,
        default_max if grid_max is None else grid_max,
        default_count if count is None else count,
    )
    if side == 'large':
        table = reports.large_table(grid, opts.tol)
    else:
        table = reports.degenerate_table(grid, opts.tol)
    _emit_table('asymptotics', opts, table)


@cli.command()
@click.pass_obj
def constants(opts: Options) -> None:
    """Closed form limit constants and their cross-check gaps."""
    _emit_table('constants', opts, reports.constants_table(opts.tol))


@cli.command()
@click.argument('config_file', type=click.Path(dir_okay=False))
def sweep(config_file: str) -> None:
    """Run the sweep described by CONFIG_FILE."""
    config_path         = pl.Path(config_file)
    config, config_text = sweepfile.load(config_path)

    started_at  = dt.datetime.utcnow().isoformat(timespec='seconds') + "Z"
    output_path = sweepfile.resolve_output_path(config, config_path)

    table, warnings = reports.run_sweep(config)
    meta = {'mode': config.mode, 'tool_version': __version__, 'config': config.echo()}
    sweepfile.dump(sweepfile.dumps(table, config.output_format, meta), output_path)

    record = sweepfile.RunRecord(
        config_echo=config.echo(),
        config_text=config_text,
        tool_version=__version__,
        started_at=started_at,
        n_rows=len(table.rows),
        warnings=warnings,
    )
    sweepfile.dump_record(record, output_path)
    logger.info(f"wrote {len(table.rows)} rows to {output_path}")


def main(args: typ.Sequence[str] = sys.argv[1:]) -> ExitCode:
    # pylint:disable=dangerous-default-value; We don't mutate args, mypy would fail if we did.
    try:
        exit_code = cli.main(args=list(args), prog_name="spherical-catenoid", standalone_mode=False)
    except click.UsageError as ex:
        ex.show()
        return EXIT_DOMAIN_ERROR
    except click.ClickException as ex:
        ex.show()
        return ex.exit_code
    except click.Abort:
        return 1
    except DomainError as ex:
        click.echo(f"error: {ex}", err=True)
        return EXIT_DOMAIN_ERROR
    except NumericsError as ex:
        click.echo(f"error: {type(ex).__name__}: {ex}", err=True)
        return EXIT_SOLVER_ERROR
    except ConfigError as ex:
        click.echo(f"error: {ex}", err=True)
        return EXIT_CONFIG_ERROR

    # --help and --version return their exit code, commands return None
    return exit_code or EXIT_OK


if __name__ == '__main__':
    sys.exit(main())
