# This file is part of the spherical-catenoid project
#
# Copyright (c) 2026 The spherical-catenoid developers - MIT License
# SPDX-License-Identifier: MIT
"""Tables produced by the command line and by sweeps."""

import math
import typing as typ
import logging
import multiprocessing as mp

import numpy as np

from . import catenoid
from . import spectrum
from . import sweepfile
from . import asymptotics
from . import freeboundary
from .numerics import DEFAULT_TOL
from .numerics import Tolerance
from .numerics import NumericsError
from .sweepfile import Table

logger = logging.getLogger('spherical_catenoid')


MaybeTol = typ.Optional[Tolerance]

PROFILE_COLUMNS = ('s', 'A', 'B', 'phi', 'II_sq', 'fstar', 'x0', 'x1', 'x2')

RADIUS_COLUMNS = ('a', 's0', 'r', 'phi_s0', 'residual_fb', 'residual_nu0', 'robin_coef')

SPECTRUM_COLUMNS = ('n', 'mu', 'parity', 'n_zeros', 'robin_residual')

INDEX_COLUMNS = ('a', 'k', 'n_negative_radial', 'kernel_dim_radial', 'mu0', 'mu1', 'status')

CONVERGENCE_COLUMNS = ('quantity', 'a', 'value', 'target', 'gap', 'gap_scaled')

CONSTANTS_COLUMNS = (
    'I_inf',
    'd_inf',
    's0_shift',
    'sigma_star',
    'rho_star',
    'c_star',
    'gap_I_inf_quadrature',
    'gap_d_inf_forms',
    'gap_sigma_coth',
    'gap_rho_equation',
    'gap_c_star_forms',
)


class IncompleteTable(spectrum.IncompleteSpectrum):
    """A spectrum that could only be partially resolved, with the rows found so far."""

    def __init__(self, msg: str, table: Table) -> None:
        super().__init__(msg)
        self.table = table


def _geometry_tol(tol: MaybeTol) -> Tolerance:
    return DEFAULT_TOL if tol is None else tol


def _spectrum_tol(tol: MaybeTol) -> Tolerance:
    return spectrum.SHOOT_TOL if tol is None else tol


def profile_rows(
    params: catenoid.CatenoidParams, s_values: np.ndarray, tol: Tolerance
) -> typ.List[typ.Tuple[float, ...]]:
    phi_values = catenoid.phi_grid(params, s_values, tol)
    rows = []
    for s, phi_s in zip(s_values.tolist(), phi_values.tolist()):
        prof  = catenoid.profiles(params, s)
        point = catenoid.embed_from_phi(params, s, phi_s, 0.0)
        fstar = catenoid.fstar_from_phi(params, s, phi_s)
        II_sq = 2.0 * params.K ** 2 / prof.B ** 4
        rows.append((s, prof.A, prof.B, phi_s, II_sq, fstar, point.x0, point.x1, point.x2))
    return rows


def profile_table(a: float, s_min: float, s_max: float, n: int, tol: MaybeTol = None) -> Table:
    if n < 2:
        raise catenoid.DomainError(f"profile needs n >= 2 samples, got n={n}")
    if not s_min < s_max:
        raise catenoid.DomainError(f"profile needs s_min < s_max, got [{s_min}, {s_max}]")
    params   = catenoid.make_params(a)
    s_values = np.linspace(s_min, s_max, n)
    return Table(PROFILE_COLUMNS, profile_rows(params, s_values, _geometry_tol(tol)))


def radius_row(a: float, tol: MaybeTol = None) -> typ.Tuple[float, ...]:
    sol = freeboundary.radius(catenoid.make_params(a), _geometry_tol(tol))
    return tuple(sol)


def radius_table(a_values: typ.Sequence[float], tol: MaybeTol = None) -> Table:
    return Table(RADIUS_COLUMNS, [radius_row(a, tol) for a in a_values])


def _spectrum_footer(pairs: typ.Sequence[spectrum.SLEigenpair]) -> typ.Tuple[sweepfile.FooterItem, ...]:
    negatives = sum(1 for pair in pairs if pair.mu < -spectrum.KERNEL_THRESHOLD)
    kernel    = sum(1 for pair in pairs if abs(pair.mu) < spectrum.KERNEL_THRESHOLD)
    return (('negatives', negatives), ('kernel', kernel))


def _spectrum_rows(pairs: typ.Sequence[spectrum.SLEigenpair]) -> typ.List[typ.Tuple[sweepfile.Cell, ...]]:
    return [
        (n, pair.mu, pair.parity, pair.n_zeros, pair.robin_residual) for n, pair in enumerate(pairs)
    ]


def spectrum_table(a: float, k: int, mu_max: float, tol: MaybeTol = None) -> Table:
    params  = catenoid.make_params(a)
    problem = spectrum.build_problem(params, k, _geometry_tol(tol))
    try:
        pairs = spectrum.eigenvalues_below(problem, mu_max, _spectrum_tol(tol))
    except spectrum.IncompleteSpectrum as ex:
        partial = Table(SPECTRUM_COLUMNS, _spectrum_rows(ex.partial), _spectrum_footer(ex.partial))
        raise IncompleteTable(str(ex), partial) from ex
    return Table(SPECTRUM_COLUMNS, _spectrum_rows(pairs), _spectrum_footer(pairs))


def _index_footer(rows: typ.Sequence[spectrum.ModeIndexRow]) -> typ.Tuple[sweepfile.FooterItem, ...]:
    totals = []
    for a in sorted({row.a for row in rows}):
        a_rows = [row for row in rows if row.a == a]
        if all(row.status == "ok" for row in a_rows):
            totals.append(f"{sweepfile.fmt_cell(a)}:{spectrum.total_index(a_rows)}")
        else:
            totals.append(f"{sweepfile.fmt_cell(a)}:incomplete")
    return (('label', asymptotics.EXPLORATORY), ('total_index', ";".join(totals)))


def index_table(
    a_values: typ.Sequence[float], k_max: int, tol: MaybeTol = None, jobs: int = 1
) -> Table:
    rows = spectrum.mode_index_table(a_values, k_max, _spectrum_tol(tol), jobs)
    return Table(INDEX_COLUMNS, [tuple(row) for row in rows], _index_footer(rows))


def _d1_footer(rows: typ.Sequence[asymptotics.ConvergenceRow]) -> typ.Tuple[sweepfile.FooterItem, ...]:
    lo, hi = asymptotics.D1_RANGE
    r_rows = [
        row for row in rows if row.quantity == "r_minus_1.5_ln_a" and lo <= row.a <= hi
    ]
    a_values = [row.a for row in r_rows]
    r_values = [row.value + 1.5 * math.log(row.a) for row in r_rows]
    if not r_rows:
        return ()
    try:
        fit = asymptotics.fit_d1(a_values, r_values, r_rows[0].target)
    except asymptotics.IllConditionedFit as ex:
        logger.info(f"d1 not estimated: {ex}")
        return ()
    return (('d1_hat', fit.d1_hat), ('d1_fit_residual', fit.fit_residual), ('d1_label', fit.label))


def large_table(a_values: typ.Sequence[float], tol: MaybeTol = None) -> Table:
    rows = asymptotics.large_a_table(a_values, _geometry_tol(tol))
    return Table(CONVERGENCE_COLUMNS, [tuple(row) for row in rows], _d1_footer(rows))


def degenerate_table(eps_values: typ.Sequence[float], tol: MaybeTol = None) -> Table:
    rows = asymptotics.degenerate_table(eps_values, _geometry_tol(tol))
    return Table(CONVERGENCE_COLUMNS, [tuple(row) for row in rows])


def constants_row(tol: MaybeTol = None) -> typ.Tuple[float, ...]:
    tol    = _geometry_tol(tol)
    consts = asymptotics.constants(tol)
    check  = asymptotics.verify_I_inf(tol)
    return (
        consts.I_inf,
        consts.d_inf,
        consts.s0_shift,
        consts.sigma_star,
        consts.rho_star,
        consts.c_star,
        check.gap,
        consts.d_inf - consts.d_inf_alt,
        asymptotics.sigma_residual(consts.sigma_star),
        asymptotics.rho_residual(consts.rho_star),
        consts.c_star - (consts.rho_star + 1.0 / consts.rho_star),
    )


def constants_table(tol: MaybeTol = None) -> Table:
    return Table(CONSTANTS_COLUMNS, [constants_row(tol)])


# Sweeps: every grid point is computed independently, failures are
# reported per grid index instead of aborting the run.


class GridOutcome(typ.NamedTuple):

    index: int
    a    : float
    rows : typ.List[typ.Tuple[sweepfile.Cell, ...]]
    error: typ.Optional[str]


GridJob = typ.Tuple[int, float, sweepfile.SweepConfig]


def _grid_rows(a: float, config: sweepfile.SweepConfig) -> typ.List[typ.Tuple[sweepfile.Cell, ...]]:
    tol  = config.tol
    mode = config.mode
    if mode == 'profile':
        params = catenoid.make_params(a)
        s0     = freeboundary.solve_s0(params, _geometry_tol(tol))
        s_vals = np.linspace(-s0, s0, config.s_samples)
        return [(a,) + row for row in profile_rows(params, s_vals, _geometry_tol(tol))]
    if mode == 'radius':
        return [radius_row(a, tol)]
    if mode == 'spectrum':
        params   = catenoid.make_params(a)
        solution = freeboundary.radius(params, _geometry_tol(tol))
        rows: typ.List[typ.Tuple[sweepfile.Cell, ...]] = []
        for k in range(config.k_max + 1):
            problem = spectrum.build_problem(params, k, solution=solution)
            pairs   = spectrum.eigenvalues_below(problem, config.mu_max, _spectrum_tol(tol))
            rows.extend((a, k) + row for row in _spectrum_rows(pairs))
        return rows
    if mode == 'index':
        return [tuple(row) for row in spectrum.mode_index_rows(a, config.k_max, _spectrum_tol(tol))]

    consts = asymptotics.constants(_geometry_tol(tol))
    if mode == 'asymptotics-large':
        pairs_l = asymptotics.large_a_row_pair(a, consts, _geometry_tol(tol))
        return [tuple(row) for row in pairs_l]
    if mode == 'asymptotics-degenerate':
        pairs_d = asymptotics.degenerate_row_pair(a - 0.5, consts, _geometry_tol(tol))
        return [tuple(row) for row in pairs_d]
    raise ValueError(f"mode {mode!r} has no per-grid rows")


def _run_grid_job(job: GridJob) -> GridOutcome:
    index, a, config = job
    try:
        return GridOutcome(index, a, _grid_rows(a, config), None)
    except NumericsError as ex:
        return GridOutcome(index, a, [], f"{type(ex).__name__}: {ex}")


def sweep_columns(config: sweepfile.SweepConfig) -> typ.Tuple[str, ...]:
    mode = config.mode
    if mode == 'profile':
        return ('a',) + PROFILE_COLUMNS
    if mode == 'radius':
        return RADIUS_COLUMNS
    if mode == 'spectrum':
        return ('a', 'k') + SPECTRUM_COLUMNS
    if mode == 'index':
        return INDEX_COLUMNS
    if mode == 'constants':
        return CONSTANTS_COLUMNS
    return CONVERGENCE_COLUMNS


def run_sweep(config: sweepfile.SweepConfig) -> typ.Tuple[Table, typ.List[str]]:
    """Rows of the configured sweep in grid order, and one warning per failed grid point."""
    columns = sweep_columns(config)
    if config.mode == 'constants':
        return Table(columns, [constants_row(config.tol)]), []

    jobs = [(i, a, config) for i, a in enumerate(config.a_values)]
    if config.jobs > 1 and len(jobs) > 1:
        with mp.Pool(config.jobs) as pool:
            outcomes = list(pool.imap(_run_grid_job, jobs))
    else:
        outcomes = [_run_grid_job(job) for job in jobs]

    rows    : typ.List[typ.Tuple[sweepfile.Cell, ...]] = []
    warnings: typ.List[str] = []
    for outcome in outcomes:
        if outcome.error is None:
            rows.extend(outcome.rows)
        else:
            msg = f"row {outcome.index}: a={outcome.a!r}: {outcome.error}"
            logger.warning(msg)
            warnings.append(msg)

    footer: typ.Tuple[sweepfile.FooterItem, ...] = ()
    if config.mode == 'index':
        footer = _index_footer([spectrum.ModeIndexRow(*row) for row in rows])
    return Table(columns, rows, footer), warnings
