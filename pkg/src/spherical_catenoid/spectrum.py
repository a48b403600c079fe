# This file is part of the spherical-catenoid project
#
# Copyright (c) 2026 The spherical-catenoid developers - MIT License
# SPDX-License-Identifier: MIT
"""Mode-by-mode Robin Jacobi spectrum of the catenoid.

Separating u(s, theta) = f(s) cos(k theta) reduces the Jacobi problem
with the Robin condition at the boundary circles to the radial
Sturm-Liouville problem

    -(B f')' + B (2 + k^2/B^2 - |II|^2) f = mu B f    on (-s0, s0)
    f'(+-s0) = +-coth(r) f(+-s0)

The coefficients are even in s, so eigenfunctions are either even or
odd and each parity is solved by shooting from s = 0 on [0, s0].
"""

import math
import typing as typ
import logging
import multiprocessing as mp

import numpy as np
import scipy.linalg
import scipy.integrate

from . import catenoid
from . import freeboundary
from .numerics import DEFAULT_TOL
from .numerics import Bracket
from .numerics import Tolerance
from .numerics import Trajectory
from .numerics import DomainError
from .numerics import NumericsError
from .numerics import find_root
from .numerics import ode_trajectory

logger = logging.getLogger('spherical_catenoid')


class IncompleteSpectrum(NumericsError):
    def __init__(self, msg: str, partial: typ.Sequence['SLEigenpair'] = ()) -> None:
        super().__init__(msg)
        self.partial = list(partial)


class DegenerateMatrix(NumericsError):
    pass


EVEN = 'even'
ODD  = 'odd'

PARITIES = (EVEN, ODD)

KERNEL_THRESHOLD = 1e-6

SHOOT_TOL = Tolerance(abs_tol=1e-10, rel_tol=1e-10)

EIGEN_TOL = Tolerance(abs_tol=1e-12, rel_tol=1e-12)


class SLProblem(typ.NamedTuple):
    """Radial problem for angular mode k.

    Leading coefficient and weight are both B(s), the potential is
    q(s) = B (2 + k^2/B^2 - |II|^2) with |II|^2 = 2 K^2 / B^4.
    """

    params    : catenoid.CatenoidParams
    k         : int
    s0        : float
    robin_coef: float
    r         : float

    def leading(self, s: float) -> float:
        return catenoid.profiles(self.params, s).B

    def weight(self, s: float) -> float:
        return catenoid.profiles(self.params, s).B

    def potential(self, s: float) -> float:
        B = catenoid.profiles(self.params, s).B
        return B * self.reduced_potential(B * B)

    def reduced_potential(self, B2: float) -> float:
        """q / w, as a function of B^2."""
        return 2.0 + self.k ** 2 / B2 - 2.0 * self.params.K ** 2 / (B2 * B2)

    def potential_array(self, s: np.ndarray) -> np.ndarray:
        B = catenoid.b_profile_array(self.params, s)
        return 2.0 * B + self.k ** 2 / B - 2.0 * self.params.K ** 2 / B ** 3


def build_problem(
    params  : catenoid.CatenoidParams,
    k       : int,
    tol     : Tolerance = DEFAULT_TOL,
    solution: typ.Optional[freeboundary.FreeBoundarySolution] = None,
) -> SLProblem:
    if k < 0:
        raise DomainError(f"angular mode must be k >= 0, got k={k}")
    if solution is None:
        solution = freeboundary.radius(params, tol)
    return SLProblem(params, k, solution.s0, solution.robin_coef, solution.r)


def radial_rhs(problem: SLProblem, mu: float) -> typ.Callable[[float, np.ndarray], np.ndarray]:
    """First order system for (f, f')."""
    a  = problem.params.a
    ep = problem.params.eps

    def _rhs(s: float, y: np.ndarray) -> np.ndarray:
        B2    = ep + 2.0 * a * math.sinh(s) ** 2
        drift = a * math.sinh(2.0 * s) / B2
        f, fp = y
        return np.array((fp, -drift * fp + (problem.reduced_potential(B2) - mu) * f))

    return _rhs


class ShootResult(typ.NamedTuple):

    f_s0        : float
    fp_s0       : float
    n_zeros_half: int
    robin_match : float


def _initial_data(parity: str) -> typ.Tuple[float, float]:
    if parity == EVEN:
        return (1.0, 0.0)
    elif parity == ODD:
        return (0.0, 1.0)
    else:
        raise DomainError(f"parity must be '{EVEN}' or '{ODD}', got {parity!r}")


def _max_step(problem: SLProblem, mu: float) -> float:
    # keep several steps per half oscillation so no zero is stepped over
    return min(problem.s0 / 64, 1.0 / (1.0 + math.sqrt(abs(mu))))


def count_sign_changes(values: np.ndarray) -> int:
    signs = np.sign(values)
    signs = signs[signs != 0]
    return int(np.count_nonzero(signs[1:] != signs[:-1]))


def shoot_samples(
    problem: SLProblem,
    parity : str,
    mu     : float,
    tol    : Tolerance = SHOOT_TOL,
    s_eval : typ.Optional[typ.Sequence[float]] = None,
) -> Trajectory:
    y0 = _initial_data(parity)
    return ode_trajectory(
        radial_rhs(problem, mu),
        0.0,
        problem.s0,
        y0,
        tol,
        s_eval=s_eval,
        max_step=_max_step(problem, mu),
    )


def shoot_parity(
    problem: SLProblem, parity: str, mu: float, tol: Tolerance = SHOOT_TOL
) -> ShootResult:
    traj  = shoot_samples(problem, parity, mu, tol)
    f, fp = traj.y[-1]
    n     = count_sign_changes(traj.y[:, 0])
    return ShootResult(float(f), float(fp), n, float(fp - problem.robin_coef * f))


def eigen_count(problem: SLProblem, parity: str, mu: float, tol: Tolerance = SHOOT_TOL) -> int:
    """Number of eigenvalues of the given parity strictly below mu.

    The phase of the shooting solution increases with mu, each interior
    zero accounts for one eigenvalue and the sign of the Robin mismatch
    decides whether the next one has been passed as well.
    """
    res = shoot_parity(problem, parity, mu, tol)
    passed = (-1) ** res.n_zeros_half * res.robin_match < 0
    return res.n_zeros_half + int(passed)


class SLEigenpair(typ.NamedTuple):

    mu            : float
    n_zeros       : int
    parity        : str
    s             : np.ndarray
    f             : np.ndarray
    robin_residual: float

    @property
    def samples(self) -> typ.List[typ.Tuple[float, float]]:
        return list(zip(self.s.tolist(), self.f.tolist()))


def _eigenpair(
    problem: SLProblem, parity: str, mu: float, tol: Tolerance, n_samples: int
) -> SLEigenpair:
    s_half = np.linspace(0.0, problem.s0, n_samples)
    traj   = shoot_samples(problem, parity, mu, tol, s_eval=s_half)
    f_half = traj.y[:, 0]
    f_end, fp_end = traj.y[-1]

    mirrored = f_half[::-1][:-1]
    if parity == ODD:
        mirrored = -mirrored
    s_full = np.concatenate((-s_half[::-1][:-1], s_half))
    f_full = np.concatenate((mirrored, f_half))

    scale = float(np.max(np.abs(f_full)))
    if f_end < 0:
        scale = -scale
    robin_residual = (fp_end - problem.robin_coef * f_end) / scale
    return SLEigenpair(
        mu, count_sign_changes(f_full), parity, s_full, f_full / scale, float(robin_residual)
    )


def _isolate_jumps(
    count: typ.Callable[[float], int], lo: float, n_lo: int, hi: float, n_hi: int
) -> typ.List[typ.Tuple[float, float]]:
    """Split [lo, hi] until every piece contains exactly one jump of count."""
    intervals: typ.List[typ.Tuple[float, float, int]] = []
    stack = [(lo, n_lo, hi, n_hi)]
    while stack:
        lo, n_lo, hi, n_hi = stack.pop()
        if n_hi == n_lo:
            continue
        if n_hi - n_lo == 1:
            intervals.append((lo, hi, n_lo))
            continue
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            raise IncompleteSpectrum(f"could not separate eigenvalues near mu={mid!r}")
        n_mid = count(mid)
        stack.append((lo, n_lo, mid, n_mid))
        stack.append((mid, n_mid, hi, n_hi))
    return [(lo, hi) for lo, hi, _ in sorted(intervals, key=lambda iv: iv[2])]


def _parity_eigenpairs(
    problem  : SLProblem,
    parity   : str,
    mu_max   : float,
    tol      : Tolerance,
    n_samples: int,
    found    : typ.List[SLEigenpair],
) -> None:
    def _count(mu: float) -> int:
        return eigen_count(problem, parity, mu, tol)

    def _match(mu: float) -> float:
        return shoot_parity(problem, parity, mu, tol).robin_match

    n_top = _count(mu_max)
    if n_top == 0:
        return

    mu_lo = min(-1.0, mu_max - 1.0)
    for _ in range(tol.max_iter):
        if _count(mu_lo) == 0:
            break
        mu_lo = 2.0 * mu_lo
    else:
        raise IncompleteSpectrum(f"no lower bound for the {parity} spectrum", found)

    intervals = _isolate_jumps(_count, mu_lo, 0, mu_max, n_top)
    logger.debug(f"k={problem.k} {parity}: {len(intervals)} eigenvalues below {mu_max}")

    root_tol = EIGEN_TOL._replace(max_iter=tol.max_iter)
    for lo, hi in intervals:
        m_lo = _match(lo)
        m_hi = _match(hi)
        if not m_lo * m_hi < 0:
            raise IncompleteSpectrum(
                f"Robin mismatch does not change sign on [{lo!r}, {hi!r}] ({parity})", found
            )
        mu = find_root(_match, Bracket(lo, hi, m_lo, m_hi), root_tol)
        found.append(_eigenpair(problem, parity, mu, tol, n_samples))


def eigenvalues_below(
    problem  : SLProblem,
    mu_max   : float,
    tol      : Tolerance = SHOOT_TOL,
    n_samples: int = 201,
) -> typ.List[SLEigenpair]:
    """All eigenpairs with mu < mu_max, sorted by mu.

    Eigenfunctions are sampled at n_samples points on [0, s0], mirrored
    to [-s0, s0], scaled to max-norm 1 with f(s0) > 0.
    """
    if not math.isfinite(mu_max):
        raise DomainError(f"mu_max must be finite, got {mu_max!r}")

    found: typ.List[SLEigenpair] = []
    for parity in PARITIES:
        try:
            _parity_eigenpairs(problem, parity, mu_max, tol, n_samples, found)
        except IncompleteSpectrum as ex:
            ex.partial = sorted(found, key=lambda pair: pair.mu)
            raise
    return sorted(found, key=lambda pair: pair.mu)


def lowest_eigenpairs(
    problem: SLProblem, count: int, tol: Tolerance = SHOOT_TOL, n_samples: int = 201
) -> typ.List[SLEigenpair]:
    """The lowest `count` eigenpairs, raising mu_max until enough are below it."""
    mu_max = 1.0
    for _ in range(tol.max_iter):
        pairs = eigenvalues_below(problem, mu_max, tol, n_samples)
        if len(pairs) >= count:
            return pairs[:count]
        mu_max = 2.0 * mu_max + 1.0
    raise IncompleteSpectrum(f"fewer than {count} eigenvalues found below {mu_max!r}")


def fd_spectrum(problem: SLProblem, n_grid: int, m_eigs: int) -> typ.List[float]:
    """Lowest eigenvalues of a second order finite difference discretization.

    Interior rows use fluxes B(s +- h/2) between nodes, the end rows are
    half cells that carry the Robin term, which keeps the matrix
    symmetric. With the diagonal mass matrix the generalized problem
    reduces to a symmetric tridiagonal one.
    """
    if n_grid < 200:
        raise DomainError(f"n_grid must be >= 200, got {n_grid}")
    if not 1 <= m_eigs <= n_grid:
        raise DomainError(f"m_eigs must be in [1, {n_grid}], got {m_eigs}")

    s0 = problem.s0
    s  = np.linspace(-s0, s0, n_grid)
    h  = s[1] - s[0]

    p_half = catenoid.b_profile_array(problem.params, 0.5 * (s[:-1] + s[1:]))
    w      = catenoid.b_profile_array(problem.params, s)
    q      = problem.potential_array(s)

    mass = h * w
    mass[0]  *= 0.5
    mass[-1] *= 0.5
    if not np.all(np.isfinite(mass)) or np.any(mass <= 0):
        raise DegenerateMatrix("finite difference mass matrix is not positive definite")

    stiff = np.empty(n_grid)
    stiff[1:-1] = (p_half[:-1] + p_half[1:]) / h + h * q[1:-1]
    stiff[0]    = p_half[0] / h + 0.5 * h * q[0] - w[0] * problem.robin_coef
    stiff[-1]   = p_half[-1] / h + 0.5 * h * q[-1] - w[-1] * problem.robin_coef
    coupling    = -p_half / h

    diag    = stiff / mass
    offdiag = coupling / np.sqrt(mass[:-1] * mass[1:])
    eigvals = scipy.linalg.eigh_tridiagonal(
        diag, offdiag, eigvals_only=True, select='i', select_range=(0, m_eigs - 1)
    )
    return [float(mu) for mu in eigvals]


def fd_spectrum_extrapolated(problem: SLProblem, n_grid: int, m_eigs: int) -> typ.List[float]:
    """Richardson combination of fd_spectrum on a grid and its refinement."""
    coarse = fd_spectrum(problem, n_grid, m_eigs)
    fine   = fd_spectrum(problem, 2 * n_grid - 1, m_eigs)
    return [(4.0 * mu_f - mu_c) / 3.0 for mu_c, mu_f in zip(coarse, fine)]


class WronskianDiag(typ.NamedTuple):

    max_drift: float
    w_value  : float


def wronskian_diag(problem: SLProblem, mu: float, tol: Tolerance = SHOOT_TOL) -> WronskianDiag:
    """Drift of B (f_odd f_even' - f_even f_odd') along [0, s0].

    The weighted Wronskian of two solutions is constant, its value at
    s = 0 is -B(0).
    """
    single = radial_rhs(problem, mu)

    def _rhs(s: float, y: np.ndarray) -> np.ndarray:
        return np.concatenate((single(s, y[:2]), single(s, y[2:])))

    traj = ode_trajectory(
        _rhs, 0.0, problem.s0, (1.0, 0.0, 0.0, 1.0), tol, max_step=_max_step(problem, mu)
    )
    fe, fe_p, fo, fo_p = traj.y.T
    weighted = catenoid.b_profile_array(problem.params, traj.s) * (fo * fe_p - fe * fo_p)
    return WronskianDiag(float(np.max(np.abs(weighted - weighted[0]))), float(weighted[0]))


class SampledFunction(typ.NamedTuple):
    """u(s, theta) on a grid; theta is uniform on [0, 2 pi) and periodic."""

    s     : np.ndarray
    theta : np.ndarray
    values: np.ndarray      # shape (len(s), len(theta))


def theta_grid(n_theta: int) -> np.ndarray:
    return np.arange(n_theta) * (2.0 * math.pi / n_theta)


def sample_separable(
    s: np.ndarray, profile: np.ndarray, k: int, n_theta: int = 32, trig: str = 'cos'
) -> SampledFunction:
    theta = theta_grid(n_theta)
    if trig == 'cos':
        angular = np.cos(k * theta)
    elif trig == 'sin':
        angular = np.sin(k * theta)
    else:
        raise DomainError(f"trig must be 'cos' or 'sin', got {trig!r}")
    s = np.asarray(s, dtype=float)
    return SampledFunction(s, theta, np.outer(np.asarray(profile, dtype=float), angular))


def _check_grid(u: SampledFunction, s0: float) -> None:
    span_ok = abs(u.s[0] + s0) <= 1e-9 * (1 + s0) and abs(u.s[-1] - s0) <= 1e-9 * (1 + s0)
    if not span_ok:
        raise DomainError(f"s grid must span [-s0, s0] = [{-s0!r}, {s0!r}]")
    if u.values.shape != (len(u.s), len(u.theta)):
        raise DomainError(f"values shape {u.values.shape} does not match the grid")


def _d_theta(values: np.ndarray) -> np.ndarray:
    n     = values.shape[1]
    waves = np.fft.fftfreq(n, d=1.0 / n)
    return np.real(np.fft.ifft(1j * waves * np.fft.fft(values, axis=1), axis=1))


def weighted_norm_sq(params: catenoid.CatenoidParams, u: SampledFunction) -> float:
    """Integral of u^2 over the surface, area element B ds dtheta."""
    B       = catenoid.b_profile_array(params, u.s)
    d_theta = 2.0 * math.pi / len(u.theta)
    ring    = np.sum(u.values ** 2, axis=1) * d_theta
    return float(scipy.integrate.simpson(ring * B, x=u.s))


def quadratic_form(
    params  : catenoid.CatenoidParams,
    u       : SampledFunction,
    tol     : Tolerance = DEFAULT_TOL,
    solution: typ.Optional[freeboundary.FreeBoundarySolution] = None,
) -> float:
    """Second variation of area with the Robin boundary term.

    S(u, u) = int (|grad u|^2 - (|II|^2 - 2) u^2) dA - coth(r) int_boundary u^2 dL
    """
    if solution is None:
        solution = freeboundary.radius(params, tol)
    _check_grid(u, solution.s0)

    B     = catenoid.b_profile_array(params, u.s)
    II_sq = 2.0 * params.K ** 2 / B ** 4
    u_s   = np.gradient(u.values, u.s, axis=0, edge_order=2)
    u_t   = _d_theta(u.values)

    d_theta = 2.0 * math.pi / len(u.theta)
    density = u_s ** 2 + u_t ** 2 / (B ** 2)[:, np.newaxis] - (II_sq - 2.0)[:, np.newaxis] * u.values ** 2
    ring    = np.sum(density, axis=1) * d_theta
    interior = scipy.integrate.simpson(ring * B, x=u.s)

    boundary = (
        B[0] * np.sum(u.values[0] ** 2) + B[-1] * np.sum(u.values[-1] ** 2)
    ) * d_theta
    return float(interior - solution.robin_coef * boundary)


class ModeIndexRow(typ.NamedTuple):

    a                : float
    k                : int
    n_negative_radial: int
    kernel_dim_radial: int
    mu0              : float
    mu1              : float
    status           : str


def _spectrum_prefix(problem: SLProblem, tol: Tolerance) -> typ.List[SLEigenpair]:
    """Every eigenpair below some mu_max >= 1, with at least two of them."""
    mu_max = 1.0
    for _ in range(tol.max_iter):
        pairs = eigenvalues_below(problem, mu_max, tol, n_samples=33)
        if len(pairs) >= 2:
            return pairs
        mu_max = 2.0 * mu_max + 1.0
    raise IncompleteSpectrum(f"fewer than two eigenvalues found below {mu_max!r}")


def mode_index_rows(
    a: float, k_max: int, tol: Tolerance = SHOOT_TOL
) -> typ.List[ModeIndexRow]:
    """Index rows k = 0 .. k_max for a single parameter value."""
    params   = catenoid.make_params(a)
    solution = freeboundary.radius(params, DEFAULT_TOL)
    rows     = []
    for k in range(k_max + 1):
        try:
            problem = build_problem(params, k, tol, solution)
            pairs   = _spectrum_prefix(problem, tol)
        except NumericsError as ex:
            status = f"incomplete: {type(ex).__name__}: {ex}"
            logger.warning(f"a={a!r} k={k}: {status}")
            rows.append(ModeIndexRow(a, k, -1, -1, math.nan, math.nan, status))
            continue

        mus        = [pair.mu for pair in pairs]
        n_negative = sum(1 for mu in mus if mu < -KERNEL_THRESHOLD)
        kernel_dim = sum(1 for mu in mus if abs(mu) < KERNEL_THRESHOLD)
        rows.append(ModeIndexRow(a, k, n_negative, kernel_dim, mus[0], mus[1], "ok"))
    return rows


def _mode_index_rows_job(job: typ.Tuple[float, int, Tolerance]) -> typ.List[ModeIndexRow]:
    a, k_max, tol = job
    return mode_index_rows(a, k_max, tol)


def mode_index_table(
    a_grid: typ.Sequence[float], k_max: int, tol: Tolerance = SHOOT_TOL, jobs: int = 1
) -> typ.List[ModeIndexRow]:
    if k_max < 2:
        raise DomainError(f"k_max must be >= 2, got {k_max}")
    for a in a_grid:
        catenoid.make_params(a)

    job_args = [(a, k_max, tol) for a in a_grid]
    if jobs > 1 and len(job_args) > 1:
        with mp.Pool(jobs) as pool:
            chunks = list(pool.imap(_mode_index_rows_job, job_args))
    else:
        chunks = [_mode_index_rows_job(job) for job in job_args]
    return [row for chunk in chunks for row in chunk]


def total_index(rows: typ.Sequence[ModeIndexRow]) -> int:
    """Index over all listed modes, counting k >= 1 twice (cos and sin)."""
    a_values = {row.a for row in rows}
    if len(a_values) > 1:
        raise DomainError("total_index expects rows of a single parameter value")
    return sum(row.n_negative_radial * (1 if row.k == 0 else 2) for row in rows)
