# This file is part of the spherical-catenoid project
#
# Copyright (c) 2026 The spherical-catenoid developers - MIT License
# SPDX-License-Identifier: MIT
"""Free boundary condition: where the catenoid meets a geodesic sphere orthogonally.

The meridian half-length s0 is the unique positive root of

    tanh(phi(s)) = R(s),    R(s) = B(s) K / (a sinh(2s))

and the ball radius is r = arccosh(A(s0) cosh(phi(s0))).
"""

import math
import typing as typ
import logging

import numpy as np

from . import catenoid
from .numerics import UP
from .numerics import DEFAULT_TOL
from .numerics import Tolerance
from .numerics import DomainError
from .numerics import acosh1p
from .numerics import find_root
from .numerics import acosh_from_log
from .numerics import expand_bracket

logger = logging.getLogger('spherical_catenoid')


# Coarse asymptotic constants, used only to seed the bracket search.
_RHO_GUESS   = 1.5
_SHIFT_GUESS = 0.86

S0_TOL = Tolerance(abs_tol=1e-13, rel_tol=1e-13)

# Above this value of A cosh(phi) the radius is taken from logarithms.
LARGE_COSH = 1e8


class FreeBoundarySolution(typ.NamedTuple):

    a           : float
    s0          : float
    r           : float
    phi_s0      : float
    residual_fb : float
    residual_nu0: float
    robin_coef  : float


class MonotonicityRow(typ.NamedTuple):

    a    : float
    s0   : float
    r    : float
    dr_da: float
    label: str


def _log_sinh_2s(s: float) -> float:
    return 2.0 * s - math.log(2.0) + math.log1p(-math.exp(-4.0 * s))


def boundary_ratio(params: catenoid.CatenoidParams, s: float) -> float:
    """R(s) = B K / (a sinh 2s), strictly decreasing on s > 0."""
    if s > catenoid.LOG_DOMAIN_THRESHOLD:
        _, ln_B = catenoid.log_profiles(params, s)
        return math.exp(ln_B + math.log(params.K) - math.log(params.a) - _log_sinh_2s(s))
    _, B2 = catenoid.ab_squared(params, s)
    return math.sqrt(B2) * params.K / (params.a * math.sinh(2.0 * s))


def fb_residual(params: catenoid.CatenoidParams, s: float, tol: Tolerance = DEFAULT_TOL) -> float:
    if not s > 0:
        raise DomainError(f"free boundary residual requires s > 0, got s={s!r}")
    return math.tanh(catenoid.phi(params, s, tol)) - boundary_ratio(params, s)


def residual_scan(
    params: catenoid.CatenoidParams, s_grid: typ.Sequence[float], tol: Tolerance = DEFAULT_TOL
) -> np.ndarray:
    """fb_residual on a dense grid of positive s, sharing one cumulative phi."""
    s_arr = np.asarray(s_grid, dtype=float)
    if np.any(s_arr <= 0):
        raise DomainError("residual_scan requires all s > 0")
    phi_vals = catenoid.phi_grid(params, s_arr, tol)
    ratio    = np.array([boundary_ratio(params, float(s)) for s in s_arr])
    return np.tanh(phi_vals) - ratio


def _seed(params: catenoid.CatenoidParams) -> float:
    if params.eps < 0.05:
        return 0.5 * _RHO_GUESS * math.sqrt(params.eps)
    if params.a > 10:
        return 0.5 * (math.log(params.a) + _SHIFT_GUESS)
    return 0.1 * min(1.0, 1.0 / math.sqrt(params.a))


def solve_s0(params: catenoid.CatenoidParams, tol: Tolerance = DEFAULT_TOL) -> float:
    def _residual(s: float) -> float:
        return fb_residual(params, s, tol)

    seed = _seed(params)
    for _ in range(tol.max_iter):
        if _residual(seed) < 0:
            break
        seed *= 0.5
    else:
        raise DomainError(f"no point with negative free boundary residual found for a={params.a!r}")

    bracket = expand_bracket(_residual, seed, UP, tol)
    logger.debug(f"solve_s0: a={params.a!r} bracket [{bracket.lo!r}, {bracket.hi!r}]")
    root_tol = S0_TOL._replace(max_iter=tol.max_iter)
    return find_root(_residual, bracket, root_tol)


def _nu0(params: catenoid.CatenoidParams, s: float, phi_s: float) -> float:
    if s <= catenoid.LOG_DOMAIN_THRESHOLD:
        return catenoid.unit_normal_from_phi(params, s, phi_s, 0.0).n0

    ln_A, ln_B = catenoid.log_profiles(params, s)
    rotation   = math.exp(math.log(params.K) - ln_A) * math.cosh(phi_s)
    twist      = math.exp(math.log(params.a) + _log_sinh_2s(s) - ln_A - ln_B) * math.sinh(phi_s)
    return rotation - twist


def _radius_at(params: catenoid.CatenoidParams, s0: float, phi_s0: float) -> float:
    if s0 <= catenoid.LOG_DOMAIN_THRESHOLD:
        prof = catenoid.profiles(params, s0)
        cosh_phi = math.cosh(phi_s0)
        if prof.A * cosh_phi <= LARGE_COSH:
            excess = prof.B ** 2 / (prof.A + 1.0) * cosh_phi + 2.0 * math.sinh(phi_s0 / 2) ** 2
            return acosh1p(excess)

    ln_A, _ = catenoid.log_profiles(params, s0)
    return acosh_from_log(ln_A + math.log(math.cosh(phi_s0)))


def radius(params: catenoid.CatenoidParams, tol: Tolerance = DEFAULT_TOL) -> FreeBoundarySolution:
    s0     = solve_s0(params, tol)
    phi_s0 = catenoid.phi(params, s0, tol)
    r      = _radius_at(params, s0, phi_s0)

    residual_fb  = math.tanh(phi_s0) - boundary_ratio(params, s0)
    residual_nu0 = _nu0(params, s0, phi_s0)
    return FreeBoundarySolution(
        a=params.a,
        s0=s0,
        r=r,
        phi_s0=phi_s0,
        residual_fb=residual_fb,
        residual_nu0=residual_nu0,
        robin_coef=1.0 / math.tanh(r),
    )


def radius_derivative(params: catenoid.CatenoidParams, tol: Tolerance = DEFAULT_TOL) -> float:
    """dr/da by a centered difference with relative step 1e-6."""
    h    = 1e-6 * params.a
    r_hi = radius(catenoid.make_params(params.a + h), tol).r
    r_lo = radius(catenoid.make_params(params.a - h), tol).r
    return (r_hi - r_lo) / (2.0 * h)


def monotonicity_table(
    a_grid: typ.Sequence[float], tol: Tolerance = DEFAULT_TOL
) -> typ.List[MonotonicityRow]:
    rows = []
    for a in a_grid:
        params = catenoid.make_params(a)
        sol    = radius(params, tol)
        rows.append(MonotonicityRow(a, sol.s0, sol.r, radius_derivative(params, tol), "EXPLORATORY"))
    return rows
