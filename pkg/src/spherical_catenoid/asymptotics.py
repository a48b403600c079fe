# This file is part of the spherical-catenoid project
#
# Copyright (c) 2026 The spherical-catenoid developers - MIT License
# SPDX-License-Identifier: MIT
"""Closed form constants of the two limits and convergence tables.

Large a:        r(a)  = 3/2 ln(a) + d_inf + O(1/a)
                s0(a) = ln(a) + ln(sqrt(2) / I_inf) + o(1)
Degenerate:     r(a)  = c_star sqrt(a - 1/2) (1 + o(1))
                s0(a) = rho_star sqrt(a - 1/2) (1 + o(1))

with I_inf = int_0^inf cosh(2t)^(-3/2) dt = Gamma(3/4)^2 / sqrt(2 pi),
sigma_star the positive root of sigma = coth(sigma), rho_star =
sinh(sigma_star) and c_star = sigma_star cosh(sigma_star).
"""

import math
import typing as typ
import logging

import numpy as np

from . import catenoid
from . import freeboundary
from .numerics import DEFAULT_TOL
from .numerics import Tolerance
from .numerics import DomainError
from .numerics import NumericsError
from .numerics import gamma_fn
from .numerics import find_root
from .numerics import integrate
from .numerics import make_bracket

logger = logging.getLogger('spherical_catenoid')


class IllConditionedFit(NumericsError):
    pass


EXPLORATORY = "EXPLORATORY"

# int_T^inf cosh(2t)^(-3/2) dt <= 2^(3/2) e^(-3T) / 3
I_INF_CUTOFF = 30.0

BETA_LOG_CUTOFF = 60.0

LARGE_A_RANGE = (1e2, 1e6)
D1_RANGE      = (1e3, 1e6)
EPS_RANGE     = (1e-8, 1e-2)

SIGMA_BRACKET = (1.0, 1.5)

CONSTANTS_TOL = Tolerance(abs_tol=1e-15, rel_tol=1e-15)


class AsymptoticConstants(typ.NamedTuple):

    I_inf     : float
    d_inf     : float
    d_inf_alt : float
    s0_shift  : float
    sigma_star: float
    rho_star  : float
    c_star    : float


def sigma_residual(sigma: float) -> float:
    return sigma - 1.0 / math.tanh(sigma)


def rho_residual(rho: float) -> float:
    """arcsinh(rho) - sqrt(1 + rho^2) / rho, zero exactly at rho_star."""
    return math.asinh(rho) - math.sqrt(1.0 + rho * rho) / rho


def constants(tol: Tolerance = DEFAULT_TOL) -> AsymptoticConstants:
    g34   = gamma_fn(0.75)
    g14   = gamma_fn(0.25)
    I_inf = g34 ** 2 / math.sqrt(2.0 * math.pi)

    d_inf     = math.log(2.0 * math.sqrt(2.0 * math.pi) / g34 ** 2)
    d_inf_alt = math.log(math.sqrt(2.0) * g14 ** 2 / math.pi ** 1.5)
    s0_shift  = math.log(math.sqrt(2.0) / I_inf)

    bracket    = make_bracket(sigma_residual, *SIGMA_BRACKET)
    root_tol   = CONSTANTS_TOL._replace(max_iter=tol.max_iter)
    sigma_star = find_root(sigma_residual, bracket, root_tol)
    rho_star   = math.sinh(sigma_star)
    c_star     = sigma_star * math.cosh(sigma_star)
    return AsymptoticConstants(
        I_inf=I_inf,
        d_inf=d_inf,
        d_inf_alt=d_inf_alt,
        s0_shift=s0_shift,
        sigma_star=sigma_star,
        rho_star=rho_star,
        c_star=c_star,
    )


class IntegralCheck(typ.NamedTuple):

    quadrature_value: float
    closed_form     : float
    gap             : float
    tail_bound      : float
    beta_route_value: float
    beta_integral   : float
    beta_closed_form: float


def _sech_power(t: float) -> float:
    return math.cosh(2.0 * t) ** -1.5


def _beta_unit_interval(v: float) -> float:
    # int_0^1 u^(-1/4) (1+u)^(-3/2) du with u = v^4
    return 4.0 * v * v * (1.0 + v ** 4) ** -1.5


def _beta_upper_half_line(x: float) -> float:
    # int_1^inf u^(-1/4) (1+u)^(-3/2) du with u = e^x
    return math.exp(0.75 * x) * (1.0 + math.exp(x)) ** -1.5


def verify_I_inf(tol: Tolerance = DEFAULT_TOL) -> IntegralCheck:
    """Check I_inf by direct quadrature and by the Beta integral route."""
    closed_form = gamma_fn(0.75) ** 2 / math.sqrt(2.0 * math.pi)
    quad_value  = integrate(_sech_power, 0.0, I_INF_CUTOFF, tol)
    tail_bound  = 2.0 ** 1.5 * math.exp(-3.0 * I_INF_CUTOFF) / 3.0

    unit_part   = integrate(_beta_unit_interval, 0.0, 1.0, tol)
    upper_part  = integrate(_beta_upper_half_line, 0.0, BETA_LOG_CUTOFF, tol)
    beta_closed = 2.0 * gamma_fn(0.75) ** 2 / math.sqrt(math.pi)
    return IntegralCheck(
        quadrature_value=quad_value,
        closed_form=closed_form,
        gap=quad_value - closed_form,
        tail_bound=tail_bound,
        beta_route_value=unit_part / math.sqrt(2.0),
        beta_integral=unit_part + upper_part,
        beta_closed_form=beta_closed,
    )


class ConvergenceRow(typ.NamedTuple):
    """One quantity approaching its limit.

    gap_scaled is gap * a on the large side and gap / eps on the
    degenerate side, bounded when the remainder has the expected order.
    """

    quantity  : str
    a         : float
    value     : float
    target    : float
    gap       : float
    gap_scaled: float


def _check_range(name: str, values: typ.Sequence[float], bounds: typ.Tuple[float, float]) -> None:
    lo, hi = bounds
    for value in values:
        if not lo * (1 - 1e-12) <= value <= hi * (1 + 1e-12):
            raise DomainError(f"{name} must lie in [{lo:g}, {hi:g}], got {value!r}")


def geometric_grid(lo: float, hi: float, count: int) -> typ.List[float]:
    if count < 2 or not 0 < lo < hi:
        raise DomainError(f"geometric grid needs 0 < lo < hi and count >= 2, got {lo}, {hi}, {count}")
    return [float(x) for x in np.geomspace(lo, hi, count)]


def large_a_row_pair(a: float, consts: AsymptoticConstants, tol: Tolerance) -> typ.List[ConvergenceRow]:
    sol     = freeboundary.radius(catenoid.make_params(a), tol)
    r_value = sol.r - 1.5 * math.log(a)
    s_value = sol.s0 - math.log(a)
    r_gap   = r_value - consts.d_inf
    s_gap   = s_value - consts.s0_shift
    return [
        ConvergenceRow("r_minus_1.5_ln_a", a, r_value, consts.d_inf   , r_gap, r_gap * a),
        ConvergenceRow("s0_minus_ln_a"   , a, s_value, consts.s0_shift, s_gap, s_gap * a),
    ]


def large_a_table(
    a_grid: typ.Sequence[float], tol: Tolerance = DEFAULT_TOL
) -> typ.List[ConvergenceRow]:
    _check_range("a", a_grid, LARGE_A_RANGE)
    consts = constants(tol)
    return [row for a in a_grid for row in large_a_row_pair(a, consts, tol)]


def degenerate_row_pair(eps: float, consts: AsymptoticConstants, tol: Tolerance) -> typ.List[ConvergenceRow]:
    params  = catenoid.params_from_eps(eps)
    sol     = freeboundary.radius(params, tol)
    root    = math.sqrt(eps)
    r_value = sol.r / root
    s_value = sol.s0 / root
    r_gap   = r_value - consts.c_star
    s_gap   = s_value - consts.rho_star
    return [
        ConvergenceRow("r_over_sqrt_eps" , params.a, r_value, consts.c_star  , r_gap, r_gap / eps),
        ConvergenceRow("s0_over_sqrt_eps", params.a, s_value, consts.rho_star, s_gap, s_gap / eps),
    ]


def degenerate_table(
    eps_grid: typ.Sequence[float], tol: Tolerance = DEFAULT_TOL
) -> typ.List[ConvergenceRow]:
    _check_range("eps", eps_grid, EPS_RANGE)
    consts = constants(tol)
    return [row for eps in eps_grid for row in degenerate_row_pair(eps, consts, tol)]


class D1Fit(typ.NamedTuple):

    d1_hat      : float
    fit_residual: float
    n_points    : int
    label       : str


def fit_d1(
    a_values: typ.Sequence[float], r_values: typ.Sequence[float], d_inf: float
) -> D1Fit:
    """Least squares slope of r - 3/2 ln(a) - d_inf against 1/a, through the origin."""
    a = np.asarray(a_values, dtype=float)
    r = np.asarray(r_values, dtype=float)
    if len(a) < 4:
        raise IllConditionedFit(f"need at least 4 points to fit d1, got {len(a)}")
    if a.max() / a.min() < 10:
        raise IllConditionedFit("a grid must span at least one decade to fit d1")

    x   = 1.0 / a
    gap = r - 1.5 * np.log(a) - d_inf
    d1  = float(np.dot(gap, x) / np.dot(x, x))
    residual = float(np.sqrt(np.mean((gap * a - d1) ** 2)))
    return D1Fit(d1, residual, len(a), EXPLORATORY)


def estimate_d1(a_grid: typ.Sequence[float], tol: Tolerance = DEFAULT_TOL) -> D1Fit:
    _check_range("a", a_grid, D1_RANGE)
    if len(a_grid) < 4:
        raise IllConditionedFit(f"need at least 4 points to fit d1, got {len(a_grid)}")
    consts   = constants(tol)
    r_values = [freeboundary.radius(catenoid.make_params(a), tol).r for a in a_grid]
    fit      = fit_d1(a_grid, r_values, consts.d_inf)
    logger.debug(f"d1 fit over {len(a_grid)} points: {fit.d1_hat!r} (residual {fit.fit_residual:.3e})")
    return fit


def phi_decay_ratio(a: float, tol: Tolerance = DEFAULT_TOL) -> float:
    """phi(s0) sqrt(a) / I_inf, which tends to 1 as a grows."""
    sol = freeboundary.radius(catenoid.make_params(a), tol)
    return sol.phi_s0 * math.sqrt(a) / constants(tol).I_inf
