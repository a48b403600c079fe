# -*- coding: utf-8 -*-

import math

import numpy as np
import pytest
import scipy.integrate

from spherical_catenoid import catenoid
from spherical_catenoid import freeboundary
from spherical_catenoid.numerics import DomainError

SOLUTION_A_VALUES = [0.51, 0.6, 1.0, 2.0, 10.0, 1e3]

SCAN_A_VALUES = [0.6, 1.0, 2.0, 10.0]


def _simpson_phi(params, s, n_intervals=20000):
    t  = np.linspace(0.0, s, n_intervals + 1)
    A2 = params.a * np.cosh(2 * t) + 0.5
    B  = np.sqrt(params.a * np.cosh(2 * t) - 0.5)
    return float(scipy.integrate.simpson(params.K / (A2 * B), x=t))


def _oracle_residual(params, s):
    B = math.sqrt(params.a * math.cosh(2 * s) - 0.5)
    return math.tanh(_simpson_phi(params, s)) - B * params.K / (params.a * math.sinh(2 * s))


def _bisect(f, lo, hi, width):
    f_lo = f(lo)
    while hi - lo > width:
        mid   = 0.5 * (lo + hi)
        f_mid = f(mid)
        if (f_mid < 0) == (f_lo < 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _rho_star():
    sigma = _bisect(lambda x: x - 1.0 / math.tanh(x), 1.0, 1.5, 1e-15)
    return math.sinh(sigma)


def _sign_changes(values):
    signs = np.sign(values)
    return int(np.count_nonzero(signs[1:] != signs[:-1]))


def test_fb_residual_shape():
    params = catenoid.make_params(1.0)
    near   = [freeboundary.fb_residual(params, s) for s in (1e-2, 1e-3, 1e-4)]
    assert near[0] < 0
    # R(s) ~ B(0) K / (2 a s) near 0
    assert near[0] > near[1] > near[2]
    assert near[2] * 1e-4 == pytest.approx(-math.sqrt(0.5) * params.K / 2, rel=1e-3)
    assert freeboundary.fb_residual(params, 10.0) > 0

    for s in (0.0, -1.0):
        with pytest.raises(DomainError):
            freeboundary.fb_residual(params, s)


@pytest.mark.parametrize("a", SCAN_A_VALUES)
def test_residual_single_sign_change(a):
    params   = catenoid.make_params(a)
    s_grid   = np.linspace(0.1, 10.0, 10000)
    residual = freeboundary.residual_scan(params, s_grid)
    assert _sign_changes(residual) == 1
    assert residual[0] < 0 < residual[-1]
    assert np.all(np.diff(residual) > 0)


def test_residual_scan_matches_pointwise():
    params = catenoid.make_params(2.0)
    s_grid = np.linspace(0.2, 3.0, 15)
    scan   = freeboundary.residual_scan(params, s_grid)
    for s, value in zip(s_grid, scan):
        assert value == pytest.approx(freeboundary.fb_residual(params, float(s)), abs=1e-12)

    with pytest.raises(DomainError):
        freeboundary.residual_scan(params, [0.0, 1.0])


def test_boundary_ratio_log_domain():
    params = catenoid.make_params(2.0)
    lo = freeboundary.boundary_ratio(params, 299.0)
    hi = freeboundary.boundary_ratio(params, 301.0)
    assert hi / lo == pytest.approx(math.exp(-2.0), rel=1e-12)
    assert hi > 0


@pytest.mark.parametrize("a", SOLUTION_A_VALUES)
def test_radius_solution(a):
    params = catenoid.make_params(a)
    sol    = freeboundary.radius(params)
    assert sol.a == a
    assert sol.s0 > 0
    assert sol.r > 0
    assert abs(sol.residual_fb) <= 1e-11
    assert abs(sol.residual_nu0) <= 1e-9
    assert sol.robin_coef == pytest.approx(1.0 / math.tanh(sol.r), rel=1e-15)

    s_grid   = np.geomspace(1e-3, 50.0, 4000)
    residual = freeboundary.residual_scan(params, s_grid)
    assert _sign_changes(residual) == 1
    crossing = int(np.argmax(residual > 0))
    assert s_grid[crossing - 1] < sol.s0 <= s_grid[crossing]


def test_solve_s0_against_bisection():
    params   = catenoid.make_params(1.0)
    expected = _bisect(lambda s: _oracle_residual(params, s), 0.1, 10.0, 1e-13)
    assert abs(freeboundary.solve_s0(params) - expected) <= 1e-12


def test_solve_s0_large_a():
    a       = 1e4
    i_inf   = math.gamma(0.75) ** 2 / math.sqrt(2 * math.pi)
    shift   = math.log(math.sqrt(2.0) / i_inf)
    s0      = freeboundary.solve_s0(catenoid.make_params(a))
    assert abs(s0 - math.log(a) - shift) <= 0.01


def test_solve_s0_near_degenerate():
    eps = 1e-4
    s0  = freeboundary.solve_s0(catenoid.params_from_eps(eps))
    assert s0 == pytest.approx(_rho_star() * math.sqrt(eps), rel=0.01)


def test_radius_against_independent_evaluation():
    params = catenoid.make_params(1.0)
    sol    = freeboundary.radius(params)
    A      = math.sqrt(params.a * math.cosh(2 * sol.s0) + 0.5)
    r      = math.acosh(A * math.cosh(_simpson_phi(params, sol.s0)))
    assert abs(sol.r - r) <= 1e-10


def test_radius_large_a():
    sol = freeboundary.radius(catenoid.make_params(1e6))
    assert 1.19 <= sol.r - 1.5 * math.log(1e6) <= 1.21
    assert abs(sol.residual_nu0) <= 1e-9


def test_radius_log_domain_branch():
    params = catenoid.make_params(1e6)
    sol    = freeboundary.radius(params)
    prof   = catenoid.profiles(params, sol.s0)
    assert prof.A * math.cosh(sol.phi_s0) > freeboundary.LARGE_COSH
    direct = math.acosh(prof.A * math.cosh(sol.phi_s0))
    assert sol.r == pytest.approx(direct, rel=1e-14)


def test_radius_derivative():
    for a in (0.51, 0.6, 1.0, 2.0, 10.0):
        assert freeboundary.radius_derivative(catenoid.make_params(a)) > 0

    a      = 1.0
    h      = 1e-3
    coarse = (
        freeboundary.radius(catenoid.make_params(a + h)).r
        - freeboundary.radius(catenoid.make_params(a - h)).r
    ) / (2 * h)
    fine = freeboundary.radius_derivative(catenoid.make_params(a))
    assert fine == pytest.approx(coarse, rel=1e-5)


def test_monotonicity_table():
    rows = freeboundary.monotonicity_table([0.6, 1.0, 3.0])
    assert [row.a for row in rows] == [0.6, 1.0, 3.0]
    assert all(row.label == "EXPLORATORY" for row in rows)
    assert all(row.dr_da > 0 for row in rows)
    radii = [row.r for row in rows]
    assert radii == sorted(radii)


def test_radius_derivative_degenerate_limit():
    # r ~ c_star sqrt(a - 1/2), so dr/da ~ c_star / (2 sqrt(a - 1/2))
    sigma  = _bisect(lambda x: x - 1.0 / math.tanh(x), 1.0, 1.5, 1e-15)
    c_star = sigma * math.cosh(sigma)
    a      = 0.51
    dr_da  = freeboundary.radius_derivative(catenoid.make_params(a))
    assert dr_da == pytest.approx(c_star / (2 * math.sqrt(a - 0.5)), rel=0.1)


def test_smooth_dependence_on_a():
    log_a = np.linspace(math.log(0.6), math.log(100.0), 12)
    s0    = np.array([freeboundary.solve_s0(catenoid.make_params(math.exp(x))) for x in log_a])
    step  = log_a[1] - log_a[0]
    second_diff = np.diff(s0, 2) / step ** 2
    assert np.all(np.abs(second_diff) < 1.0)
    assert np.all(np.diff(s0) > 0)
