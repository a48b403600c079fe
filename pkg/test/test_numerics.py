# -*- coding: utf-8 -*-
# pylint:disable=protected-access ; ok for testing

import math

import numpy as np
import pytest

from spherical_catenoid import numerics
from spherical_catenoid.numerics import Tolerance

TIGHT_TOL = Tolerance(abs_tol=1e-13, rel_tol=1e-13)


def _rk4(rhs, s_from, s_to, y0, n_steps):
    y = np.array(y0, dtype=float)
    h = (s_to - s_from) / n_steps
    s = s_from
    for _ in range(n_steps):
        k1 = rhs(s, y)
        k2 = rhs(s + h / 2, y + h / 2 * k1)
        k3 = rhs(s + h / 2, y + h / 2 * k2)
        k4 = rhs(s + h, y + h * k3)
        y  = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        s += h
    return y


def test_tolerance_validation():
    assert Tolerance().validated() == numerics.DEFAULT_TOL
    with pytest.raises(numerics.DomainError):
        Tolerance(abs_tol=0.0).validated()
    with pytest.raises(numerics.DomainError):
        Tolerance(rel_tol=-1.0).validated()
    with pytest.raises(ValueError):
        Tolerance(max_iter=0).validated()


@pytest.mark.parametrize(
    "f, lo, hi, expected",
    [
        (math.exp, 0.0, 1.0, math.e - 1.0),
        (lambda t: 1.0 / (1.0 + t * t), 0.0, 1.0, math.pi / 4),
        (math.cos, 0.0, math.pi / 2, 1.0),
        (lambda t: math.cosh(2 * t) ** -1.5, -2.0, 2.0, None),
    ],
)
def test_integrate_smooth(f, lo, hi, expected):
    value = numerics.integrate(f, lo, hi, TIGHT_TOL)
    if expected is None:
        # even integrand: the two halves agree
        half = numerics.integrate(f, 0.0, hi, TIGHT_TOL)
        assert abs(value - 2 * half) <= 1e-12
    else:
        assert abs(value - expected) <= 1e-12


def test_integrate_endpoint_singularity():
    # int_0^1 t^(-1/2) dt = 2, adaptive refinement near 0
    value = numerics.integrate(lambda t: t ** -0.5, 0.0, 1.0, Tolerance(1e-9, 1e-9, max_subdiv=5000))
    assert abs(value - 2.0) <= 1e-8


def test_integrate_errors():
    assert numerics.integrate(math.exp, 1.0, 1.0) == 0.0
    with pytest.raises(numerics.DomainError):
        numerics.integrate(math.exp, 1.0, 0.0)
    with pytest.raises(numerics.NonConvergence):
        numerics.integrate(lambda t: math.sin(1.0 / t), 1e-9, 1.0, Tolerance(1e-14, 1e-14, max_subdiv=20))


def test_find_root():
    bracket = numerics.make_bracket(lambda x: x * x - 2.0, 1.0, 2.0)
    root    = numerics.find_root(lambda x: x * x - 2.0, bracket, TIGHT_TOL)
    assert abs(root - math.sqrt(2.0)) <= 1e-12

    # reference: plain bisection
    lo, hi = 0.5, 1.5
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        if math.cos(mid) - mid > 0:
            lo = mid
        else:
            hi = mid
    bracket = numerics.make_bracket(lambda x: math.cos(x) - x, 0.5, 1.5)
    assert abs(numerics.find_root(lambda x: math.cos(x) - x, bracket, TIGHT_TOL) - lo) <= 1e-12


def test_find_root_endpoint_zero():
    bracket = numerics.Bracket(0.0, 1.0, 0.0, 1.0)
    assert numerics.find_root(lambda x: x, bracket) == 0.0


def test_bracket_errors():
    with pytest.raises(numerics.InvalidBracket):
        numerics.make_bracket(lambda x: x * x + 1, -1.0, 1.0)
    with pytest.raises(numerics.InvalidBracket):
        numerics.make_bracket(lambda x: x, 1.0, -1.0)
    with pytest.raises(ValueError):
        numerics.find_root(lambda x: x * x + 1, numerics.Bracket(-1.0, 1.0, 2.0, 2.0))


def test_expand_bracket():
    bracket = numerics.expand_bracket(lambda x: x - 100.0, 1.0, numerics.UP)
    assert bracket.lo < 100.0 < bracket.hi
    assert bracket.f_lo < 0 < bracket.f_hi

    bracket = numerics.expand_bracket(lambda x: x + 3.0, 0.0, numerics.DOWN)
    assert bracket.lo < -3.0 < bracket.hi

    with pytest.raises(numerics.NoSignChange):
        numerics.expand_bracket(lambda x: 1.0, 1.0, numerics.UP, Tolerance(max_iter=10))
    with pytest.raises(numerics.DomainError):
        numerics.expand_bracket(lambda x: x, 1.0, 'sideways')


def _oscillator(s, y):
    return np.array((y[1], -y[0]))


def test_ode_solve_oscillator():
    y = numerics.ode_solve(_oscillator, 0.0, 10.0, (0.0, 1.0), TIGHT_TOL)
    assert abs(y[0] - math.sin(10.0)) <= 1e-10
    assert abs(y[1] - math.cos(10.0)) <= 1e-10

    backwards = numerics.ode_solve(_oscillator, 10.0, 0.0, y, TIGHT_TOL)
    assert abs(backwards[0]) <= 1e-9
    assert abs(backwards[1] - 1.0) <= 1e-9


def test_ode_solve_against_rk4():
    def _rhs(s, y):
        return np.array((y[1], -math.sinh(s) * y[1] + (2.0 + math.cos(s)) * y[0]))

    expected = _rk4(_rhs, 0.0, 2.0, (1.0, 0.0), 4000)
    y        = numerics.ode_solve(_rhs, 0.0, 2.0, (1.0, 0.0), TIGHT_TOL)
    assert np.allclose(y, expected, rtol=1e-9, atol=1e-9)


def test_ode_trajectory_lands_on_targets():
    s_eval     = np.linspace(0.0, 3.0, 31)
    trajectory = numerics.ode_trajectory(_oscillator, 0.0, 3.0, (0.0, 1.0), TIGHT_TOL, s_eval=s_eval)
    assert np.array_equal(trajectory.s, s_eval)
    assert np.allclose(trajectory.y[:, 0], np.sin(s_eval), atol=1e-10)

    short = numerics.ode_trajectory(_oscillator, 0.0, 1.0, (0.0, 1.0), max_step=0.01)
    assert np.all(np.diff(short.s) <= 0.01 + 1e-14)
    assert short.s[-1] == 1.0


def test_ode_trajectory_dense_grid():
    def _growth(s, y):
        return np.array((y[0],))

    s_eval     = np.linspace(0.0, 1.8919, 33)
    trajectory = numerics.ode_trajectory(_growth, 0.0, 1.8919, (1.0,), TIGHT_TOL, s_eval=s_eval)
    assert np.array_equal(trajectory.s, s_eval)
    assert np.allclose(trajectory.y[:, 0], np.exp(s_eval), rtol=1e-10)

    backwards = numerics.ode_trajectory(
        _growth, 1.8919, 0.0, (math.exp(1.8919),), TIGHT_TOL, s_eval=s_eval[::-1]
    )
    assert np.array_equal(backwards.s, s_eval[::-1])
    assert np.allclose(backwards.y[:, 0], np.exp(s_eval[::-1]), rtol=1e-10)


def test_ode_trajectory_targets_one_ulp_apart():
    s_mid  = 0.04437681094268405
    s_eval = [0.0, s_mid, np.nextafter(s_mid, 1.0), 1.0]
    trajectory = numerics.ode_trajectory(_oscillator, 0.0, 1.0, (0.0, 1.0), TIGHT_TOL, s_eval=s_eval)
    assert trajectory.s.tolist() == s_eval
    assert np.allclose(trajectory.y[:, 0], np.sin(s_eval), atol=1e-10)

    # s_to a rounding error past the last target
    s_to  = np.nextafter(1.0, 2.0)
    final = numerics.ode_trajectory(_oscillator, 0.0, s_to, (0.0, 1.0), TIGHT_TOL)
    assert final.s[-1] == s_to
    assert abs(final.y[-1, 0] - math.sin(1.0)) <= 1e-10


def test_ode_zero_span():
    trajectory = numerics.ode_trajectory(_oscillator, 1.0, 1.0, (2.0, 3.0))
    assert trajectory.s.tolist() == [1.0]
    assert trajectory.y.tolist() == [[2.0, 3.0]]


def test_ode_step_underflow():
    def _blowup(s, y):
        return np.array((y[0] ** 2,))

    with pytest.raises(numerics.StepUnderflow):
        numerics.ode_solve(_blowup, 0.0, 2.0, (1.0,), TIGHT_TOL)


@pytest.mark.parametrize("x", [0.1, 0.25, 0.5, 0.75, 1.0, 1.5, 2.5, 3.7, 7.25, 11.9, 12.0, 30.5, 150.0])
def test_gamma_fn(x):
    rel_tol = 1e-14 if x < 12 else 1e-12
    assert abs(numerics.gamma_fn(x) / math.gamma(x) - 1.0) <= rel_tol


def test_gamma_fn_special_values():
    assert abs(numerics.gamma_fn(0.5) - math.sqrt(math.pi)) <= 4e-15
    # Gamma(1/4) Gamma(3/4) = pi sqrt(2)
    product = numerics.gamma_fn(0.25) * numerics.gamma_fn(0.75)
    assert abs(product - math.pi * math.sqrt(2.0)) <= 2e-14

    with pytest.raises(numerics.DomainError):
        numerics.gamma_fn(0.0)
    with pytest.raises(numerics.DomainError):
        numerics.gamma_fn(-1.5)
    with pytest.raises(numerics.DomainError):
        numerics.gamma_fn(200.0)


def test_acosh_helpers():
    for x in (0.5, 3.0, 1e6):
        assert numerics.acosh1p(x) == pytest.approx(math.acosh(1.0 + x), rel=1e-12)
    assert numerics.acosh1p(0.0) == 0.0
    # small argument: arccosh(1 + x) ~ sqrt(2x)
    assert numerics.acosh1p(1e-20) == pytest.approx(math.sqrt(2e-20), rel=1e-8)

    for x in (10.0, 1e5, 1e100):
        assert numerics.acosh_from_log(math.log(x)) == pytest.approx(math.acosh(x), rel=1e-14)
    assert numerics.acosh_from_log(1000.0) == pytest.approx(1000.0 + math.log(2.0), rel=1e-15)

    with pytest.raises(numerics.DomainError):
        numerics.acosh1p(-1e-3)
