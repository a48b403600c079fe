# -*- coding: utf-8 -*-
# pylint:disable=redefined-outer-name ; pytest.fixture problems
# pylint:disable=protected-access ; ok for testing

import math

import numpy as np
import pytest

from spherical_catenoid import catenoid
from spherical_catenoid import numerics
from spherical_catenoid import reports
from spherical_catenoid import spectrum
from spherical_catenoid import freeboundary
from spherical_catenoid.numerics import Tolerance
from spherical_catenoid.numerics import DomainError

KERNEL_A_VALUES = [0.51, 0.6, 0.8, 1.0, 2.0, 5.0, 10.0, 100.0]

PARITY_A_VALUES = [0.6, 1.0, 2.0, 10.0]

ORACLE_A_VALUES = [1.0, 5.0]

INDEX_A_VALUES = [0.6, 1.0, 2.0, 10.0]

EXPECTED_NEGATIVE_COUNTS = {0: 2, 1: 1, 2: 0, 3: 0}

WRONSKIAN_TOL = Tolerance(abs_tol=1e-13, rel_tol=1e-13)


def _problem(a, k):
    return spectrum.build_problem(catenoid.make_params(a), k)


@pytest.fixture(scope="module")
def mode1_problem():
    return _problem(1.0, 1)


@pytest.fixture(scope="module")
def mode1_pairs(mode1_problem):
    return spectrum.eigenvalues_below(mode1_problem, 1.0, n_samples=1001)


def _fstar_profile(params, s_values):
    phi_values = catenoid.phi_grid(params, s_values)
    return np.array([catenoid.fstar_from_phi(params, s, p) for s, p in zip(s_values, phi_values)])


def _fstar_slope_at_waist(params):
    # d/ds fstar at s = 0, with phi'(0) = K / (A^2 B)
    prof = catenoid.profiles(params, 0.0)
    return params.K ** 2 / (prof.A ** 3 * prof.B ** 2) + 2.0 * params.a / prof.A


def test_build_problem():
    problem = _problem(1.0, 1)
    assert problem.robin_coef > 1
    assert problem.s0 == pytest.approx(freeboundary.solve_s0(catenoid.make_params(1.0)), rel=1e-14)

    params = catenoid.make_params(1.0)
    k0     = spectrum.build_problem(params, 0)
    B0     = math.sqrt(0.5)
    II_sq0 = 2.0 * params.K ** 2 / B0 ** 4
    assert k0.potential(0.0) == pytest.approx(B0 * (2.0 - II_sq0), rel=1e-14)

    k3 = spectrum.build_problem(params, 3)
    assert k3.potential(0.0) == pytest.approx(B0 * (2.0 + 9.0 / B0 ** 2 - II_sq0), rel=1e-14)
    assert k3.leading(0.3) == k3.weight(0.3) > 0

    s = np.linspace(-k3.s0, k3.s0, 7)
    assert np.allclose(k3.potential_array(s), [k3.potential(float(x)) for x in s], rtol=1e-13)

    with pytest.raises(DomainError):
        spectrum.build_problem(params, -1)


@pytest.mark.parametrize("a", PARITY_A_VALUES)
def test_parity_kernel_at_zero(a):
    problem = _problem(a, 1)

    odd   = spectrum.shoot_parity(problem, spectrum.ODD, 0.0)
    scale = max(abs(odd.f_s0), abs(odd.fp_s0))
    assert abs(odd.robin_match) <= 1e-8 * scale
    assert odd.n_zeros_half == 0

    even  = spectrum.shoot_parity(problem, spectrum.EVEN, 0.0)
    scale = max(abs(even.f_s0), abs(even.fp_s0))
    assert abs(even.robin_match) > 1e-6 * scale


def test_odd_solution_is_fstar():
    params  = catenoid.make_params(1.0)
    problem = spectrum.build_problem(params, 1)
    s_eval  = np.linspace(0.0, problem.s0, 101)
    traj    = spectrum.shoot_samples(problem, spectrum.ODD, 0.0, s_eval=s_eval)
    expected = _fstar_profile(params, s_eval)
    scaled   = traj.y[:, 0] * _fstar_slope_at_waist(params)
    assert np.max(np.abs(scaled - expected)) <= 1e-7 * np.max(np.abs(expected))


def test_boost_solves_mode_one_but_fails_robin():
    params  = catenoid.make_params(1.5)
    problem = spectrum.build_problem(params, 1)
    s_eval  = np.linspace(0.0, problem.s0, 51)
    traj    = spectrum.shoot_samples(problem, spectrum.EVEN, 0.0, s_eval=s_eval)

    boost    = np.array([catenoid.boost_profile(params, float(s)) for s in s_eval])
    scaled   = traj.y[:, 0] * boost[0]
    assert np.max(np.abs(scaled - boost)) <= 1e-7 * np.max(np.abs(boost))

    even  = spectrum.shoot_parity(problem, spectrum.EVEN, 0.0)
    scale = max(abs(even.f_s0), abs(even.fp_s0))
    assert abs(even.robin_match) > 1e-6 * scale


def test_radial_boost_solves_mode_zero():
    params  = catenoid.make_params(1.5)
    problem = spectrum.build_problem(params, 0)
    s_eval  = np.linspace(0.0, problem.s0, 51)
    traj    = spectrum.shoot_samples(problem, spectrum.ODD, 0.0, s_eval=s_eval)

    B0       = catenoid.profiles(params, 0.0).B
    expected = np.array([-params.a * math.sinh(2 * s) / catenoid.profiles(params, s).B for s in s_eval])
    scaled   = traj.y[:, 0] * (-2.0 * params.a / B0)
    assert np.max(np.abs(scaled - expected)) <= 1e-7 * np.max(np.abs(expected))


def test_mode_one_spectrum(mode1_pairs):
    assert len(mode1_pairs) == 2
    mu0, mu1 = mode1_pairs
    assert mu0.mu < 0
    assert abs(mu1.mu) < 1e-6
    assert mu0.n_zeros == 0
    assert mu1.n_zeros == 1
    assert mu0.parity == spectrum.EVEN
    assert mu1.parity == spectrum.ODD
    for pair in mode1_pairs:
        assert abs(pair.robin_residual) <= 1e-8
        assert np.max(np.abs(pair.f)) == pytest.approx(1.0, rel=1e-15)
        assert pair.f[-1] > 0
        assert pair.s[0] == -pair.s[-1]
        assert pair.samples[0] == (pair.s[0], pair.f[0])


def test_kernel_eigenfunction_is_fstar(mode1_pairs):
    params   = catenoid.make_params(1.0)
    kernel   = mode1_pairs[1]
    expected = _fstar_profile(params, kernel.s)
    expected = expected / np.max(np.abs(expected))
    assert np.max(np.abs(kernel.f - expected)) <= 1e-6


@pytest.mark.parametrize("a", KERNEL_A_VALUES)
def test_mode_one_kernel_across_family(a):
    params  = catenoid.make_params(a)
    problem = spectrum.build_problem(params, 1)
    pairs   = spectrum.eigenvalues_below(problem, 0.5)

    negatives = [pair for pair in pairs if pair.mu < -spectrum.KERNEL_THRESHOLD]
    kernel    = [pair for pair in pairs if abs(pair.mu) < spectrum.KERNEL_THRESHOLD]
    assert len(negatives) == 1
    assert len(kernel) == 1
    assert -1e-6 < pairs[1].mu < 1e-6

    expected = _fstar_profile(params, kernel[0].s)
    expected = expected / np.max(np.abs(expected))
    assert np.max(np.abs(kernel[0].f - expected)) <= 1e-6


def test_sturm_ordering():
    for k in (0, 2):
        pairs = spectrum.lowest_eigenpairs(_problem(1.0, k), 4)
        assert len(pairs) == 4
        mus = [pair.mu for pair in pairs]
        assert mus == sorted(mus)
        assert len(set(mus)) == 4
        assert [pair.n_zeros for pair in pairs] == [0, 1, 2, 3]
        assert [pair.parity for pair in pairs] == [spectrum.EVEN, spectrum.ODD] * 2


def test_eigen_count_matches_spectrum(mode1_problem, mode1_pairs):
    assert spectrum.eigen_count(mode1_problem, spectrum.EVEN, 1.0) == 1
    assert spectrum.eigen_count(mode1_problem, spectrum.ODD , 1.0) == 1
    mu0 = mode1_pairs[0].mu
    assert spectrum.eigen_count(mode1_problem, spectrum.EVEN, mu0 - 1e-3) == 0
    assert spectrum.eigen_count(mode1_problem, spectrum.EVEN, mu0 + 1e-3) == 1

    with pytest.raises(DomainError):
        spectrum.eigenvalues_below(mode1_problem, math.inf)
    with pytest.raises(DomainError):
        spectrum.shoot_parity(mode1_problem, 'neither', 0.0)


def test_isolate_jumps():
    def _count(mu):
        return int(mu > 0.25) + int(mu > 0.75)

    intervals = spectrum._isolate_jumps(_count, 0.0, 0, 1.0, 2)
    assert len(intervals) == 2
    (lo0, hi0), (lo1, hi1) = intervals
    assert lo0 < 0.25 <= hi0 <= lo1 < 0.75 <= hi1

    with pytest.raises(spectrum.IncompleteSpectrum):
        spectrum._isolate_jumps(lambda mu: 0 if mu < 0.3 else 2, 0.0, 0, 1.0, 2)


def test_count_sign_changes():
    assert spectrum.count_sign_changes(np.array([1.0, 0.0, -1.0, -2.0, 0.0, 3.0])) == 2
    assert spectrum.count_sign_changes(np.array([0.0, 1.0, 2.0])) == 0


@pytest.mark.parametrize("a", ORACLE_A_VALUES)
@pytest.mark.parametrize("k", [0, 1, 2, 3])
def test_shooting_agrees_with_finite_differences(a, k):
    problem = _problem(a, k)
    n_grid  = 1001
    h       = 2 * problem.s0 / (n_grid - 1)
    oracle  = spectrum.fd_spectrum_extrapolated(problem, n_grid, 3)
    shot    = [pair.mu for pair in spectrum.lowest_eigenpairs(problem, 3, n_samples=33)]
    for mu_fd, mu_shot in zip(oracle, shot):
        assert abs(mu_fd - mu_shot) <= max(1e-5, 10 * h ** 2)


def test_fd_mode_one():
    problem = _problem(1.0, 1)
    mu0, mu1 = spectrum.fd_spectrum(problem, 2000, 2)
    assert mu0 < 0
    assert abs(mu1) <= 1e-4


def test_fd_second_order_convergence():
    problem = _problem(1.0, 1)
    coarse  = spectrum.fd_spectrum(problem, 401, 2)[1]
    fine    = spectrum.fd_spectrum(problem, 801, 2)[1]
    # mu1 = 0 exactly, so the computed values are the errors
    assert 3.5 <= coarse / fine <= 4.5


def test_fd_mode_zero_negative():
    assert spectrum.fd_spectrum(_problem(2.0, 0), 400, 1)[0] < 0


def test_fd_domain():
    problem = _problem(1.0, 1)
    with pytest.raises(DomainError):
        spectrum.fd_spectrum(problem, 199, 2)
    with pytest.raises(DomainError):
        spectrum.fd_spectrum(problem, 400, 0)


@pytest.mark.parametrize("a", [0.7, 1.0, 3.0])
def test_wronskian_constant(a):
    problem = _problem(a, 1)
    B0      = catenoid.profiles(problem.params, 0.0).B
    for mu in (-1.0, -0.3, 0.0, 0.5):
        diag = spectrum.wronskian_diag(problem, mu, WRONSKIAN_TOL)
        assert diag.w_value == pytest.approx(-B0, rel=1e-15)
        assert diag.max_drift <= 1e-8 * abs(diag.w_value)


def test_wronskian_certifies_trivial_even_kernel():
    problem = _problem(1.0, 1)
    diag    = spectrum.wronskian_diag(problem, 0.0, WRONSKIAN_TOL)
    even    = spectrum.shoot_parity(problem, spectrum.EVEN, 0.0)
    scale   = max(abs(even.f_s0), abs(even.fp_s0))
    assert abs(diag.w_value) > 1e-6 * scale


def _fstar_field(n_s=2001, trig='cos'):
    params   = catenoid.make_params(1.0)
    solution = freeboundary.radius(params)
    s        = np.linspace(-solution.s0, solution.s0, n_s)
    u        = spectrum.sample_separable(s, _fstar_profile(params, s), 1, trig=trig)
    return params, solution, u


def test_quadratic_form_kernel_direction():
    params, solution, u_cos = _fstar_field()
    _, _, u_sin = _fstar_field(trig='sin')

    norm_sq = spectrum.weighted_norm_sq(params, u_cos)
    s_cos   = spectrum.quadratic_form(params, u_cos, solution=solution)
    s_sin   = spectrum.quadratic_form(params, u_sin, solution=solution)
    assert abs(s_cos) <= 1e-5 * norm_sq
    assert s_sin == pytest.approx(s_cos, abs=1e-10 * norm_sq)


def test_quadratic_form_matches_eigenvalue(mode1_pairs):
    params = catenoid.make_params(1.0)
    ground = mode1_pairs[0]
    u      = spectrum.sample_separable(ground.s, ground.f, 1)

    value   = spectrum.quadratic_form(params, u)
    norm_sq = spectrum.weighted_norm_sq(params, u)
    assert value < 0
    assert value / norm_sq == pytest.approx(ground.mu, rel=1e-4)


def test_quadratic_form_grid_checks():
    params, solution, u = _fstar_field(n_s=201)
    short = u._replace(s=u.s[1:], values=u.values[1:])
    with pytest.raises(DomainError):
        spectrum.quadratic_form(params, short, solution=solution)
    with pytest.raises(DomainError):
        spectrum.sample_separable(u.s, u.values[:, 0], 1, trig='tan')


def test_ground_state_nondecreasing_in_k():
    mus = [spectrum.lowest_eigenpairs(_problem(1.0, k), 1)[0].mu for k in range(4)]
    assert mus == sorted(mus)


def test_mode_index_table():
    rows = spectrum.mode_index_table(INDEX_A_VALUES, 3)
    assert len(rows) == len(INDEX_A_VALUES) * 4
    for a in INDEX_A_VALUES:
        a_rows = [row for row in rows if row.a == a]
        assert [row.k for row in a_rows] == [0, 1, 2, 3]
        assert all(row.status == "ok" for row in a_rows)
        counts = {row.k: row.n_negative_radial for row in a_rows}
        assert counts == EXPECTED_NEGATIVE_COUNTS
        kernels = {row.k: row.kernel_dim_radial for row in a_rows}
        assert kernels[1] == 1
        assert all(row.mu0 < row.mu1 for row in a_rows)
        assert spectrum.total_index(a_rows) == 4


def test_mode_index_table_parallel():
    serial   = spectrum.mode_index_table([1.0, 2.0], 2, jobs=1)
    parallel = spectrum.mode_index_table([1.0, 2.0], 2, jobs=2)
    assert parallel == serial


def test_mode_index_table_domain():
    with pytest.raises(DomainError):
        spectrum.mode_index_table([1.0], 1)
    with pytest.raises(DomainError):
        spectrum.mode_index_table([0.4], 3)

    rows = spectrum.mode_index_rows(1.0, 2)
    with pytest.raises(DomainError):
        spectrum.total_index(rows + [rows[0]._replace(a=2.0)])


def test_mode_index_rows_marks_failed_modes(monkeypatch):
    spectrum_prefix = spectrum._spectrum_prefix

    def _flaky_prefix(problem, tol):
        if problem.k == 2:
            raise numerics.StepUnderflow("step size 6.939e-18 underflows at s=0.0443")
        return spectrum_prefix(problem, tol)

    monkeypatch.setattr(spectrum, "_spectrum_prefix", _flaky_prefix)
    rows = spectrum.mode_index_table([1.0], 3)

    assert [row.k for row in rows] == [0, 1, 2, 3]
    assert [row.status for row in rows if row.k != 2] == ["ok", "ok", "ok"]
    failed = rows[2]
    assert failed.status == "incomplete: StepUnderflow: step size 6.939e-18 underflows at s=0.0443"
    assert failed.n_negative_radial == -1
    assert math.isnan(failed.mu0)

    table = reports.index_table([1.0], 3)
    assert table.rows[2][-1] == failed.status
    assert dict(table.footer)['total_index'] == "1:incomplete"
