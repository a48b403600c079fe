# This file is part of the spherical-catenoid project
#
# Copyright (c) 2026 The spherical-catenoid developers - MIT License
# SPDX-License-Identifier: MIT
"""Geometry of the spherical catenoid family in the hyperboloid model.

Points of hyperbolic 3-space are vectors x = (x0, x1, x2, x3) on the
upper sheet of -x0^2 + x1^2 + x2^2 + x3^2 = -1. The catenoid with
parameter a > 1/2 is parametrized by the meridian arc length s and the
rotation angle theta,

    Phi(s, theta) = (A cosh(phi), A sinh(phi), B cos(theta), B sin(theta))

with A^2 = a cosh(2s) + 1/2, B^2 = a cosh(2s) - 1/2 and the angular
profile phi(s) = integral_0^s K / (A^2 B) dt, K = sqrt(a^2 - 1/4).
"""

import math
import typing as typ
import logging

import numpy as np

from .numerics import DEFAULT_TOL
from .numerics import Tolerance
from .numerics import DomainError
from .numerics import acosh1p
from .numerics import integrate

logger = logging.getLogger('spherical_catenoid')


A_GUARD = 0.5 + 1e-9

# Beyond this |s| the profiles are evaluated through their logarithms.
LOG_DOMAIN_THRESHOLD = 300.0


class CatenoidParams(typ.NamedTuple):

    a  : float
    K  : float
    eps: float      # a - 1/2, carried separately to keep B(0) accurate near the limit


def make_params(a: float) -> CatenoidParams:
    """
    >>> round(make_params(1.0).K, 12)
    0.866025403784
    """
    if not a > A_GUARD:
        raise DomainError(f"parameter must satisfy a > 1/2 (a > {A_GUARD!r}), got a={a!r}")
    eps = a - 0.5
    K   = math.sqrt(eps * (a + 0.5))
    return CatenoidParams(a, K, eps)


def params_from_eps(eps: float) -> CatenoidParams:
    """Parameters for a = 1/2 + eps, keeping eps exact for the degenerate limit."""
    if not eps > A_GUARD - 0.5:
        raise DomainError(f"parameter must satisfy a > 1/2, got eps=a-1/2={eps!r}")
    return CatenoidParams(0.5 + eps, math.sqrt(eps * (1.0 + eps)), eps)


class Profiles(typ.NamedTuple):

    A      : float
    B      : float
    A_prime: float
    B_prime: float


class MeridianState(typ.NamedTuple):

    s       : float
    A       : float
    B       : float
    A_prime : float
    B_prime : float
    B_second: float
    phi     : float
    II_sq   : float


class AmbientPoint(typ.NamedTuple):

    x0: float
    x1: float
    x2: float
    x3: float


class NormalVector(typ.NamedTuple):

    n0: float
    n1: float
    n2: float
    n3: float


Vector4 = typ.Sequence[float]


def minkowski(u: Vector4, v: Vector4) -> float:
    """Lorentzian pairing -u0 v0 + u1 v1 + u2 v2 + u3 v3."""
    return -u[0] * v[0] + u[1] * v[1] + u[2] * v[2] + u[3] * v[3]


def euclidean_norm(u: Vector4) -> float:
    return math.sqrt(sum(c * c for c in u))


def ab_squared(params: CatenoidParams, s: float) -> typ.Tuple[float, float]:
    """A^2 and B^2, written as (a +- 1/2) + 2a sinh(s)^2 to avoid cancellation."""
    t = 2.0 * params.a * math.sinh(s) ** 2
    return (params.a + 0.5) + t, params.eps + t


def log_profiles(params: CatenoidParams, s: float) -> typ.Tuple[float, float]:
    """(ln A, ln B), finite for any s."""
    s = abs(s)
    if s <= LOG_DOMAIN_THRESHOLD:
        A2, B2 = ab_squared(params, s)
        return 0.5 * math.log(A2), 0.5 * math.log(B2)

    # A^2 = (a/2) e^{2s} (1 + e^{-4s} +- e^{-2s}/a)
    base = 0.5 * math.log(0.5 * params.a) + s
    e2   = math.exp(-2.0 * s)
    e4   = e2 * e2
    ln_A = base + 0.5 * math.log1p(e4 + e2 / params.a)
    ln_B = base + 0.5 * math.log1p(e4 - e2 / params.a)
    return ln_A, ln_B


def profiles(params: CatenoidParams, s: float) -> Profiles:
    A2, B2 = ab_squared(params, s)
    A      = math.sqrt(A2)
    B      = math.sqrt(B2)
    num    = params.a * math.sinh(2.0 * s)
    return Profiles(A, B, num / A, num / B)


def b_profile_array(params: CatenoidParams, s: np.ndarray) -> np.ndarray:
    return np.sqrt(params.eps + 2.0 * params.a * np.sinh(s) ** 2)


def phi_integrand(params: CatenoidParams) -> typ.Callable[[float], float]:
    K = params.K

    def _integrand(t: float) -> float:
        if abs(t) > LOG_DOMAIN_THRESHOLD:
            ln_A, ln_B = log_profiles(params, t)
            return math.exp(math.log(K) - 2.0 * ln_A - ln_B)
        A2, B2 = ab_squared(params, t)
        return K / (A2 * math.sqrt(B2))

    return _integrand


def phi(params: CatenoidParams, s: float, tol: Tolerance = DEFAULT_TOL) -> float:
    """Angular profile, odd in s by construction."""
    if s == 0:
        return 0.0
    value = integrate(phi_integrand(params), 0.0, abs(s), tol)
    return math.copysign(value, s)


def phi_shifted(
    params: CatenoidParams, s: float, phi_s: float, ds: float, tol: Tolerance = DEFAULT_TOL
) -> float:
    """phi(s + ds) from a known phi(s), via the integral over the short gap."""
    if ds == 0:
        return phi_s
    integrand = phi_integrand(params)
    lo, hi    = sorted((s, s + ds))
    local_tol = tol._replace(abs_tol=min(tol.abs_tol, 1e-15))
    increment = integrate(integrand, lo, hi, local_tol)
    return phi_s + math.copysign(increment, ds)


def phi_grid(
    params: CatenoidParams, s_values: typ.Sequence[float], tol: Tolerance = DEFAULT_TOL
) -> np.ndarray:
    """phi on a whole grid, by summing integrals between consecutive |s|."""
    s_arr   = np.asarray(s_values, dtype=float)
    nodes   = np.unique(np.abs(s_arr))
    n_nodes = max(len(nodes), 1)
    step_tol  = tol._replace(abs_tol=tol.abs_tol / n_nodes)
    integrand = phi_integrand(params)

    values = np.empty_like(nodes)
    total  = 0.0
    prev   = 0.0
    for i, node in enumerate(nodes):
        if node > prev:
            total += integrate(integrand, prev, float(node), step_tol)
        values[i] = total
        prev = float(node)

    idx = np.searchsorted(nodes, np.abs(s_arr))
    return np.sign(s_arr) * values[idx]


def meridian_state(
    params: CatenoidParams, s: float, tol: Tolerance = DEFAULT_TOL
) -> MeridianState:
    """
    >>> st = meridian_state(make_params(1.0), 0.0)
    >>> (st.phi, st.A_prime, st.B_prime, round(st.II_sq, 12))
    (0.0, 0.0, 0.0, 6.0)
    """
    prof     = profiles(params, s)
    B_second = (2.0 * params.a * math.cosh(2.0 * s) - prof.B_prime ** 2) / prof.B
    II_sq    = 2.0 * params.K ** 2 / prof.B ** 4
    return MeridianState(
        s, prof.A, prof.B, prof.A_prime, prof.B_prime, B_second, phi(params, s, tol), II_sq
    )


def ii_sq_from_curvature(state: MeridianState) -> float:
    """|II|^2 through the meridian curvature, 2 (B''/B - 1)."""
    return 2.0 * (state.B_second / state.B - 1.0)


def _embed_at(prof: Profiles, phi_s: float, theta: float) -> AmbientPoint:
    return AmbientPoint(
        prof.A * math.cosh(phi_s),
        prof.A * math.sinh(phi_s),
        prof.B * math.cos(theta),
        prof.B * math.sin(theta),
    )


def embed_from_phi(params: CatenoidParams, s: float, phi_s: float, theta: float) -> AmbientPoint:
    return _embed_at(profiles(params, s), phi_s, theta)


def embed(
    params: CatenoidParams, s: float, theta: float, tol: Tolerance = DEFAULT_TOL
) -> AmbientPoint:
    return embed_from_phi(params, s, phi(params, s, tol), theta)


def unit_normal_from_phi(
    params: CatenoidParams, s: float, phi_s: float, theta: float
) -> NormalVector:
    prof  = profiles(params, s)
    ch    = math.cosh(phi_s)
    sh    = math.sinh(phi_s)
    twist = params.a * math.sinh(2.0 * s) / (prof.A * prof.B)
    n2_0  = params.K / prof.B
    return NormalVector(
        params.K * ch / prof.A - twist * sh,
        params.K * sh / prof.A - twist * ch,
        n2_0 * math.cos(theta),
        n2_0 * math.sin(theta),
    )


def unit_normal(
    params: CatenoidParams, s: float, theta: float, tol: Tolerance = DEFAULT_TOL
) -> NormalVector:
    """Unit normal, oriented so that n2 = K/B > 0 along theta = 0."""
    return unit_normal_from_phi(params, s, phi(params, s, tol), theta)


def tangents(
    params: CatenoidParams, s: float, theta: float, tol: Tolerance = DEFAULT_TOL
) -> typ.Tuple[AmbientPoint, AmbientPoint]:
    """Analytic coordinate tangent vectors (Phi_s, Phi_theta)."""
    prof  = profiles(params, s)
    phi_s = phi(params, s, tol)
    dphi  = params.K / (prof.A ** 2 * prof.B)
    ch    = math.cosh(phi_s)
    sh    = math.sinh(phi_s)
    t_s = AmbientPoint(
        prof.A_prime * ch + prof.A * sh * dphi,
        prof.A_prime * sh + prof.A * ch * dphi,
        prof.B_prime * math.cos(theta),
        prof.B_prime * math.sin(theta),
    )
    t_theta = AmbientPoint(0.0, 0.0, -prof.B * math.sin(theta), prof.B * math.cos(theta))
    return t_s, t_theta


class MetricSample(typ.NamedTuple):

    g_ss      : float
    g_st      : float
    g_tt      : float
    magnitude : float       # squared euclidean size of the difference quotients


def fd_step(s: float) -> float:
    return max(1e-5, abs(s) * 1e-7)


def induced_metric(
    params: CatenoidParams,
    s     : float,
    theta : float,
    tol   : Tolerance = DEFAULT_TOL,
    h     : typ.Optional[float] = None,
) -> MetricSample:
    """Induced metric from centered differences of the embedding."""
    h     = fd_step(s) if h is None else h
    phi_s = phi(params, s, tol)
    p_hi  = _embed_at(profiles(params, s + h), phi_shifted(params, s, phi_s,  h, tol), theta)
    p_lo  = _embed_at(profiles(params, s - h), phi_shifted(params, s, phi_s, -h, tol), theta)
    q_hi  = _embed_at(profiles(params, s), phi_s, theta + h)
    q_lo  = _embed_at(profiles(params, s), phi_s, theta - h)

    t_s = [(hi - lo) / (2 * h) for hi, lo in zip(p_hi, p_lo)]
    t_t = [(hi - lo) / (2 * h) for hi, lo in zip(q_hi, q_lo)]
    magnitude = max(euclidean_norm(t_s), euclidean_norm(t_t)) ** 2
    return MetricSample(
        minkowski(t_s, t_s), minkowski(t_s, t_t), minkowski(t_t, t_t), magnitude
    )


def fstar(params: CatenoidParams, s: float, tol: Tolerance = DEFAULT_TOL) -> float:
    """Normal component of the rotation field L12 along theta = 0.

    Equals d/ds of the time coordinate A cosh(phi), is odd in s and
    vanishes only at s = 0.
    """
    return fstar_from_phi(params, s, phi(params, s, tol))


def fstar_from_phi(params: CatenoidParams, s: float, phi_s: float) -> float:
    prof = profiles(params, s)
    return (
        params.K * math.sinh(phi_s) / (prof.A * prof.B)
        + params.a * math.sinh(2.0 * s) * math.cosh(phi_s) / prof.A
    )


def boost_profile(params: CatenoidParams, s: float, tol: Tolerance = DEFAULT_TOL) -> float:
    """Radial profile of the boost L02 normal component, even in s."""
    prof  = profiles(params, s)
    phi_s = phi(params, s, tol)
    return (
        params.K * math.cosh(phi_s) / (prof.A * prof.B)
        + params.a * math.sinh(2.0 * s) * math.sinh(phi_s) / prof.A
    )


KillingField = typ.Callable[[Vector4], typ.Tuple[float, float, float, float]]

# Rotations L_ij (i, j >= 1) and boosts L_0j of Minkowski space.
KILLING_FIELDS: typ.Dict[str, KillingField] = {
    'L12': lambda x: (0.0, -x[2], x[1], 0.0),
    'L13': lambda x: (0.0, -x[3], 0.0, x[1]),
    'L23': lambda x: (0.0, 0.0, -x[3], x[2]),
    'L01': lambda x: (x[1], x[0], 0.0, 0.0),
    'L02': lambda x: (x[2], 0.0, x[0], 0.0),
    'L03': lambda x: (x[3], 0.0, 0.0, x[0]),
}


def killing_jacobi(
    params   : CatenoidParams,
    generator: str,
    s        : float,
    theta    : float,
    tol      : Tolerance = DEFAULT_TOL,
) -> float:
    """Normal component <X, nu> of a Killing field X at Phi(s, theta)."""
    field = KILLING_FIELDS.get(generator)
    if field is None:
        valid = ", ".join(sorted(KILLING_FIELDS))
        raise DomainError(f"unknown generator {generator!r}, expected one of {valid}")

    prof  = profiles(params, s)
    phi_s = phi(params, s, tol)
    point = _embed_at(prof, phi_s, theta)
    nu    = unit_normal_from_phi(params, s, phi_s, theta)
    return minkowski(field(point), nu)


def laplace_eigen_residual(
    params: CatenoidParams,
    s     : float,
    tol   : Tolerance = DEFAULT_TOL,
    h     : float = 1e-4,
) -> float:
    """(1/B)(B x0')' - 2 x0 for the time coordinate x0 = A cosh(phi).

    Coordinate functions of a minimal surface in hyperbolic space are
    eigenfunctions of the surface Laplacian with eigenvalue 2.
    """
    phi_s = phi(params, s, tol)

    def _x0(ds: float) -> float:
        return profiles(params, s + ds).A * math.cosh(phi_shifted(params, s, phi_s, ds, tol))

    x_lo, x_mid, x_hi = _x0(-h), _x0(0.0), _x0(h)
    b_lo  = profiles(params, s - h / 2).B
    b_hi  = profiles(params, s + h / 2).B
    b_mid = profiles(params, s).B
    flux  = b_hi * (x_hi - x_mid) - b_lo * (x_mid - x_lo)
    return flux / (h * h * b_mid) - 2.0 * x_mid


def meridian_distance(params: CatenoidParams, s: float, tol: Tolerance = DEFAULT_TOL) -> float:
    """Hyperbolic distance from (1, 0, 0, 0) to Phi(s, 0)."""
    prof  = profiles(params, s)
    phi_s = phi(params, s, tol)
    # A cosh(phi) - 1 = B^2/(A+1) cosh(phi) + 2 sinh(phi/2)^2
    excess = prof.B ** 2 / (prof.A + 1.0) * math.cosh(phi_s) + 2.0 * math.sinh(phi_s / 2) ** 2
    return acosh1p(excess)


def geodesic_distance(x: Vector4, y: Vector4) -> float:
    cosh_d = -minkowski(x, y)
    return acosh1p(max(cosh_d - 1.0, 0.0))
