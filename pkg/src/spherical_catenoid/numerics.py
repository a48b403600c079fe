# This file is part of the spherical-catenoid project
#
# Copyright (c) 2026 The spherical-catenoid developers - MIT License
# SPDX-License-Identifier: MIT
"""Numerical kernels with explicit accuracy contracts.

Everything else in the package is built on these: adaptive
Gauss-Kronrod quadrature, bracketed root finding, an embedded
Runge-Kutta integrator and a double precision Gamma function.
All functions are pure.
"""

import math
import heapq
import typing as typ
import logging

import numpy as np

logger = logging.getLogger('spherical_catenoid')


class NumericsError(Exception):
    pass


class DomainError(NumericsError, ValueError):
    pass


class NonConvergence(NumericsError):
    pass


class InvalidBracket(NumericsError, ValueError):
    pass


class NoSignChange(NumericsError):
    pass


class StepUnderflow(NumericsError):
    pass


class Tolerance(typ.NamedTuple):

    abs_tol   : float = 1e-12
    rel_tol   : float = 1e-12
    max_iter  : int   = 200
    max_subdiv: int   = 2000

    def validated(self) -> 'Tolerance':
        if not self.abs_tol > 0:
            raise DomainError(f"abs_tol must be > 0, got {self.abs_tol}")
        if not self.rel_tol >= 0:
            raise DomainError(f"rel_tol must be >= 0, got {self.rel_tol}")
        if self.max_iter < 1 or self.max_subdiv < 1:
            raise DomainError("max_iter and max_subdiv must be >= 1")
        return self


DEFAULT_TOL = Tolerance()


class Bracket(typ.NamedTuple):

    lo  : float
    hi  : float
    f_lo: float
    f_hi: float


ScalarFn = typ.Callable[[float], float]

MACHEPS = np.finfo(float).eps


def make_bracket(f: ScalarFn, lo: float, hi: float) -> Bracket:
    if not lo < hi:
        raise InvalidBracket(f"bracket requires lo < hi, got [{lo}, {hi}]")
    f_lo = f(lo)
    f_hi = f(hi)
    if not f_lo * f_hi < 0:
        raise InvalidBracket(f"no sign change on [{lo}, {hi}]: f_lo={f_lo}, f_hi={f_hi}")
    return Bracket(lo, hi, f_lo, f_hi)


# Gauss-Kronrod 7/15 nodes and weights (QUADPACK qk15), on [-1, 1].
# The odd indices of _XGK are the Gauss nodes.

_XGK = (
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
)

_WGK = (
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
)

_WG = (
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
)


class _Panel(typ.NamedTuple):

    neg_err: float
    lo     : float
    hi     : float
    value  : float
    err    : float


def _gk15(f: ScalarFn, lo: float, hi: float) -> _Panel:
    center   = 0.5 * (lo + hi)
    halfwidth = 0.5 * (hi - lo)

    f_center = f(center)
    res_k    = _WGK[7] * f_center
    res_g    = _WG[3] * f_center
    res_abs  = abs(res_k)

    f_vals: typ.List[typ.Tuple[float, float]] = []
    for j in range(7):
        dx   = halfwidth * _XGK[j]
        f_lo = f(center - dx)
        f_hi = f(center + dx)
        f_vals.append((f_lo, f_hi))
        res_k   += _WGK[j] * (f_lo + f_hi)
        res_abs += _WGK[j] * (abs(f_lo) + abs(f_hi))
        if j % 2 == 1:
            res_g += _WG[j // 2] * (f_lo + f_hi)

    mean    = 0.5 * res_k
    res_asc = _WGK[7] * abs(f_center - mean)
    for j, (f_lo, f_hi) in enumerate(f_vals):
        res_asc += _WGK[j] * (abs(f_lo - mean) + abs(f_hi - mean))

    value   = res_k * halfwidth
    res_abs = res_abs * abs(halfwidth)
    res_asc = res_asc * abs(halfwidth)
    err     = abs((res_k - res_g) * halfwidth)

    if res_asc != 0 and err != 0:
        err = res_asc * min(1.0, (200 * err / res_asc) ** 1.5)
    if res_abs > np.finfo(float).tiny / (50 * MACHEPS):
        err = max(50 * MACHEPS * res_abs, err)

    return _Panel(-err, lo, hi, value, err)


def integrate(f: ScalarFn, lo: float, hi: float, tol: Tolerance = DEFAULT_TOL) -> float:
    """Adaptive Gauss-Kronrod (7/15) quadrature of f over [lo, hi].

    The panel with the largest error estimate is bisected until the
    summed estimate is below max(abs_tol, rel_tol * |Q|).

    >>> round(integrate(lambda t: 3 * t * t, 0.0, 1.0), 12)
    1.0
    """
    if hi < lo:
        raise DomainError(f"integrate requires lo <= hi, got [{lo}, {hi}]")
    if hi == lo:
        return 0.0

    panels = [_gk15(f, lo, hi)]
    while True:
        value = math.fsum(p.value for p in panels)
        error = math.fsum(p.err   for p in panels)
        if error <= max(tol.abs_tol, tol.rel_tol * abs(value)):
            return value

        if len(panels) >= tol.max_subdiv:
            raise NonConvergence(
                f"quadrature on [{lo}, {hi}] exceeded {tol.max_subdiv} panels, "
                f"error estimate {error:.3e}"
            )

        worst = heapq.heappop(panels)
        mid   = 0.5 * (worst.lo + worst.hi)
        if not worst.lo < mid < worst.hi:
            # panel cannot be split any further in doubles
            raise NonConvergence(f"quadrature panel collapsed at {mid}")
        heapq.heappush(panels, _gk15(f, worst.lo, mid))
        heapq.heappush(panels, _gk15(f, mid, worst.hi))


def find_root(f: ScalarFn, bracket: Bracket, tol: Tolerance = DEFAULT_TOL) -> float:
    """Brent's method on a sign-changing bracket.

    Inverse quadratic and secant steps are taken only while they stay
    inside the bracket and shrink it fast enough, otherwise it bisects.
    Returns once the bracket half-width is below
    max(abs_tol, rel_tol * |x|).
    """
    a, b, fa, fb = bracket.lo, bracket.hi, bracket.f_lo, bracket.f_hi
    if not a < b:
        raise InvalidBracket(f"bracket requires lo < hi, got [{a}, {b}]")
    if fa * fb >= 0:
        if fa == 0:
            return a
        if fb == 0:
            return b
        raise InvalidBracket(f"no sign change on [{a}, {b}]: f_lo={fa}, f_hi={fb}")

    if abs(fa) < abs(fb):
        a, b   = b, a
        fa, fb = fb, fa

    c, fc = a, fa
    d = e = b - a

    for iteration in range(tol.max_iter):
        if fb * fc > 0:
            c, fc = a, fa
            d = e = b - a
        if abs(fc) < abs(fb):
            a, b, c    = b, c, b
            fa, fb, fc = fb, fc, fb

        xtol = 2 * MACHEPS * abs(b) + 0.5 * max(tol.abs_tol, tol.rel_tol * abs(b))
        m    = 0.5 * (c - b)
        if abs(m) <= xtol or fb == 0:
            logger.debug(f"find_root converged after {iteration} iterations at {b!r}")
            return b

        if abs(e) >= xtol and abs(fa) > abs(fb):
            s = fb / fa
            if a == c:
                p = 2 * m * s
                q = 1 - s
            else:
                q = fa / fc
                r = fb / fc
                p = s * (2 * m * q * (q - r) - (b - a) * (r - 1))
                q = (q - 1) * (r - 1) * (s - 1)
            if p > 0:
                q = -q
            else:
                p = -p
            if 2 * p < min(3 * m * q - abs(xtol * q), abs(e * q)):
                e = d
                d = p / q
            else:
                d = e = m
        else:
            d = e = m

        a, fa = b, fb
        if abs(d) > xtol:
            b += d
        else:
            b += math.copysign(xtol, m)
        fb = f(b)

    raise NonConvergence(f"find_root did not converge in {tol.max_iter} iterations")


UP   = 'up'
DOWN = 'down'


def expand_bracket(
    f: ScalarFn, seed: float, direction: str, tol: Tolerance = DEFAULT_TOL
) -> Bracket:
    """Walk away from seed with doubling steps until f changes sign.

    >>> expand_bracket(lambda x: x - 5, 1.0, UP)[:2]
    (4.0, 8.0)
    """
    if direction not in (UP, DOWN):
        raise DomainError(f"direction must be '{UP}' or '{DOWN}', got {direction!r}")

    sign   = 1.0 if direction == UP else -1.0
    step   = abs(seed) if seed != 0 else 1.0
    x_prev = seed
    f_prev = f(seed)

    for _ in range(tol.max_iter):
        x  = x_prev + sign * step
        fx = f(x)
        if f_prev != 0 and f_prev * fx < 0:
            if x_prev < x:
                return Bracket(x_prev, x, f_prev, fx)
            else:
                return Bracket(x, x_prev, fx, f_prev)

        logger.debug(f"expand_bracket: no sign change up to {x!r}")
        if fx != 0:
            x_prev, f_prev = x, fx
        step *= 2

    raise NoSignChange(f"no sign change found from seed {seed} after {tol.max_iter} doublings")


# Cash-Karp 5(4) embedded pair.

_CK_C = (0.0, 1 / 5, 3 / 10, 3 / 5, 1.0, 7 / 8)

_CK_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (3 / 10, -9 / 10, 6 / 5),
    (-11 / 54, 5 / 2, -70 / 27, 35 / 27),
    (1631 / 55296, 175 / 512, 575 / 13824, 44275 / 110592, 253 / 4096),
)

_CK_B5 = (37 / 378, 0.0, 250 / 621, 125 / 594, 0.0, 512 / 1771)

_CK_ERR = (-277 / 64512, 0.0, 6925 / 370944, -6925 / 202752, -277 / 14336, 277 / 7084)


State = np.ndarray

VectorField = typ.Callable[[float, State], State]


class Trajectory(typ.NamedTuple):
    """Accepted steps of an integration, s[0] = s_from, s[-1] = s_to."""

    s: np.ndarray
    y: np.ndarray


def _ck_step(rhs: VectorField, s: float, y: State, h: float) -> typ.Tuple[State, State]:
    k: typ.List[State] = []
    for stage in range(6):
        y_stage = y
        for coef, k_j in zip(_CK_A[stage], k):
            y_stage = y_stage + (h * coef) * k_j
        k.append(np.asarray(rhs(s + _CK_C[stage] * h, y_stage), dtype=float))

    y_new = y + h * sum(b * k_j for b, k_j in zip(_CK_B5, k) if b)
    y_err = h * sum(e * k_j for e, k_j in zip(_CK_ERR, k) if e)
    return y_new, y_err


def ode_trajectory(
    rhs     : VectorField,
    s_from  : float,
    s_to    : float,
    y0      : typ.Sequence[float],
    tol     : Tolerance = DEFAULT_TOL,
    s_eval  : typ.Optional[typ.Sequence[float]] = None,
    max_step: typ.Optional[float] = None,
) -> Trajectory:
    """Integrate y' = rhs(s, y) with the Cash-Karp 5(4) pair.

    If s_eval is given, steps are shortened to land on every point of
    s_eval (which must be monotone in the direction of integration) and
    only those points are returned.
    """
    y     = np.array(y0, dtype=float)
    span  = s_to - s_from
    if span == 0:
        return Trajectory(np.array([s_from]), y[np.newaxis, :])

    direction = 1.0 if span > 0 else -1.0
    h_max     = abs(span) if max_step is None else min(abs(span), max_step)
    h         = min(h_max, abs(span) / 100)

    targets: typ.List[float] = [float(x) for x in s_eval] if s_eval is not None else []
    target_idx = 0

    out_s: typ.List[float] = []
    out_y: typ.List[State] = []

    def _record(s_pt: float, y_pt: State) -> None:
        nonlocal target_idx
        if s_eval is None:
            out_s.append(s_pt)
            out_y.append(y_pt.copy())
            return
        while target_idx < len(targets) and targets[target_idx] == s_pt:
            out_s.append(s_pt)
            out_y.append(y_pt.copy())
            target_idx += 1

    s = s_from
    _record(s, y)
    n_accepted = 0
    n_rejected = 0

    while direction * (s_to - s) > 0:
        s_next = s_to
        if target_idx < len(targets) and direction * (s_next - targets[target_idx]) > 0:
            s_next = targets[target_idx]
        remainder = abs(s_next - s)
        if remainder == 0:
            # target behind the current position
            target_idx += 1
            continue

        # a remainder this small is rounding left over from a capped step
        snap = 16 * MACHEPS * max(1.0, abs(s), abs(s_next))
        if remainder <= snap:
            s = s_next
            _record(s, y)
            continue

        if remainder - h > snap:
            h_try  = h
            s_next = s + direction * h
        else:
            h_try = remainder

        if h_try < 16 * MACHEPS * max(1.0, abs(s)):
            raise StepUnderflow(f"step size {h_try:.3e} underflows at s={s!r}")

        y_new, y_err = _ck_step(rhs, s, y, s_next - s)
        scale = tol.abs_tol + tol.rel_tol * np.maximum(np.abs(y), np.abs(y_new))
        err   = float(np.max(np.abs(y_err) / scale))

        if err <= 1.0:
            s = s_next
            y = y_new
            n_accepted += 1
            _record(s, y)
            growth = 5.0 if err == 0 else min(5.0, 0.9 * err ** -0.2)
            landed_early = h_try < h
            h_next = min(h_max, h_try * growth)
            h = max(h, h_next) if landed_early else h_next
        else:
            n_rejected += 1
            h = h_try * max(0.2, 0.9 * err ** -0.25)

    logger.debug(f"ode: {n_accepted} accepted, {n_rejected} rejected steps on [{s_from}, {s_to}]")
    return Trajectory(np.array(out_s), np.array(out_y))


def ode_solve(
    rhs   : VectorField,
    s_from: float,
    s_to  : float,
    y0    : typ.Sequence[float],
    tol   : Tolerance = DEFAULT_TOL,
) -> State:
    """Final state of y' = rhs(s, y) at s_to."""
    trajectory = ode_trajectory(rhs, s_from, s_to, y0, tol)
    return trajectory.y[-1]


# Cody's rational minimax approximation of Gamma on (1, 2) and the
# Stirling series with Cody's correction coefficients for x >= 12.

_GAMMA_P = (
    -1.71618513886549492533811e+00,
    2.47656508055759199108314e+01,
    -3.79804256470945635097577e+02,
    6.29331155312818442661052e+02,
    8.66966202790413211295064e+02,
    -3.14512729688483675254357e+04,
    -3.61444134186911729807069e+04,
    6.64561438202405440627855e+04,
)

_GAMMA_Q = (
    -3.08402300119738975254353e+01,
    3.15350626979604161529144e+02,
    -1.01515636749021914166146e+03,
    -3.10777167157231109440444e+03,
    2.25381184209801510330112e+04,
    4.75584627752788110767815e+03,
    -1.34659959864969306392456e+05,
    -1.15132259675553483497211e+05,
)

_GAMMA_C = (
    -1.910444077728e-03,
    8.4171387781295e-04,
    -5.952379913043012e-04,
    7.93650793500350248e-04,
    -2.777777777777681622553e-03,
    8.333333333333333331554247e-02,
    5.7083835261e-03,
)

_HALF_LOG_2PI = 0.9189385332046727417803297

_GAMMA_XBIG = 171.624


def gamma_fn(x: float) -> float:
    """Gamma function for x > 0.

    >>> gamma_fn(5.0)
    24.0
    """
    if not x > 0:
        raise DomainError(f"gamma_fn is defined here for x > 0, got {x}")
    if x > _GAMMA_XBIG:
        raise DomainError(f"gamma_fn overflows for x > {_GAMMA_XBIG}, got {x}")
    if x < MACHEPS:
        return 1.0 / x

    if x >= 12.0:
        ysq   = x * x
        total = _GAMMA_C[6]
        for coef in _GAMMA_C[:6]:
            total = total / ysq + coef
        total = total / x - x + _HALF_LOG_2PI + (x - 0.5) * math.log(x)
        return math.exp(total)

    if x < 1.0:
        y = x + 1.0
        n = 0
    else:
        n = int(math.floor(x)) - 1
        y = x - n
    z = y - 1.0

    xnum = 0.0
    xden = 1.0
    for p_i, q_i in zip(_GAMMA_P, _GAMMA_Q):
        xnum = (xnum + p_i) * z
        xden = xden * z + q_i
    res = xnum / xden + 1.0

    if x < 1.0:
        return res / x

    for _ in range(n):
        res *= y
        y   += 1.0
    return res


def acosh1p(x: float) -> float:
    """arccosh(1 + x) for x >= 0 without cancellation near x = 0."""
    if x < 0:
        raise DomainError(f"acosh1p requires x >= 0, got {x}")
    return math.log1p(x + math.sqrt(x * (x + 2.0)))


def acosh_from_log(log_x: float) -> float:
    """arccosh(x) given ln(x), for x large enough that x itself may overflow."""
    # arccosh(x) = ln(2x) + ln((1 + sqrt(1 - x^-2)) / 2)
    inv_x_sq = math.exp(-2.0 * log_x)
    return log_x + math.log(2.0) + math.log1p((math.sqrt(1.0 - inv_x_sq) - 1.0) / 2.0)
