"""Classical, complex-field and hyperbolic gamma functions.

``log_hyp_gamma`` is the workhorse used by every integrand. Its value is a
logarithm modulo 2 pi i; exponentiate before comparing.
"""
import math
from dataclasses import dataclass

import numpy as np
from scipy import special
from edflow import get_logger

from ruijsenaars.errors import DomainError, PoleError, DivergenceError
from ruijsenaars.numerics import EVEN_GEOMETRIC, GEOMETRIC, LimitSchedule, QuadSpec, panel_nodes, pow_pair
from ruijsenaars.report import ratio_report

logger = get_logger(__name__)

POLE_TOL = 1e-9
PRODUCT_MIN_IM = 1e-3
SERIES_MIN_IM = 0.25
MAX_PRODUCT_TERMS = 200000
BLOCK = 1 << 20
METHODS = ("product", "series", "integral")


@dataclass(frozen=True)
class Periods:
    w1: complex
    w2: complex

    def __post_init__(self):
        object.__setattr__(self, "w1", complex(self.w1))
        object.__setattr__(self, "w2", complex(self.w2))
        if not (self.w1.real > 0 and self.w2.real > 0):
            raise DomainError("periods need positive real parts, got ({}, {})".format(self.w1, self.w2))

    @classmethod
    def from_sqrt_ratio(cls, s, scale=1.0):
        """Periods with sqrt(w1/w2) = s and sqrt(w1 w2) = scale."""
        return cls(scale * s, scale / s)

    @property
    def Q(self):
        return self.w1 + self.w2

    @property
    def tau(self):
        return self.w1 / self.w2

    @property
    def q(self):
        return np.exp(2j * np.pi * self.w1 / self.w2)

    @property
    def qt(self):
        return np.exp(-2j * np.pi * self.w2 / self.w1)

    @property
    def sqrt_product(self):
        return complex(np.sqrt(self.w1 * self.w2))

    @property
    def has_product(self):
        """|q| < 1, i.e. the double q-product converges."""
        return self.tau.imag > 0

    def swapped(self):
        return Periods(self.w2, self.w1)


def periods_cr(delta):
    return Periods(1j + delta, -1j + delta)


def periods_ccr(delta):
    return Periods(1 + 1j * delta, 1 - 1j * delta)


def _is_gamma_pole(z, tol=1e-12):
    z = np.asarray(z)
    return (np.abs(z.imag) < tol) & (z.real < tol) & (np.abs(z.real - np.round(z.real)) < tol)


def log_gamma_complex(z):
    """Principal log of the Euler gamma function."""
    z = np.asarray(z, dtype=complex)
    if np.any(_is_gamma_pole(z)):
        bad = np.ravel(z)[int(np.argmax(np.ravel(_is_gamma_pole(z))))]
        raise PoleError("gamma function has a pole at {}".format(bad), location=bad, order=1)
    out = special.loggamma(z)
    return out if out.ndim else complex(out)


@dataclass(frozen=True)
class CGammaArg:
    u: complex
    n: int

    def __post_init__(self):
        if self.n != int(self.n):
            raise DomainError("discrete argument must be an integer, got {}".format(self.n))
        object.__setattr__(self, "u", complex(self.u))
        object.__setattr__(self, "n", int(self.n))

    @classmethod
    def from_alphas(cls, alpha, alpha_prime):
        n = complex(alpha - alpha_prime)
        if abs(n.imag) > 1e-12 or abs(n.real - round(n.real)) > 1e-12:
            raise DomainError("alpha - alpha' must be an integer, got {}".format(n))
        return cls(-1j * (alpha + alpha_prime), int(round(n.real)))

    @property
    def alpha(self):
        return (self.n + 1j * self.u) / 2

    @property
    def alpha_prime(self):
        return (-self.n + 1j * self.u) / 2


def _parity(n):
    return np.where(np.asarray(n) % 2 == 0, 1.0, -1.0)


def log_cgamma(u, n):
    """log of Gamma((n + iu)/2) / Gamma(1 + (n - iu)/2); -inf at its zeros.

    Negative n use Gamma(u, n) = (-1)^n Gamma(u, -n), where numerator and
    denominator poles do not cancel.
    """
    u = np.asarray(u, dtype=complex)
    n = np.asarray(n)
    if np.any(n != np.round(n)):
        raise DomainError("discrete argument of the complex gamma function must be integral")
    k = np.abs(n)
    num = (k + 1j * u) / 2
    den = 1 + (k - 1j * u) / 2
    top = log_gamma_complex(num)
    zero = _is_gamma_pole(den)
    with np.errstate(invalid="ignore"):
        bottom = special.loggamma(np.where(zero, 1.0, den))
    out = np.where(zero, -np.inf, top - bottom + np.where(n < 0, 1j * np.pi * n, 0))
    return out if out.ndim else complex(out)


def cgamma(u, n=None):
    """Gamma function over the complex field, Gamma(u, n) = Gamma(a|a')."""
    if isinstance(u, CGammaArg):
        u, n = u.u, u.n
    out = np.exp(log_cgamma(u, n))
    return out if np.ndim(out) else complex(out)


def reciprocal_cgamma(u, n):
    """1 / Gamma(u, n): zero at the poles of Gamma(u, n), finite where its poles cancel."""
    u = np.asarray(u, dtype=complex)
    k = np.abs(np.asarray(n))
    out = _parity(n) * np.exp(log_gamma_complex(1 + (k - 1j * u) / 2)) * special.rgamma((k + 1j * u) / 2)
    return out if np.ndim(out) else complex(out)


def cgamma_alt(alpha, alpha_prime):
    """Gamma(a|a') = Gamma(a) / Gamma(1 - a')."""
    return cgamma(CGammaArg.from_alphas(alpha, alpha_prime))


def cgamma_shift(a, which):
    """Gamma(a+1|a') for which='alpha', Gamma(a|a'+1) for which='alpha_prime'."""
    if which == "alpha":
        return cgamma(a.u - 1j, a.n + 1)
    if which == "alpha_prime":
        return cgamma(a.u - 1j, a.n - 1)
    raise DomainError("unknown shift '{}'".format(which))


def pochhammer(a, m):
    if m != int(m):
        raise DomainError("Pochhammer index must be an integer")
    m = int(m)
    a = complex(a)
    if m >= 0:
        return complex(np.prod([a + j for j in range(m)])) if m else 1 + 0j
    factors = np.array([a - j for j in range(1, -m + 1)])
    if np.any(np.abs(factors) < 1e-14):
        raise PoleError("(a)_m has a pole at a={}, m={}".format(a, m), location=a)
    return complex(1 / np.prod(factors))


def bernoulli_b22(u, p):
    u = np.asarray(u, dtype=complex)
    out = ((u - p.Q / 2) ** 2 - (p.w1 ** 2 + p.w2 ** 2) / 12) / (p.w1 * p.w2)
    return out if out.ndim else complex(out)


def log_2sin(z):
    """log(2 sin z) modulo 2 pi i, stable for large |Im z|."""
    z = np.asarray(z, dtype=complex)
    with np.errstate(all="ignore"):
        upper = 0.5j * np.pi - 1j * z + np.log1p(-np.exp(2j * z))
        lower = -0.5j * np.pi + 1j * z + np.log1p(-np.exp(-2j * z))
    return np.where(z.imag >= 0, upper, lower)


def check_poles(u, p):
    """Raise PoleError if some u lies on -m1 w1 - m2 w2, m1, m2 >= 0."""
    u = np.atleast_1d(np.asarray(u, dtype=complex)).ravel()
    if not u.size:
        return
    tol = POLE_TOL * max(1.0, abs(p.w1), abs(p.w2))
    tau = p.tau
    if abs(tau.imag) > PRODUCT_MIN_IM:
        basis = np.array([[p.w1.real, p.w2.real], [p.w1.imag, p.w2.imag]])
        a, b = np.linalg.solve(basis, np.vstack([u.real, u.imag]))
        m1, m2 = np.round(-a), np.round(-b)
        hit = (m1 >= 0) & (m2 >= 0) & (np.abs(u + m1 * p.w1 + m2 * p.w2) < tol)
        if hit.any():
            i = int(np.argmax(hit))
            _raise_pole(u[i], int(m1[i]), int(m2[i]))
        return
    if tau.imag == 0 and tau.real > 0:
        # collinear periods: poles sit on the ray through -w1
        v = u / p.w1
        u = u[(np.abs(v.imag) * abs(p.w1) < tol) & (v.real < tol)]
        if not u.size:
            return
    reach = float(np.max(np.abs(u))) / min(abs(p.w1), abs(p.w2)) + 2
    for m2 in range(int(min(reach, 10000)) + 1):
        m1 = np.round((-(u + m2 * p.w2) / p.w1).real)
        hit = (m1 >= 0) & (np.abs(u + m1 * p.w1 + m2 * p.w2) < tol)
        if hit.any():
            i = int(np.argmax(hit))
            _raise_pole(u[i], int(m1[i]), m2)


def _raise_pole(u, m1, m2):
    raise PoleError("hyperbolic gamma has a pole at {} = -{}*w1 - {}*w2".format(u, m1, m2),
                    location=(m1, m2))


def _shift_sum(y, m, ws, wo):
    """log gamma(y + m ws) - log gamma(y) by repeated difference equations."""
    total = np.zeros(y.shape, dtype=complex)
    for j in range(int(np.max(np.abs(m), initial=0))):
        up = m > j
        down = -m > j
        if up.any():
            total[up] += log_2sin(np.pi * (y[up] + j * ws) / wo)
        if down.any():
            total[down] -= log_2sin(np.pi * (y[down] - (j + 1) * ws) / wo)
    return total


def _log_qpochhammer(x, q, terms):
    """sum_{k < terms} log(1 - x q^k) for a vector x."""
    total = np.zeros(x.shape, dtype=complex)
    block = max(1, BLOCK // max(1, x.size))
    with np.errstate(divide="ignore"):
        for k0 in range(0, terms, block):
            powers = q ** np.arange(k0, min(terms, k0 + block))
            total += np.log1p(-x[:, None] * powers[None, :]).sum(axis=1)
    return total


def _log_gamma_product(u, p):
    """Double q-product after reducing u into the cell a*w1 + b*w2, a in (0,1], b in [0,1)."""
    w1, w2 = p.w1, p.w2
    basis = np.array([[w1.real, w2.real], [w1.imag, w2.imag]])
    a, b = np.linalg.solve(basis, np.vstack([u.real, u.imag]))
    m1 = np.ceil(a - 1e-9) - 1
    m2 = np.floor(b + 1e-9)
    u0 = u - m1 * w1 - m2 * w2
    shifts = _shift_sum(u0, m2, w2, w1) + _shift_sum(u0 + m2 * w2, m1, w1, w2)

    tau = w1 / w2
    rate = 2 * np.pi * min(tau.imag, (-1 / tau).imag)
    terms = int(math.ceil(37.0 / rate)) + 1
    if terms > MAX_PRODUCT_TERMS:
        raise DomainError("q-product needs {} terms; periods are too close to collinear".format(terms))
    x2 = np.exp(2j * np.pi * u0 / w2)
    y1 = np.exp(2j * np.pi * (u0 - w2) / w1)
    log_gamma = _log_qpochhammer(y1, p.qt, terms) - _log_qpochhammer(x2, p.q, terms)
    return -0.5j * np.pi * bernoulli_b22(u0, p) + log_gamma + shifts


def _series_margin(u, p):
    """Smallest decay exponent of the four geometric ratios in the series."""
    return np.minimum(np.minimum((u / p.w1).imag, (u / p.w2).imag),
                      np.minimum(((u - p.w2) / p.w1).imag, ((u - p.w1) / p.w2).imag))


def _series_ok(u, p):
    tau = p.tau
    lowest = _series_margin(u, p)
    terms = int(math.ceil(37.0 / (2 * np.pi * SERIES_MIN_IM)))
    m = np.arange(1, terms + 1)
    divisors = min(np.min(np.abs(1 - np.exp(2j * np.pi * tau * m))),
                   np.min(np.abs(1 - np.exp(-2j * np.pi * m / tau))))
    return (lowest >= SERIES_MIN_IM) & (divisors > 1e-8)


def _log_gamma_series(u, p):
    """Exponential series of log gamma, valid when every ratio in _series_margin decays."""
    lowest = float(np.min(_series_margin(u, p)))
    terms = int(math.ceil(37.0 / (2 * np.pi * lowest)))
    m = np.arange(1, terms + 1)
    x2 = np.exp(2j * np.pi * u / p.w2)[:, None] ** m
    y1 = np.exp(2j * np.pi * (u - p.w2) / p.w1)[:, None] ** m
    series = (x2 / (m * (1 - p.q ** m)) - y1 / (m * (1 - p.qt ** m))).sum(axis=1)
    return -0.5j * np.pi * bernoulli_b22(u, p) + series


def _kernel_integral(s, w1, w2, T, n_panels):
    t, wt = panel_nodes(0.0, T, n_panels)
    W = w1 + w2
    d = -np.expm1(-2 * w1 * t) * -np.expm1(-2 * w2 * t)
    out = np.empty(s.shape, dtype=complex)
    block = max(1, BLOCK // t.size)
    for i in range(0, s.size, block):
        ss = s[i:i + block, None]
        g = (2 * np.exp(-W * t) * np.sinh(ss * t) / d - ss / (2 * w1 * w2 * t)) / t
        out[i:i + block] = g @ wt
    return out - s / (2 * w1 * w2 * T)


def _log_gamma_integral(u, p, quad):
    """Integral representation after rotating the periods and shifting into the strip."""
    phase = np.exp(-0.5j * (np.angle(p.w1) + np.angle(p.w2)))
    scale = 2.0 / abs(p.Q)
    w1, w2, v = phase * scale * p.w1, phase * scale * p.w2, phase * scale * u
    if w1.real <= 0 or w2.real <= 0:
        raise DomainError("periods do not lie in a common half-plane")
    ws, wo = (w1, w2) if w1.real <= w2.real else (w2, w1)
    W = w1 + w2
    m = np.round((v.real - 0.5 * W.real) / ws.real)
    v0 = v - m * ws
    s = 2 * v0 - W
    kappa = W.real - float(np.max(np.abs(s.real)))
    T = 40.0 / kappa
    n_panels = max(24, int(math.ceil(T * (1 + float(np.max(np.abs(s.imag)))) / 2)))
    coarse = _kernel_integral(s, w1, w2, T, n_panels)
    fine = _kernel_integral(s, w1, w2, T, 2 * n_panels)
    change = float(np.max(np.abs(fine - coarse)))
    if change > quad.tolerance(1.0):
        raise DivergenceError("hyperbolic gamma integral unresolved (change {:.2e})".format(change),
                              estimates=(complex(coarse[0]), complex(fine[0])))
    return -fine + _shift_sum(v0, m, ws, wo)


def log_hyp_gamma(u, p, method=None, quad=None):
    """log of the hyperbolic gamma function gamma^(2)(u; w1, w2), modulo 2 pi i.

    ``method`` forces the q-product, the exponential series or the integral
    representation; by default the product is used for non-collinear periods
    and series/integral otherwise.
    """
    if method not in (None,) + METHODS:
        raise DomainError("unknown evaluation method '{}'".format(method))
    quad = quad if quad is not None else QuadSpec()
    scalar = np.ndim(u) == 0
    shape = np.shape(u)
    u = np.atleast_1d(np.asarray(u, dtype=complex)).ravel()
    check_poles(u, p)
    if method is None and abs(p.tau.imag) > PRODUCT_MIN_IM:
        method = "product"

    if method == "product":
        if p.tau.imag == 0:
            raise DomainError("q-product needs Im(w1/w2) != 0")
        out = _log_gamma_product(u, p if p.has_product else p.swapped())
    elif method == "series":
        if not np.all(_series_ok(u, p)):
            raise DomainError("exponential series needs Im(u/w_j), Im((u-w_k)/w_j) >= {}".format(SERIES_MIN_IM))
        out = _log_gamma_series(u, p)
    elif method == "integral":
        out = _log_gamma_integral(u, p, quad)
    else:
        out = np.empty(u.shape, dtype=complex)
        direct = _series_ok(u, p)
        reflected = ~direct & _series_ok(p.Q - u, p)
        rest = ~(direct | reflected)
        if direct.any():
            out[direct] = _log_gamma_series(u[direct], p)
        if reflected.any():
            out[reflected] = -_log_gamma_series(p.Q - u[reflected], p)
        if rest.any():
            out[rest] = _log_gamma_integral(u[rest], p, quad)
    return complex(out[0]) if scalar else out.reshape(shape)


def hyp_gamma(u, p, quad=None, method=None):
    out = np.exp(log_hyp_gamma(u, p, method=method, quad=quad))
    return out if np.ndim(out) else complex(out)


def hyp_gamma_asymp(u, p, sector):
    """exp(-+ (pi i/2) B22(u)), the leading behaviour in the upper/lower sector."""
    u = np.asarray(u, dtype=complex)
    a1, a2 = np.angle(p.w1), np.angle(p.w2)
    if sector == "upper":
        start, width, sign = a1, a2 + np.pi - a1, -1
    elif sector == "lower":
        start, width, sign = a1 - np.pi, a2 - a1 + np.pi, 1
    else:
        raise DomainError("sector must be 'upper' or 'lower'")
    offset = np.mod(np.angle(u) - start, 2 * np.pi)
    if np.any((offset <= 0) | (offset >= width)):
        raise DomainError("argument outside the {} asymptotic sector".format(sector))
    out = np.exp(sign * 0.5j * np.pi * bernoulli_b22(u, p))
    return out if out.ndim else complex(out)


def _lim_r_real(delta, params, schedule):
    x, w2 = params["x"], params["w2"]
    p = Periods(delta, w2)
    lhs = log_hyp_gamma(x * delta, p)
    rhs = -0.5 * np.log(2 * np.pi) + (x - 0.5) * np.log(2 * np.pi * delta / w2) + log_gamma_complex(x)
    return lhs - rhs


def _lim_r_real_rat(delta, params, schedule):
    x, g, w2 = params["x"], params["g"], params["w2"]
    p = Periods(delta, w2)
    lhs = log_hyp_gamma(x + g * delta, p) - log_hyp_gamma(x, p)
    return lhs - g * np.log(2 * np.sin(np.pi * x / w2) + 0j)


def _lim_lim1(delta, params, schedule):
    m, u = params["m"], params["u"]
    p = Periods.from_sqrt_ratio(1j + delta)
    lhs = log_hyp_gamma(1j * (m + u * delta), p)
    rhs = 0.5j * np.pi * m ** 2 + (1j * u - 1) * np.log(4 * np.pi * delta) + log_cgamma(u, m)
    return lhs - rhs


def _lim_lim2(delta, params, schedule):
    m, u, beta = params["m"], params["u"], params["beta"]
    N = schedule.companion(delta)
    alpha = N * delta
    p = Periods.from_sqrt_ratio(1j + delta)
    lhs = 1j * np.pi * N * m + log_hyp_gamma(1j * (N + beta + m + u * delta), p) \
        - log_hyp_gamma(1j * (N + beta), p)
    w = 2 * np.sinh(np.pi * (alpha + 1j * beta))
    wp = 2 * np.sinh(np.pi * (alpha - 1j * beta))
    rhs = 0.5j * np.pi * m ** 2 + np.log(pow_pair(w, wp, (m + 1j * u) / 2, (-m + 1j * u) / 2))
    return lhs - rhs


def _lim_poh(delta, params, schedule):
    m, u = params["m"], params["u"]
    p = Periods.from_sqrt_ratio(1 + 1j * delta)
    lhs = log_hyp_gamma(m + u * delta, p)
    # Gamma((m - iu)/2) / Gamma(1 - (m + iu)/2) is the Pochhammer symbol (a)_{m-1}
    a = 1 - (m + 1j * u) / 2
    rhs = -0.5j * np.pi * (m - 1) ** 2 + (m - 1) * np.log(4 * np.pi * delta) + np.log(pochhammer(a, m - 1))
    return lhs - rhs


GAMMA_LIMITS = {
    "r_real": (_lim_r_real, {"x": 0.6, "w2": 1.0}),
    "r_real_rat": (_lim_r_real_rat, {"x": 0.3, "g": 0.7, "w2": 1.0}),
    "lim1": (_lim_lim1, {"m": 1, "u": 0.4}),
    "lim2'": (_lim_lim2, {"m": 1, "u": 0.4, "alpha": 0.3, "beta": 0.2}),
    "poh": (_lim_poh, {"m": 2, "u": -0.3}),
}


def default_schedule(which, params):
    if which == "lim2'":
        return LimitSchedule(deltas=EVEN_GEOMETRIC, order=1, rule="even", alpha=params["alpha"])
    return LimitSchedule(deltas=GEOMETRIC, order=1)


def gamma_limit_check(which, params=None, schedule=None, tolerance=1e-3):
    """Ratio of both sides of a degeneration formula, extrapolated to delta = 0."""
    if which not in GAMMA_LIMITS:
        raise DomainError("unknown gamma limit '{}'".format(which))
    evaluate_log_ratio, defaults = GAMMA_LIMITS[which]
    params = dict(defaults, **(params or {}))
    for key in ("m",):
        if key in params and params[key] != int(params[key]):
            raise DomainError("'{}' must be an integer".format(key))
    schedule = schedule if schedule is not None else default_schedule(which, params)
    if which == "lim2'":
        if schedule.rule is None:
            raise DomainError("lim2' needs a companion-integer rule")
        schedule.require_even()

    return ratio_report(which, params, lambda d: np.exp(evaluate_log_ratio(d, params, schedule)), schedule, tolerance)
