"""Wave functions of the two-particle Ruijsenaars model and of its complex rational degeneration.

Hyperbolic functions are Barnes-type integrals of hyperbolic gamma functions
over a vertical line. The complex rational function is a sum over
k in Z + eps of integrals in y (Barnes form) or an integral over the
cylinder R x [0, 1] (Euler form).
"""
import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np
from edflow import get_logger

from ruijsenaars.errors import DomainError, DivergenceError, PinchError
from ruijsenaars.numerics import (CHUNK, Contour, CylinderDomain, QuadSpec, TailModel, evaluate,
                                  gauss_legendre, integrate_cylinder, integrate_line, pow_pair,
                                  sum_bilateral)
from ruijsenaars.functions.gammalib import log_cgamma, log_hyp_gamma, periods_cr

logger = get_logger(__name__)

PINCH_GAP = 1e-6
LEG_MARGIN = 1.5
MIN_OSCILLATION = 1e-3
LINE_QUAD = QuadSpec(abs_tol=1e-14, rel_tol=1e-10)
BARNES_QUAD = QuadSpec(abs_tol=1e-15, rel_tol=1e-11)
EULER_QUAD = QuadSpec(abs_tol=1e-10, rel_tol=1e-7, max_depth=4)
LATTICE_QUAD = QuadSpec(abs_tol=1e-14, rel_tol=1e-7, max_depth=4)
REPRESENTATIONS = ("direct", "dual")


def _with_error(value, err, return_error):
    return (value, err) if return_error else value


# hyperbolic integrals

def _log_gamma_sum(z, plus, minus, p):
    """sum_a log gamma(a + z) + sum_b log gamma(b - z), one vectorized gamma call."""
    z = np.asarray(z, dtype=complex)
    flat = z.ravel()
    args = np.concatenate([a + flat for a in plus] + [b - flat for b in minus])
    logs = log_hyp_gamma(args, p)
    return logs.reshape(len(plus) + len(minus), flat.size).sum(axis=0).reshape(z.shape)


def line_geometry(x, plus, minus, p, offset=None):
    """Abscissa of a separating vertical contour and the decay rates for Im z -> +inf, -inf.

    The poles of gamma(a + z) lie at Re z <= -Re a, those of gamma(b - z) at
    Re z >= Re b. With as many factors of each kind the integrand decays like
    exp(-2 pi Re((K +- x)/w1w2) |Im z|), K = (n Q - sum a - sum b)/2.
    """
    if len(plus) != len(minus):
        raise DomainError("need as many gamma(a + z) as gamma(b - z) factors")
    left = max(-a.real for a in plus)
    right = min(b.real for b in minus)
    if right - left < PINCH_GAP:
        raise PinchError("pole families overlap: gamma(a + z) poles reach Re z = {:.4g}, "
                         "gamma(b - z) poles start at Re z = {:.4g}".format(left, right))
    if offset is None:
        offset = 0.5 * (left + right)
    elif not left + PINCH_GAP < offset < right - PINCH_GAP:
        raise PinchError("contour Re z = {} does not separate the poles ({:.4g}, {:.4g})".format(
            offset, left, right))
    P = p.w1 * p.w2
    K = 0.5 * (len(plus) * p.Q - sum(plus) - sum(minus))
    up = 2 * np.pi * ((K + x) / P).real
    down = 2 * np.pi * ((K - x) / P).real
    if min(up, down) <= 0:
        raise DomainError("integrand does not decay along the contour (rates {:.3g}, {:.3g}); "
                          "|Re x| is too large".format(up, down))
    return float(offset), up, down


def hyperbolic_integral(x, plus, minus, p, quad=None, offset=None):
    """Integral of exp(2 pi i x z / w1w2) prod gamma(a + z) prod gamma(b - z) dz / (i sqrt(w1w2)).

    Returns (value, error). The contour is the vertical line Re z = offset,
    by default midway between the two pole families.
    """
    x = complex(x)
    plus = tuple(complex(a) for a in plus)
    minus = tuple(complex(b) for b in minus)
    offset, up, down = line_geometry(x, plus, minus, p, offset)
    rate = min(up, down)
    P = p.w1 * p.w2
    norm = 1j * p.sqrt_product

    def integrand(z):
        return np.exp(2j * np.pi * x * z / P + _log_gamma_sum(z, plus, minus, p)) / norm

    quad = (quad if quad is not None else LINE_QUAD).with_tail(TailModel.exponential(rate))
    contour = Contour.vertical(radius=min(150.0, max(6.0, 25.0 / rate)), offset=offset)
    return integrate_line(integrand, contour, quad)


@dataclass(frozen=True)
class MasterParams:
    """Parameters nu_k, mu_k of F(nu; mu; x); g fixes the 1/gamma(g) normalization, B by default."""
    nu1: complex
    nu2: complex
    mu1: complex
    mu2: complex
    g: Optional[complex] = None

    def __post_init__(self):
        for name in ("nu1", "nu2", "mu1", "mu2"):
            object.__setattr__(self, name, complex(getattr(self, name)))
        object.__setattr__(self, "g", self.B if self.g is None else complex(self.g))

    @classmethod
    def ruijsenaars(cls, g, lam1, lam2):
        """mu_j = g/2 + lam_j, nu_j = g/2 - lam_j, so that B = g."""
        return cls(g / 2 - lam1, g / 2 - lam2, g / 2 + lam1, g / 2 + lam2, g=g)

    @property
    def nu(self):
        return self.nu1, self.nu2

    @property
    def mu(self):
        return self.mu1, self.mu2

    @property
    def B(self):
        return 0.5 * (self.mu1 + self.mu2 + self.nu1 + self.nu2)

    @property
    def C(self):
        return 0.5 * (self.mu1 + self.mu2 - self.nu1 - self.nu2)

    @property
    def alphas(self):
        return self.nu1 + self.mu1, self.nu2 + self.mu2

    @property
    def betas(self):
        return self.nu1 - self.mu1, self.nu2 - self.mu2


def f_master(mp, x, p, quad=None, offset=None, return_error=False):
    """F(nu; mu; x): the line integral of exp(2 pi i x z/w1w2) prod gamma(nu_k + z, mu_k - z), over gamma(g)."""
    value, err = hyperbolic_integral(x, mp.nu, mp.mu, p, quad, offset)
    norm = np.exp(-log_hyp_gamma(mp.g, p))
    return _with_error(complex(value * norm), float(err * abs(norm)), return_error)


def master_dual(mp, x, p):
    """(prefactor, params, argument) with F(mp; x) = prefactor * F(params; argument)."""
    a1, a2 = mp.alphas
    b1, b2 = mp.betas
    Q = p.Q
    nu = (-x / 2 + (Q - a1) / 2, x / 2 + (Q - a2) / 2)
    mu = ((Q - a1) / 2 + x / 2, -x / 2 + (Q - a2) / 2)
    log_pref = -0.5j * np.pi * x * (b1 + b2) / (p.w1 * p.w2) + np.sum(log_hyp_gamma(np.array([a1, a2]), p))
    return complex(np.exp(log_pref)), MasterParams(nu[0], nu[1], mu[0], mu[1], g=mp.g), (b1 - b2) / 2


def master_find1(mp, x, p):
    """(prefactor, params) with F(mp; x) = prefactor * F(params; x); params have B -> Q - B."""
    nu1, nu2, mu1, mu2 = mp.nu1, mp.nu2, mp.mu1, mp.mu2
    a1, a2 = mp.alphas
    Q = p.Q
    shift = Q - (a1 + a2) / 2
    args = np.array([a1, a2, x + shift, -x + shift, nu1 + mu2, nu2 + mu1])
    log_pref = np.sum(log_hyp_gamma(args, p)) + 1j * np.pi * x * (mu1 - nu2) / (p.w1 * p.w2)
    half = (Q - nu1 - mu2) / 2
    params = MasterParams(half, (Q + nu1 - mu2) / 2 - nu2, half, (Q - nu1 + mu2) / 2 - mu1, g=mp.g)
    return complex(np.exp(log_pref)), params


@dataclass(frozen=True)
class HypWaveParams:
    g: complex
    lam1: complex
    lam2: complex
    x1: complex
    x2: complex

    def __post_init__(self):
        for name in ("g", "lam1", "lam2", "x1", "x2"):
            object.__setattr__(self, name, complex(getattr(self, name)))

    def gstar(self, p):
        return p.Q - self.g

    def bispectral(self, p):
        """Coordinates and spectral parameters exchanged, coupling reflected."""
        return HypWaveParams(self.gstar(p), self.x1, self.x2, self.lam1, self.lam2)

    @property
    def x_diff(self):
        return self.x2 - self.x1

    @property
    def lam_diff(self):
        return self.lam2 - self.lam1


def phi_hyp(hp, p, rep="direct", quad=None, return_error=False):
    """Two-particle wave function Phi^g_{lam1,lam2}(x1, x2).

    ``direct`` integrates against exp(2 pi i (x2 - x1) z/w1w2) with coupling g;
    ``dual`` integrates against exp(2 pi i (lam2 - lam1) z/w1w2) with coupling Q - g.
    """
    if rep not in REPRESENTATIONS:
        raise DomainError("unknown representation '{}'".format(rep))
    if rep == "direct":
        g, lam, x = hp.g, (hp.lam1, hp.lam2), (hp.x1, hp.x2)
    else:
        g, lam, x = hp.gstar(p), (hp.x1, hp.x2), (hp.lam1, hp.lam2)
    value, err = f_master(MasterParams.ruijsenaars(g, *lam), x[1] - x[0], p, quad, return_error=True)
    phase = np.exp(-2j * np.pi * x[1] * (lam[0] + lam[1]) / (p.w1 * p.w2))
    return _with_error(complex(phase * value), float(abs(phase) * err), return_error)


def f_cm_hyp(g, lam, x, p, quad=None, rep="direct", return_error=False):
    """Centre-of-mass wave function F^g_lam(x); ``dual`` evaluates it as F^{Q-g}_x(lam)."""
    if rep not in REPRESENTATIONS:
        raise DomainError("unknown representation '{}'".format(rep))
    if rep == "dual":
        g, lam, x = p.Q - g, x, lam
    g, lam = complex(g), complex(lam)
    plus, minus = g / 2 + lam / 2, g / 2 - lam / 2
    return f_master(MasterParams(plus, minus, plus, minus, g=g), x, p, quad, return_error=return_error)


# complex rational model

@dataclass(frozen=True)
class ComplexModelParams:
    r: int
    h: complex

    def __post_init__(self):
        if self.r != int(self.r):
            raise DomainError("r must be an integer, got {}".format(self.r))
        object.__setattr__(self, "r", int(self.r))
        object.__setattr__(self, "h", complex(self.h))
        if not -2 < self.h.imag < 0:
            raise DomainError("Im h must lie in (-2, 0), got {}".format(self.h))

    @property
    def rho(self):
        return (self.r + 1j * self.h) / 2

    @property
    def rhop(self):
        return (-self.r + 1j * self.h) / 2

    @property
    def b(self):
        return 1 - self.rho

    @property
    def bp(self):
        return 1 - self.rhop

    def reflected(self):
        """(r, h) -> (-r, -2i - h), i.e. rho -> 1 - rho."""
        return ComplexModelParams(-self.r, -2j - self.h)


@dataclass(frozen=True)
class DoubledPoint:
    n: float
    u: complex

    def __post_init__(self):
        twice = 2 * float(self.n)
        if twice != round(twice):
            raise DomainError("n must be an integer or a half-integer, got {}".format(self.n))
        n = float(self.n)
        object.__setattr__(self, "n", int(n) if n.is_integer() else n)
        object.__setattr__(self, "u", complex(self.u))

    @property
    def z(self):
        return (self.n + 1j * self.u) / 2

    @property
    def zp(self):
        return (-self.n + 1j * self.u) / 2

    @property
    def integral(self):
        return isinstance(self.n, int)

    def eps(self, r):
        """eps in {0, 1/2} with n + r/2 + eps an integer."""
        return (-(self.n + r / 2.0)) % 1.0

    def shifted(self, dn=0, du=0):
        return DoubledPoint(self.n + dn, self.u + du)


@dataclass(frozen=True)
class SpectralPoint:
    alpha: float
    beta: float

    def __post_init__(self):
        for name in ("alpha", "beta"):
            value = complex(getattr(self, name))
            if value.imag != 0:
                raise DomainError("spectral coordinate {} must be real, got {}".format(name, value))
            object.__setattr__(self, name, value.real)

    @property
    def gamma(self):
        return complex(self.alpha, self.beta)

    @property
    def gammabar(self):
        return complex(self.alpha, -self.beta)


def _barnes_term(factors, xi, eta, k, log_norm, quad, offset=None):
    """Integral over y of exp(2 pi i (xi k + eta y) - log_norm) prod Gamma(a + s y, m0 + s k).

    Poles of Gamma(w, m) sit at w = i(|m| + 2j): above the contour for s = +1,
    below it for s = -1. With eta != 0 the contour is a horizontal segment
    close to the nearer pole family, closed by vertical legs running to
    -i inf (eta < 0) or +i inf (eta > 0).
    """
    low = max(a.imag - abs(m0 - k) for a, m0, s in factors if s < 0)
    high = min(abs(m0 + k) - a.imag for a, m0, s in factors if s > 0)
    if high - low < PINCH_GAP:
        raise PinchError("poles pinch the k={} contour: Im y must lie in ({:.4g}, {:.4g})".format(k, low, high))
    if offset is not None and not low + PINCH_GAP < offset < high - PINCH_GAP:
        raise PinchError("contour Im y = {} does not separate the k={} poles ({:.4g}, {:.4g})".format(
            offset, k, low, high))

    def integrand(y):
        total = 2j * np.pi * (xi * k + eta * y) - log_norm
        for a, m0, s in factors:
            total = total + log_cgamma(a + s * y, m0 + s * k)
        return np.exp(total)

    if abs(eta) < MIN_OSCILLATION:
        exponent = -4.0 - sum(a.imag for a, _, _ in factors)
        if exponent >= -1:
            raise DomainError("y-integrand decays like |y|^{:.2f}; it needs an oscillating factor "
                              "(nonzero alpha) to converge".format(exponent))
        c = 0.5 * (low + high) if offset is None else offset
        tail = quad.with_tail(TailModel.power_law(exponent))
        return integrate_line(integrand, Contour.real_line(radius=20.0, offset=c), tail)[0]

    down = eta < 0
    if offset is not None:
        c = offset
    elif down:
        c = low + min(0.5, 0.5 * (high - low))
    else:
        c = high - min(0.5, 0.5 * (high - low))
    edge = max(abs(a.real) for a, _, _ in factors) + LEG_MARGIN
    rate = 2 * np.pi * abs(eta)
    legs = quad.with_tail(TailModel.exponential(rate))
    radius = max(8.0, 30.0 / rate)
    direction = -1j if down else 1j
    segment = integrate_line(integrand, Contour.segment(-edge + 1j * c, edge + 1j * c), quad)[0]
    left = integrate_line(integrand, Contour.ray(-edge + 1j * c, direction, radius=radius), legs)[0]
    right = integrate_line(integrand, Contour.ray(edge + 1j * c, direction, radius=radius), legs)[0]
    return segment - left + right


def _barnes_sum(factors, xi, eta, eps, log_norm, quad, offset, center, min_terms):
    factors = [(complex(a), float(m0), s) for a, m0, s in factors]
    return sum_bilateral(lambda k: _barnes_term(factors, xi, eta, k, log_norm, quad, offset),
                         eps, quad, center=center, min_terms=min_terms)


def _pair(value, kind):
    if isinstance(value, (tuple, list)):
        if len(value) != 2:
            raise DomainError("expected one or two {}s".format(kind))
        return tuple(value)
    return None


def f_complex_barnes(cm, sp, pt, quad=None, offset=None, return_error=False):
    """Complex rational wave function as a sum over k in Z + eps of y-integrals.

    With a single SpectralPoint and DoubledPoint this is the centre-of-mass
    function F^{r,h}_{alpha,beta}(u, n); with pairs it is the two-point
    function of (u1, n1), (u2, n2). ``offset`` forces the contour Im y = offset
    for every k and is validated against the poles.
    """
    quad = quad if quad is not None else BARNES_QUAD
    sps, pts = _pair(sp, "spectral point"), _pair(pt, "point")
    if (sps is None) != (pts is None):
        raise DomainError("give one spectral point and one point, or two of each")
    log_norm = np.log(4 * np.pi) + log_cgamma(cm.h, cm.r)
    if sps is None:
        if not pt.integral:
            raise DomainError("the centre-of-mass function needs an integer n, got {}".format(pt.n))
        eps = (-(cm.r + pt.n) / 2.0) % 1.0
        factors = [(cm.h / 2 + s1 * pt.u / 2, cm.r / 2 + s1 * pt.n / 2, s2) for s1 in (1, -1) for s2 in (1, -1)]
        value, err = _barnes_sum(factors, -sp.beta, -sp.alpha, eps, log_norm, quad, offset, center=0,
                                 min_terms=int(abs(cm.r) + abs(pt.n)) // 2 + 4)
        return _with_error(complex(value), float(err), return_error)

    (sp1, sp2), (pt1, pt2) = sps, pts
    eps = pt1.eps(cm.r)
    if pt2.eps(cm.r) != eps:
        raise DomainError("n1 and n2 must both be integers or both half-integers")
    log_norm = log_norm - 2j * np.pi * (sp2.beta * (pt1.n + pt2.n) + sp2.alpha * (pt1.u + pt2.u))
    factors = [(cm.h / 2 + s * q.u, cm.r / 2 + s * q.n, -s) for q in (pt1, pt2) for s in (1, -1)]
    value, err = _barnes_sum(factors, sp1.beta - sp2.beta, sp1.alpha - sp2.alpha, eps, log_norm, quad, offset,
                             center=int(math.floor((pt1.n + pt2.n) / 2.0)),
                             min_terms=int(abs(cm.r) + abs(pt1.n - pt2.n)) // 2 + 4)
    return _with_error(complex(value), float(err), return_error)


def _euler_kernel(cm, gammas, tau):
    """prod_j (2ch pi(gamma_j - tau))^{-rho} (2ch pi(gammabar_j - taubar))^{-rho'}."""
    taubar = np.conj(tau)
    kernel = np.ones(tau.shape, dtype=complex)
    for g in gammas:
        w = 2 * np.cosh(np.pi * (g - tau))
        wp = 2 * np.cosh(np.pi * (np.conj(g) - taubar))
        kernel = kernel * pow_pair(w, wp, -cm.rho, -cm.rhop)
    return kernel


def f_complex_euler(cm, sp, pt, quad=None, level=None, return_error=False):
    """Complex rational wave function as an integral over the cylinder R x [0, 1].

    Same calling convention as f_complex_barnes. ``level`` fixes the grid
    (no adaptation), keeping the value smooth in (alpha, beta) for finite
    differences.
    """
    quad = quad if quad is not None else EULER_QUAD
    sps, pts = _pair(sp, "spectral point"), _pair(pt, "point")
    if (sps is None) != (pts is None):
        raise DomainError("give one spectral point and one point, or two of each")
    if sps is None:
        if not pt.integral:
            raise DomainError("the integrand is 1-periodic in tau2 only for integer n, got {}".format(pt.n))
        gammas = (sp.gamma / 2, -sp.gamma / 2)
        u, n = pt.u, pt.n
        log_pref = 0j
    else:
        (sp1, sp2), (pt1, pt2) = sps, pts
        if (pt1.n - pt2.n) != int(pt1.n - pt2.n):
            raise DomainError("the integrand is 1-periodic in tau2 only for integer n1 - n2")
        gammas = (sp1.gamma, sp2.gamma)
        u, n = pt1.u - pt2.u, pt1.n - pt2.n
        log_pref = 2j * np.pi * ((sp1.alpha + sp2.alpha) * pt2.u + (sp1.beta + sp2.beta) * pt2.n)
    kappa = 2 * np.pi * (-cm.h.imag - abs(u.imag))
    if not kappa > 0:
        raise DomainError("cylinder integrand does not decay: need |Im u| < -Im h, got u={}".format(u))

    def integrand(t1, t2):
        tau = t1 + 1j * t2
        return np.exp(2j * np.pi * (t1 * u + t2 * n)) * _euler_kernel(cm, gammas, tau)

    singular = tuple((g.real, float(np.mod(g.imag - 0.5, 1.0))) for g in gammas)
    domain = CylinderDomain(T=max(abs(g.real) for g in gammas) + 36.0 / kappa, a=0.0,
                            singularities=singular, exponent=cm.h.imag)
    value, err = integrate_cylinder(integrand, domain, quad, level=level)
    pref = 4 * np.pi * np.exp(log_cgamma(cm.h, cm.r) + log_pref)
    return _with_error(complex(pref * value), float(abs(pref) * err), return_error)


def lambda_exponent(n1, n2, r):
    """Lambda(n1, n2, r) = (n1 + n2)(1 - r) + r^2/2, plus r + 1 for half-integer n."""
    p1, p2 = DoubledPoint(n1, 0.0), DoubledPoint(n2, 0.0)
    if p1.integral != p2.integral:
        raise DomainError("n1 and n2 must both be integers or both half-integers, got {}, {}".format(n1, n2))
    if r != int(r):
        raise DomainError("r must be an integer, got {}".format(r))
    value = (p1.n + p2.n) * (1 - r) + r * r / 2.0
    if not p1.integral:
        value += r + 1
    return value


def lambda_phase(n1, n2, r):
    return complex(np.exp(1j * np.pi * lambda_exponent(n1, n2, r)))


# hyperbolic -> complex rational degeneration

@dataclass(frozen=True)
class ComplexLimit:
    """Hyperbolic parameters near w1 = i + delta, w2 = -i + delta.

    lambda = i sqrt(w1w2)(N + beta), x = i sqrt(w1w2)(n + u delta),
    g* = Q - g = i sqrt(w1w2)(r + h delta).
    """
    delta: float
    cm: ComplexModelParams

    @property
    def periods(self):
        return periods_cr(self.delta)

    @property
    def scale(self):
        return self.periods.sqrt_product

    @property
    def gstar(self):
        return 1j * self.scale * (self.cm.r + self.cm.h * self.delta)

    @property
    def g(self):
        return self.periods.Q - self.gstar

    def spectral(self, N, beta):
        return 1j * self.scale * (N + beta)

    def coordinate(self, pt):
        return 1j * self.scale * (pt.n + pt.u * self.delta)

    def log_factor(self):
        """log of (4 pi delta)^(ih - 2)."""
        return (1j * self.cm.h - 2) * math.log(4 * math.pi * self.delta)


def hyperbolic_to_complex(delta, cm):
    if not delta > 0:
        raise DomainError("delta must be positive, got {}".format(delta))
    return ComplexLimit(float(delta), cm)


def _cell_edges(delta, split):
    """Panel edges in y on [-1/(2 delta), 1/(2 delta)], graded towards y = 0."""
    half = 0.5 / delta
    steps = [0.25 * 2 ** j for j in range(64) if 0.25 * 2 ** j < half] + [half]
    edges = np.concatenate([-np.array(steps[::-1]), [0.0], np.array(steps)])
    if split:
        parts = [np.linspace(a, b, 2 ** split + 1)[:-1] for a, b in zip(edges[:-1], edges[1:])]
        edges = np.concatenate(parts + [edges[-1:]])
    return edges


def lattice_line_integral(x, plus, minus, limit, eps, center=0, quad=None):
    """hyperbolic_integral for periods near the complex rational point.

    The contour is Re z = offset, Im z = sqrt(w1w2) t, and the integrand varies
    on the scale delta around t in Z + eps. Each unit cell is integrated in
    y = (t - k)/delta on panels graded towards its centre; returns (value, error).
    """
    quad = quad if quad is not None else LATTICE_QUAD
    p, delta = limit.periods, limit.delta
    x = complex(x)
    plus = tuple(complex(a) for a in plus)
    minus = tuple(complex(b) for b in minus)
    offset, up, down = line_geometry(x, plus, minus, p)
    scale = p.sqrt_product
    rate = scale.real * min(up, down)
    P = p.w1 * p.w2

    def integrand(t):
        z = offset + 1j * scale * t
        return np.exp(2j * np.pi * x * z / P + _log_gamma_sum(z, plus, minus, p))

    kmax = int(math.ceil(36.0 / rate)) + 1
    cells = center + eps + np.arange(-kmax, kmax + 1)
    nodes, weights = gauss_legendre(16)
    previous = None
    for split in range(quad.max_depth + 1):
        edges = _cell_edges(delta, split)
        mid, half = 0.5 * (edges[1:] + edges[:-1]), 0.5 * np.diff(edges)
        y = (mid[:, None] + half[:, None] * nodes[None, :]).ravel()
        wy = delta * (half[:, None] * weights[None, :]).ravel()
        rows = max(1, CHUNK // y.size)
        total = 0j
        for start in range(0, cells.size, rows):
            t = cells[start:start + rows, None] + delta * y[None, :]
            total += np.sum(evaluate(integrand, t) * wy[None, :])
        if previous is not None and abs(total - previous) <= 0.5 * quad.tolerance(total):
            break
        logger.debug("lattice integral at delta={}: {} panels per cell".format(delta, y.size // 16))
        previous = total
    else:
        raise DivergenceError("lattice line integral did not converge at delta={}".format(delta),
                              estimates=(previous, total))
    ends = np.abs(evaluate(integrand, cells[[0, -1]].astype(float)))
    tail = float(ends.sum()) / rate
    if tail > quad.tolerance(total):
        raise DivergenceError("integrand still of size {:.2e} at the last cell".format(float(ends.max())),
                              estimates=(previous, total))
    return total, abs(total - previous) + tail


def complim_cm_ratio(delta, params, schedule):
    """F^g_lambda(x) near the complex rational point divided by its predicted limit."""
    schedule.require_even()
    cm = ComplexModelParams(params["r"], params["h"])
    pt = DoubledPoint(params["n"], params["u"])
    if not pt.integral:
        raise DomainError("the centre-of-mass limit needs an integer n")
    N = replace(schedule, alpha=params["alpha"]).companion(delta)
    limit = hyperbolic_to_complex(delta, cm)
    lam, x, gs = limit.spectral(N, params["beta"]), limit.coordinate(pt), limit.gstar
    # F^g_lambda(x) = F^{g*}_x(lambda): gamma(g*/2 +- x/2 +- z) against exp(2 pi i lambda z / w1w2)
    factors = (gs / 2 + x / 2, gs / 2 - x / 2)
    eps = (-(cm.r + pt.n) / 2.0) % 1.0
    value, _ = lattice_line_integral(lam, factors, factors, limit, eps)
    lhs = value * np.exp(-log_hyp_gamma(gs, limit.periods))
    target = f_complex_barnes(cm, SpectralPoint(N * delta, params["beta"]), pt)
    log_phase = 1j * np.pi * (cm.r ** 2 / 2.0 + pt.n * (cm.r + 1))
    return complex(lhs / (np.exp(log_phase + limit.log_factor()) * target))


def complim_two_point_ratio(delta, params, schedule):
    """Phi^g_lambda(x) near the complex rational point divided by its predicted limit."""
    schedule.require_even()
    cm = ComplexModelParams(params["r"], params["h"])
    pts = (DoubledPoint(params["n1"], params["u1"]), DoubledPoint(params["n2"], params["u2"]))
    alphas, betas = (params["alpha1"], params["alpha2"]), (params["beta1"], params["beta2"])
    Ns = [replace(schedule, alpha=a).companion(delta) for a in alphas]
    limit = hyperbolic_to_complex(delta, cm)
    lams = [limit.spectral(N, b) for N, b in zip(Ns, betas)]
    xs = [limit.coordinate(q) for q in pts]
    gs, p = limit.gstar, limit.periods
    eps = pts[0].eps(cm.r)
    if pts[1].eps(cm.r) != eps:
        raise DomainError("n1 and n2 must both be integers or both half-integers")
    # dual representation: gamma(g*/2 +- (x_j - z)) against exp(2 pi i (lam2 - lam1) z / w1w2)
    value, _ = lattice_line_integral(lams[1] - lams[0], [gs / 2 - xj for xj in xs], [gs / 2 + xj for xj in xs],
                                     limit, eps, center=int(math.floor((pts[0].n + pts[1].n) / 2.0)))
    log_pref = -2j * np.pi * lams[1] * (xs[0] + xs[1]) / (p.w1 * p.w2) - log_hyp_gamma(gs, p)
    lhs = value * np.exp(log_pref)
    sps = tuple(SpectralPoint(N * delta, b) for N, b in zip(Ns, betas))
    target = f_complex_barnes(cm, sps, pts)
    rhs = lambda_phase(pts[0].n, pts[1].n, cm.r) * np.exp(limit.log_factor()) * target
    return complex(lhs / rhs)
