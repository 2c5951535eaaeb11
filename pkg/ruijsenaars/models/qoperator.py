"""Two-particle Baxter Q-operators: eigenvalues, product formulas and kernels.

The product formulas are the centre-of-mass form of the eigenrelations and
are what the verification suite checks. The kernel evaluators act on
arbitrary vectorized test functions over a tensor grid and are slow.
"""

import numpy as np
from edflow import get_logger

from ruijsenaars.errors import DomainError, PoleError
from ruijsenaars.numerics import Contour, QuadSpec, TailModel, integrate_line, panel_nodes, pow_pair, sum_bilateral
from ruijsenaars.functions.gammalib import Periods, hyp_gamma, log_cgamma, log_hyp_gamma, reciprocal_cgamma
from ruijsenaars.functions.wavefn import ComplexModelParams, DoubledPoint, SpectralPoint, f_cm_hyp, \
    f_complex_barnes

logger = get_logger(__name__)

PRODUCT_QUAD = QuadSpec(abs_tol=1e-11, rel_tol=1e-7, max_depth=5)
INNER_QUAD = QuadSpec(abs_tol=1e-13, rel_tol=1e-9)
KERNEL_LENGTH = 16.0
KERNEL_NODES_PER_UNIT = 4
KERNEL_SITES = 6
LEVELS = ("hyp", "complex")
COINCIDENCE = 1e-12


def _periods(params):
    p = params.get("periods")
    if p is None:
        p = Periods(params.get("w1", 1.0), params.get("w2", np.sqrt(2.0)))
    return p


def _model(params):
    if isinstance(params, ComplexModelParams):
        return params
    return ComplexModelParams(params["r"], params["h"])


def _spectral(point):
    if isinstance(point, SpectralPoint):
        return point
    if isinstance(point, (tuple, list)):
        return SpectralPoint(*point)
    point = complex(point)
    return SpectralPoint(point.real, point.imag)


# eigenvalues

def _check_base(w, sp, other):
    if abs(w) < COINCIDENCE:
        raise PoleError("Q-operator eigenvalue diverges at {} against {}".format(sp, other), location=sp.gamma)


def q2_eigenvalue(lam, lams, g, p):
    """prod_j gamma(+-(lam - lam_j) + g/2) for Q_2(lam) on Phi^g_{lam1,lam2}."""
    diffs = np.array([lam - lj for lj in lams], dtype=complex)
    args = np.concatenate([g / 2 + diffs, g / 2 - diffs])
    return complex(np.exp(np.sum(log_hyp_gamma(args, p))))


def q22_eigenvalue(params, sp, sps, n):
    """Eigenvalue of the complex Q-operator with the e^{i pi (r+1)(m1+m2)} kernel phase.

    e^{i pi (r + (r+1)(n1+n2))} prod_j (2 sh pi(g - g_j + ir/2))^{-rho} (2 sh pi(gbar - gbar_j - ir/2))^{-rho'}
    """
    cm = _model(params)
    sp = _spectral(sp)
    value = np.exp(1j * np.pi * (cm.r + (cm.r + 1) * (n[0] + n[1])))
    for s in sps:
        w = 2 * np.sinh(np.pi * (sp.gamma - _spectral(s).gamma + 0.5j * cm.r))
        _check_base(w, sp, s)
        value = value * pow_pair(w, np.conj(w), -cm.rho, -cm.rhop)
    return complex(value)


def q223_eigenvalue(params, sp, sps):
    """prod_j (2 ch pi(g - g_j))^{-rho} (2 ch pi(gbar - gbar_j))^{-rho'}."""
    cm = _model(params)
    sp = _spectral(sp)
    value = 1 + 0j
    for s in sps:
        w = 2 * np.cosh(np.pi * (sp.gamma - _spectral(s).gamma))
        _check_base(w, sp, s)
        value = value * pow_pair(w, np.conj(w), -cm.rho, -cm.rhop)
    return complex(value)


def q_eigenvalue_sides(params, sp, sps, n):
    """Both kernels' eigenvalues at beta - (r+1)/2 and beta: they differ by e^{-i pi (r+1)(n1+n2)}."""
    cm = _model(params)
    sp = _spectral(sp)
    shifted = SpectralPoint(sp.alpha, sp.beta - (cm.r + 1) / 2.0)
    lhs = q223_eigenvalue(cm, shifted, sps)
    rhs = np.exp(-1j * np.pi * (cm.r + 1) * (n[0] + n[1])) * q22_eigenvalue(cm, sp, sps, n)
    return lhs, complex(rhs)


# product formulas

def _sine_pair(z, p):
    """1/gamma(+-z) = -4 sin(pi z/w1) sin(pi z/w2)."""
    return -4 * np.sin(np.pi * z / p.w1) * np.sin(np.pi * z / p.w2)


def _hyp_product(params, quad):
    g, lam = complex(params["g"]), complex(params["lam"])
    x1, x2 = complex(params["x1"]), complex(params["x2"])
    p = _periods(params)
    gstar = p.Q - g
    shifts = [(gstar + s1 * x1 + s2 * x2) / 2 for s1 in (1, -1) for s2 in (1, -1)]

    def integrand(z):
        flat = np.asarray(z, dtype=complex).ravel()
        args = np.concatenate([g + flat, g - flat] + [a + s * flat / 2 for a in shifts for s in (1, -1)])
        logs = log_hyp_gamma(args, p).reshape(-1, flat.size).sum(axis=0)
        wave = np.array([f_cm_hyp(g, lam, zi, p, quad=INNER_QUAD) for zi in flat])
        out = np.exp(logs) * _sine_pair(flat, p) * wave / (1j * p.sqrt_product)
        return out.reshape(np.shape(z))

    rate = max(np.pi * (g / (p.w1 * p.w2)).real, 0.1)
    contour = Contour.vertical(radius=max(6.0, 20.0 / rate), nodes_per_unit=KERNEL_NODES_PER_UNIT)
    value, err = integrate_line(integrand, contour, quad.with_tail(TailModel.exponential(rate)))
    norm = hyp_gamma(g, p)
    lhs = 4 * f_cm_hyp(g, lam, x1, p, quad=INNER_QUAD) * f_cm_hyp(g, lam, x2, p, quad=INNER_QUAD)
    return complex(lhs), complex(norm * value), float(abs(norm) * err)


def _complex_kernel(cm, u1, n1, u2, n2, t, m):
    """Gamma((h +- u1 +- u2 +- t)/2, (r +- n1 +- n2)/2 +- m) / Gamma(+-t, +-2m) Gamma(+-t + h, +-2m + r)."""
    logs = 0j
    for s1 in (1, -1):
        for s2 in (1, -1):
            for s3 in (1, -1):
                logs = logs + log_cgamma((cm.h + s1 * u1 + s2 * u2 + s3 * t) / 2,
                                         (cm.r + s1 * n1 + s2 * n2) / 2 + s3 * m)
    den = 1 + 0j
    for s in (1, -1):
        den = den * reciprocal_cgamma(s * t, s * 2 * m) * reciprocal_cgamma(s * t + cm.h, s * 2 * m + cm.r)
    return np.exp(logs) * den


def _complex_product(params, quad):
    cm = _model(params)
    sp = SpectralPoint(params["alpha"], params["beta"])
    u1, n1 = complex(params["u1"]), params["n1"]
    u2, n2 = complex(params["u2"]), params["n2"]
    for n in (n1, n2):
        if n != int(n):
            raise DomainError("the product formula needs integer n, got {}".format(n))
    eps = (-(cm.r + n1 + n2) / 2.0) % 1.0
    exponent = -6.0 - 3.0 * cm.h.imag
    inner = quad.with_tail(TailModel.power_law(exponent))

    def term(m):
        def integrand(t):
            flat = np.asarray(t, dtype=complex).ravel()
            wave = np.array([f_complex_barnes(cm, sp, DoubledPoint(2 * m, ti), quad=INNER_QUAD) for ti in flat])
            return (_complex_kernel(cm, u1, n1, u2, n2, flat, m) * wave).reshape(np.shape(t))

        value, _ = integrate_line(integrand, Contour.real_line(radius=12.0, nodes_per_unit=KERNEL_NODES_PER_UNIT),
                                  inner)
        logger.debug("product formula term m={}: {}".format(m, value))
        return value

    total, err = sum_bilateral(term, eps, quad)
    norm = 1 / (4 * np.pi * np.exp(log_cgamma(cm.h, cm.r)))
    lhs = 4 * f_complex_barnes(cm, sp, DoubledPoint(n1, u1)) * f_complex_barnes(cm, sp, DoubledPoint(n2, u2))
    return complex(lhs), complex(norm * total), float(abs(norm) * err)


def q_product_sides(level, params, quad=None):
    """(4 F(x1) F(x2), integral side, error of the integral side) of the product formula."""
    quad = quad if quad is not None else PRODUCT_QUAD
    if level == "hyp":
        return _hyp_product(params, quad)
    if level == "complex":
        return _complex_product(params, quad)
    raise DomainError("unknown level '{}', expected one of {}".format(level, ", ".join(LEVELS)))


def q_product_rhs(level, params, quad=None):
    return q_product_sides(level, params, quad)[1]


# kernels on a tensor grid

def _grid(length, nodes_per_unit):
    n_panels = max(1, int(np.ceil(2 * length * nodes_per_unit / 16.0)))
    return panel_nodes(-length, length, n_panels)


def _sites(eps, count):
    return eps + np.arange(-count, count + 1)


def _pair_gamma(a, b, c, d):
    """Gamma(a +- b, c +- d) on broadcast arrays."""
    return np.exp(log_cgamma(a + b, c + d) + log_cgamma(a - b, c - d))


def _coordinate_side(cm, pts, t, m):
    """prod_j Gamma(+-(u_j - t) + h/2, +-(n_j - m) + r/2) on the (m, t) grid."""
    out = np.ones(np.broadcast(t, m).shape, dtype=complex)
    for pt in pts:
        out = out * _pair_gamma(cm.h / 2, pt.u - t, cm.r / 2, pt.n - m)
    return out


def _pair_denominator(cm, dt, dm):
    """1 / Gamma(+-dt, +-dm) Gamma(+-dt + h, +-dm + r)."""
    out = reciprocal_cgamma(dt, dm) * reciprocal_cgamma(-dt, -dm)
    return out * reciprocal_cgamma(dt + cm.h, dm + cm.r) * reciprocal_cgamma(-dt + cm.h, -dm + cm.r)


def _epsilon(cm, pts):
    eps = pts[0].eps(cm.r)
    if any(pt.eps(cm.r) != eps for pt in pts):
        raise DomainError("all n must be integers or all half-integers")
    return eps


def q_kernel_complex(params, sp, phi, pts, length=KERNEL_LENGTH, sites=KERNEL_SITES,
                     nodes_per_unit=KERNEL_NODES_PER_UNIT):
    """[Q_2(alpha, beta) phi](u, n) with phi(t1, t2, m1, m2) vectorized; truncated sums and integrals."""
    cm = _model(params)
    sp = _spectral(sp)
    pts = tuple(p if isinstance(p, DoubledPoint) else DoubledPoint(*p) for p in pts)
    eps = _epsilon(cm, pts)
    t, weights = _grid(length, nodes_per_unit)
    m = _sites(eps, sites)
    M, T = np.meshgrid(m, t, indexing="ij")
    side = _coordinate_side(cm, pts, T, M) * np.exp(-2j * np.pi * (sp.alpha * T + sp.beta * M)) * weights
    m1, m2, t1, t2 = np.meshgrid(m, m, t, t, indexing="ij")
    integrand = side[:, None, :, None] * side[None, :, None, :] * _pair_denominator(cm, t1 - t2, m1 - m2)
    total = np.sum(integrand * phi(t1, t2, m1, m2))
    outer = np.exp(2j * np.pi * (sp.alpha * (pts[0].u + pts[1].u) + sp.beta * (pts[0].n + pts[1].n)))
    norm = 2 * (4 * np.pi) ** 2 * np.exp(2 * log_cgamma(cm.h, cm.r))
    return complex(outer * total / norm)


def q_kernel_hyp(params, lam, phi, x, length=KERNEL_LENGTH, nodes_per_unit=KERNEL_NODES_PER_UNIT):
    """[Q^h_2(lam) phi](x1, x2) with phi(y1, y2) vectorized over the imaginary axes."""
    g = complex(params["g"])
    p = _periods(params)
    gstar = p.Q - g
    P = p.w1 * p.w2
    s, weights = _grid(length, nodes_per_unit)
    y = 1j * s
    args = np.concatenate([gstar / 2 + sign * (xj - y) for xj in x for sign in (1, -1)])
    side = np.exp(log_hyp_gamma(args, p).reshape(-1, y.size).sum(axis=0))
    side = side * np.exp(2j * np.pi * lam * y / P) * weights / p.sqrt_product
    y1, y2 = np.meshgrid(y, y, indexing="ij")
    d = y1 - y2
    den = _sine_pair(d, p) * np.exp(-log_hyp_gamma(np.ravel(gstar + d), p) -
                                    log_hyp_gamma(np.ravel(gstar - d), p)).reshape(d.shape)
    total = np.sum(side[:, None] * side[None, :] * den * phi(y1, y2))
    norm = 2 * np.exp(2 * log_hyp_gamma(gstar, p))
    return complex(np.exp(-2j * np.pi * lam * (x[0] + x[1]) / P) * total / norm)


def q_commutativity_sides(params, sps, pts, ends, length=KERNEL_LENGTH, sites=KERNEL_SITES,
                          nodes_per_unit=KERNEL_NODES_PER_UNIT):
    """The two orderings of the product kernel Q_2(a1, b1) Q_2(a2, b2) between (u, n) and (s, l).

    Both are truncated to |m_j| <= ``sites`` and |t_j| <= ``length``; they agree
    up to the truncation error.
    """
    cm = _model(params)
    sps = tuple(_spectral(s) for s in sps)
    pts = tuple(p if isinstance(p, DoubledPoint) else DoubledPoint(*p) for p in pts)
    ends = tuple(p if isinstance(p, DoubledPoint) else DoubledPoint(*p) for p in ends)
    eps = _epsilon(cm, pts + ends)
    t, weights = _grid(length, nodes_per_unit)
    m = _sites(eps, sites)
    M, T = np.meshgrid(m, t, indexing="ij")
    middle = _coordinate_side(cm, pts, T, M) * _coordinate_side(cm, ends, T, M) * weights
    m1, m2, t1, t2 = np.meshgrid(m, m, t, t, indexing="ij")
    den = _pair_denominator(cm, t1 - t2, m1 - m2)

    def ordering(first, second):
        phase = np.exp(-2j * np.pi * ((first.alpha - second.alpha) * T + (first.beta - second.beta) * M))
        side = middle * phase
        total = np.sum(side[:, None, :, None] * side[None, :, None, :] * den)
        outer = (first.alpha * (pts[0].u + pts[1].u) + first.beta * (pts[0].n + pts[1].n)
                 - second.alpha * (ends[0].u + ends[1].u) - second.beta * (ends[0].n + ends[1].n))
        return complex(np.exp(2j * np.pi * outer) * total)

    forward = ordering(sps[0], sps[1])
    backward = ordering(sps[1], sps[0])
    logger.info("commutativity kernel: {:.6e} vs {:.6e}".format(forward, backward))
    return forward, backward
