"""Reflection intertwiners of the complex rational two-particle model.

Two-point test functions take ``psi(n1, u1, n2, u2)`` for the difference
operators M, M' and ``psi(gamma1, gamma2)`` (complex spectral variables)
for the differential operators M^, M^'.
"""

import numpy as np
from edflow import get_logger

from ruijsenaars.errors import DomainError, PoleError
from ruijsenaars.numerics import central_derivative, pow_pair
from ruijsenaars.functions.gammalib import cgamma
from ruijsenaars.functions.wavefn import ComplexModelParams, DoubledPoint, SpectralPoint, f_complex_barnes
from ruijsenaars.models.hamiltonians import DERIVATIVE_STEP, cylinder_point

logger = get_logger(__name__)

COEFFICIENT_POLE = 1e-12


def _model(params):
    if isinstance(params, ComplexModelParams):
        return params
    try:
        return ComplexModelParams(params["r"], params["h"])
    except KeyError as exc:
        raise DomainError("missing model parameter {}".format(exc))


def lattice_pair(point):
    """((n1, u1), (n2, u2)) or two DoubledPoints -> two DoubledPoints."""
    try:
        first, second = point
    except (TypeError, ValueError):
        raise DomainError("expected two lattice points, got {}".format(point))
    pts = [p if isinstance(p, DoubledPoint) else DoubledPoint(*p) for p in (first, second)]
    if (pts[0].n - pts[1].n) != int(pts[0].n - pts[1].n):
        raise DomainError("n1 - n2 must be an integer")
    return tuple(pts)


def spectral_pair(point):
    """Two SpectralPoints, (alpha, beta) pairs or complex numbers -> (gamma1, gamma2)."""
    try:
        first, second = point
    except (TypeError, ValueError):
        raise DomainError("expected two spectral points, got {}".format(point))
    return cylinder_point(first), cylinder_point(second)


def r_factor(params, point):
    """e^{pi i (r + n2 - n1)} Gamma(h +- (u2 - u1), r +- (n2 - n1))."""
    cm = _model(params)
    p1, p2 = lattice_pair(point)
    du, dn = p2.u - p1.u, int(p2.n - p1.n)
    value = np.exp(1j * np.pi * (cm.r + dn)) * cgamma(cm.h + du, cm.r + dn) * cgamma(cm.h - du, cm.r - dn)
    if not np.isfinite(value):
        raise PoleError("intertwiner R has a pole at {}".format(point), location=point, order=1)
    return complex(value)


def r_hat_factor(params, point):
    """(2 sh pi(g2 - g1))^{1 - 2 rho} (2 sh pi(g2bar - g1bar))^{1 - 2 rho'}."""
    cm = _model(params)
    g1, g2 = spectral_pair(point)
    w = 2 * np.sinh(np.pi * (g2 - g1))
    if abs(w) < COEFFICIENT_POLE:
        raise PoleError("intertwiner R^ vanishes at gamma1 = gamma2", location=point, order=1)
    return complex(pow_pair(w, np.conj(w), 1 - 2 * cm.rho, 1 - 2 * cm.rhop))


INTERTWINERS = {
    "R": r_factor,
    "R-hat": r_hat_factor,
}


def intertwiner(which, params, point):
    if which not in INTERTWINERS:
        raise DomainError("unknown intertwiner '{}'".format(which))
    return INTERTWINERS[which](params, point)


# difference operators in (z1, z2) and (z1', z2')

def _difference(psi, point, rho, primed):
    p1, p2 = lattice_pair(point)
    delta = (p2.zp - p1.zp) if primed else (p2.z - p1.z)
    if abs(delta) < COEFFICIENT_POLE:
        raise PoleError("coefficient pole at coinciding points", location=point, order=1)
    # z_j -> z_j - 1 is (n_j - 1, u_j + i); z'_j -> z'_j - 1 is (n_j + 1, u_j + i)
    dn = 1 if primed else -1
    first = psi(p1.n + dn, p1.u + 1j, p2.n, p2.u)
    second = psi(p1.n, p1.u, p2.n + dn, p2.u + 1j)
    return complex((delta + 1 - rho) / delta * first + (delta - 1 + rho) / delta * second)


def apply_m(params, psi, point, reflected=False):
    """M(rho) psi; with ``reflected`` M(1 - rho)."""
    cm = _model(params)
    rho = 1 - cm.rho if reflected else cm.rho
    return _difference(psi, point, rho, primed=False)


def apply_m_prime(params, psi, point, reflected=False):
    cm = _model(params)
    rhop = 1 - cm.rhop if reflected else cm.rhop
    return _difference(psi, point, rhop, primed=True)


def m_eigenvalues(sps):
    """(-(e^{-2 pi g1} + e^{-2 pi g2}), conjugate-side) for M and M' on the two-point function."""
    g1, g2 = spectral_pair(sps)
    return (complex(-(np.exp(-2 * np.pi * g1) + np.exp(-2 * np.pi * g2))),
            complex(-(np.exp(-2 * np.pi * np.conj(g1)) + np.exp(-2 * np.pi * np.conj(g2)))))


# differential operators in (gamma1, gamma2)

def _differential(psi, point, rho, direction, step):
    g1, g2 = spectral_pair(point)
    step = step if step is not None else DERIVATIVE_STEP * max(1.0, abs(g1), abs(g2))
    w = g1 - g2 if direction == "z" else np.conj(g1 - g2)
    sh = np.sinh(np.pi * w)
    if abs(sh) < COEFFICIENT_POLE:
        raise PoleError("coefficient pole at gamma1 = gamma2", location=point, order=1)

    def along_first(g):
        return complex(psi(g, g2))

    def along_second(g):
        return complex(psi(g1, g))

    d1 = central_derivative(along_first, g1, direction, order=1, step=step)
    d11 = central_derivative(along_first, g1, direction, order=2, step=step)
    d2 = central_derivative(along_second, g2, direction, order=1, step=step)
    d22 = central_derivative(along_second, g2, direction, order=2, step=step)
    value = complex(psi(g1, g2))
    return complex(-d11 - d22 - 2 * np.pi * rho * np.cosh(np.pi * w) / sh * (d1 - d2)
                   - 2 * (np.pi * rho) ** 2 * value)


def apply_m_hat(params, psi, point, reflected=False, step=None):
    cm = _model(params)
    rho = 1 - cm.rho if reflected else cm.rho
    return _differential(psi, point, rho, "z", step)


def apply_m_hat_prime(params, psi, point, reflected=False, step=None):
    cm = _model(params)
    rhop = 1 - cm.rhop if reflected else cm.rhop
    return _differential(psi, point, rhop, "zbar", step)


OPERATORS = {
    "M": ("R", apply_m),
    "M-prime": ("R", apply_m_prime),
    "M-hat": ("R-hat", apply_m_hat),
    "M-hat-prime": ("R-hat", apply_m_hat_prime),
}


def intertwining_sides(op, params, psi, point):
    """(O(rho)[I psi], I O(1 - rho) psi) at ``point`` for O in M, M', M^, M^'."""
    if op not in OPERATORS:
        raise DomainError("unknown operator '{}'".format(op))
    which, apply = OPERATORS[op]
    cm = _model(params)
    if which == "R":
        def dressed(n1, u1, n2, u2):
            return intertwiner("R", cm, ((n1, u1), (n2, u2))) * psi(n1, u1, n2, u2)
    else:
        def dressed(g1, g2):
            return intertwiner("R-hat", cm, (g1, g2)) * psi(g1, g2)
    lhs = apply(cm, dressed, point)
    rhs = intertwiner(which, cm, point) * apply(cm, psi, point, reflected=True)
    return lhs, complex(rhs)


def reflection_sides(params, sps, pts, quad=None):
    """Both sides of the coupling reflection of the two-point function.

    lhs = R^(gamma)^{-1} F^{r,h}, rhs = R(u, n) F^{-r,-2i-h}.
    """
    cm = _model(params)
    sps = tuple(s if isinstance(s, SpectralPoint) else SpectralPoint(*s) for s in sps)
    pts = lattice_pair(pts)
    direct = f_complex_barnes(cm, sps, pts, quad=quad)
    reflected = f_complex_barnes(cm.reflected(), sps, pts, quad=quad)
    lhs = direct / intertwiner("R-hat", cm, sps)
    rhs = intertwiner("R", cm, pts) * reflected
    logger.debug("reflection at r={}, h={}: {} vs {}".format(cm.r, cm.h, lhs, rhs))
    return complex(lhs), complex(rhs)
