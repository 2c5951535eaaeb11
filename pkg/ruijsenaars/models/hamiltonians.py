"""Hamiltonians of the hyperbolic, rational and complex models.

Test functions depend on the coordinate space of the model:

* ``line`` models take psi(x) with x complex;
* ``lattice`` models take psi(n, u) on doubled points, n integer or half-integer;
* ``cylinder`` models take psi(alpha, beta), z = alpha + i beta.

Difference operators evaluate psi at shifted arguments, differential
operators use central differences in (alpha, beta) with
d/dz = (d/dalpha - i d/dbeta)/2.
"""
from dataclasses import replace

import numpy as np
from edflow import get_logger

from ruijsenaars.errors import DomainError, PoleError
from ruijsenaars.numerics import central_derivative, pow_pair
from ruijsenaars.report import ratio_report
from ruijsenaars.functions.gammalib import Periods, periods_ccr, periods_cr
from ruijsenaars.functions.wavefn import DoubledPoint, SpectralPoint

logger = get_logger(__name__)

COEFFICIENT_POLE = 1e-12
DERIVATIVE_TOL = 1e-4
# relative finite-difference step; truncation error about 1e-6 for the second derivatives
DERIVATIVE_STEP = 0.01


def _coefficient_denominator(value, location):
    if abs(value) < COEFFICIENT_POLE:
        raise PoleError("coefficient pole of the Hamiltonian", location=location, order=1)
    return value


def _require(params, *names):
    missing = [n for n in names if n not in params]
    if missing:
        raise DomainError("missing Hamiltonian parameters: {}".format(", ".join(missing)))
    return [params[n] for n in names]


def _periods(params):
    p = params.get("periods")
    if p is None:
        w1, w2 = _require(params, "w1", "w2")
        p = Periods(w1, w2)
    return p


def lattice_point(point):
    if isinstance(point, DoubledPoint):
        return point.n, point.u
    n, u = point
    pt = DoubledPoint(n, u)
    return pt.n, pt.u


def cylinder_point(point):
    """alpha + i beta from a SpectralPoint, an (alpha, beta) pair or a complex number."""
    if isinstance(point, SpectralPoint):
        return point.gamma
    if isinstance(point, (tuple, list)):
        alpha, beta = point
        return complex(alpha, 0) + 1j * complex(beta)
    return complex(point)


def _value(psi, *args):
    try:
        return complex(psi(*args))
    except (TypeError, ValueError) as exc:
        raise DomainError("test function not evaluable at {}: {}".format(args, exc))


# difference operators

def _hyp(params, psi, x, prime=False):
    g = _require(params, "g")[0]
    p = _periods(params)
    shift, period = (p.w2, p.w1) if prime else (p.w1, p.w2)
    den = _coefficient_denominator(np.sinh(np.pi * x / period), x)
    return (np.sinh(np.pi * (x - 1j * g) / period) * _value(psi, x - 1j * shift)
            + np.sinh(np.pi * (x + 1j * g) / period) * _value(psi, x + 1j * shift)) / den


def _rational(params, psi, x):
    b = _require(params, "b")[0]
    den = _coefficient_denominator(x, x)
    return ((x - 1j * b) * _value(psi, x - 1j) + (x + 1j * b) * _value(psi, x + 1j)) / den


def _cr(params, psi, point):
    b = _require(params, "b")[0]
    n, u = lattice_point(point)
    z = _coefficient_denominator((n + 1j * u) / 2, point)
    return ((z + b) * _value(psi, n + 1, u - 1j) + (z - b) * _value(psi, n - 1, u + 1j)) / z


def _cr_prime(params, psi, point):
    bp = _require(params, "bp")[0]
    n, u = lattice_point(point)
    zp = _coefficient_denominator((-n + 1j * u) / 2, point)
    return ((zp + bp) * _value(psi, n - 1, u - 1j) + (zp - bp) * _value(psi, n + 1, u + 1j)) / zp


def _ccr_prime(params, psi, point):
    bp = _require(params, "bp")[0]
    n, u = lattice_point(point)
    zp = _coefficient_denominator((-n + 1j * u) / 2, point)
    return ((zp + bp) * _value(psi, n + 1, u + 1j) + (zp - bp) * _value(psi, n - 1, u - 1j)) / zp


# differential operators

def _step(params, point):
    return params.get("step", DERIVATIVE_STEP * max(1.0, abs(point)))


def _derivatives(f, point, direction, step):
    return (central_derivative(f, point, direction, order=1, step=step),
            central_derivative(f, point, direction, order=2, step=step))


def _calogero(coupling, f, point, direction, step, sign=1):
    """-f'' - 2 pi sign b coth(pi w) f' - (pi b)^2 f along one direction."""
    w = np.conj(point) if direction == "zbar" else point
    sh = _coefficient_denominator(np.sinh(np.pi * w), point)
    d1, d2 = _derivatives(f, point, direction, step)
    return -d2 - 2 * np.pi * sign * coupling * np.cosh(np.pi * w) / sh * d1 - (np.pi * coupling) ** 2 * f(point)


def _tilde(coupling, f, point, direction, step):
    """-f'' + pi^2 b(b - 1)/sh^2(pi w) f."""
    w = np.conj(point) if direction == "zbar" else point
    sh = _coefficient_denominator(np.sinh(np.pi * w), point)
    d2 = central_derivative(f, point, direction, order=2, step=step)
    return -d2 + np.pi ** 2 * coupling * (coupling - 1) / sh ** 2 * f(point)


def _line_function(psi):
    return lambda x: _value(psi, x)


def _cylinder_function(psi):
    return lambda p: _value(psi, p.real, p.imag)


def _cs(params, psi, x):
    b = _require(params, "b")[0]
    return _calogero(b, _line_function(psi), x, "alpha", _step(params, x))


def _cs_tilde(params, psi, x):
    b = _require(params, "b")[0]
    return _tilde(b, _line_function(psi), x, "alpha", _step(params, x))


def _c(params, psi, point):
    b = _require(params, "b")[0]
    z = cylinder_point(point)
    return _calogero(b, _cylinder_function(psi), z, "z", _step(params, z))


def _c_prime(params, psi, point):
    bp = _require(params, "bp")[0]
    z = cylinder_point(point)
    return _calogero(bp, _cylinder_function(psi), z, "zbar", _step(params, z))


def _c_tilde(params, psi, point):
    b = _require(params, "b")[0]
    z = cylinder_point(point)
    return _tilde(b, _cylinder_function(psi), z, "z", _step(params, z))


def _cc(params, psi, point):
    bp = _require(params, "bp")[0]
    z = cylinder_point(point)
    return _calogero(bp, _cylinder_function(psi), z, "zbar", _step(params, z), sign=-1)


def _cc_tilde(params, psi, point):
    # H_cc is the Calogero operator in zbar with coupling -b'
    bp = _require(params, "bp")[0]
    z = cylinder_point(point)
    return _tilde(-bp, _cylinder_function(psi), z, "zbar", _step(params, z))


HAMILTONIANS = {
    "hyp": ("line", lambda params, psi, x: _hyp(params, psi, complex(x))),
    "hyp-prime": ("line", lambda params, psi, x: _hyp(params, psi, complex(x), prime=True)),
    "rational": ("line", lambda params, psi, x: _rational(params, psi, complex(x))),
    "cr": ("lattice", _cr),
    "cr-prime": ("lattice", _cr_prime),
    "ccr": ("lattice", _cr),
    "ccr-prime": ("lattice", _ccr_prime),
    "CS": ("line", lambda params, psi, x: _cs(params, psi, complex(x))),
    "CS-tilde": ("line", lambda params, psi, x: _cs_tilde(params, psi, complex(x))),
    "c": ("cylinder", _c),
    "c-prime": ("cylinder", _c_prime),
    "c-tilde": ("cylinder", _c_tilde),
    "cc": ("cylinder", _cc),
    "cc-prime": ("cylinder", _c),
    "cc-tilde": ("cylinder", _cc_tilde),
}


def coordinates(model):
    if model not in HAMILTONIANS:
        raise DomainError("unknown model '{}'".format(model))
    return HAMILTONIANS[model][0]


def apply_hamiltonian(model, params, psi, point):
    """(H psi)(point) for the Hamiltonian ``model``."""
    coordinates(model)
    return complex(HAMILTONIANS[model][1](params, psi, point))


def commutator(first, second, params, psi, point):
    """Both orderings (H1 H2 psi, H2 H1 psi) at ``point``."""
    if coordinates(first) != coordinates(second):
        raise DomainError("{} and {} act on different coordinates".format(first, second))

    kind = coordinates(first)

    def inner(model):
        if kind == "line":
            return lambda x: apply_hamiltonian(model, params, psi, x)
        return lambda a, b: apply_hamiltonian(model, params, psi, (a, b))

    return (apply_hamiltonian(first, params, inner(second), point),
            apply_hamiltonian(second, params, inner(first), point))


# conjugation to the tilde forms: S H S^{-1} with S = |2 sh pi w|^{b}

TILDE = {
    "CS": ("CS-tilde", lambda params: (params["b"] / 2.0, params["b"] / 2.0)),
    "c": ("c-tilde", lambda params: (params["b"], params["b"])),
    "cc": ("cc-tilde", lambda params: (-params["bp"], -params["bp"])),
}


def conjugation_sides(model, params, psi, point):
    """(S H S^{-1} psi, H~ psi) at ``point`` for model in CS, c, cc."""
    if model not in TILDE:
        raise DomainError("no tilde form for model '{}'".format(model))
    target, exponents = TILDE[model]

    def factor(p):
        w = 2 * np.sinh(np.pi * p)
        e, ep = exponents(params)
        return pow_pair(w, np.conj(w), e, ep)

    if coordinates(model) == "line":
        x = complex(point)
        if abs(x.imag) > 0:
            raise DomainError("the CS conjugation acts on the real line")
        dressed = lambda y: _value(psi, y) / factor(y)
        lhs = factor(x) * apply_hamiltonian(model, params, dressed, x)
    else:
        z = cylinder_point(point)
        dressed = lambda alpha, beta: _value(psi, alpha, beta) / factor(alpha + 1j * beta)
        lhs = factor(z) * apply_hamiltonian(model, params, dressed, z)
    return complex(lhs), apply_hamiltonian(target, params, psi, point)


# eigenvalues

def hyperbolic_eigenvalues(lam, p):
    """(2 ch(pi lam/w2), 2 ch(pi lam/w1)) for H_h and H'_h on F^g_{i lam}(ix)."""
    return complex(2 * np.cosh(np.pi * lam / p.w2)), complex(2 * np.cosh(np.pi * lam / p.w1))


def eigenvalue_sum(lam, p):
    """E + E' in closed form for w2 = conj(w1)."""
    if abs(p.w2 - np.conj(p.w1)) > 1e-12 * abs(p.w1):
        raise DomainError("the closed form needs w2 = conj(w1)")
    w = p.w1
    return complex(4 * np.cosh(np.pi * lam * w.real / abs(w) ** 2) * np.cos(np.pi * lam * w.imag / abs(w) ** 2))


def complex_eigenvalues(sp):
    """(-2 ch pi gamma, -2 ch pi gammabar) for H_cr and H'_cr."""
    return complex(-2 * np.cosh(np.pi * sp.gamma)), complex(-2 * np.cosh(np.pi * sp.gammabar))


def calogero_eigenvalues(pt):
    """(-(pi z)^2, -(pi z')^2) for H_c and H'_c acting on the spectral variable."""
    return complex(-(np.pi * pt.z) ** 2), complex(-(np.pi * pt.zp) ** 2)


# degenerations of H_h

def _to_rational(delta, params, psi, point, schedule):
    b, x = params["b"], complex(point)
    hyp = {"g": delta * b, "periods": Periods(delta, 1.0)}
    lhs = apply_hamiltonian("hyp", hyp, lambda y: _value(psi, y / delta), delta * x)
    return lhs, apply_hamiltonian("rational", {"b": b}, psi, x)


def _to_cs(delta, params, psi, point, schedule):
    b, x = params["b"], complex(point)
    hyp = {"g": delta * b, "periods": Periods(delta, 1.0)}
    lhs = (apply_hamiltonian("hyp", hyp, psi, x) - 2 * _value(psi, x)) / delta ** 2
    return lhs, apply_hamiltonian("CS", {"b": b}, psi, x)


def _couplings(params):
    l, h = params["l"], complex(params["h"])
    if l != int(l):
        raise DomainError("l must be an integer, got {}".format(l))
    return int(l), h, {"b": (l + 1j * h) / 2, "bp": (-l + 1j * h) / 2}


def _to_lattice(target):
    def ratio_sides(delta, params, psi, point, schedule):
        l, h, couplings = _couplings(params)
        n, u = lattice_point(point)
        if n != int(n):
            raise DomainError("the lattice limit needs an integer n, got {}".format(n))
        if target == "cr":
            p = periods_cr(delta)
            scale = p.sqrt_product
            g, frame = 1j * scale * (l + h * delta), scale
        else:
            p = periods_ccr(delta)
            scale = p.sqrt_product
            g, frame = scale * (l - h * delta), 1j * scale
        # x = frame (n + u delta) for cr, frame (-n + u delta) for ccr
        sign = 1 if target == "cr" else -1

        def lift(x):
            w = x / frame
            k = int(np.round(w.real))
            return _value(psi, sign * k, (w - k) / delta)

        x = frame * (sign * n + u * delta)
        lhs = apply_hamiltonian("hyp", {"g": g, "periods": p}, lift, x)
        return lhs, (-1) ** l * apply_hamiltonian(target, couplings, psi, (n, u))
    return ratio_sides


def _to_cylinder(target):
    def ratio_sides(delta, params, psi, point, schedule):
        l, h, couplings = _couplings(params)
        z = cylinder_point(point)
        N = replace(schedule, alpha=z.real).companion(delta)
        if target == "c":
            p = periods_cr(delta)
            frame = p.sqrt_product
            g = 1j * frame * (l + h * delta)
        else:
            p = periods_ccr(delta)
            frame = 1j * p.sqrt_product
            g = p.sqrt_product * (l + h * delta)

        def lift(x):
            t = x / frame
            M = int(np.round(t.real))
            return _value(psi, M * delta, t - M)

        beta = z.imag
        hyp = apply_hamiltonian("hyp", {"g": g, "periods": p}, lift, frame * (N + beta))
        lhs = (2 * _value(psi, N * delta, beta) - (-1) ** l * hyp) / (4 * delta ** 2)
        return lhs, apply_hamiltonian(target, couplings, psi, (N * delta, beta))
    return ratio_sides


HAMILTONIAN_LIMITS = {
    "rational": _to_rational,
    "CS": _to_cs,
    "cr": _to_lattice("cr"),
    "ccr": _to_lattice("ccr"),
    "c": _to_cylinder("c"),
    "cc": _to_cylinder("cc"),
}


def hamiltonian_limit_check(source, target, schedule, psi, point, params, tolerance=1e-3):
    """Rescaled H_h psi along the schedule against the target Hamiltonian.

    Targets cr and ccr compare with (-1)^l times the limit operator, targets
    c and cc use (2 - (-1)^l H_h)/(4 delta^2); the complex side is taken at
    alpha_eff = N delta for the companion integer N actually used.
    """
    if source != "hyp" or target not in HAMILTONIAN_LIMITS:
        raise DomainError("no Hamiltonian limit from '{}' to '{}'".format(source, target))
    sides = HAMILTONIAN_LIMITS[target]

    def ratio(delta):
        lhs, rhs = sides(delta, params, psi, point, schedule)
        return lhs / rhs

    echo = dict(params, point=point)
    if "l" in params:
        echo["sign"] = (-1) ** int(params["l"])
    return ratio_report("ham-hyp-to-{}".format(target), echo, ratio, schedule, tolerance)
