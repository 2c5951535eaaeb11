"""Weight functions of the scalar products and formal adjointness of the Hamiltonians."""
from dataclasses import replace
from typing import NamedTuple

import numpy as np
from scipy import special
from edflow import get_logger

from ruijsenaars.errors import DomainError, PoleError
from ruijsenaars.numerics import EVEN_GEOMETRIC, GEOMETRIC, Contour, CylinderDomain, LimitSchedule, QuadSpec, \
    integrate_cylinder, integrate_line, pow_pair
from ruijsenaars.report import ratio_report
from ruijsenaars.functions.gammalib import Periods, log_cgamma, log_gamma_complex, log_hyp_gamma, pochhammer, \
    reciprocal_cgamma
from ruijsenaars.models.hamiltonians import apply_hamiltonian, cylinder_point

logger = get_logger(__name__)

REAL_TOL = 1e-10
PAIRING_QUAD = QuadSpec(abs_tol=1e-12, rel_tol=1e-9, max_depth=6)
PAIRING_RADIUS = 8.0
PAIRING_SITES = 10
CYLINDER_LENGTH = 6.0


def _real(x):
    return abs(complex(x).imag) <= REAL_TOL * max(1.0, abs(x))


def _scalar_or_array(out):
    out = np.asarray(out, dtype=complex)
    return out if out.ndim else complex(out)


def _lattice(point):
    if hasattr(point, "n"):
        return point.n, np.asarray(point.u, dtype=complex)
    k, u = point
    if k != int(k):
        raise DomainError("weights on the doubled lattice need an integer k, got {}".format(k))
    return int(k), np.asarray(u, dtype=complex)


def _couplings(params):
    l, h = params["l"], complex(params["h"])
    if l != int(l):
        raise DomainError("l must be an integer, got {}".format(l))
    return int(l), h, (l + 1j * h) / 2, (-l + 1j * h) / 2


def _reciprocal_gamma(z):
    return special.rgamma(np.asarray(z, dtype=complex))


def _gamma(z):
    return np.exp(log_gamma_complex(z))


# line weights

def _sp_h(params, x):
    g, p = params["g"], params["periods"]
    x = np.asarray(x, dtype=complex)
    top = log_hyp_gamma(g + 1j * x, p) + log_hyp_gamma(g - 1j * x, p)
    return _scalar_or_array(np.exp(top - log_hyp_gamma(1j * x, p) - log_hyp_gamma(-1j * x, p)))


def sp_h2_forms(params, x):
    """(1/gamma(+-ix), 4 sh(pi x/w1) sh(pi x/w2)), the two forms of the SP_h2 density."""
    p = params["periods"]
    x = np.asarray(x, dtype=complex)
    gamma_form = np.exp(-log_hyp_gamma(1j * x, p) - log_hyp_gamma(-1j * x, p))
    sinh_form = 4 * np.sinh(np.pi * x / p.w1) * np.sinh(np.pi * x / p.w2)
    return _scalar_or_array(gamma_form), _scalar_or_array(sinh_form)


def _sp_h2(params, x):
    p = params["periods"]
    x = np.asarray(x, dtype=complex)
    return _scalar_or_array(4 * np.sinh(np.pi * x / p.w1) * np.sinh(np.pi * x / p.w2))


def _sp_r(params, x):
    b = params["b"]
    x = np.asarray(x, dtype=complex)
    out = _gamma(b + 1j * x) * _gamma(b - 1j * x) * _reciprocal_gamma(1j * x) * _reciprocal_gamma(-1j * x)
    return _scalar_or_array(out)


def _cs(params, x):
    x = np.asarray(x, dtype=complex)
    return _scalar_or_array(np.abs(2 * np.sinh(np.pi * x)) ** (2 * params["b"]))


# doubled-lattice weights

def _sp_cr(params, point):
    l, h, _, _ = _couplings(params)
    k, u = _lattice(point)
    top = np.exp(log_cgamma(h + u, l + k) + log_cgamma(h - u, l - k))
    return _scalar_or_array(top * reciprocal_cgamma(u, k) * reciprocal_cgamma(-u, -k))


def _abs_z_squared(params, point):
    k, u = _lattice(point)
    z, zp = (k + 1j * u) / 2, (-k + 1j * u) / 2
    return _scalar_or_array(-z * zp)


def _sp_ccr_point(l, b, bp, k, u):
    zp = (-k + 1j * u) / 2
    den = pochhammer(1 + zp, k - 1) * pochhammer(1 - zp, -k - 1)
    if abs(den) == 0:
        raise PoleError("SP_ccr weight has a pole at k={}, u={}".format(k, u), location=(k, u))
    return pochhammer(bp + 1 + zp, l + k - 1) * pochhammer(bp + 1 - zp, l - k - 1) / den


def _sp_ccr(params, point):
    l, _, b, bp = _couplings(params)
    k, u = _lattice(point)
    out = np.vectorize(lambda v: _sp_ccr_point(l, b, bp, k, v), otypes=[complex])(u)
    return _scalar_or_array(out)


def _sp_ccr_tilde(params, point):
    _, _, b, bp = _couplings(params)
    k, u = _lattice(point)
    z, zp = (k + 1j * u) / 2, (-k + 1j * u) / 2
    out = _gamma(b + z) * _gamma(b - z) * _gamma(-bp + zp) * _gamma(-bp - zp)
    out = out * _reciprocal_gamma(z) * _reciprocal_gamma(-z) * _reciprocal_gamma(zp) * _reciprocal_gamma(-zp)
    return _scalar_or_array(out)


# cylinder weights

def _sinh_pair(point):
    z = np.asarray(point, dtype=complex)
    w = 2 * np.sinh(np.pi * z)
    return w, np.conj(w)


def _sp_c(params, point):
    w, wb = _sinh_pair(point)
    return _scalar_or_array(pow_pair(w, wb, 2 * params["b"], 2 * params["bp"]))


def _sp_cc(params, point):
    w, wb = _sinh_pair(point)
    return _scalar_or_array(pow_pair(w, wb, 2 * params["b"], -2 * params["bp"]))


def _abs_sinh_squared(params, point):
    w, wb = _sinh_pair(point)
    return _scalar_or_array(w * wb)


def _real_or_conjugate_periods(p):
    real = _real(p.w1) and _real(p.w2)
    return real or abs(p.w2 - np.conj(p.w1)) <= REAL_TOL * abs(p.w1)


def _h_real(params):
    return _real(params["h"])


WEIGHTS = {
    "SP_h": ("line", _sp_h, lambda q: _real(q["g"]) and _real_or_conjugate_periods(q["periods"])),
    "SP_h2": ("line", _sp_h2, lambda q: _real_or_conjugate_periods(q["periods"])),
    "SP_r": ("line", _sp_r, lambda q: _real(q["b"])),
    "CS": ("line", _cs, lambda q: _real(q["b"])),
    "SP_cr": ("lattice", _sp_cr,
              lambda q: q["l"] == 0 and abs(complex(q["h"]).real) <= REAL_TOL and complex(q["h"]).imag < 0),
    "SP_cr2": ("lattice", _abs_z_squared, lambda q: True),
    "SP_ccr": ("lattice", _sp_ccr, lambda q: q["l"] == 2 and abs(complex(q["h"])) <= REAL_TOL),
    "SP_ccr2": ("lattice", _abs_z_squared, lambda q: True),
    "SP_ccr_tilde": ("lattice", _sp_ccr_tilde, _h_real),
    "SP_c": ("cylinder", _sp_c, lambda q: _real(q["b"]) and abs(q["b"] - q["bp"]) <= REAL_TOL),
    "SP_c2": ("cylinder", _abs_sinh_squared, lambda q: True),
    "SP_cc": ("cylinder", _sp_cc, lambda q: abs(np.conj(q["b"]) + q["bp"]) <= REAL_TOL),
    "SP_cc2": ("cylinder", _abs_sinh_squared, lambda q: True),
}


def _entry(w):
    if w not in WEIGHTS:
        raise DomainError("unknown weight '{}'".format(w))
    return WEIGHTS[w]


def weight_coordinates(w):
    return _entry(w)[0]


def weight(w, params, point):
    """Density of the scalar product ``w`` at ``point`` (vectorized in x, u or z)."""
    kind, density, _ = _entry(w)
    if kind == "cylinder":
        point = cylinder_point(point) if not isinstance(point, np.ndarray) else point
    try:
        return density(params, point)
    except KeyError as exc:
        raise DomainError("weight {} needs parameter {}".format(w, exc))


def is_unitary(w, params):
    """The parameter predicate under which ``w`` is real and nonnegative."""
    try:
        return bool(_entry(w)[2](params))
    except KeyError as exc:
        raise DomainError("weight {} needs parameter {}".format(w, exc))


# formal adjoints

ADJOINTS = {
    ("hyp", "SP_h"): "hyp",
    ("hyp-prime", "SP_h"): "hyp-prime",
    ("rational", "SP_r"): "rational",
    ("CS", "CS"): "CS",
    ("cr", "SP_cr"): "cr-prime",
    ("cr-prime", "SP_cr"): "cr",
    ("c", "SP_c"): "c-prime",
    ("c-prime", "SP_c"): "c",
}


class Pairing(NamedTuple):
    lhs: complex
    rhs: complex
    residual: float
    warnings: tuple = ()


def _hamiltonian_params(model, params):
    if model.startswith("cr") and "b" not in params:
        _, _, b, bp = _couplings(params)
        return dict(params, b=b, bp=bp)
    return params


def _integrate(kind, f, quad, warnings, exponent=0.0):
    if kind == "line":
        value, _ = integrate_line(np.vectorize(f, otypes=[complex]), Contour.real_line(radius=PAIRING_RADIUS), quad)
        return value
    if kind == "lattice":
        total, edge = 0j, 0.0
        for k in range(-PAIRING_SITES, PAIRING_SITES + 1):
            value, _ = integrate_line(np.vectorize(lambda u: f(k, u), otypes=[complex]),
                                      Contour.real_line(radius=PAIRING_RADIUS), quad)
            total += value
            if abs(k) == PAIRING_SITES:
                edge = max(edge, abs(value))
        if edge > quad.tolerance(total):
            warnings.append("lattice sum still {:.2e} at |k| = {}: unreliable pairing".format(edge, PAIRING_SITES))
        return total
    vf = np.vectorize(f, otypes=[complex])
    domain = CylinderDomain(T=CYLINDER_LENGTH, a=-0.5, singularities=((0.0, 0.0),), exponent=exponent)
    edge = np.abs(vf(np.array([-CYLINDER_LENGTH, CYLINDER_LENGTH]), np.zeros(2))).max()
    if edge > quad.tolerance(1.0):
        warnings.append("integrand still {:.2e} at |alpha| = {}: unreliable pairing".format(edge, CYLINDER_LENGTH))
    value, _ = integrate_cylinder(vf, domain, quad)
    return value


def adjoint_pairing(model, w, phi, psi, quad=None, params=None):
    """<phi | H psi> and <H^dagger phi | psi> in the scalar product ``w``.

    Test functions follow the coordinates of ``model``; on the cylinder they
    take (alpha, beta) and must be 1-periodic in beta.
    """
    if (model, w) not in ADJOINTS:
        raise DomainError("no adjoint relation for {} in the scalar product {}".format(model, w))
    quad = quad if quad is not None else PAIRING_QUAD
    params = params or {}
    adjoint = ADJOINTS[(model, w)]
    kind = weight_coordinates(w)
    hparams = _hamiltonian_params(model, params)
    warnings = []
    if not is_unitary(w, params):
        warnings.append("parameters outside the unitarity domain of {}".format(w))

    if kind == "line":
        def left(x):
            return weight(w, params, x) * np.conj(phi(x)) * apply_hamiltonian(model, hparams, psi, x)

        def right(x):
            return weight(w, params, x) * np.conj(apply_hamiltonian(adjoint, hparams, phi, x)) * psi(x)
    elif kind == "lattice":
        def left(k, u):
            return weight(w, params, (k, u)) * np.conj(phi(k, u)) * apply_hamiltonian(model, hparams, psi, (k, u))

        def right(k, u):
            return weight(w, params, (k, u)) * np.conj(apply_hamiltonian(adjoint, hparams, phi, (k, u))) * psi(k, u)
    else:
        def left(a, b):
            z = complex(a, b)
            return weight(w, params, z) * np.conj(phi(a, b)) * apply_hamiltonian(model, hparams, psi, z)

        def right(a, b):
            z = complex(a, b)
            return weight(w, params, z) * np.conj(apply_hamiltonian(adjoint, hparams, phi, z)) * psi(a, b)

    # |z|^{4b} times the 1/z of coth(pi z) at the origin of the cylinder
    exponent = 4 * complex(params.get("b", 0.5)).real - 1 if kind == "cylinder" else 0.0
    lhs = _integrate(kind, left, quad, warnings, exponent)
    rhs = _integrate(kind, right, quad, warnings, exponent)
    residual = abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1e-300)
    for message in warnings:
        logger.warning(message)
    return Pairing(complex(lhs), complex(rhs), float(residual), tuple(warnings))


# degenerations of the SP_h density

def _sph_to_spcr(delta, params, schedule):
    l, h, _, _ = _couplings(params)
    k, u = params["k"], params["u"]
    p = Periods.from_sqrt_ratio(1j + delta)
    lhs = _sp_h({"g": 1j * (l + h * delta), "periods": p}, k + u * delta)
    factor = np.exp(1j * np.pi * l + 2j * h * np.log(4 * np.pi * delta))
    return lhs / (factor * _sp_cr(params, (k, u)))


def _sph_to_spccr(delta, params, schedule):
    l, h, _, _ = _couplings(params)
    k, u = params["k"], params["u"]
    p = Periods.from_sqrt_ratio(1 + 1j * delta)
    lhs = _sp_h({"g": l - h * delta, "periods": p}, 1j * (-k + u * delta))
    factor = np.exp(1j * np.pi * l + 2 * l * np.log(4 * np.pi * delta))
    return lhs / (factor * _sp_ccr(params, (k, u)))


def _sph_to_spc(delta, params, schedule):
    l, h, b, bp = _couplings(params)
    N = replace(schedule, alpha=params["alpha"]).companion(delta)
    beta = params["beta"]
    p = Periods.from_sqrt_ratio(1j + delta)
    lhs = _sp_h({"g": 1j * (l + h * delta), "periods": p}, N + beta)
    return lhs / _sp_c({"b": b, "bp": bp}, complex(N * delta, beta))


def _sph2_to_spcr2(delta, params, schedule):
    k, u = params["k"], params["u"]
    p = Periods.from_sqrt_ratio(1j + delta)
    lhs = _sp_h2({"periods": p}, k + u * delta) / (4 * np.pi * delta) ** 2
    return lhs / _abs_z_squared(params, (k, u))


def _sph2_to_spc2(delta, params, schedule):
    N = replace(schedule, alpha=params["alpha"]).companion(delta)
    beta = params["beta"]
    p = Periods.from_sqrt_ratio(1j + delta)
    return _sp_h2({"periods": p}, N + beta) / _abs_sinh_squared(params, complex(N * delta, beta))


def _sph_to_spr(delta, params, schedule):
    b, x = params["b"], params["x"]
    p = Periods(delta, 1.0)
    lhs = _sp_h({"g": delta * b, "periods": p}, delta * x)
    return lhs / (np.exp(2 * b * np.log(2 * np.pi * delta)) * _sp_r(params, x))


WEIGHT_LIMITS = {
    "SPh-to-SPcr": (_sph_to_spcr, {"l": 0, "h": -1.2j, "k": 1, "u": 0.3}),
    "SPh-to-ccr": (_sph_to_spccr, {"l": 2, "h": 0.3, "k": 1, "u": 0.4}),
    "SPh-to-c": (_sph_to_spc, {"l": 1, "h": 0.2, "alpha": 0.3, "beta": 0.2}),
    "SPh2-to-SPcr2": (_sph2_to_spcr2, {"k": 1, "u": 0.3}),
    "SPh2-to-SPc2": (_sph2_to_spc2, {"alpha": 0.3, "beta": 0.2}),
    "SPh-to-SPr": (_sph_to_spr, {"b": 0.7, "x": 0.4}),
}


def default_weight_schedule(which):
    if which in ("SPh-to-c", "SPh2-to-SPc2"):
        return LimitSchedule(deltas=EVEN_GEOMETRIC, order=1, rule="even")
    return LimitSchedule(deltas=GEOMETRIC, order=1)


def weight_limit_check(which, params=None, schedule=None, tolerance=1e-3):
    """Ratio of the rescaled SP_h (or SP_h2) density to its limit density, extrapolated to delta = 0."""
    if which not in WEIGHT_LIMITS:
        raise DomainError("unknown weight limit '{}'".format(which))
    ratio, defaults = WEIGHT_LIMITS[which]
    params = dict(defaults, **(params or {}))
    schedule = schedule if schedule is not None else default_weight_schedule(which)
    if which in ("SPh-to-c", "SPh2-to-SPc2"):
        if schedule.rule is None:
            raise DomainError("{} needs a companion-integer rule".format(which))
        schedule.require_even()
    return ratio_report(which, params, lambda d: ratio(d, params, schedule), schedule, tolerance)
