"""Uniform adapters ``f(params, quad=None) -> (value, abs_err)`` behind ``get_function``.

Parameters come as a flat dict of numbers (as parsed from the command line);
missing periods fall back to the configured defaults.
"""

import numpy as np
from edflow import get_logger

from ruijsenaars.config import DEFAULTS
from ruijsenaars.errors import DomainError
from ruijsenaars.functions.gammalib import Periods, cgamma, hyp_gamma
from ruijsenaars.functions.wavefn import (ComplexModelParams, DoubledPoint, HypWaveParams, MasterParams,
                                          SpectralPoint, f_cm_hyp, f_complex_barnes, f_complex_euler, f_master,
                                          phi_hyp)
from ruijsenaars.models.hamiltonians import DERIVATIVE_TOL, apply_hamiltonian, coordinates
from ruijsenaars.models.weights import weight, weight_coordinates

logger = get_logger(__name__)

ROUNDING = 10 * np.finfo(float).eps


def _get(params, key, default=None):
    if key in params:
        return params[key]
    if default is not None:
        return default
    raise DomainError("missing parameter '{}'".format(key))


def real(params, key, default=None):
    value = complex(_get(params, key, default))
    if abs(value.imag) > 0:
        raise DomainError("parameter '{}' must be real, got {}".format(key, value))
    return value.real


def integer(params, key, default=None):
    value = real(params, key, default)
    if value != int(value):
        raise DomainError("parameter '{}' must be an integer, got {}".format(key, value))
    return int(value)


def half_integer(params, key):
    value = real(params, key)
    return int(value) if value.is_integer() else value


def periods(params):
    if isinstance(params.get("periods"), Periods):
        return params["periods"]
    w1 = complex(params.get("w1", DEFAULTS["periods"]["w1"]))
    w2 = complex(params.get("w2", DEFAULTS["periods"]["w2"]))
    return Periods(w1, w2)


def complex_model(params):
    return ComplexModelParams(integer(params, "r", 0), complex(_get(params, "h")))


def complex_arguments(params):
    """(spectral, point) for the centre-of-mass function, or pairs for the two-point function."""
    if "alpha1" in params:
        sps = tuple(SpectralPoint(real(params, "alpha{}".format(j)), real(params, "beta{}".format(j)))
                    for j in (1, 2))
        pts = tuple(DoubledPoint(half_integer(params, "n{}".format(j)), complex(_get(params, "u{}".format(j))))
                    for j in (1, 2))
        return sps, pts
    return (SpectralPoint(real(params, "alpha"), real(params, "beta")),
            DoubledPoint(half_integer(params, "n"), complex(_get(params, "u"))))


def eval_hyp_gamma(params, quad=None):
    p, u = periods(params), complex(_get(params, "u"))
    method = params.get("method")
    value = hyp_gamma(u, p, quad=quad, method=method)
    # gamma is symmetric in the periods: the swapped evaluation bounds the error
    other = hyp_gamma(u, p.swapped(), quad=quad, method=method)
    return value, abs(value - other)


def eval_cgamma(params, quad=None):
    value = cgamma(complex(_get(params, "u")), integer(params, "n"))
    return value, ROUNDING * abs(value)


def eval_f_master(params, quad=None):
    mp = MasterParams(*[complex(_get(params, k)) for k in ("nu1", "nu2", "mu1", "mu2")], g=params.get("g"))
    return f_master(mp, complex(_get(params, "x")), periods(params), quad, return_error=True)


def eval_phi_hyp(params, quad=None):
    hp = HypWaveParams(*[complex(_get(params, k)) for k in ("g", "lambda1", "lambda2", "x1", "x2")])
    return phi_hyp(hp, periods(params), rep=params.get("rep", "direct"), quad=quad, return_error=True)


def eval_f_cm_hyp(params, quad=None):
    g, lam, x = [complex(_get(params, k)) for k in ("g", "lambda", "x")]
    return f_cm_hyp(g, lam, x, periods(params), quad, rep=params.get("rep", "direct"), return_error=True)


def eval_f_complex_barnes(params, quad=None):
    sp, pt = complex_arguments(params)
    return f_complex_barnes(complex_model(params), sp, pt, quad, return_error=True)


def eval_f_complex_euler(params, quad=None):
    sp, pt = complex_arguments(params)
    level = params.get("level")
    level = None if level is None else integer(params, "level")
    return f_complex_euler(complex_model(params), sp, pt, quad, level=level, return_error=True)


def model_params(params):
    """Hamiltonian and weight parameters from a flat dict."""
    out = {}
    for key in ("g", "b", "bp", "h"):
        if key in params:
            out[key] = complex(params[key])
    if "l" in params:
        out["l"] = integer(params, "l")
    out["periods"] = periods(params)
    return out


def point(kind, params):
    if kind == "line":
        return complex(_get(params, "x"))
    if kind == "lattice":
        return half_integer(params, "k" if "k" in params else "n"), complex(_get(params, "u"))
    return complex(real(params, "alpha"), real(params, "beta"))


def eval_weight(params, quad=None):
    w = _get(params, "w")
    value = complex(weight(w, model_params(params), point(weight_coordinates(w), params)))
    return value, ROUNDING * abs(value)


def _gaussian_line(x):
    return np.exp(-0.2 * x ** 2 + 0.1 * x)


def _gaussian_lattice(n, u):
    return np.exp(-0.25 * n ** 2 - 0.05 * u ** 2 + 0.3 * u)


def _gaussian_cylinder(alpha, beta):
    return np.exp(-0.3 * alpha ** 2) * np.cos(2 * np.pi * beta)


def _plane_line(x):
    return np.exp(0.3 * x)


def _plane_lattice(n, u):
    return np.exp(0.2j * n + 0.3 * u)


def _plane_cylinder(alpha, beta):
    return np.exp(0.3 * alpha + 2j * np.pi * beta)


TEST_FUNCTIONS = {
    "gaussian": {"line": _gaussian_line, "lattice": _gaussian_lattice, "cylinder": _gaussian_cylinder},
    "plane": {"line": _plane_line, "lattice": _plane_lattice, "cylinder": _plane_cylinder},
}


def test_function(name, kind):
    if name not in TEST_FUNCTIONS:
        raise DomainError("unknown test function '{}', expected one of {}".format(
            name, ", ".join(sorted(TEST_FUNCTIONS))))
    return TEST_FUNCTIONS[name][kind]


def eval_hamiltonian(params, quad=None):
    model = _get(params, "model")
    kind = coordinates(model)
    psi = test_function(params.get("psi", "gaussian"), kind)
    value = apply_hamiltonian(model, model_params(params), psi, point(kind, params))
    differential = kind == "cylinder" or model.startswith("CS")
    return value, (DERIVATIVE_TOL if differential else ROUNDING) * abs(value)


_PERIODS = ("w1", "w2")
_COMPLEX_POINT = ("r", "h", "alpha", "beta", "n", "u",
                  "alpha1", "alpha2", "beta1", "beta2", "n1", "n2", "u1", "u2")
_MODEL = ("g", "b", "bp", "h", "l") + _PERIODS + ("x", "k", "n", "u", "alpha", "beta")

# accepted keys per function; the string-valued ones are listed in TEXT_KEYS
PARAMETERS = {
    "hyp-gamma": ("u", "method") + _PERIODS,
    "cgamma": ("u", "n"),
    "f-master": ("nu1", "nu2", "mu1", "mu2", "x", "g") + _PERIODS,
    "phi-hyp": ("g", "lambda1", "lambda2", "x1", "x2", "rep") + _PERIODS,
    "f-cm-hyp": ("g", "lambda", "x", "rep") + _PERIODS,
    "f-complex-barnes": _COMPLEX_POINT,
    "f-complex-euler": _COMPLEX_POINT + ("level",),
    "weight": ("w",) + _MODEL,
    "hamiltonian-apply": ("model", "psi") + _MODEL,
}

TEXT_KEYS = ("w", "model", "psi", "rep", "method")
