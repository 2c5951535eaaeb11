"""Degeneration limits: a ratio sampled along a delta schedule, extrapolated to delta = 0."""
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np
from edflow import get_logger
from edflow.util import retrieve

from ruijsenaars.config import load_config
from ruijsenaars.errors import DomainError
from ruijsenaars.numerics import EVEN_GEOMETRIC, GEOMETRIC, LimitSchedule
from ruijsenaars.report import ratio_report
from ruijsenaars.functions.evaluators import test_function
from ruijsenaars.functions.gammalib import GAMMA_LIMITS, default_schedule, gamma_limit_check
from ruijsenaars.functions.wavefn import complim_cm_ratio, complim_two_point_ratio
from ruijsenaars.models.hamiltonians import HAMILTONIAN_LIMITS, hamiltonian_limit_check
from ruijsenaars.models.weights import WEIGHT_LIMITS, default_weight_schedule, weight_limit_check
from ruijsenaars.verify.catalog import tolerance_for

logger = get_logger(__name__)

COARSE = LimitSchedule(deltas=GEOMETRIC, order=1)
FINE_EVEN = LimitSchedule(deltas=EVEN_GEOMETRIC, order=1, rule="even")
COMPLEX_EVEN = LimitSchedule(deltas=(0.05, 0.03, 0.02), order=1, rule="even", log=False)


@dataclass(frozen=True)
class Limit:
    id: str
    check: Callable
    ratio: Callable
    defaults: dict
    schedule: Callable
    anchor: str


def _gamma(which, anchor):
    log_ratio, defaults = GAMMA_LIMITS[which]
    return Limit(
        id="gamma-{}".format(which.replace("_", "-")),
        check=lambda params, schedule, tol: gamma_limit_check(which, params, schedule, tol),
        ratio=lambda delta, params, schedule: complex(np.exp(log_ratio(delta, params, schedule))),
        defaults=defaults,
        schedule=lambda params: default_schedule(which, params),
        anchor=anchor,
    )


def _weight(which, anchor):
    ratio, defaults = WEIGHT_LIMITS[which]
    return Limit(
        id="weight-{}".format(which),
        check=lambda params, schedule, tol: weight_limit_check(which, params, schedule, tol),
        ratio=lambda delta, params, schedule: complex(ratio(delta, params, schedule)),
        defaults=defaults,
        schedule=lambda params: default_weight_schedule(which),
        anchor=anchor,
    )


HAMILTONIAN_DEFAULTS = {
    "rational": ("line", {"b": 0.6, "x": 0.4}, COARSE),
    "CS": ("line", {"b": 0.6, "x": 0.4}, COARSE),
    "cr": ("lattice", {"l": 0, "h": -1.2j, "n": 1, "u": 0.3}, COARSE),
    "ccr": ("lattice", {"l": 2, "h": 0.3, "n": 1, "u": 0.4}, COARSE),
    "c": ("cylinder", {"l": 0, "h": -1.2j, "alpha": 0.3, "beta": 0.2}, FINE_EVEN),
    "cc": ("cylinder", {"l": 1, "h": 0.3, "alpha": 0.3, "beta": 0.2}, FINE_EVEN),
}


def _hamiltonian_arguments(target, params):
    kind = HAMILTONIAN_DEFAULTS[target][0]
    model = {k: v for k, v in params.items() if k in ("b", "l", "h")}
    if kind == "line":
        point = params["x"]
    elif kind == "lattice":
        point = (params["n"], params["u"])
    else:
        point = (params["alpha"], params["beta"])
    psi = test_function(params.get("psi", "gaussian"), kind)
    return psi, point, model


def _hamiltonian_ratio(target):
    def ratio(delta, params, schedule):
        psi, point, model = _hamiltonian_arguments(target, params)
        lhs, rhs = HAMILTONIAN_LIMITS[target](delta, model, psi, point, schedule)
        return complex(lhs / rhs)
    return ratio


def _hamiltonian(target, anchor):
    def check(params, schedule, tol):
        psi, point, model = _hamiltonian_arguments(target, params)
        return hamiltonian_limit_check("hyp", target, schedule, psi, point, model, tol)
    return Limit(
        id="ham-hyp-to-{}".format(target),
        check=check,
        ratio=_hamiltonian_ratio(target),
        defaults=HAMILTONIAN_DEFAULTS[target][1],
        schedule=lambda params: HAMILTONIAN_DEFAULTS[target][2],
        anchor=anchor,
    )


def _complex(id, ratio, defaults, anchor):
    def check(params, schedule, tol):
        return ratio_report(id, params, lambda d: ratio(d, params, schedule), schedule, tol)
    return Limit(id=id, check=check, ratio=lambda delta, params, schedule: complex(ratio(delta, params, schedule)),
                 defaults=defaults, schedule=lambda params: COMPLEX_EVEN, anchor=anchor)


def _both_sph2(params, schedule, tol):
    reports = [weight_limit_check(which, params, schedule, tol) for which in ("SPh2-to-SPcr2", "SPh2-to-SPc2")]
    report = max(reports, key=lambda r: r.rel_residual)
    report.warnings.extend(w for r in reports if r is not report for w in r.warnings)
    return report


LIMITS = {limit.id: limit for limit in [
    _gamma("r_real", "rational limit of the hyperbolic gamma function"),
    _gamma("r_real_rat", "rational limit of the hyperbolic gamma function"),
    _gamma("lim1", "limit to the complex gamma function"),
    _gamma("lim2'", "limit to the complex gamma function"),
    _gamma("poh", "Pochhammer symbol"),
    _complex("wavefn-complim-cm", complim_cm_ratio, {"r": 0, "h": -1.4j, "n": 0, "u": 0.2, "alpha": 0.1,
                                                    "beta": 0.3},
             "limit of the wave function"),
    _complex("eigen-limit-cr", complim_two_point_ratio,
             {"r": 0, "h": -1.4j, "n1": 0, "u1": 0.2, "n2": 2, "u2": -0.1, "alpha1": 0.1, "alpha2": -0.2,
              "beta1": 0.3, "beta2": 0.5},
             "limit of the joint eigenfunctions"),
    _hamiltonian("cr", "limit of the Hamiltonians"),
    _hamiltonian("ccr", "limit of the Hamiltonians"),
    _hamiltonian("CS", "Calogero-Sutherland limit"),
    _hamiltonian("c", "limit of the Hamiltonians"),
    _hamiltonian("cc", "limit of the Hamiltonians"),
    _hamiltonian("rational", "rational limit"),
    _weight("SPh-to-SPcr", "limit of the scalar product"),
    _weight("SPh-to-ccr", "limit of the scalar product"),
    _weight("SPh-to-c", "limit of the scalar product"),
    _weight("SPh-to-SPr", "rational limit of the scalar product"),
]}

# both SP_h2 degenerations are reported as one limit
LIMITS["weight-SPh2-variants"] = Limit(
    id="weight-SPh2-variants",
    check=_both_sph2,
    ratio=lambda delta, params, schedule: complex(WEIGHT_LIMITS["SPh2-to-SPcr2"][0](delta, params, schedule)),
    defaults=dict(WEIGHT_LIMITS["SPh2-to-SPcr2"][1], **WEIGHT_LIMITS["SPh2-to-SPc2"][1]),
    schedule=lambda params: FINE_EVEN,
    anchor="limit of the scalar product",
)


def limit_for(id):
    if id not in LIMITS:
        raise DomainError("unknown limit '{}'".format(id))
    return LIMITS[id]


def limit_ids():
    return list(LIMITS)


def limit_schedule(id, params=None, deltas=None):
    limit = limit_for(id)
    schedule = limit.schedule(dict(limit.defaults, **(params or {})))
    if deltas is not None:
        try:
            deltas = tuple(float(d) for d in deltas)
        except (TypeError, ValueError):
            raise DomainError("limits/{} must be a list of numbers, got {}".format(id, deltas))
        if len(deltas) < 3:
            raise DomainError("limits/{} needs at least 3 deltas, got {}".format(id, len(deltas)))
        schedule = replace(schedule, deltas=deltas)
    return schedule


def configured_deltas(config, id):
    """Deltas for ``id`` from the ``limits`` section, or None; unknown ids in the section raise."""
    section = retrieve(config, "limits", default={}) or {}
    unknown = sorted(set(section) - set(LIMITS))
    if unknown:
        raise DomainError("unknown limit ids in config section limits: {}".format(", ".join(unknown)))
    return section.get(id)


def limit_ratio(id, delta, params=None, schedule=None):
    """The ratio at a single delta, without extrapolation."""
    limit = limit_for(id)
    params = dict(limit.defaults, **(params or {}))
    schedule = schedule if schedule is not None else limit_schedule(id, params)
    return limit.ratio(delta, params, schedule)


def verify_limit(id, schedule=None, params=None, tolerance=None, config=None):
    """Extrapolated ratio for limit ``id`` as a VerificationReport carrying that id."""
    limit = limit_for(id)
    params = dict(limit.defaults, **(params or {}))
    config = config if config is not None else load_config()
    if schedule is None:
        # configured deltas replace the built-in schedule, keeping its companion rule
        schedule = limit_schedule(id, params, configured_deltas(config, id))
    tolerance = tolerance if tolerance is not None else tolerance_for("limit", config)
    report = limit.check(params, schedule, tolerance)
    report.id = id
    logger.debug("{}: extrapolated ratio {} (tol {:.1e})".format(id, report.lhs, tolerance))
    return report
