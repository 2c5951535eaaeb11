"""Catalog of identities checked numerically.

Each entry computes both sides of one identity at a parameter point. Entries
are registered with ``@identity`` and looked up by id; ``verify_identity``
turns the sides into a ``VerificationReport``.
"""
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from edflow import get_logger
from edflow.util import KeyNotFoundError, retrieve

from ruijsenaars.config import load_config, tolerance_override
from ruijsenaars.errors import DomainError, NumericalError
from ruijsenaars.numerics import CylinderDomain, integrate_cylinder, pow_pair
from ruijsenaars.report import Sides, VerificationReport
from ruijsenaars.functions.evaluators import periods, test_function
from ruijsenaars.functions.gammalib import (CGammaArg, Periods, cgamma, cgamma_alt, cgamma_shift, hyp_gamma,
                                            hyp_gamma_asymp, log_gamma_complex, log_hyp_gamma, pochhammer)
from ruijsenaars.functions.wavefn import (ComplexModelParams, DoubledPoint, HypWaveParams, MasterParams,
                                          SpectralPoint, f_cm_hyp, f_complex_barnes, f_complex_euler, f_master,
                                          hyperbolic_integral, master_dual, master_find1, phi_hyp)
from ruijsenaars.models.hamiltonians import (apply_hamiltonian, calogero_eigenvalues, commutator,
                                             complex_eigenvalues, conjugation_sides, eigenvalue_sum,
                                             hyperbolic_eigenvalues)
from ruijsenaars.models.weights import adjoint_pairing, is_unitary, sp_h2_forms, weight, weight_coordinates
from ruijsenaars.models.intertwiners import (apply_m, apply_m_prime, intertwining_sides, m_eigenvalues,
                                             reflection_sides)
from ruijsenaars.models.qoperator import q_commutativity_sides, q_eigenvalue_sides, q_product_sides

logger = get_logger(__name__)

W1, W2 = 1.0, float(np.sqrt(2.0))
DRAW_ATTEMPTS = 50


@dataclass(frozen=True)
class Identity:
    id: str
    check: Callable
    family: str
    anchor: str
    defaults: dict
    jitter: dict = field(default_factory=dict)
    admissible: Optional[Callable] = None
    shared: bool = False
    optional: bool = False
    slow: bool = False

    def draw(self, rng):
        """Defaults moved inside a small box; a value list means a random choice."""
        for _ in range(DRAW_ATTEMPTS):
            params = dict(self.defaults)
            for key, width in sorted(self.jitter.items()):
                if isinstance(width, (list, tuple)):
                    params[key] = width[rng.randint(len(width))]
                else:
                    params[key] = params[key] + rng.uniform(-width, width)
            if self.admissible is None or self.admissible(params):
                return params
        logger.warning("no admissible draw for {}, using the defaults".format(self.id))
        return dict(self.defaults)


CATALOG = {}


def identity(id, family, anchor, defaults, jitter=None, admissible=None, shared=False, optional=False,
             slow=False):
    def register(check):
        if id in CATALOG:
            raise ValueError("identity '{}' registered twice".format(id))
        CATALOG[id] = Identity(id=id, check=check, family=family, anchor=anchor, defaults=dict(defaults),
                               jitter=dict(jitter or {}), admissible=admissible, shared=shared,
                               optional=optional, slow=slow)
        return check
    return register


def worst(*sides):
    return max(sides, key=lambda s: abs(s.lhs - s.rhs) / s.scale if s.scale > 0 else abs(s.lhs - s.rhs))


def _c(params, *keys):
    return [complex(params[k]) for k in keys]


def _cm(params):
    return ComplexModelParams(params["r"], params["h"])


def _two_points(params):
    sps = (SpectralPoint(params["alpha1"], params["beta1"]), SpectralPoint(params["alpha2"], params["beta2"]))
    pts = (DoubledPoint(params["n1"], params["u1"]), DoubledPoint(params["n2"], params["u2"]))
    return sps, pts


def _gammas(args, p):
    return complex(np.exp(np.sum(log_hyp_gamma(np.array(args, dtype=complex), p))))


REAL = {"w1": W1, "w2": W2}
COMPLEX_CM = {"r": 0, "h": -1.4j, "alpha": 0.1, "beta": 0.3, "n": 0, "u": 0.2}
COMPLEX_TWO = {"r": 0, "h": -1.4j, "alpha1": 0.1, "beta1": 0.3, "alpha2": -0.2, "beta2": 0.5,
               "n1": 0, "u1": 0.2, "n2": 2, "u2": -0.1}
SPECTRAL_JITTER = {"alpha1": 0.05, "beta1": 0.05, "alpha2": 0.05, "beta2": 0.05}


# hyperbolic gamma function

@identity("hp1-a", "gamma", "first order difference equations", dict(REAL, u=0.3 + 0.1j), {"u": 0.2})
def _hp1_a(params, quad, warnings):
    p, u = periods(params), complex(params["u"])
    return Sides.of(hyp_gamma(u + p.w1, p), 2 * np.sin(np.pi * u / p.w2) * hyp_gamma(u, p))


@identity("hp1-b", "gamma", "first order difference equations", dict(REAL, u=0.3 + 0.1j), {"u": 0.2})
def _hp1_b(params, quad, warnings):
    p, u = periods(params), complex(params["u"])
    return Sides.of(hyp_gamma(u + p.w2, p), 2 * np.sin(np.pi * u / p.w1) * hyp_gamma(u, p))


@identity("g-refl", "gamma", "reflection equation", dict(REAL, u=0.4 + 0.1j), {"u": 0.2})
def _g_refl(params, quad, warnings):
    p, u = periods(params), complex(params["u"])
    return Sides.of(hyp_gamma(u, p) * hyp_gamma(p.Q - u, p), 1.0)


@identity("hyp-gamma-swap", "representation", "symmetric in the periods", dict(REAL, u=0.2 + 0.5j),
          {"u": 0.2})
def _hyp_gamma_swap(params, quad, warnings):
    p, u = periods(params), complex(params["u"])
    return Sides.of(hyp_gamma(u, p, quad=quad), hyp_gamma(u, p.swapped(), quad=quad))


@identity("hyp-gamma-reps", "identity", "infinite product representation",
          {"w1": 1 + 0.3j, "w2": 1 - 0.3j, "u": 0.7}, {"u": 0.1})
def _hyp_gamma_reps(params, quad, warnings):
    p, u = periods(params), complex(params["u"])
    return Sides.of(hyp_gamma(u, p, method="product"), hyp_gamma(u, p, method="integral", quad=quad))


@identity("gamasym", "identity", "asymptotic behaviour", {"w1": 1.0, "w2": 1.3, "u": 6j}, {"u": 0.3})
def _gamasym(params, quad, warnings):
    p, u = periods(params), complex(params["u"])
    return Sides.of(hyp_gamma(u, p), hyp_gamma_asymp(u, p, "upper"))


@identity("pentagon", "identity", "pentagon identity", dict(REAL, nu=0.3, mu=0.5, z=0.1),
          {"nu": 0.05, "mu": 0.05, "z": 0.05})
def _pentagon(params, quad, warnings):
    p = periods(params)
    nu, mu, z = _c(params, "nu", "mu", "z")
    a = (p.Q - nu - mu) / 2
    value, _ = hyperbolic_integral(z + (nu - mu) / 2, (a,), (a,), p, quad)
    return Sides.of(value, hyp_gamma(z + nu, p) * hyp_gamma(mu - z, p) / hyp_gamma(nu + mu, p))


# complex gamma function

@identity("cgamma-refl", "gamma", "reflection formulas for the complex gamma function", {"u": 0.3 + 0.1j, "n": 1},
          {"u": 0.2, "n": [-2, -1, 0, 1, 2, 3]}, shared=True)
def _cgamma_refl(params, quad, warnings):
    u, n = complex(params["u"]), int(params["n"])
    sign = cgamma(u, -n), (-1) ** n * cgamma(u, n)
    inverse = cgamma(u, n) * cgamma(-u - 2j, n), 1.0
    return worst(Sides.of(*sign), Sides.of(*inverse))


@identity("cgamma-shift", "gamma", "Gamma(alpha+1|alpha') = alpha Gamma(alpha|alpha')", {"u": 0.5, "n": 0},
          {"u": 0.2, "n": [-1, 0, 1, 2]}, shared=True)
def _cgamma_shift(params, quad, warnings):
    a = CGammaArg(params["u"], params["n"])
    base = cgamma(a)
    return worst(Sides.of(cgamma_shift(a, "alpha"), a.alpha * base),
                 Sides.of(cgamma_shift(a, "alpha_prime"), -a.alpha_prime * base))


@identity("cgamma-alt", "gamma", "Gamma(alpha|alpha')", {"u": 0.4 - 0.2j, "n": 3},
          {"u": 0.1, "n": [-2, -1, 0, 1, 2, 3]}, shared=True)
def _cgamma_alt(params, quad, warnings):
    a = CGammaArg(params["u"], params["n"])
    direct = cgamma(a)
    swapped = Sides.of(direct, (-1) ** a.n * cgamma_alt(a.alpha_prime, a.alpha))
    flipped = Sides.of(direct * cgamma_alt(1 - a.alpha, 1 - a.alpha_prime), (-1) ** a.n)
    return worst(swapped, flipped)


@identity("pochhammer", "gamma", "Pochhammer symbol", {"a": 0.3 + 0.8j, "m": 3},
          {"a": 0.2, "m": [-3, -2, -1, 0, 1, 2, 3, 4]})
def _pochhammer(params, quad, warnings):
    a, m = complex(params["a"]), int(params["m"])
    return Sides.of(pochhammer(a, m), np.exp(log_gamma_complex(a + m) - log_gamma_complex(a)))


@identity("beta-complex", "euler", "complex beta integral", {"s": -0.6j, "l": 0, "k": 1, "u": 0.2},
          {"u": 0.1, "k": [-1, 0, 1, 2]}, slow=True)
def _beta_complex(params, quad, warnings):
    s, u = complex(params["s"]), complex(params["u"])
    l, k = int(params["l"]), int(params["k"])
    kappa = 2 * np.pi * (-s.imag - abs(u.imag))
    if not kappa > 0:
        raise DomainError("the beta integral needs |Im u| < -Im s")
    rho, rhop = -(l + 1j * s), -(-l + 1j * s)

    def integrand(t1, t2):
        w = 2 * np.cosh(np.pi * (t1 + 1j * t2))
        return np.exp(2j * np.pi * (t1 * u + t2 * k)) * pow_pair(w, np.conj(w), rho, rhop)

    domain = CylinderDomain(T=36.0 / kappa, a=0.0, singularities=((0.0, 0.5),), exponent=2 * s.imag)
    value, _ = integrate_cylinder(integrand, domain, quad)
    rhs = cgamma(s + u, l + k) * cgamma(s - u, l - k) / cgamma(2 * s, 2 * l)
    return Sides.of(4 * np.pi * value, rhs)


# master function and hyperbolic wave functions

MASTER = dict(REAL, nu1=0.2, nu2=0.15, mu1=0.25, mu2=0.3, x=0.1 + 0.3j)
MASTER_JITTER = {"nu1": 0.03, "nu2": 0.03, "mu1": 0.03, "mu2": 0.03, "x": 0.05}


def _master(params):
    return MasterParams(*_c(params, "nu1", "nu2", "mu1", "mu2"))


@identity("master-888", "identity", "difference equation in x for the master function", MASTER, MASTER_JITTER)
def _master_difference(params, quad, warnings):
    p, mp, x = periods(params), _master(params), complex(params["x"])
    w1, w2 = p.w1, p.w2
    F = lambda y: f_master(mp, y, p, quad)
    up = np.exp(-1j * np.pi * mp.C / w1) * np.sin(np.pi * (x + mp.B) / w1) * F(x + w2)
    down = np.exp(1j * np.pi * mp.C / w1) * np.sin(np.pi * (x - mp.B) / w1) * F(x - w2)
    coefficient = 1j * (np.exp(-1j * np.pi * x / w1) * np.cos(np.pi * (mp.mu2 - mp.mu1) / w1)
                        - np.exp(1j * np.pi * x / w1) * np.cos(np.pi * (mp.nu2 - mp.nu1) / w1))
    return Sides.of(up + down, coefficient * F(x), up, down)


@identity("dualf", "identity", "dual representation of the master function", MASTER, MASTER_JITTER)
def _dualf(params, quad, warnings):
    p, mp, x = periods(params), _master(params), complex(params["x"])
    pref, dual, xp = master_dual(mp, x, p)
    return Sides.of(f_master(mp, x, p, quad), pref * f_master(dual, xp, p, quad))


@identity("find1", "identity", "B goes to Q - B", MASTER, MASTER_JITTER)
def _find1(params, quad, warnings):
    p, mp, x = periods(params), _master(params), complex(params["x"])
    pref, other = master_find1(mp, x, p)
    return Sides.of(f_master(mp, x, p, quad), pref * f_master(other, x, p, quad))


CM_HYP = dict(REAL, g=0.6, **{"lambda": 0.25, "x": 0.1j})
CM_JITTER = {"g": 0.05, "lambda": 0.05, "x": 0.03}


@identity("difcm", "identity", "difference equation of the centre-of-mass wave function", CM_HYP, CM_JITTER)
def _difcm(params, quad, warnings):
    p = periods(params)
    g, lam, x = _c(params, "g", "lambda", "x")
    F = lambda y: f_cm_hyp(g, lam, y, p, quad)
    up = np.sin(np.pi * (x + g) / p.w1) * F(x + p.w2)
    down = np.sin(np.pi * (x - g) / p.w1) * F(x - p.w2)
    return Sides.of(up + down, 2 * np.cos(np.pi * lam / p.w1) * np.sin(np.pi * x / p.w1) * F(x), up, down)


@identity("Fg-dual", "identity", "F^g_lambda(x) = F^{g*}_x(lambda)", dict(CM_HYP, g=0.8), CM_JITTER)
def _fg_dual(params, quad, warnings):
    p = periods(params)
    g, lam, x = _c(params, "g", "lambda", "x")
    return Sides.of(f_cm_hyp(g, lam, x, p, quad), f_cm_hyp(p.Q - g, x, lam, p, quad))


@identity("Fg-even", "identity", "even in the spectral variable", dict(CM_HYP, g=0.8), CM_JITTER, shared=True)
def _fg_even(params, quad, warnings):
    p = periods(params)
    g, lam, x = _c(params, "g", "lambda", "x")
    return Sides.of(f_cm_hyp(g, lam, x, p, quad), f_cm_hyp(g, -lam, x, p, quad))


@identity("Fg-omega-swap", "identity", "symmetric in the periods", dict(CM_HYP, g=0.8), CM_JITTER)
def _fg_omega_swap(params, quad, warnings):
    p = periods(params)
    g, lam, x = _c(params, "g", "lambda", "x")
    return Sides.of(f_cm_hyp(g, lam, x, p, quad), f_cm_hyp(g, lam, x, p.swapped(), quad))


WAVE = dict(REAL, g=0.9, lambda1=0.2, lambda2=-0.3, x1=0.1j, x2=-0.15j)
WAVE_JITTER = {"g": 0.05, "lambda1": 0.05, "lambda2": 0.05, "x1": 0.03, "x2": 0.03}


def _wave(params, g=None):
    hp = HypWaveParams(*_c(params, "g", "lambda1", "lambda2", "x1", "x2"))
    return hp if g is None else HypWaveParams(g, hp.lam1, hp.lam2, hp.x1, hp.x2)


def _wave_difference(params, quad, swap):
    p = periods(params)
    if swap:
        p = p.swapped()
    hp = _wave(params)
    g, xd = hp.g, hp.x_diff
    phi = lambda x1, x2: phi_hyp(HypWaveParams(g, hp.lam1, hp.lam2, x1, x2), p, quad=quad)
    first = np.sin(np.pi * (xd + g) / p.w1) * phi(hp.x1 - p.w2, hp.x2)
    second = np.sin(np.pi * (xd - g) / p.w1) * phi(hp.x1, hp.x2 - p.w2)
    eigenvalue = np.exp(2j * np.pi * hp.lam1 / p.w1) + np.exp(2j * np.pi * hp.lam2 / p.w1)
    return Sides.of(first + second, eigenvalue * np.sin(np.pi * xd / p.w1) * phi(hp.x1, hp.x2), first, second)


@identity("diffig", "identity", "difference equations of the wave function", dict(WAVE, g=0.7), WAVE_JITTER)
def _diffig(params, quad, warnings):
    return _wave_difference(params, quad, swap=False)


@identity("diffig2", "identity", "difference equations of the wave function", dict(WAVE, g=0.7), WAVE_JITTER)
def _diffig2(params, quad, warnings):
    return _wave_difference(params, quad, swap=True)


@identity("chi-duality", "identity", "bispectral duality", WAVE, WAVE_JITTER)
def _chi_duality(params, quad, warnings):
    p, hp = periods(params), _wave(params)
    return Sides.of(phi_hyp(hp, p, quad=quad), phi_hyp(hp.bispectral(p), p, quad=quad))


@identity("sabo2", "identity", "coupling reflection g to Q - g", WAVE, WAVE_JITTER)
def _sabo2(params, quad, warnings):
    p, hp = periods(params), _wave(params)
    g, gs = hp.g, hp.gstar(p)
    factor = _gammas([gs + hp.x_diff, gs - hp.x_diff, g + hp.lam_diff, g - hp.lam_diff], p)
    return Sides.of(phi_hyp(hp, p, quad=quad), factor * phi_hyp(_wave(params, gs), p, quad=quad))


@identity("sabo3", "identity", "coupling reflection g to Q - g", WAVE, WAVE_JITTER)
def _sabo3(params, quad, warnings):
    p, hp = periods(params), _wave(params)
    g, gs = hp.g, hp.gstar(p)
    factor = _gammas([gs + hp.x_diff, gs - hp.x_diff, g + hp.lam_diff, g - hp.lam_diff], p)
    exchanged = lambda c: HypWaveParams(c, hp.x1, hp.x2, hp.lam1, hp.lam2)
    return Sides.of(phi_hyp(exchanged(gs), p, quad=quad), factor * phi_hyp(exchanged(g), p, quad=quad))


@identity("sabo4", "identity", "coupling reflection g to Q - g", WAVE, WAVE_JITTER)
def _sabo4(params, quad, warnings):
    p, hp = periods(params), _wave(params)
    gs = hp.gstar(p)
    lhs = _gammas([gs + hp.lam_diff, gs - hp.lam_diff], p) * phi_hyp(hp, p, quad=quad)
    rhs = _gammas([gs + hp.x_diff, gs - hp.x_diff], p) * phi_hyp(_wave(params, gs), p, quad=quad)
    return Sides.of(lhs, rhs)


def _hyp_eigen(params, quad, model, index):
    p = periods(params)
    g, lam, x = _c(params, "g", "lambda", "x")
    psi = lambda y: f_cm_hyp(g, 1j * lam, 1j * y, p, quad)
    lhs = apply_hamiltonian(model, {"g": g, "periods": p}, psi, x)
    return Sides.of(lhs, hyperbolic_eigenvalues(lam, p)[index] * psi(x))


EIGEN_HYP = dict(REAL, g=0.8, **{"lambda": 0.25, "x": 0.1})


@identity("eigen-hyp", "identity", "joint eigenfunction of the Hamiltonians", EIGEN_HYP,
          {"lambda": 0.05, "x": 0.05})
def _eigen_hyp(params, quad, warnings):
    return _hyp_eigen(params, quad, "hyp", 0)


@identity("eigen-hyp-prime", "identity", "joint eigenfunction of the Hamiltonians", EIGEN_HYP,
          {"lambda": 0.05, "x": 0.05})
def _eigen_hyp_prime(params, quad, warnings):
    return _hyp_eigen(params, quad, "hyp-prime", 1)


@identity("E-sum", "identity", "sum of the two eigenvalues", {"w1": 1 + 0.3j, "w2": 1 - 0.3j, "lambda": 0.4},
          {"lambda": 0.2})
def _e_sum(params, quad, warnings):
    p, lam = periods(params), complex(params["lambda"])
    e, ep = hyperbolic_eigenvalues(lam, p)
    return Sides.of(e + ep, eigenvalue_sum(lam, p), e, ep)


# complex rational wave functions

@identity("barnes-euler", "euler", "Euler-type integral representation", COMPLEX_CM,
          {"alpha": 0.05, "beta": 0.05, "u": 0.05}, slow=True)
def _barnes_euler(params, quad, warnings):
    cm = _cm(params)
    sp, pt = SpectralPoint(params["alpha"], params["beta"]), DoubledPoint(params["n"], params["u"])
    return Sides.of(f_complex_barnes(cm, sp, pt, quad), f_complex_euler(cm, sp, pt, quad))


@identity("F2-F1", "phase", "reduces to the centre-of-mass function", COMPLEX_TWO, SPECTRAL_JITTER)
def _f2_f1(params, quad, warnings):
    cm = _cm(params)
    (sp1, sp2), (pt1, pt2) = _two_points(params)
    two = f_complex_barnes(cm, (sp1, sp2), (pt1, pt2), quad)
    phase = np.exp(1j * np.pi * ((sp1.beta + sp2.beta) * (pt1.n + pt2.n) + (sp1.alpha + sp2.alpha) * (pt1.u + pt2.u)))
    cm_value = f_complex_barnes(cm, SpectralPoint(sp2.alpha - sp1.alpha, sp2.beta - sp1.beta),
                                DoubledPoint(pt2.n - pt1.n, pt2.u - pt1.u), quad)
    return Sides.of(two, phase * cm_value)


@identity("niph", "phase", "shift of both discrete coordinates", dict(COMPLEX_TWO, nu=1),
          dict(SPECTRAL_JITTER, nu=[-1, 1]))
def _niph(params, quad, warnings):
    cm, nu = _cm(params), params["nu"]
    sps, (pt1, pt2) = _two_points(params)
    shifted = (pt1.shifted(dn=nu), pt2.shifted(dn=nu))
    phase = np.exp(2j * np.pi * (sps[0].beta + sps[1].beta) * nu)
    return Sides.of(f_complex_barnes(cm, sps, shifted, quad), phase * f_complex_barnes(cm, sps, (pt1, pt2), quad))


@identity("comp-refl", "identity", "reflection of the coupling", COMPLEX_TWO, SPECTRAL_JITTER, slow=True)
def _comp_refl(params, quad, warnings):
    sps, pts = _two_points(params)
    return Sides.of(*reflection_sides(_cm(params), sps, pts, quad))


def _two_point_difference(params, quad, apply, index):
    cm = _cm(params)
    sps, pts = _two_points(params)

    def psi(n1, u1, n2, u2):
        return f_complex_barnes(cm, sps, (DoubledPoint(n1, u1), DoubledPoint(n2, u2)), quad)

    lhs = apply(cm, psi, pts)
    return Sides.of(lhs, m_eigenvalues(sps)[index] * psi(pts[0].n, pts[0].u, pts[1].n, pts[1].u))


@identity("Feq1", "identity", "eigenfunction of the difference operators", COMPLEX_TWO, SPECTRAL_JITTER)
def _feq1(params, quad, warnings):
    return _two_point_difference(params, quad, apply_m, 0)


@identity("Feq2", "identity", "eigenfunction of the difference operators", COMPLEX_TWO, SPECTRAL_JITTER)
def _feq2(params, quad, warnings):
    return _two_point_difference(params, quad, apply_m_prime, 1)


@identity("fd-eqs", "identity", "difference equations in the coordinates", COMPLEX_CM,
          {"alpha": 0.05, "beta": 0.05, "u": 0.05})
def _fd_eqs(params, quad, warnings):
    cm = _cm(params)
    sp = SpectralPoint(params["alpha"], params["beta"])
    pt = DoubledPoint(params["n"], params["u"])
    psi = lambda n, u: f_complex_barnes(cm, sp, DoubledPoint(n, u), quad)
    couplings = {"b": cm.b, "bp": cm.bp}
    e, ep = complex_eigenvalues(sp)
    value = psi(pt.n, pt.u)
    return worst(Sides.of(apply_hamiltonian("cr", couplings, psi, (pt.n, pt.u)), e * value),
                 Sides.of(apply_hamiltonian("cr-prime", couplings, psi, (pt.n, pt.u)), ep * value))


@identity("d-eqs", "differential", "differential equations in the spectral variable", COMPLEX_CM,
          {"alpha": 0.05, "beta": 0.05, "u": 0.05}, slow=True)
def _d_eqs(params, quad, warnings):
    cm = _cm(params)
    pt = DoubledPoint(params["n"], params["u"])
    point = (params["alpha"], params["beta"])
    # a fixed grid keeps the integral smooth in (alpha, beta)
    psi = lambda a, b: f_complex_euler(cm, SpectralPoint(a, b), pt, quad, level=1)
    couplings = {"b": cm.rho, "bp": cm.rhop}
    e, ep = calogero_eigenvalues(pt)
    value = psi(*point)
    return worst(Sides.of(apply_hamiltonian("c", couplings, psi, point), e * value),
                 Sides.of(apply_hamiltonian("c-prime", couplings, psi, point), ep * value))


# intertwiners

def _analytic_pair(n1, u1, n2, u2):
    return np.exp(0.1 * u1 - 0.2 * u2 + 0.2j * (n1 + n2))


def _analytic_spectral(g1, g2):
    return np.exp(0.3 * g1 - 0.2 * g2 + 0.1 * np.conj(g1))


@identity("intertwine-M", "identity", "intertwining relations", {"r": 0, "h": -1.4j, "n1": 0, "u1": 0.2,
                                                                 "n2": 1, "u2": -0.1},
          {"u1": 0.1, "u2": 0.1})
def _intertwine_m(params, quad, warnings):
    cm = _cm(params)
    pts = ((params["n1"], params["u1"]), (params["n2"], params["u2"]))
    return worst(*[Sides.of(*intertwining_sides(op, cm, _analytic_pair, pts)) for op in ("M", "M-prime")])


@identity("intertwine-Mhat", "differential", "intertwining relations", COMPLEX_TWO, SPECTRAL_JITTER)
def _intertwine_mhat(params, quad, warnings):
    cm = _cm(params)
    sps, _ = _two_points(params)
    return worst(*[Sides.of(*intertwining_sides(op, cm, _analytic_spectral, sps))
                   for op in ("M-hat", "M-hat-prime")])


# Q-operators

@identity("prfor", "product", "product formula", dict(REAL, g=0.8, lam=0.2, x1=0.1j, x2=0.15j),
          {"lam": 0.05}, slow=True)
def _prfor(params, quad, warnings):
    lhs, rhs, err = q_product_sides("hyp", params, quad)
    return Sides.of(lhs, rhs)


@identity("Q2ker3", "product", "product formula",
          {"r": 0, "h": -0.4j, "alpha": 0.1, "beta": 0.3, "u1": 0.2, "n1": 0, "u2": -0.1, "n2": 0},
          {"alpha": 0.05, "beta": 0.05}, slow=True)
def _q2ker3(params, quad, warnings):
    lhs, rhs, err = q_product_sides("complex", params, quad)
    return Sides.of(lhs, rhs)


@identity("Q223", "identity", "eigenvalue of the Q-operator",
          {"r": 1, "h": -0.6j, "alpha": 0.2, "beta": 0.1, "alpha1": 0.1, "beta1": 0.3, "alpha2": -0.2,
           "beta2": 0.5, "n1": 0, "n2": 1},
          dict(SPECTRAL_JITTER, alpha=0.05, beta=0.05, r=[-1, 0, 1]))
def _q223(params, quad, warnings):
    sps = (SpectralPoint(params["alpha1"], params["beta1"]), SpectralPoint(params["alpha2"], params["beta2"]))
    sp = SpectralPoint(params["alpha"], params["beta"])
    return Sides.of(*q_eigenvalue_sides(_cm(params), sp, sps, (params["n1"], params["n2"])))


@identity("q-commutativity", "q_commutativity", "Q-operators commute",
          {"r": 0, "h": -0.4j, "alpha1": 0.1, "beta1": 0.3, "alpha2": -0.2, "beta2": 0.1,
           "n1": 0, "u1": 0.2, "n2": 0, "u2": -0.1, "m1": 0, "s1": 0.3, "m2": 0, "s2": 0.1},
          optional=True, slow=True)
def _q_commutativity(params, quad, warnings):
    sps = ((params["alpha1"], params["beta1"]), (params["alpha2"], params["beta2"]))
    pts = ((params["n1"], params["u1"]), (params["n2"], params["u2"]))
    ends = ((params["m1"], params["s1"]), (params["m2"], params["s2"]))
    forward, backward = q_commutativity_sides(_cm(params), sps, pts, ends)
    return Sides.of(forward, backward)


# Hamiltonians and scalar products

def _gaussian(x):
    return np.exp(-0.2 * x ** 2 + 0.1 * x)


@identity("commute-hyp", "identity", "Hamiltonians commute", dict(REAL, g=0.8, x=0.37), {"g": 0.1, "x": 0.1})
def _commute_hyp(params, quad, warnings):
    hparams = {"g": complex(params["g"]), "periods": periods(params)}
    return Sides.of(*commutator("hyp", "hyp-prime", hparams, test_function("gaussian", "line"), params["x"]))


LATTICE_COUPLINGS = {"b": 0.3 + 0.2j, "bp": -0.4 + 0.2j, "n": 1, "u": 0.3}


@identity("commute-cr", "identity", "Hamiltonians commute", LATTICE_COUPLINGS, {"b": 0.1, "bp": 0.1, "u": 0.1})
def _commute_cr(params, quad, warnings):
    couplings = {"b": params["b"], "bp": params["bp"]}
    point = (params["n"], params["u"])
    return Sides.of(*commutator("cr", "cr-prime", couplings, test_function("plane", "lattice"), point))


@identity("commute-ccr", "identity", "Hamiltonians commute", LATTICE_COUPLINGS, {"b": 0.1, "bp": 0.1, "u": 0.1})
def _commute_ccr(params, quad, warnings):
    couplings = {"b": params["b"], "bp": params["bp"]}
    point = (params["n"], params["u"])
    return Sides.of(*commutator("ccr", "ccr-prime", couplings, test_function("plane", "lattice"), point))


@identity("conj-CS", "differential", "conjugated Hamiltonian", {"b": 0.6, "x": 0.4}, {"b": 0.1, "x": 0.1})
def _conj_cs(params, quad, warnings):
    psi = lambda x: np.exp(-0.5 * x ** 2)
    return Sides.of(*conjugation_sides("CS", {"b": params["b"]}, psi, params["x"]))


@identity("conj-c", "differential", "conjugated Hamiltonian", {"b": 0.4, "alpha": 0.3, "beta": 0.2},
          {"b": 0.1, "alpha": 0.1, "beta": 0.1})
def _conj_c(params, quad, warnings):
    couplings = {"b": params["b"], "bp": params["b"]}
    point = (params["alpha"], params["beta"])
    return Sides.of(*conjugation_sides("c", couplings, test_function("gaussian", "cylinder"), point))


POSITIVE_WEIGHTS = (
    ("SP_cr", {"l": 0, "h": -1.2j}),
    ("SP_ccr", {"l": 2, "h": 0.0}),
    ("SP_c", {"b": 0.4, "bp": 0.4}),
    ("SP_cc", {"b": 0.3 + 0.2j, "bp": -0.3 + 0.2j}),
    ("SP_h2", {"periods": Periods(W1, W2)}),
)


@identity("weight-positivity", "positivity", "positive definite", {"case": 0, "samples": 100, "seed": 0},
          {"case": list(range(len(POSITIVE_WEIGHTS))), "seed": list(range(100))})
def _weight_positivity(params, quad, warnings):
    w, wparams = POSITIVE_WEIGHTS[int(params["case"])]
    if not is_unitary(w, wparams):
        raise DomainError("{} is not positive at {}".format(w, wparams))
    rng = np.random.RandomState(int(params["seed"]))
    kind = weight_coordinates(w)
    values = []
    for _ in range(int(params["samples"])):
        if kind == "lattice":
            point = (int(rng.randint(-3, 4)), rng.uniform(-2, 2))
        elif kind == "cylinder":
            point = complex(rng.uniform(-2, 2), rng.uniform(-0.5, 0.5))
        else:
            point = rng.uniform(-2, 2)
        values.append(complex(weight(w, wparams, point)))
    # a nonnegative density equals its own modulus
    return worst(*[Sides.of(v, abs(v)) for v in values])


@identity("weight-SPh2-forms", "identity", "two forms of the density", dict(REAL, x=0.3), {"x": 1.0})
def _weight_sph2_forms(params, quad, warnings):
    gamma_form, sinh_form = sp_h2_forms({"periods": periods(params)}, complex(params["x"]))
    return Sides.of(gamma_form, sinh_form)


def _pairing(pairing, warnings):
    warnings.extend(pairing.warnings)
    return Sides.of(pairing.lhs, pairing.rhs)


@identity("adjoint-hyp", "pairing", "formally self-adjoint", dict(REAL, g=0.8), {"g": 0.1}, slow=True)
def _adjoint_hyp(params, quad, warnings):
    wparams = {"g": params["g"], "periods": periods(params)}
    pairing = adjoint_pairing("hyp", "SP_h", _gaussian, lambda x: np.exp(-0.3 * x ** 2), quad, wparams)
    return _pairing(pairing, warnings)


@identity("adjoint-cr", "pairing", "adjoint with respect to the scalar product", {"l": 0, "h": -1.2j},
          {"h": 0.1j}, slow=True)
def _adjoint_cr(params, quad, warnings):
    phi = lambda n, u: np.exp(-0.4 * n ** 2 - 0.3 * u ** 2)
    psi = lambda n, u: np.exp(-0.3 * n ** 2 - 0.4 * u ** 2 + 0.1 * u)
    pairing = adjoint_pairing("cr", "SP_cr", phi, psi, quad, {"l": params["l"], "h": params["h"]})
    return _pairing(pairing, warnings)


@identity("adjoint-c", "pairing", "adjoint with respect to the scalar product", {"b": 0.4}, {"b": 0.1}, slow=True)
def _adjoint_c(params, quad, warnings):
    phi = lambda a, b: np.exp(-0.5 * a ** 2) * np.cos(2 * np.pi * b)
    psi = lambda a, b: np.exp(-0.4 * a ** 2 + 0.1 * a) * (1 + 0.5 * np.sin(2 * np.pi * b))
    pairing = adjoint_pairing("c", "SP_c", phi, psi, quad, {"b": params["b"], "bp": params["b"]})
    return _pairing(pairing, warnings)


# lookup and evaluation

def entry_for(id):
    if id not in CATALOG:
        raise DomainError("unknown identity '{}'".format(id))
    return CATALOG[id]


def identity_ids(include_optional=True):
    return [i for i, e in CATALOG.items() if include_optional or not e.optional]


def tolerance_for(family, config=None):
    override = tolerance_override()
    if override is not None:
        return override
    config = config if config is not None else load_config()
    try:
        tol = retrieve(config, "tolerances/{}".format(family))
    except KeyNotFoundError:
        raise DomainError("no tolerance configured for '{}'".format(family))
    return float(tol)


def verify_identity(id, params=None, quad=None, tolerance=None, config=None):
    """Both sides of identity ``id`` at ``params`` (defaults filled in) as a report.

    Numerical failures become failing reports; inadmissible parameters raise
    DomainError.
    """
    entry = entry_for(id)
    params = dict(entry.defaults, **(params or {}))
    tolerance = tolerance if tolerance is not None else tolerance_for(entry.family, config)
    warnings = ["both sides share an evaluator"] if entry.shared else []
    start = time.time()
    try:
        sides = entry.check(params, quad, warnings)
    except NumericalError as exc:
        logger.info("{} failed numerically: {}".format(id, exc))
        return VerificationReport.failure(id, params, tolerance, "{}: {}".format(type(exc).__name__, exc),
                                          ms=1000 * (time.time() - start))
    ms = 1000 * (time.time() - start)
    report = VerificationReport.from_sides(id, params, sides.lhs, sides.rhs, tolerance, scale=sides.scale,
                                           ms=ms, warnings=warnings)
    logger.debug("{}: rel residual {:.3e} (tol {:.1e})".format(id, report.rel_residual, tolerance))
    return report
