import math

import numpy as np
import pytest

from ruijsenaars.errors import BranchError, DivergenceError, DomainError, EvaluationError, PrecisionError
from ruijsenaars.numerics import (Contour, CylinderDomain, LimitSchedule, QuadSpec, TailModel,
                                  central_derivative, integrate_cylinder, integrate_line,
                                  pow_pair, richardson_limit, sum_bilateral)


def test_gaussian_line():
    quad = QuadSpec(abs_tol=1e-12, rel_tol=1e-12, tail=TailModel.exponential(2 * np.pi))
    value, err = integrate_line(lambda t: np.exp(-np.pi * t ** 2), Contour.real_line(), quad)
    assert abs(value - 1) < 1e-10
    assert err < 1e-9


def test_sech_squared():
    quad = QuadSpec(tail=TailModel.exponential(2 * np.pi))
    value, _ = integrate_line(lambda t: 0.5 * np.pi / np.cosh(np.pi * t) ** 2,
                              Contour.real_line(radius=6), quad)
    assert abs(value - 1) < 1e-8


def test_vertical_contour_orientation():
    # the vertical line runs upward, dz = i dt
    quad = QuadSpec(tail=TailModel.exponential(2 * np.pi))
    value, _ = integrate_line(lambda z: np.exp(np.pi * z ** 2), Contour.vertical(), quad)
    assert abs(value - 1j) < 1e-8


def test_even_integrand_half_line():
    f = lambda t: np.exp(-t ** 2) * np.cos(t)
    full, _ = integrate_line(f, Contour.real_line(radius=8))
    half, _ = integrate_line(f, Contour.segment(0.0, 8.0))
    assert abs(full - 2 * half) < 1e-8 * abs(full)


def test_line_non_finite_node():
    with pytest.raises(EvaluationError) as info:
        integrate_line(lambda t: 1.0 / (t - t), Contour.real_line(radius=1))
    assert info.value.node is not None


def test_line_slow_tail_diverges():
    quad = QuadSpec(tail=TailModel.power_law(-1.01))
    with pytest.raises(DivergenceError) as info:
        integrate_line(lambda t: 1.0 / (1 + t ** 2) ** 0.505, Contour.real_line(radius=5), quad)
    assert len(info.value.estimates) == 2


def test_untyped_tail_is_integrated():
    # the ends of 1/(1+x^2) are 1e-4 at |x| = 100 but the tail beyond carries 1/R
    quad = QuadSpec(abs_tol=1e-3, rel_tol=1e-3)
    with pytest.raises(DivergenceError):
        integrate_line(lambda x: 1 / (1 + x ** 2), Contour.real_line(radius=10.0), quad)
    value, err = integrate_line(lambda x: 1 / (1 + x ** 2) ** 2, Contour.real_line(radius=10.0), quad)
    assert abs(value - np.pi / 2) <= max(err, 1e-3)
    value, err = integrate_line(lambda x: np.exp(-x ** 2), Contour.real_line(radius=10.0))
    assert abs(value - np.sqrt(np.pi)) < 1e-10
    assert err < 1e-8


def test_power_tail_must_converge():
    with pytest.raises(DomainError):
        TailModel.power_law(-1.0)
    with pytest.raises(DomainError):
        QuadSpec(abs_tol=0.0)


def test_cylinder_area():
    value, _ = integrate_cylinder(lambda t1, t2: np.ones_like(t1), CylinderDomain(T=1.0))
    assert abs(value - 2) < 1e-12


def test_cylinder_full_period():
    value, _ = integrate_cylinder(lambda t1, t2: np.exp(2j * np.pi * t2) * np.exp(-t1 ** 2),
                                  CylinderDomain(T=8.0))
    assert abs(value) < 1e-10


def test_cylinder_gaussian():
    value, _ = integrate_cylinder(lambda t1, t2: np.exp(-np.pi * t1 ** 2) * (1 + np.cos(2 * np.pi * t2)),
                                  CylinderDomain(T=6.0, a=-0.5))
    assert abs(value - 1) < 1e-8


def test_cylinder_singular_point():
    def f(t1, t2):
        rho = np.hypot(t1, np.mod(t2 + 0.5, 1.0) - 0.5)
        return np.exp(-40 * rho ** 2) / rho
    domain = CylinderDomain(T=2.0, a=-0.5, singularities=((0.0, 0.0),), exponent=-1.0)
    value, _ = integrate_cylinder(f, domain, level=2)
    assert abs(value - np.pi * np.sqrt(np.pi / 40)) < 1e-3


def test_cylinder_rejects_non_periodic():
    with pytest.raises(BranchError):
        integrate_cylinder(lambda t1, t2: t2 * np.exp(-t1 ** 2), CylinderDomain(T=4.0))


def test_geometric_bilateral_sum():
    quad = QuadSpec(abs_tol=1e-14, rel_tol=1e-14)
    value, _ = sum_bilateral(lambda k: 2.0 ** (-abs(k)), quad=quad)
    assert abs(value - 3) < 1e-12


def test_single_support():
    value, err = sum_bilateral(lambda k: 1.0 if k == 0 else 0.0)
    assert value == 1
    assert err == 0


def test_half_integer_lattice():
    quad = QuadSpec(abs_tol=1e-14, rel_tol=1e-14)
    value, _ = sum_bilateral(lambda k: 2.0 ** (-abs(k)), eps=0.5, quad=quad)
    assert abs(value - 2 * math.sqrt(0.5) / (1 - 0.5)) < 1e-12


def test_recentering():
    term = lambda k: np.exp(-(k - 0.3) ** 2)
    a, _ = sum_bilateral(term)
    b, _ = sum_bilateral(term, center=5)
    assert abs(a - b) < 1e-8


def test_harmonic_sum_diverges():
    with pytest.raises(DivergenceError):
        sum_bilateral(lambda k: 1.0 / (1 + abs(k)), max_terms=60)


def test_bad_lattice_offset():
    with pytest.raises(DomainError):
        sum_bilateral(lambda k: 0.0, eps=0.25)


def test_richardson_linear():
    result = richardson_limit([(d, 1 + d) for d in (0.04, 0.02, 0.01)], order=1)
    assert abs(result.value - 1) < 1e-12
    assert abs(result.order - 1) < 1e-8


def test_richardson_quadratic():
    result = richardson_limit([(d, 2 + 3 * d ** 2) for d in (0.04, 0.02, 0.01, 0.005)], order=2)
    assert abs(result.value - 2) < 1e-12
    assert abs(result.order - 2) < 1e-6


def test_richardson_exact_polynomial():
    samples = [(d, 0.5 - 1j + 2 * d - 7 * d ** 2 + 0.25j * d ** 3) for d in (0.1, 0.07, 0.05, 0.03, 0.02)]
    assert abs(richardson_limit(samples, order=3).value - (0.5 - 1j)) < 1e-12


def test_richardson_non_monotone_warning():
    samples = [(0.04, 1.01), (0.02, 0.98), (0.01, 1.03)]
    assert richardson_limit(samples, order=1).warnings


def test_richardson_needs_samples():
    with pytest.raises(DomainError):
        richardson_limit([(0.1, 1.0), (0.05, 1.0)], order=1)
    with pytest.raises(DomainError):
        richardson_limit([(0.01, 1.0), (0.02, 1.0), (0.03, 1.0)], order=1)


def _log_approach(d):
    return 1 - (0.56 + 0.1j) * d * np.log(d) + 0.42 * d + 0.3j * d ** 2


def test_richardson_log_terms():
    deltas = (0.04, 0.02, 0.01, 0.005, 0.0025)
    samples = [(d, _log_approach(d)) for d in deltas]
    plain = richardson_limit(samples[:3], order=1, log=False)
    assert abs(plain.value - 1) > 5e-3
    result = richardson_limit(samples, order=1, log=True)
    assert abs(result.value - 1) < 1e-9
    assert result.order >= 1
    assert result.spread < 1e-3
    assert not result.warnings


def test_richardson_log_keeps_polynomials():
    samples = [(d, 0.5 - 1j + 2 * d) for d in (0.04, 0.02, 0.01)]
    assert abs(richardson_limit(samples, order=1, log=True).value - (0.5 - 1j)) < 1e-12
    with pytest.raises(DomainError):
        richardson_limit(samples, order=2, log=True)
    with pytest.raises(DomainError):
        LimitSchedule(deltas=(0.04, 0.02, 0.01, 0.005), order=2)
    assert LimitSchedule(deltas=(0.04, 0.02, 0.01, 0.005), order=2, log=False).order == 2


def test_derivative_exponential():
    gamma = 0.3 - 0.2j
    value = central_derivative(lambda z: np.exp(2 * np.pi * gamma * z), 0.0, "z")
    assert abs(value - 2 * np.pi * gamma) < 1e-8


def test_derivative_wirtinger():
    point = 0.4 - 0.7j
    f = lambda z: z * np.conj(z)
    assert abs(central_derivative(f, point, "z") - np.conj(point)) < 1e-10
    assert abs(central_derivative(f, point, "zbar") - point) < 1e-10


def test_second_derivative():
    z = 0.2 + 0.5j
    value = central_derivative(lambda t: np.exp(2 * np.pi * t * z), 0.3, "alpha", order=2)
    assert abs(value - (2 * np.pi * z) ** 2 * np.exp(0.6 * np.pi * z)) < 1e-5


def test_second_wirtinger_derivative():
    f = lambda z: np.sinh(np.pi * z)
    point = 0.3 + 0.2j
    value = central_derivative(f, point, "z", order=2)
    assert abs(value - np.pi ** 2 * np.sinh(np.pi * point)) < 1e-5
    assert abs(central_derivative(f, point, "zbar", order=2)) < 1e-5


def test_derivative_error_scaling():
    point = 0.1 + 0.1j
    exact = np.exp(point)
    errors = [abs(central_derivative(np.exp, point, "z", step=s) - exact) for s in (1e-1, 1e-2)]
    assert errors[1] < errors[0] / 100


def test_derivative_precision_floor():
    with pytest.raises(PrecisionError):
        central_derivative(np.exp, 0.0, "z", order=2, step=1e-9)


def test_pow_pair_unit_base():
    assert pow_pair(1.0, 1.0, 0.3 + 2j, -1.7j) == 1


def test_pow_pair_conjugate():
    assert abs(pow_pair(1j, -1j, 0.5, 0.5) - 1) < 1e-15


def test_pow_pair_matches_principal_logs():
    w = 1.3 * np.exp(0.8j)
    rho, rhop = (2 + 0.7j) / 2, (-2 + 0.7j) / 2
    direct = np.exp(rho * np.log(w) + rhop * np.log(np.conj(w)))
    value = pow_pair(w, np.conj(w), rho, rhop)
    assert abs(value - direct) < 1e-13
    assert abs(abs(value) - abs(w) ** (rho + rhop).real) < 1e-13


def test_pow_pair_path_independent_for_conjugates():
    # winding once around zero leaves a conjugate pair with integral exponent gap unchanged
    rho, rhop = (1 - 0.4j) / 2, (-1 - 0.4j) / 2
    theta = np.linspace(0.0, 2 * np.pi, 64)
    w = 0.7 + 0j
    path = [(0.7 * np.exp(1j * t), 0.7 * np.exp(-1j * t)) for t in theta[:-1]]
    assert abs(pow_pair(w, w, rho, rhop, path=path) - pow_pair(w, w, rho, rhop)) < 1e-12


def test_pow_pair_path_tracks_branch():
    theta = np.linspace(0.0, 2 * np.pi, 64)
    path = [(np.exp(1j * t), 1.0) for t in theta[:-1]]
    value = pow_pair(1.0, 1.0, 0.5, 0.0, path=path)
    assert abs(value + 1) < 1e-12


def test_pow_pair_zero_base():
    with pytest.raises(BranchError):
        pow_pair(0.0, 1.0, 0.5, 0.5)
    with pytest.raises(BranchError):
        pow_pair(1.0, 1.0, 0.5, 0.5, path=[(-1.0, 1.0), (0.0, 1.0)])


def test_limit_schedule():
    schedule = LimitSchedule(deltas=(0.04, 0.02, 0.01), rule="even", alpha=0.3)
    assert schedule.companion(0.04) == 6
    assert schedule.companion(0.01) == 30
    assert all(abs(schedule.effective_alpha(d) - 0.3) <= 2 * d for d in schedule.deltas)
    with pytest.raises(DomainError):
        LimitSchedule(deltas=(0.01, 0.02, 0.04))
    with pytest.raises(DomainError):
        LimitSchedule(deltas=(0.02, 0.01))
