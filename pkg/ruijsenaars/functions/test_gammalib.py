import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ruijsenaars.errors import DomainError, PoleError, UnsupportedError
from ruijsenaars.numerics import LimitSchedule
from ruijsenaars.functions.gammalib import (CGammaArg, Periods, bernoulli_b22, cgamma, cgamma_alt,
                                            cgamma_shift, gamma_limit_check, hyp_gamma, hyp_gamma_asymp,
                                            log_cgamma, log_gamma_complex, log_hyp_gamma, pochhammer,
                                            reciprocal_cgamma)

REAL = Periods(1.0, np.sqrt(2.0))

# Re u > 0 keeps both factors of the reflection away from poles
COMPLEX_U = st.builds(complex, st.floats(0.1, 2.0), st.floats(-0.5, 0.5))
DISCRETE_N = st.sampled_from([-2, -1, 0, 1, 2, 3])


def test_log_gamma_complex():
    assert abs(log_gamma_complex(1.0)) < 1e-15
    z = 2.5 - 1.2j
    assert np.isclose(np.exp(log_gamma_complex(z + 1) - log_gamma_complex(z)), z, rtol=1e-13)
    z = 0.3 + 0.4j
    assert np.isclose(np.exp(log_gamma_complex(z) + log_gamma_complex(1 - z)), np.pi / np.sin(np.pi * z),
                      rtol=1e-13)
    with pytest.raises(PoleError):
        log_gamma_complex(-2.0)


def test_cgamma_values():
    assert np.isclose(cgamma(CGammaArg(-1j, 1)), 1.0)
    x = 0.7
    assert np.isclose(cgamma(x, -2), cgamma(x, 2), rtol=1e-13)
    assert np.isclose(cgamma(x, -3), -cgamma(x, 3), rtol=1e-13)
    x = 0.3 + 0.1j
    assert abs(cgamma(x, 1) * cgamma(-x - 2j, 1) - 1) < 1e-12


def test_cgamma_cancelling_poles():
    # Gamma(-1)/Gamma(0) and its reciprocal are finite
    assert np.isclose(cgamma(0.0, -2), 1.0)
    assert np.isclose(cgamma(0.0, -3), -2.0 / 3.0)
    assert np.isclose(reciprocal_cgamma(0.0, -2), 1.0)
    assert reciprocal_cgamma(0.0, 0) == 0
    u = np.array([0.0, 0.3, -1.1])
    n = np.array([-2, -1, -4])
    assert np.allclose(reciprocal_cgamma(u, n) * cgamma(u, n), 1.0)
    with pytest.raises(PoleError):
        cgamma(0.0, 0)


def test_cgamma_alternative_notation():
    a = CGammaArg(0.4 - 0.2j, 3)
    assert np.isclose(cgamma_alt(a.alpha, a.alpha_prime), cgamma(a), rtol=1e-13)
    swapped = cgamma_alt(a.alpha_prime, a.alpha)
    assert np.isclose(cgamma(a), (-1) ** a.n * swapped, rtol=1e-12)
    flipped = cgamma_alt(1 - a.alpha, 1 - a.alpha_prime)
    assert np.isclose(cgamma(a) * flipped, (-1) ** a.n, rtol=1e-12)
    with pytest.raises(DomainError):
        CGammaArg.from_alphas(0.5, 0.25)


def test_cgamma_shifts():
    a = CGammaArg(0.5, 0)
    base = cgamma(a)
    assert np.isclose(cgamma_shift(a, "alpha") / base, 0.25j, rtol=1e-13)
    assert np.isclose(cgamma_shift(a, "alpha_prime") / base, -0.25j, rtol=1e-13)
    both = cgamma(a.u - 2j, a.n)
    assert np.isclose(both, a.u ** 2 / 4 * base, rtol=1e-12)
    with pytest.raises(DomainError):
        cgamma_shift(a, "beta")


def test_cgamma_zero_and_pole():
    # the denominator Gamma(1 + (n - iu)/2) has a pole at u = -3i, n = 1
    assert cgamma(-3j, 1) == 0
    assert log_cgamma(-3j, 1) == -np.inf
    with pytest.raises(PoleError):
        cgamma(1j, 1)


def test_pochhammer():
    assert pochhammer(1.7 - 0.2j, 0) == 1
    assert pochhammer(1, 4) == 24
    assert np.isclose(pochhammer(3, -2), 0.5)
    a = 0.3 + 0.8j
    assert np.isclose(pochhammer(a, 3), np.exp(log_gamma_complex(a + 3) - log_gamma_complex(a)))
    assert np.isclose(pochhammer(a, -3), np.exp(log_gamma_complex(a - 3) - log_gamma_complex(a)))
    with pytest.raises(PoleError):
        pochhammer(2, -3)


def test_bernoulli():
    p = Periods(1.0, 2.0)
    assert np.isclose(bernoulli_b22(p.Q / 2, p), -(1 + 4) / (12 * 2))
    assert np.isclose(bernoulli_b22(0.3, p), bernoulli_b22(p.Q - 0.3, p))
    assert np.isclose(bernoulli_b22(0.0, Periods(1.0, 1.0)), 5 / 6)


def test_periods_invariants():
    p = Periods(1 + 0.3j, 1 - 0.3j)
    assert p.Q == p.w1 + p.w2
    assert abs(p.q) < 1
    assert p.has_product
    assert not p.swapped().has_product
    with pytest.raises(DomainError):
        Periods(-1.0, 1.0)
    s = 1j + 0.01
    p = Periods.from_sqrt_ratio(s)
    assert np.isclose(np.sqrt(p.w1 / p.w2), s)
    assert np.isclose(p.sqrt_product, 1.0)


def test_equal_periods_values():
    p = Periods(1.0, 1.0)
    assert np.isclose(hyp_gamma(1.0, p), 1.0, rtol=1e-10)
    assert np.isclose(hyp_gamma(0.5, p), 2 ** -0.5, rtol=1e-10)


def test_reflection():
    u = 0.4 + 0.1j
    assert abs(hyp_gamma(u, REAL) * hyp_gamma(REAL.Q - u, REAL) - 1) < 1e-9


def test_difference_equations():
    u = 0.3
    assert np.isclose(hyp_gamma(u + REAL.w1, REAL) / hyp_gamma(u, REAL), 2 * np.sin(np.pi * u / REAL.w2),
                      rtol=1e-9)
    assert np.isclose(hyp_gamma(u + REAL.w2, REAL) / hyp_gamma(u, REAL), 2 * np.sin(np.pi * u / REAL.w1),
                      rtol=1e-9)


@pytest.mark.parametrize("p", [REAL, Periods(1 + 0.3j, 1 - 0.3j), Periods(0.8 + 0.5j, 1.1)])
@settings(max_examples=10, deadline=None)
@given(fractions=st.lists(st.floats(0.05, 0.95), min_size=1, max_size=20),
       shift=st.floats(-1.0, 1.0))
def test_random_points(p, fractions, shift):
    u = np.asarray(fractions) * p.Q + 1j * shift
    g = hyp_gamma(u, p)
    assert np.allclose(hyp_gamma(u + p.w1, p) / g, 2 * np.sin(np.pi * u / p.w2), rtol=1e-9)
    assert np.allclose(hyp_gamma(u + p.w2, p) / g, 2 * np.sin(np.pi * u / p.w1), rtol=1e-9)
    assert np.allclose(g * hyp_gamma(p.Q - u, p), 1.0, rtol=1e-9)


def test_period_exchange():
    u = np.array([0.7, 0.2 + 0.5j, 1.9 - 1.3j, -0.4 + 2.1j])
    for p in (REAL, Periods(1 + 0.3j, 1 - 0.3j)):
        assert np.allclose(hyp_gamma(u, p), hyp_gamma(u, p.swapped()), rtol=1e-9)


def test_representations_agree():
    p = Periods(1 + 0.3j, 1 - 0.3j)
    assert np.isclose(hyp_gamma(0.7, p, method="product"), hyp_gamma(0.7, p, method="integral"), rtol=1e-8)
    u = 0.5 + 0.8j
    assert np.isclose(hyp_gamma(u, REAL, method="series"), hyp_gamma(u, REAL, method="integral"), rtol=1e-9)
    with pytest.raises(DomainError):
        hyp_gamma(0.5, REAL, method="product")
    with pytest.raises(DomainError):
        hyp_gamma(0.5, REAL, method="series")


def test_far_arguments():
    # shift reduction over many periods
    u = 7.3 + 0.2j
    direct = log_hyp_gamma(u, REAL)
    reduced = log_hyp_gamma(u - 4 * REAL.w2, REAL)
    for j in range(4):
        reduced = reduced + np.log(2 * np.sin(np.pi * (u - (4 - j) * REAL.w2) / REAL.w1) + 0j)
    assert np.isclose(np.exp(direct - reduced), 1.0, rtol=1e-8)


def test_poles_and_zeros():
    for m1, m2 in [(0, 0), (1, 2), (3, 1)]:
        with pytest.raises(PoleError) as info:
            hyp_gamma(-m1 * REAL.w1 - m2 * REAL.w2, REAL)
        assert info.value.location == (m1, m2)
    eps = 1e-7
    near_zero = hyp_gamma(REAL.Q + REAL.w1 + eps, REAL)
    assert 0 < abs(near_zero) < 1e3 * eps


def test_asymptotics():
    p = Periods(1.0, 1.3)
    upper = [abs(hyp_gamma(1j * t, p) / hyp_gamma_asymp(1j * t, p, "upper") - 1) for t in (0.5, 1.0, 2.0)]
    assert upper[0] > upper[1] > upper[2]
    lower = [abs(hyp_gamma(-1j * t, p) / hyp_gamma_asymp(-1j * t, p, "lower") - 1) for t in (0.5, 1.0, 2.0)]
    assert lower[0] > lower[1] > lower[2]
    u = 3j
    assert np.isclose(hyp_gamma_asymp(u, p, "upper") * hyp_gamma_asymp(p.Q - u, p, "lower"), 1.0)
    with pytest.raises(DomainError):
        hyp_gamma_asymp(1.0, p, "upper")
    with pytest.raises(DomainError):
        hyp_gamma_asymp(1j, p, "lower")


@pytest.mark.parametrize("which", ["r_real", "r_real_rat", "lim1", "lim2'", "poh"])
def test_gamma_limits(which):
    report = gamma_limit_check(which)
    assert report.passed, report.to_dict()
    assert report.params["diagnostics"]["observed_order"] > 0.5


def test_gamma_limit_parameters():
    report = gamma_limit_check("poh", {"m": 2, "u": -0.3})
    assert report.passed
    report = gamma_limit_check("lim1", {"m": -1, "u": 0.2 - 0.1j})
    assert report.passed
    with pytest.raises(DomainError):
        gamma_limit_check("lim1", {"m": 0.5})
    with pytest.raises(DomainError):
        gamma_limit_check("nope")


def test_lim2_odd_companion_unsupported():
    schedule = LimitSchedule(deltas=(0.02, 0.01, 0.005), rule="odd", alpha=0.3)
    with pytest.raises(UnsupportedError):
        gamma_limit_check("lim2'", schedule=schedule)


@settings(max_examples=20, deadline=None)
@given(re=st.floats(0.1, 2.3), im=st.floats(-0.5, 0.5))
def test_reflection_property(re, im):
    u = complex(re, im)
    assert abs(hyp_gamma(u, REAL) * hyp_gamma(REAL.Q - u, REAL) - 1) < 1e-9


@settings(max_examples=50, deadline=None)
@given(u=COMPLEX_U, n=DISCRETE_N)
def test_cgamma_reflection_property(u, n):
    value = cgamma(u, n)
    assert np.isclose(cgamma(u, -n), (-1) ** n * value, rtol=1e-12)
    assert np.isclose(value * cgamma(-u - 2j, n), 1.0, rtol=1e-10)


@settings(max_examples=50, deadline=None)
@given(u=COMPLEX_U, n=DISCRETE_N)
def test_cgamma_shift_property(u, n):
    a = CGammaArg(u, n)
    base = cgamma(a)
    assert np.isclose(cgamma_shift(a, "alpha"), a.alpha * base, rtol=1e-11)
    assert np.isclose(cgamma_shift(a, "alpha_prime"), -a.alpha_prime * base, rtol=1e-11)
