import numpy as np
import pytest

from ruijsenaars.errors import DomainError, PinchError, UnsupportedError
from ruijsenaars.numerics import LimitSchedule
from ruijsenaars.functions.gammalib import Periods, hyp_gamma
from ruijsenaars.functions.wavefn import (ComplexModelParams, DoubledPoint, HypWaveParams, MasterParams,
                                          SpectralPoint, complim_cm_ratio, f_cm_hyp, f_complex_barnes,
                                          f_complex_euler, f_master, hyperbolic_integral, hyperbolic_to_complex,
                                          lambda_exponent, lambda_phase, line_geometry, master_dual,
                                          master_find1, phi_hyp)

REAL = Periods(1.0, np.sqrt(2.0))
MASTER = MasterParams(0.2, 0.15, 0.25, 0.3)
CM = ComplexModelParams(0, -1.4j)


def test_pentagon_integral():
    nu, mu, z = 0.3, 0.4, 0.05 + 0.1j
    a = (REAL.Q - nu - mu) / 2
    value, err = hyperbolic_integral(z + (nu - mu) / 2, (a,), (a,), REAL)
    expected = hyp_gamma(z + nu, REAL) * hyp_gamma(mu - z, REAL) / hyp_gamma(nu + mu, REAL)
    assert np.isclose(value, expected, rtol=1e-8)
    assert err < 1e-8 * abs(expected)


def test_contour_offset_is_free():
    a = (REAL.Q - 0.7) / 2
    first, _ = hyperbolic_integral(0.0, (a,), (a,), REAL)
    second, _ = hyperbolic_integral(0.0, (a,), (a,), REAL, offset=0.4)
    assert np.isclose(first, second, rtol=1e-8)


def test_line_geometry():
    offset, up, down = line_geometry(0.0, (0.5,), (0.5,), REAL)
    assert offset == 0.0
    assert np.isclose(up, down)
    with pytest.raises(PinchError):
        line_geometry(0.0, (-0.3,), (-0.3,), REAL)
    with pytest.raises(PinchError):
        line_geometry(0.0, (0.5,), (0.5,), REAL, offset=0.8)
    with pytest.raises(DomainError):
        line_geometry(5.0, (0.5,), (0.5,), REAL)
    with pytest.raises(DomainError):
        line_geometry(0.0, (0.5, 0.5), (0.5,), REAL)


def test_master_params():
    mp = MasterParams.ruijsenaars(0.9, 0.2, -0.3)
    assert np.isclose(mp.B, 0.9)
    assert np.isclose(mp.C, -0.1)
    assert mp.g == mp.B
    assert np.isclose(MASTER.g, MASTER.B)
    assert np.allclose(MASTER.alphas, (0.45, 0.45))
    assert np.allclose(MASTER.betas, (-0.05, -0.15))


def test_master_dual_representation():
    x = 0.1 + 0.3j
    pref, params, xp = master_dual(MASTER, x, REAL)
    assert params.g == MASTER.g
    assert np.isclose(f_master(MASTER, x, REAL), pref * f_master(params, xp, REAL), rtol=1e-7)


def test_master_reflection_of_b():
    x = 0.1 + 0.3j
    pref, params = master_find1(MASTER, x, REAL)
    assert np.isclose(params.B, REAL.Q - MASTER.B)
    assert np.isclose(f_master(MASTER, x, REAL), pref * f_master(params, x, REAL), rtol=1e-7)


def test_master_error_estimate():
    value, err = f_master(MASTER, 0.1, REAL, return_error=True)
    assert np.isfinite(value)
    assert 0 <= err < 1e-7 * abs(value)


def test_wave_function_representations_agree():
    hp = HypWaveParams(0.9, 0.2, -0.3, 0.1j, -0.15j)
    assert np.isclose(phi_hyp(hp, REAL), phi_hyp(hp, REAL, rep="dual"), rtol=1e-7)
    with pytest.raises(DomainError):
        phi_hyp(hp, REAL, rep="other")


def test_bispectral_symmetry():
    hp = HypWaveParams(0.9, 0.2, -0.3, 0.1j, -0.15j)
    assert np.isclose(phi_hyp(hp, REAL), phi_hyp(hp.bispectral(REAL), REAL, rep="dual"), rtol=1e-7)
    assert np.isclose(hp.bispectral(REAL).gstar(REAL), 0.9)


def test_centre_of_mass_representations():
    g, lam, x = 0.8, 0.25, 0.1j
    assert np.isclose(f_cm_hyp(g, lam, x, REAL), f_cm_hyp(g, lam, x, REAL, rep="dual"), rtol=1e-7)


def test_centre_of_mass_even_in_spectral_parameter():
    g, lam, x = 0.8, 0.25, 0.1j
    assert np.isclose(f_cm_hyp(g, lam, x, REAL), f_cm_hyp(g, -lam, x, REAL), rtol=1e-9)


def test_complex_model_params():
    assert np.isclose(CM.rho, 0.7)
    assert np.isclose(CM.rhop, 0.7)
    reflected = CM.reflected()
    assert np.isclose(reflected.rho, 1 - CM.rho)
    assert np.isclose(reflected.rhop, 1 - CM.rhop)
    with pytest.raises(DomainError):
        ComplexModelParams(0, 0.5)
    with pytest.raises(DomainError):
        ComplexModelParams(0.5, -1j)


def test_doubled_point():
    pt = DoubledPoint(1, 0.2)
    assert pt.integral
    assert pt.eps(0) == 0 and pt.eps(1) == 0.5
    assert not DoubledPoint(0.5, 0.0).integral
    assert DoubledPoint(0.5, 0.0).eps(1) == 0
    assert pt.shifted(dn=1).n == 2
    assert np.isclose(pt.z - pt.zp, 1)
    with pytest.raises(DomainError):
        DoubledPoint(0.3, 0.0)
    with pytest.raises(DomainError):
        SpectralPoint(0.1j, 0.0)


def test_lambda_exponent():
    assert lambda_exponent(0, 0, 0) == 0
    assert lambda_exponent(1, 2, 2) == -1
    assert lambda_exponent(0.5, 0.5, 1) == 2.5
    assert np.isclose(lambda_phase(1, 0, 0), -1)
    with pytest.raises(DomainError):
        lambda_exponent(0.5, 1, 0)


def test_barnes_bad_offset():
    with pytest.raises(PinchError):
        f_complex_barnes(CM, SpectralPoint(0.1, 0.3), DoubledPoint(0, 0.2), offset=5.0)


def test_barnes_argument_checks():
    with pytest.raises(DomainError):
        f_complex_barnes(CM, SpectralPoint(0.1, 0.3), DoubledPoint(0.5, 0.2))
    with pytest.raises(DomainError):
        f_complex_barnes(CM, (SpectralPoint(0.1, 0.3), SpectralPoint(0.1, 0.3)), DoubledPoint(0, 0.2))
    pts = (DoubledPoint(0, 0.2), DoubledPoint(0.5, 0.1))
    sps = (SpectralPoint(0.1, 0.3), SpectralPoint(-0.2, 0.5))
    with pytest.raises(DomainError):
        f_complex_barnes(CM, sps, pts)


def test_euler_needs_decay():
    with pytest.raises(DomainError):
        f_complex_euler(CM, SpectralPoint(0.1, 0.3), DoubledPoint(0, 2j))


@pytest.mark.slow
def test_barnes_matches_euler():
    sp, pt = SpectralPoint(0.1, 0.3), DoubledPoint(0, 0.2)
    barnes = f_complex_barnes(CM, sp, pt)
    euler = f_complex_euler(CM, sp, pt)
    assert np.isclose(barnes, euler, rtol=1e-4)


@pytest.mark.slow
def test_two_point_barnes_matches_euler():
    sps = (SpectralPoint(0.1, 0.3), SpectralPoint(-0.2, 0.5))
    pts = (DoubledPoint(0, 0.2), DoubledPoint(2, -0.1))
    assert np.isclose(f_complex_barnes(CM, sps, pts), f_complex_euler(CM, sps, pts), rtol=1e-4)


def test_hyperbolic_to_complex():
    limit = hyperbolic_to_complex(0.02, CM)
    assert np.isclose(limit.g + limit.gstar, limit.periods.Q)
    assert np.isclose(limit.scale, np.sqrt(1 + 0.02 ** 2))
    with pytest.raises(DomainError):
        hyperbolic_to_complex(0.0, CM)


def test_complex_limit_needs_even_companion():
    schedule = LimitSchedule(deltas=(0.05, 0.03, 0.02), rule="odd", alpha=0.1)
    params = {"r": 0, "h": -1.4j, "n": 0, "u": 0.2, "alpha": 0.1, "beta": 0.3}
    with pytest.raises(UnsupportedError):
        complim_cm_ratio(0.05, params, schedule)
