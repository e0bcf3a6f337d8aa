import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from deltashell.errors import UnsupportedOrder
from deltashell.specfun import (
    coth_stable,
    green_factor,
    green_values,
    log_derivative_i,
    log_derivative_k,
    sph_i,
    sph_k,
    x_coth,
)

mp.mp.dps = 50


def mp_i(ell, x):
    x = mp.mpf(x)
    return mp.sqrt(mp.pi / (2 * x)) * mp.besseli(ell + mp.mpf(1) / 2, x)


def mp_k(ell, x):
    # k_0 = exp(-x)/x convention: k_l = sqrt(2/(pi x)) K_{l+1/2}(x)
    x = mp.mpf(x)
    return mp.sqrt(2 / (mp.pi * x)) * mp.besselk(ell + mp.mpf(1) / 2, x)


# 50-digit values from the closed forms, evaluated with mpmath
I1_AT_1 = 0.3678794411714423216
K1_AT_2 = 0.10150146242745951892
K2_AT_1 = 2.5751560882000962512
COTH_1 = 1.3130352854993313036


def test_closed_form_values():
    assert sph_i(0, 1.0) == pytest.approx(math.sinh(1.0), rel=1e-15)
    assert sph_i(1, 1.0) == pytest.approx(I1_AT_1, rel=1e-14)
    assert sph_k(0, 1.0) == pytest.approx(math.exp(-1.0), rel=1e-15)
    assert sph_k(1, 2.0) == pytest.approx(K1_AT_2, rel=1e-14)
    assert sph_k(2, 1.0) == pytest.approx(K2_AT_1, rel=1e-14)
    # upward recurrence k_2 = k_0 + 3 k_1 / x
    assert sph_k(2, 1.0) == pytest.approx(sph_k(0, 1.0) + 3 * sph_k(1, 1.0), rel=1e-14)


def test_oracle_formulas_reproduce_frozen_values():
    assert float(mp_i(1, 1)) == pytest.approx(I1_AT_1, rel=1e-15)
    assert float(mp_k(2, 1)) == pytest.approx(K2_AT_1, rel=1e-15)


@pytest.mark.parametrize("ell", [0, 1, 2, 5, 10, 20, 40, 64])
@pytest.mark.parametrize("x", [1e-8, 1e-3, 0.1, 1.0, 7.5, 50.0, 300.0, 700.0])
def test_i_against_mpmath(ell, x):
    ref = mp_i(ell, x)
    if ref < mp.mpf("1e-300"):
        pytest.skip("below the double range")
    assert sph_i(ell, x) == pytest.approx(float(ref), rel=1e-12)


@pytest.mark.parametrize("ell", [0, 1, 2, 5, 10, 20, 40])
@pytest.mark.parametrize("x", [1e-3, 0.1, 1.0, 7.5, 50.0, 300.0, 700.0])
def test_k_against_mpmath(ell, x):
    ref = mp_k(ell, x)
    if ref > mp.mpf("1e300"):
        pytest.skip("above the double range")
    assert sph_k(ell, x) == pytest.approx(float(ref), rel=1e-12)


@pytest.mark.parametrize("ell", [0, 1, 3, 8])
def test_small_argument_leading_term(ell):
    x = 1e-6
    lead = x**ell / float(mp.fac2(2 * ell + 1))
    assert sph_i(ell, x) / lead == pytest.approx(1.0, rel=1e-9)


def test_errors():
    with pytest.raises(UnsupportedOrder):
        sph_i(65, 1.0)
    with pytest.raises(OverflowError):
        sph_i(0, 800.0)
    assert sph_k(0, 800.0) == 0.0


@pytest.mark.parametrize("x", [0.1, 1.0, 10.0])
def test_recurrence_consistency(x):
    for ell in range(1, 31):
        lhs = sph_i(ell - 1, x) - sph_i(ell + 1, x)
        rhs = (2 * ell + 1) * sph_i(ell, x) / x
        assert lhs == pytest.approx(rhs, rel=1e-10)


@pytest.mark.parametrize("x", [0.1, 1.0, 10.0])
@pytest.mark.parametrize("ell", [0, 1, 4, 12])
def test_wronskian(ell, x):
    # i k' - i' k = -1/x^2 with derivatives from the log-derivative formulas
    i, k = sph_i(ell, x), sph_k(ell, x)
    w = i * k * (float(log_derivative_k(ell, x)) - float(log_derivative_i(ell, x)))
    assert w == pytest.approx(-1.0 / x**2, rel=1e-10)


def test_coth_stable():
    assert coth_stable(1.0) == pytest.approx(COTH_1, rel=1e-15)
    assert coth_stable(700.0) == 1.0
    assert 1e-12 * coth_stable(1e-12) == pytest.approx(1.0, rel=1e-15)
    for x in [1e-5, 9.9e-5, 1.01e-4, 1e-3]:
        assert float(x_coth(x)) == pytest.approx(float(x * mp.coth(x)), rel=1e-15)


def test_green_closed_forms():
    assert green_factor(0, 1.0, 1.0, 1.0).value == pytest.approx(0.43233235838169365405, rel=1e-15)
    assert green_factor(0, 1.0, 1.0, 2.0).value == pytest.approx(0.079523093200894594654, rel=1e-15)


@pytest.mark.parametrize("ell", [0, 1, 3, 10])
def test_green_zero_energy_limit(ell):
    a, b = 0.7, 1.9
    lim = a**ell / ((2 * ell + 1) * b ** (ell + 1))
    for kappa in [1e-3, 1e-5, 1e-7]:
        # leading correction is first order in kappa (ell = 0) or higher
        assert green_factor(ell, kappa, a, b).value / lim == pytest.approx(1.0, rel=2 * kappa)


@given(
    st.integers(0, 32),
    st.floats(1e-4, 50.0),
    st.floats(0.1, 10.0),
    st.floats(0.1, 10.0),
)
def test_green_positive_and_symmetric(ell, kappa, a, b):
    g1 = green_factor(ell, kappa, a, b)
    g2 = green_factor(ell, kappa, b, a)
    assert g1.value > 0
    assert g1.value == g2.value
    assert g1.r_small <= g1.r_large


@pytest.mark.parametrize("ell", [0, 2, 7])
def test_green_matches_product_of_functions(ell):
    kappa, a, b = 0.8, 1.3, 2.4
    ref = kappa * mp_i(ell, kappa * a) * mp_k(ell, kappa * b)
    assert float(green_values(ell, kappa, a, b)) == pytest.approx(float(ref), rel=1e-13)
