import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from deltashell.errors import DegenerateRoot, NoInnerBoundState, WrongShellCount
from deltashell.model import make_config
from deltashell.oracle import interface_data
from deltashell.secular import (
    double_root_residual,
    f_inf,
    f_inf_prime,
    f_inf_second,
    g_func,
    gamma1,
    gamma1_prime,
    large_d_correction,
    matching_matrix,
    one_shell_roots,
    scaled_secular,
    secular_F,
    split_form,
    splitting_constant,
    tune_for_splitting,
)
from deltashell.solver import ScanPlan, find_channel_roots

KAPPA_IN_R1_A3 = 1.4107196860610394467  # mpmath root of -3 + k coth k + k
COTH_1 = 1.3130352854993313036


def test_gamma1_examples():
    assert gamma1(1e-9, 1.0, -2.0) == pytest.approx(-1.0, abs=1e-15)
    assert gamma1(1.0, 1.0, 0.0) == pytest.approx(COTH_1, rel=1e-15)
    assert gamma1(700.0, 1.0, 0.0) == 700.0


def test_gamma1_prime_positive_and_differenced():
    for t in [1e-6, 0.01, 0.049, 0.051, 0.5, 3.0, 40.0]:
        gp = float(gamma1_prime(t, 1.0))
        assert gp > 0
        h = 1e-5 * max(t, 1e-3)
        if t > h:
            fd = (float(gamma1(t + h, 1.0, 0.0)) - float(gamma1(t - h, 1.0, 0.0))) / (2 * h)
            assert gp == pytest.approx(fd, rel=1e-6, abs=1e-9)


def test_free_secular_function_positive():
    cfg = make_config([1.0, 2.0], [0.0, 0.0])
    k = np.geomspace(1e-6, 100, 500)
    assert np.all(secular_F(k, cfg) > 0)
    assert np.all(scaled_secular(k, cfg) > 0)


def test_inner_only_root_is_kappa_in_for_every_d():
    for d in (0.5, 1.0, 4.0, 20.0):
        roots = find_channel_roots(make_config([1.0, 1.0 + d], [-3.0, 0.0]), 0)
        assert len(roots) == 1
        assert roots[0].kappa == pytest.approx(KAPPA_IN_R1_A3, rel=1e-13)


@given(
    st.floats(1e-3, 10), st.floats(0.2, 5), st.floats(0.01, 6), st.floats(-10, 10), st.floats(-10, 10)
)
def test_matching_determinant_identity(kappa, r1, d, a1, a2):
    if kappa * d > 30:
        return
    cfg = make_config([r1, r1 + d], [a1, a2])
    det = float(np.linalg.det(matching_matrix(kappa, cfg)))
    fd = float(secular_F(kappa, cfg))
    m = matching_matrix(kappa, cfg)
    scale = abs(m[0, 0] * m[1, 1]) + abs(m[0, 1] * m[1, 0])
    assert det == pytest.approx(-kappa * fd, rel=1e-11, abs=1e-13 * scale)


def test_matching_matrix_second_row_when_alpha2_cancels_kappa():
    kappa, d = 0.8, 1.5
    m = matching_matrix(kappa, make_config([1.0, 1.0 + d], [-2.0, -kappa]))
    np.testing.assert_allclose(m[1], [kappa * math.sinh(kappa * d), kappa * math.cosh(kappa * d)], rtol=1e-15)


def test_matching_matrix_overflow_guard():
    with pytest.raises(OverflowError):
        matching_matrix(100.0, make_config([1.0, 9.0], [-1.0, -1.0]))


def test_matching_kernel_is_transfer_boundary_data():
    cfg = make_config([1.0, 3.0], [-3.0, -2.5])
    (k_root,) = [k.kappa for k in find_channel_roots(cfg, 0) if k.kappa > 1.3][:1]
    first = interface_data(cfg, 0, k_root, at_root=True)[0]
    x, y = first.value_right, first.slope_right / k_root
    m = matching_matrix(k_root, cfg)
    resid = m @ np.array([x, y])
    assert np.max(np.abs(resid)) <= 1e-9 * np.max(np.abs(m)) * max(abs(x), abs(y))


@given(st.floats(1e-3, 10), st.floats(0.2, 5), st.floats(0.01, 6), st.floats(-10, 10), st.floats(-10, 10))
def test_interface_slope_ratio_is_gamma1(kappa, r1, d, a1, a2):
    cfg = make_config([r1, r1 + d], [a1, a2])
    first = interface_data(cfg, 0, kappa)[0]
    ratio = first.slope_right / first.value_left / kappa
    assert ratio == pytest.approx(float(gamma1(kappa, r1, a1)) / kappa, rel=1e-11, abs=1e-11)


@given(st.floats(1e-3, 10), st.floats(0.2, 5), st.floats(0.01, 6), st.floats(-10, 10), st.floats(-10, 10))
def test_split_form_identity(kappa, r1, d, a1, a2):
    if kappa * d > 30:
        return
    cfg = make_config([r1, r1 + d], [a1, a2])
    sf = split_form(kappa, cfg)
    two_fd = sf.f_inf * math.exp(kappa * d) + sf.g * math.exp(-kappa * d)
    scale = abs(sf.f_inf) * math.exp(kappa * d) + abs(sf.g) * math.exp(-kappa * d)
    assert two_fd == pytest.approx(2 * float(secular_F(kappa, cfg)), rel=1e-12, abs=1e-13 * scale)
    # S has the sign of F_d
    s = float(scaled_secular(kappa, cfg))
    if abs(two_fd) > 1e-10 * scale:
        assert math.copysign(1, s) == math.copysign(1, two_fd)


def test_split_form_fields():
    cfg = make_config([1.0, 2.0], [-3.0, -0.7])
    k = 0.9
    sf = split_form(k, cfg)
    g1 = float(gamma1(k, 1.0, -3.0))
    assert sf.f_inf == (k + g1) * (2 * k - 0.7) / k
    assert sf.g == -0.7 * (1 - g1 / k)
    assert sf.scaled == pytest.approx(float(scaled_secular(k, cfg)), rel=1e-13)


def test_zero_outer_coupling_removes_g():
    cfg = make_config([1.0, 2.0], [-3.0, 0.0])
    for k in (0.1, 1.0, 5.0):
        sf = split_form(k, cfg)
        assert sf.g == 0.0
        assert sf.scaled == sf.f_inf


def test_tuned_point():
    k0, a2 = tune_for_splitting(1.0, -3.0)
    assert k0 == pytest.approx(KAPPA_IN_R1_A3, rel=1e-15)
    assert a2 == -2 * k0
    assert abs(float(f_inf(k0, 1.0, -3.0, a2))) < 1e-12
    assert abs(float(f_inf_prime(k0, 1.0, -3.0, a2))) < 1e-12
    h = 1e-5
    fd = (float(f_inf(k0 + h, 1.0, -3.0, a2)) - float(f_inf(k0 - h, 1.0, -3.0, a2))) / (2 * h)
    assert abs(fd) < 1e-9
    assert float(f_inf_second(k0, 1.0, -3.0, a2)) > 0
    assert float(f_inf_second(k0, 1.0, -3.0, a2)) == pytest.approx(4 * (1 + float(gamma1_prime(k0, 1.0))) / k0, rel=1e-12)
    assert float(g_func(k0, 1.0, -3.0, a2)) == pytest.approx(-4 * k0, rel=1e-10)


def test_one_shell_roots():
    r = one_shell_roots(make_config([1.0, 2.0], [-1.0, 0.5]))
    assert r.kappa_in is None and r.kappa_out is None
    r = one_shell_roots(make_config([1.0, 2.0], [0.5, -2.0]))
    assert r.kappa_out == 1.0 and r.outer_binds
    r = one_shell_roots(make_config([1.0, 2.0], [-3.0, -0.2]))
    assert 1.0 < r.kappa_in < 1.5
    assert r.kappa_in == pytest.approx(KAPPA_IN_R1_A3, rel=1e-15)
    assert r.kappa_out == pytest.approx(0.1) and not r.outer_binds


def test_large_d_correction_cases():
    assert large_d_correction(make_config([1.0, 5.0], [-3.0, 0.0])) == 0.0
    k0, a2 = tune_for_splitting(1.0, -3.0)
    with pytest.raises(DegenerateRoot):
        large_d_correction(make_config([1.0, 5.0], [-3.0, a2]))
    with pytest.raises(WrongShellCount):
        large_d_correction(make_config([1.0], [-3.0]))


def test_large_d_correction_predicts_drift():
    c = large_d_correction(make_config([1.0, 2.0], [-3.0, -0.5]), "in")
    plan = ScanPlan(tol=1e-15)
    for d in (4.0, 5.0, 6.0, 7.0, 8.0):
        roots = find_channel_roots(make_config([1.0, 1.0 + d], [-3.0, -0.5]), 0, plan)
        k = min(roots, key=lambda r: abs(r.kappa - KAPPA_IN_R1_A3)).kappa
        drift = k - KAPPA_IN_R1_A3
        assert math.copysign(1, drift) == math.copysign(1, c)
        assert drift == pytest.approx(c * math.exp(-2 * KAPPA_IN_R1_A3 * d), rel=0.05)


def test_tuning_errors_and_monotonicity():
    with pytest.raises(NoInnerBoundState):
        tune_for_splitting(1.0, -1.0)
    ks = [tune_for_splitting(1.0, a)[0] for a in (-1.5, -2.0, -3.0, -5.0, -9.0)]
    assert all(b > a for a, b in zip(ks, ks[1:]))


def test_splitting_constant():
    k0, _ = tune_for_splitting(1.0, -3.0)
    c = splitting_constant(1.0, -3.0)
    assert c == pytest.approx(k0 * math.sqrt(2 / (1 + float(gamma1_prime(k0, 1.0)))), rel=1e-15)
    assert 0 < c < k0 * math.sqrt(2)


@pytest.mark.parametrize("r1", [10.0, 100.0])
def test_flat_interface_limit(r1):
    k0, _ = tune_for_splitting(r1, -3.0)
    assert float(gamma1_prime(k0, r1)) == pytest.approx(1.0, abs=1e-6)
    assert splitting_constant(r1, -3.0) == pytest.approx(k0, rel=1e-6)


def test_double_root_residual_at_simple_root():
    cfg = make_config([1.0, 2.0], [-3.0, 0.0])
    f, fp = double_root_residual(KAPPA_IN_R1_A3, cfg)
    assert abs(f) < 1e-12
    assert abs(fp) > 1e-2


def test_double_root_residual_free_case_never_vanishes():
    cfg = make_config([1.0, 2.0], [0.0, 0.0])
    assert all(double_root_residual(k, cfg)[0] > 0 for k in np.geomspace(1e-4, 50, 200))


def test_double_root_residual_derivative_is_consistent():
    cfg = make_config([1.0, 2.5], [-3.0, -2.2])
    for k in (0.3, 1.1, 2.0):
        h = 1e-6
        fd = (double_root_residual(k + h, cfg)[0] - double_root_residual(k - h, cfg)[0]) / (2 * h)
        assert double_root_residual(k, cfg)[1] == pytest.approx(fd, rel=1e-6)


def test_double_root_residual_between_a_root_pair():
    # the derivative changes sign between the two s-wave roots
    k0, a2 = tune_for_splitting(1.0, -3.0)
    cfg = make_config([1.0, 3.0], [-3.0, a2 - 0.3])
    lo, hi = [k.kappa for k in find_channel_roots(cfg, 0)]
    assert double_root_residual(lo, cfg)[1] * double_root_residual(hi, cfg)[1] < 0


def test_tuned_pair_approaches_double_root():
    # scaled residual pair at kappa0 shrinks together as d grows
    k0, a2 = tune_for_splitting(1.0, -3.0)
    prev = None
    for d in (2.0, 4.0, 6.0, 8.0):
        f, fp = double_root_residual(k0, make_config([1.0, 1.0 + d], [-3.0, a2]))
        scaled = (abs(f) * math.exp(-k0 * d), abs(fp) * math.exp(-k0 * d))
        if prev is not None:
            assert scaled[0] < prev[0] and scaled[1] < prev[1]
        prev = scaled
    assert prev[0] < 1e-5 and prev[1] < 1e-4
