import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from deltashell.boundary import (
    m_matrix,
    threshold_alpha2,
    secular_det,
    secular_det_closed,
    secular_det_grid,
    threshold_det,
    threshold_kernel_dim,
    threshold_matrix,
)
from deltashell.errors import SWaveThresholdForbidden
from deltashell.model import make_config
from deltashell.secular import secular_F

from .conftest import random_config

# root of -3 + k coth k + k, 50-digit mpmath findroot
KAPPA_IN_R1_A3 = 1.4107196860610394467


def test_m_matrix_two_shell_swave_closed_form():
    m = m_matrix(make_config([1, 2], [0, 0]), 0, 1.0).entries
    s1, s2 = math.sinh(1.0), math.sinh(2.0)
    expected = [
        [s1 * math.exp(-1), s1 * math.exp(-2) / 2],
        [s1 * math.exp(-2) / 2, s2 * math.exp(-2) / 4],
    ]
    np.testing.assert_allclose(m, expected, rtol=1e-14)
    assert m[0, 1] == m[1, 0]


def test_single_shell_matrix_is_diagonal_green():
    from deltashell.specfun import green_factor

    m = m_matrix(make_config([1.7], [2.0]), 3, 0.4)
    assert m.n == 1
    assert m.entries[0, 0] == green_factor(3, 0.4, 1.7, 1.7).value


def test_zero_coupling_gives_unit_determinant():
    cfg = make_config([0.5, 1.0, 3.0], [0.0, 0.0, 0.0])
    for ell in (0, 1, 5):
        assert secular_det(cfg, ell, 0.37) == 1.0


def test_single_shell_determinant_vanishes_at_inner_root():
    cfg = make_config([1.0], [-3.0])
    assert abs(secular_det(cfg, 0, KAPPA_IN_R1_A3)) < 1e-10
    # and the bracket used by the bisection oracle is valid
    h = lambda k: -3 + k / math.tanh(k) + k  # noqa: E731
    assert h(1.0) < 0 < h(1.5)


def test_two_shell_swave_sign_changes_match_secular_function(rng):
    grid = np.geomspace(1e-4, 20, 3000)
    for _ in range(50):
        cfg = random_config(rng, 2)
        det = secular_det_grid(cfg, 0, grid)
        fd = secular_F(grid, cfg)
        ch_det = np.nonzero(np.diff(np.sign(det)))[0]
        ch_f = np.nonzero(np.diff(np.sign(fd)))[0]
        assert ch_det.tolist() == ch_f.tolist()


@given(
    st.floats(0.2, 5), st.floats(0.1, 5), st.floats(-10, 10), st.floats(-10, 10),
    st.integers(0, 10), st.floats(1e-3, 20),
)
def test_closed_form_matches_lu(r1, d, a1, a2, ell, kappa):
    cfg = make_config([r1, r1 + d], [a1, a2])
    lu = secular_det(cfg, ell, kappa)
    closed = secular_det_closed(cfg, ell, kappa)
    scale = 1 + abs(a1) * r1 + abs(a2) * (r1 + d)
    assert lu == pytest.approx(closed, rel=1e-12, abs=1e-12 * scale**2)


def test_threshold_single_shell():
    for ell in (1, 2, 5):
        cfg = make_config([1.3], [0.8])
        assert threshold_det(cfg, ell) == pytest.approx(1 + 0.8 * 1.3 / (2 * ell + 1), rel=1e-15)
    assert threshold_det(make_config([1.0], [-3.0]), 1) == 0.0


def test_threshold_zero_coupling():
    assert threshold_det(make_config([1, 2], [0, 0]), 3) == 1.0


def test_threshold_refuses_swave():
    with pytest.raises(SWaveThresholdForbidden):
        threshold_matrix(make_config([1.0], [-1.0]), 0)


def test_threshold_matrix_entries():
    a = threshold_matrix(make_config([1.0, 2.0], [-3.0, -2.0]), 1).entries
    np.testing.assert_allclose(a, [[1 - 1.0, -2.0 / 3 * 1 / 2], [-3.0 / 3 * 1 / 2, 1 - 2.0 / 3 * 4 / 2]], rtol=1e-15)


def _remark_sides(r1, r2, a1, a2, ell):
    m = 2 * ell + 1
    lhs = a1 * a2 * r1 ** (2 * ell + 2) * r2 ** (-2 * ell)
    rhs = (a1 * r1 + m) * (a2 * r2 + m)
    return lhs, rhs


def test_remark_identity_reference_point():
    # R = [1, 2], alpha = [-3, -2], ell = 1: (2m)^2 det A = rhs - lhs
    cfg = make_config([1.0, 2.0], [-3.0, -2.0])
    lhs, rhs = _remark_sides(1.0, 2.0, -3.0, -2.0, 1)
    assert threshold_det(cfg, 1) * 9 == pytest.approx(rhs - lhs, abs=1e-12)


@given(st.floats(0.2, 3), st.floats(0.1, 3), st.floats(-10, 10), st.floats(-10, 10), st.integers(1, 6))
def test_remark_identity_is_the_determinant(r1, d, a1, a2, ell):
    r2 = r1 + d
    cfg = make_config([r1, r2], [a1, a2])
    lhs, rhs = _remark_sides(r1, r2, a1, a2, ell)
    m = 2 * ell + 1
    assert threshold_det(cfg, ell) * m * m == pytest.approx(rhs - lhs, rel=1e-10, abs=1e-10 * (1 + abs(lhs) + abs(rhs)))


@pytest.mark.parametrize("ell", [1, 2, 4])
def test_threshold_alpha2_makes_matrix_singular(ell):
    r1, r2, a1 = 1.0, 1.6, -5.0
    a2 = threshold_alpha2(r1, r2, a1, ell)
    cfg = make_config([r1, r2], [a1, a2])
    assert abs(threshold_det(cfg, ell)) < 1e-10
    assert threshold_kernel_dim(cfg, ell) == 1


@given(st.integers(1, 8), st.integers(1, 4), st.randoms(use_true_random=False))
def test_zero_energy_limit_equals_threshold_det(ell, n, rnd):
    radii = sorted(rnd.uniform(0.2, 4.0) for _ in range(n))
    if any(b - a < 0.05 for a, b in zip(radii, radii[1:])):
        return
    alphas = [rnd.uniform(-6, 6) for _ in range(n)]
    cfg = make_config(radii, alphas)
    d = {k: secular_det(cfg, ell, k) for k in (1e-2, 1e-3, 1e-4)}
    # the leading correction is O(kappa^2): one Richardson step on the two smallest
    extrap = (100 * d[1e-4] - d[1e-3]) / 99
    target = threshold_det(cfg, ell)
    scale = max(1.0, np.prod([1 + abs(a) * r for a, r in zip(alphas, radii)]))
    assert abs(extrap - target) <= 1e-6 * scale


def test_zero_shell_is_transparent(rng):
    for _ in range(30):
        cfg = random_config(rng, 3)
        alphas = list(cfg.alphas)
        j = int(rng.integers(0, 3))
        alphas[j] = 0.0
        full = make_config(cfg.radii, alphas)
        reduced = full.without_shell(j)
        for ell in (0, 1, 4):
            for k in (0.05, 0.7, 3.0):
                assert secular_det(full, ell, k) == pytest.approx(secular_det(reduced, ell, k), rel=1e-12, abs=1e-12)


def test_m_matrix_symmetric_positive(rng):
    for _ in range(20):
        cfg = random_config(rng, 4)
        for ell in (0, 2, 9):
            m = m_matrix(cfg, ell, float(rng.uniform(1e-3, 10))).entries
            assert np.all(m > 0)
            assert np.array_equal(m, m.T)
