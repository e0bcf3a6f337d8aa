import pytest
from hypothesis import given
from hypothesis import strategies as st

from deltashell.calibrate import (
    HBAR2_OVER_2ME_NM2_EV,
    PRESETS,
    Alignment,
    CalibrationInput,
    calibrate_preset,
    classify_alignment,
    confinement_scale,
    coupling_from_interface,
    energy_to_ev,
    get_preset,
    reference_energy,
)
from deltashell.solver import enumerate_spectrum


def test_stored_constant_matches_codata():
    hbar_c = 197.3269804  # eV nm
    me_c2 = 510998.95  # eV
    assert HBAR2_OVER_2ME_NM2_EV == pytest.approx(hbar_c**2 / (2 * me_c2), rel=1e-6)


@pytest.mark.parametrize("m, e0", [(0.13, 0.29), (0.11, 0.35)])
def test_reference_energy_examples(m, e0):
    assert reference_energy(m) == pytest.approx(e0, rel=0.05)


def test_reference_energy_unit_mass():
    assert reference_energy(1.0, 1.0) == 0.0380998


def test_reference_energy_scales_with_length():
    assert reference_energy(0.13, 2.0) == pytest.approx(reference_energy(0.13) / 4, rel=1e-15)


@pytest.mark.parametrize(
    "dv, w, m, alpha", [(0.7, 0.3, 0.13, 0.7), (-0.8, 0.35, 0.11, -0.8)]
)
def test_coupling_examples(dv, w, m, alpha):
    assert coupling_from_interface(CalibrationInput(dv, w, m)) == pytest.approx(alpha, rel=0.10)


def test_zero_offset_gives_zero_coupling():
    assert coupling_from_interface(CalibrationInput(0.0, 0.3, 0.13)) == 0.0


@given(st.floats(-3, 3), st.floats(0.01, 2), st.floats(0.02, 2), st.floats(0.2, 5))
def test_coupling_is_linear_and_signed(dv, w, m, l0):
    a = coupling_from_interface(CalibrationInput(dv, w, m, l0))
    assert coupling_from_interface(CalibrationInput(2 * dv, w, m, l0)) == 2 * a
    assert coupling_from_interface(CalibrationInput(dv, 2 * w, m, l0)) == pytest.approx(2 * a, rel=1e-15, abs=0)
    assert (a > 0) == (dv > 0) and (a < 0) == (dv < 0)


@pytest.mark.parametrize("kwargs", [dict(width=0.0), dict(mass_ratio=-1.0), dict(l0=0.0)])
def test_input_validation(kwargs):
    base = dict(delta_v=0.5, width=0.3, mass_ratio=0.1)
    base.update(kwargs)
    with pytest.raises(ValueError):
        CalibrationInput(**base)


@pytest.mark.parametrize(
    "a1, a2, kind",
    [(-2.5, 0.7, Alignment.TYPE_I), (2.5, -0.8, Alignment.TYPE_II), (-1, -1, Alignment.OTHER), (0.0, 1.0, Alignment.OTHER)],
)
def test_classification(a1, a2, kind):
    assert classify_alignment(a1, a2) is kind


def test_energy_conversion():
    assert energy_to_ev(-2.0, 0.3) == pytest.approx(-0.6)
    assert confinement_scale(2.0, 0.25) == 1.0


def test_presets_listed():
    assert set(PRESETS) == {"type1-cdse-zns", "type2-cdte-cdse"}
    with pytest.raises(ValueError):
        get_preset("nope")


def test_type1_preset():
    cal = calibrate_preset("type1-cdse-zns")
    assert cal.classification is Alignment.TYPE_I
    assert cal.e0_ev == pytest.approx(0.29, rel=0.05)
    assert cal.alphas[0] == -2.5
    assert cal.alphas[1] == pytest.approx(0.7, rel=0.10)
    assert cal.config.radii == (2.5, 3.5)
    spec = enumerate_spectrum(cal.config)
    g = spec.ground_state
    assert g is not None and g.ell == 0
    scale = confinement_scale(g.kappa.kappa, cal.e0_ev)
    assert 0.05 <= scale <= 0.5


def test_type2_preset():
    cal = calibrate_preset("type2-cdte-cdse")
    assert cal.classification is Alignment.TYPE_II
    assert cal.e0_ev == pytest.approx(0.35, rel=0.05)
    assert cal.alphas[1] == pytest.approx(-0.8, rel=0.10)
    spec = enumerate_spectrum(cal.config)
    if spec.ground_state is not None:
        # shallow level: between 0.1 meV and 10 meV below the continuum
        scale = confinement_scale(spec.ground_state.kappa.kappa, cal.e0_ev)
        assert 1e-4 < scale < 1e-2
