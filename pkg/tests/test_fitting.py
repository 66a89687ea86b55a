import numpy as np
import pytest
from hypothesis import given, strategies as st

from parampkit.fitting import (FitError, FluorescenceModel, ReflectionTrace,
                               attenuation_vs_frequency, circle_fit, fluorescence_fit,
                               fluorescence_s11, least_squares_fit, loaded_q, lorentzian_db,
                               lorentzian_fit, rabi_attenuation_fit, rabi_from_power,
                               reflection_model, transmon_relations)


def resonator_trace(q_i, q_c, f_r=8.3, phi=0.0, env=1.0 + 0j, span=10.0, n=201):
    """Reflection 1 - 2 kappa_c / (kappa + 2i delta), written in rates."""
    k_c = f_r / q_c
    k_i = f_r / q_i
    f = np.linspace(f_r - span * (k_c + k_i) / 2, f_r + span * (k_c + k_i) / 2, n)
    s = 1 - 2 * k_c * np.exp(1j * phi) / (k_c * np.cos(phi) + k_i + 2j * (f - f_r))
    return ReflectionTrace(f, env * s)


@pytest.mark.parametrize("q_i,q_c", [(1e5, 1e3), (9e4, 9e4), (2e4, 5e4)])
def test_circle_fit_recovers_q(q_i, q_c):
    r = circle_fit(resonator_trace(q_i, q_c))
    assert r.q_i == pytest.approx(q_i, rel=1e-2)
    assert r.q_c == pytest.approx(q_c, rel=1e-2)
    assert r.f_r == pytest.approx(8.3, rel=1e-9)
    assert r.residual_norm < 1e-9
    assert r.covariance.shape == (4, 4)


def test_circle_fit_model_agrees_with_rate_form():
    tr = resonator_trace(1e5, 1e3, phi=0.1)
    z = reflection_model(tr.freqs, 8.3, loaded_q(1e5, 1e3, 0.1), 1e3, 0.1)
    assert np.max(np.abs(z - tr.s11)) < 1e-9


def test_overcoupled_reports_lower_bound():
    r = circle_fit(resonator_trace(1e5, 1e3), fano_bounds=(0.8, 1.2))
    assert r.overcoupled and r.qi_is_lower_bound
    assert r.qi_interval[0] == pytest.approx(0.8 * r.q_i)
    assert r.qi_interval[1] == np.inf
    under = circle_fit(resonator_trace(2e4, 5e4), fano_bounds=(0.8, 1.2))
    assert not under.overcoupled
    assert under.qi_interval[1] == pytest.approx(1.2 * under.q_i)


@given(st.floats(-np.pi, np.pi), st.floats(0.01, 100.0))
def test_circle_fit_rotation_scale_invariant(angle, scale):
    ref = circle_fit(resonator_trace(9e4, 9e4))
    r = circle_fit(resonator_trace(9e4, 9e4, env=scale * np.exp(1j * angle)))
    assert r.q_i == pytest.approx(ref.q_i, rel=1e-6)
    assert r.q_c == pytest.approx(ref.q_c, rel=1e-6)
    assert abs(r.environment) == pytest.approx(scale, rel=1e-6)


def test_circle_fit_collinear_raises():
    f = np.linspace(8.2, 8.4, 21)
    with pytest.raises(FitError, match="collinear|circle"):
        circle_fit(ReflectionTrace(f, (1 + 0.5j) * np.linspace(-1, 1, 21)))


def test_reflection_trace_validation():
    with pytest.raises(ValueError, match="7"):
        ReflectionTrace(np.arange(5.0), np.ones(5, complex))
    with pytest.raises(ValueError, match="non-finite"):
        ReflectionTrace(np.arange(8.0), np.r_[np.ones(7), np.nan].astype(complex))


def test_least_squares_underdetermined():
    with pytest.raises(FitError, match="underdetermined"):
        least_squares_fit(lambda p: np.array([p[0] - p[1]]), [1.0, 2.0])


def lorentz_oracle(f, g0_db, bw, center):
    g0 = 10 ** (g0_db / 10)
    return 10 * np.log10(1 + (g0 - 1) / (1 + (2 * (f - center) / bw) ** 2))


def test_lorentzian_oracle_form():
    f = np.linspace(8.37, 8.39, 101)
    assert lorentzian_db(f, 20.0, 2.25e-3, 8.38) == pytest.approx(
        lorentz_oracle(f, 20.0, 2.25e-3, 8.38), abs=1e-12)


def test_lorentzian_exact_recovery():
    f = np.linspace(8.38 - 0.01125, 8.38 + 0.01125, 201)
    fit = lorentzian_fit(f, lorentz_oracle(f, 20.0, 2.25e-3, 8.38))
    assert fit.g0_db == pytest.approx(20.0, abs=1e-8)
    assert fit.bw == pytest.approx(2.25e-3, rel=1e-8)
    assert fit.center == pytest.approx(8.38, abs=1e-12)
    assert fit.residual_norm < 1e-9
    assert fit.product * 1e3 == pytest.approx(22.5, rel=1e-7)


def test_lorentzian_with_noise():
    f = np.linspace(8.38 - 0.01125, 8.38 + 0.01125, 201)
    lin = 10 ** (lorentz_oracle(f, 20.0, 2.25e-3, 8.38) / 10)
    rng = np.random.default_rng(11)
    for _ in range(20):
        fit = lorentzian_fit(f, 10 * np.log10(lin * (1 + 0.01 * rng.standard_normal(f.size))))
        assert fit.g0_db == pytest.approx(20.0, abs=0.2)
        assert fit.bw == pytest.approx(2.25e-3, rel=0.05)


@given(st.floats(-10.0, 10.0))
def test_lorentzian_bw_invariant_under_offset(off):
    f = np.linspace(8.37, 8.39, 121)
    g = lorentz_oracle(f, 15.0, 2e-3, 8.38)
    assert lorentzian_fit(f, g + off).bw == pytest.approx(lorentzian_fit(f, g).bw, rel=1e-6)


def test_lorentzian_flat_trace_raises():
    with pytest.raises(FitError, match="no peak"):
        lorentzian_fit(np.linspace(8.3, 8.4, 50), np.zeros(50))


def fluor_oracle(f, f_ge, kappa, gamma, rabi):
    """Weak-drive two-level reflection written with the saturation parameter."""
    big = kappa + gamma
    d = 2 * (f - f_ge) * 1e3
    return 1 - 2 * kappa * (big + 1j * d) / (big**2 + d**2 + 2 * rabi**2)


def test_fluorescence_zero_drive_value():
    z = fluorescence_s11(8.287, 8.287, 0.828, 0.155, 0.0)
    assert z == pytest.approx(1 - 2 * 0.828 / 0.983, abs=1e-15)
    assert z.real == pytest.approx(-0.685, abs=5e-4)


def test_fluorescence_matches_oracle_and_saturates():
    f = np.linspace(8.285, 8.289, 41)
    for rabi in (0.0, 0.3, 2.0):
        assert fluorescence_s11(f, 8.287, 0.828, 0.155, rabi) == pytest.approx(
            fluor_oracle(f, 8.287, 0.828, 0.155, rabi), abs=1e-14)
    assert abs(fluorescence_s11(8.287, 8.287, 0.828, 0.155, 1e4) - 1) < 1e-6


def test_fluorescence_model_validation():
    with pytest.raises(ValueError):
        FluorescenceModel(8.287, -1.0, 0.1)
    with pytest.raises(ValueError):
        FluorescenceModel(8.287, 0.0, 0.0)


@pytest.mark.parametrize("rabi", [0.05, 0.3, 1.0, 3.0])
def test_fluorescence_fit_round_trip(rabi):
    f = np.linspace(8.2845, 8.2895, 201)
    tr = ReflectionTrace(f, fluor_oracle(f, 8.287, 0.828, 0.155, rabi))
    assert fluorescence_fit(tr, 8.287, 0.828, 0.155).rabi == pytest.approx(rabi, rel=1e-6)


def test_rabi_attenuation_round_trip_and_scaling():
    p = np.linspace(-60, -40, 9)
    rabi = rabi_from_power(p, -89.3, 8.287, 0.983)
    fit = rabi_attenuation_fit(p, rabi, 8.287, 0.983)
    assert fit.attenuation_db == pytest.approx(-89.3, abs=1e-9)
    shifted = rabi_attenuation_fit(p + 10, rabi, 8.287, 0.983)
    assert shifted.attenuation_db - fit.attenuation_db == pytest.approx(-10.0, abs=1e-9)


def test_rabi_oracle():
    from scipy import constants as c
    om2 = 10 ** (-8.93) * 2 * (2 * np.pi * 0.983e6) * 1e-3 * 10 ** (-5) / (c.h * 8.287e9)
    assert rabi_from_power(-50.0, -89.3, 8.287, 0.983) == pytest.approx(
        np.sqrt(om2) / (2 * np.pi * 1e6), rel=1e-12)


def test_rabi_attenuation_errors():
    with pytest.raises(FitError, match="underdetermined"):
        rabi_attenuation_fit([-50, -50, -50], [1, 1, 1], 8.287, 0.983)
    with pytest.raises(FitError, match="at least 3"):
        rabi_attenuation_fit([-50, -40], [1, 2], 8.287, 0.983)
    fit = rabi_attenuation_fit([-50, -45, -40], [100, 200, 400], 8.287, 0.983, anharmonicity=300)
    assert fit.warnings


def test_transmon_relations():
    t = transmon_relations(charging=13.0, josephson=712.0)
    assert t.f_ge == pytest.approx(np.sqrt(8 * 0.013 * 712) - 0.013, rel=1e-12)
    assert t.f_ge == pytest.approx(8.59, abs=5e-3)
    ej = transmon_relations(charging=13.0, f_ge=t.f_ge).josephson
    assert ej == pytest.approx(712.0, rel=1e-12)
    ec = transmon_relations(josephson=712.0, f_ge=t.f_ge).charging
    assert ec == pytest.approx(13.0, rel=1e-9)
    assert t.f_gf_half == pytest.approx(t.f_ge - 0.0065)
    with pytest.raises(ValueError, match="non-transmon"):
        transmon_relations(charging=0.0, josephson=712.0)
    with pytest.raises(ValueError, match="exactly two"):
        transmon_relations(charging=13.0)
    assert transmon_relations(charging=1000.0, josephson=20.0).warnings


def test_attenuation_line():
    line = attenuation_vs_frequency([8.0, 8.5], [-88.0, -90.0])
    a, s, ex = line.predict(8.25)
    assert a == pytest.approx(-89.0)
    assert not ex
    assert line.predict(9.0)[2]
    with pytest.raises(FitError):
        attenuation_vs_frequency([8.0, 8.0], [-88.0, -89.0])


def test_attenuation_line_monte_carlo():
    f = np.linspace(7.9, 8.7, 9)
    rng = np.random.default_rng(5)
    hits = 0
    for _ in range(200):
        a = -2.0 * f - 72.726 + 0.5 * rng.standard_normal(f.size)
        line = attenuation_vs_frequency(f, a, np.full(f.size, 0.5))
        hits += abs(line.slope + 2.0) < np.sqrt(line.covariance[0, 0])
    assert hits / 200 > 0.6


def test_attenuation_anchor_on_band():
    f = np.array([8.0, 8.287, 8.5])
    a = np.array([-88.5, -89.3, -90.0])
    line = attenuation_vs_frequency(f, a, [2.0, 2.0, 2.0])
    pred, sig, _ = line.predict(8.287)
    assert abs(pred + 89.3) <= 2.0 + sig
