import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import constants as c

from parampkit.noise import (CalibrationError, NoiseChain, PSDTrace, calibration_band,
                             delta_snr, input_referred_photons, photons_to_temperature,
                             psd_to_input_temperature, quantum_limit, quantum_limited_noise,
                             refer_through_attenuator, solve_insertion_loss, synth_psd)

OFFS = (np.arange(201) - 100) * 1e3


def test_photons_direct():
    assert input_referred_photons(0.393, 8.193) == pytest.approx(1.0, abs=0.01)
    assert input_referred_photons(4.0, 8.193) == pytest.approx(c.k * 4 / (c.h * 8.193e9), rel=1e-12)
    assert input_referred_photons(4.0, 8.193) == pytest.approx(10.2, abs=0.05)
    assert input_referred_photons(0.0, 8.193) == 0.0
    assert photons_to_temperature(1.0, 8.193) == pytest.approx(0.393, abs=1e-3)
    with pytest.raises(ValueError):
        input_referred_photons(1.0, 0.0)


def test_quantum_limit_decomposition():
    q = quantum_limit(8.193)
    assert q.photons == 1.0
    assert q.components() == {"vacuum": 0.5, "added": 0.5}
    assert quantum_limited_noise(8.193) == pytest.approx(q.temperature / 2, rel=1e-12)


def test_delta_snr():
    assert delta_snr(0.4, 4.0) == pytest.approx(10.0, abs=1e-12)
    assert delta_snr(2.0, 2.0) == 0.0
    with pytest.raises(ValueError):
        delta_snr(0.0, 1.0)


@given(st.floats(0.01, 50.0), st.floats(20.0, 100.0), st.floats(-140.0, -100.0))
def test_psd_round_trip(t_in, gain, pilot):
    tr = synth_psd(OFFS, t_in, gain, pilot, 8.193)
    res = psd_to_input_temperature(tr)
    kept = res.temperature[res.kept]
    assert kept == pytest.approx(np.full(kept.size, t_in), rel=1e-9)
    assert res.chain_gain_db == pytest.approx(gain, abs=1e-9)


def test_psd_excludes_pilot_bins():
    res = psd_to_input_temperature(synth_psd(OFFS, 4.0, 70.0, -120.0, 8.193), exclude=3)
    assert np.isnan(res.temperature[97:104]).all()
    assert np.isfinite(res.temperature[:97]).all()


def test_psd_doubling_floor_doubles_temperature():
    a = psd_to_input_temperature(synth_psd(OFFS, 2.0, 70.0, -110.0, 8.193))
    b = psd_to_input_temperature(synth_psd(OFFS, 4.0, 70.0, -110.0 + 10 * np.log10(2), 8.193))
    assert b.floor == pytest.approx(2 * a.floor, rel=1e-9)


def test_psd_weak_pilot_is_calibration_error():
    with pytest.raises(CalibrationError, match="10 dB"):
        psd_to_input_temperature(synth_psd(OFFS, 4.0, 70.0, -185.0, 8.193))


def test_psd_trace_validation():
    with pytest.raises(ValueError, match="uniform"):
        PSDTrace(np.r_[0, 1, 3, 4, 5, 6, 7, 8.0], np.zeros(8), -120.0, 8.193)
    with pytest.raises(ValueError, match=">= 8"):
        PSDTrace(np.arange(4.0), np.zeros(4), -120.0, 8.193)


def test_noisy_psd_floor_within_jitter():
    rng = np.random.default_rng(3)
    res = psd_to_input_temperature(synth_psd(OFFS, 4.0, 70.0, -120.0, 8.193, noise_db=0.1, rng=rng))
    assert np.nanmedian(res.temperature) == pytest.approx(4.0, rel=0.05)


def test_lossless_referral():
    ch = NoiseChain(insertion_loss=1.0, stage_temp=0.015, hemt_temp=4.0, paramp_gain=20.0,
                    paramp_noise=0.2, source_noise=0.015)
    r = refer_through_attenuator(ch)
    assert r.total == pytest.approx(0.015 + 0.2 + 0.04, rel=1e-12)
    assert r.terms["stage"] == 0.0
    assert set(r.terms) == {"source", "stage", "paramp", "hemt"}


def test_hemt_term_vanishes_at_large_gain():
    ch = NoiseChain(insertion_loss=0.7, paramp_gain=200.0)
    assert refer_through_attenuator(ch).terms["hemt"] < 1e-15


@given(st.floats(0.05, 0.95), st.floats(0.0, 40.0))
def test_referral_monotone(lam, g):
    base = refer_through_attenuator(NoiseChain(insertion_loss=lam, paramp_gain=g)).total
    assert refer_through_attenuator(NoiseChain(insertion_loss=lam + 0.04, paramp_gain=g)).total < base
    assert refer_through_attenuator(NoiseChain(insertion_loss=lam, paramp_gain=g + 1)).total < base


@given(st.floats(0.05, 1.0))
def test_insertion_loss_inverse(lam):
    ch = NoiseChain(insertion_loss=lam, paramp_noise=0.2)
    t = refer_through_attenuator(ch).total
    assert solve_insertion_loss(ch, t) == pytest.approx(lam, rel=1e-10)


def test_insertion_loss_inconsistent_inputs():
    with pytest.raises(ValueError, match="outside"):
        solve_insertion_loss(NoiseChain(paramp_noise=1.0), 0.3)
    with pytest.raises(ValueError, match="no positive"):
        solve_insertion_loss(NoiseChain(stage_temp=0.0, source_noise=0.5), 0.4)


def test_calibration_band_quadrature():
    lo, hi = calibration_band(1.0, 3.0, 4.0)
    assert hi == pytest.approx(10 ** 0.5)
    assert lo == pytest.approx(10 ** -0.5)
    assert calibration_band(2.0) == (2.0, 2.0)
