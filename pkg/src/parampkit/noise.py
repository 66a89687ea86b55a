"""Noise-temperature accounting for a paramp + HEMT readout chain.

PSD-to-temperature conversion with a pilot tone of known input power,
photon-number referral, SNR improvement, the quantum-limit reference and
the referral of noise through a lossy element in front of the amplifier.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import units as u


class CalibrationError(ValueError):
    pass


@dataclass(frozen=True)
class NoiseChain:
    """Readout chain.

    ``insertion_loss`` is the linear transmission lambda (0 < lambda <= 1)
    between the source and the paramp; gains are in dB, temperatures in K.
    """

    insertion_loss: float = 1.0
    stage_temp: float = 0.015
    hemt_temp: float = 4.0
    hemt_gain: float = 40.0
    paramp_gain: float = 20.0
    paramp_noise: float = 0.0
    source_noise: float = 0.015

    def __post_init__(self):
        if not 0 < self.insertion_loss <= 1:
            raise ValueError("insertion_loss must be in (0, 1]")
        for name in ("stage_temp", "hemt_temp", "paramp_noise", "source_noise"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")

    @property
    def insertion_loss_db(self) -> float:
        """Loss as a positive dB number."""
        return float(-10 * np.log10(self.insertion_loss))


# ---------------------------------------------------------------------------
# PSD traces


@dataclass(frozen=True)
class PSDTrace:
    """Spectrum around a pilot tone.

    ``freqs`` are offsets from the pilot (Hz) on a uniform grid, ``psd`` in
    dBm/Hz; the pilot power is referred to the device input (dBm) and its
    frequency is in GHz.
    """

    freqs: np.ndarray
    psd: np.ndarray
    pilot_power_at_input: float
    pilot_freq: float

    def __post_init__(self):
        f = np.asarray(self.freqs, dtype=float)
        p = np.asarray(self.psd, dtype=float)
        if f.shape != p.shape or f.ndim != 1 or f.size < 8:
            raise ValueError("PSD trace needs >= 8 matching frequency/PSD samples")
        step = np.diff(f)
        if np.any(step <= 0) or np.ptp(step) > 1e-6 * abs(step.mean()):
            raise ValueError("PSD frequency grid must be uniform and increasing")
        if not self.pilot_freq > 0:
            raise ValueError("pilot frequency must be > 0")
        object.__setattr__(self, "freqs", f)
        object.__setattr__(self, "psd", p)

    @property
    def bin_width(self) -> float:
        return float(self.freqs[1] - self.freqs[0])


@dataclass(frozen=True)
class InputNoise:
    offsets: np.ndarray
    temperature: np.ndarray  # K, NaN in the excluded pilot bins
    floor: float  # K, median over the kept bins
    chain_gain_db: float
    pilot_snr_db: float

    @property
    def kept(self) -> np.ndarray:
        return np.isfinite(self.temperature)


def psd_to_input_temperature(trace: PSDTrace, exclude: int = 3) -> InputNoise:
    """Input-referred noise temperature from a PSD with a calibrated pilot.

    The pilot sits in the strongest bin; its power above the floor, times
    the bin width, fixes the chain gain.  Bins within ``exclude`` of the
    pilot are left out of the floor and reported as NaN.
    """
    lin = u.dbm_to_watt(trace.psd)  # W/Hz
    k = int(np.argmax(lin))
    idx = np.arange(lin.size)
    keep = np.abs(idx - k) > exclude
    if keep.sum() < 1:
        raise CalibrationError("no bins left after excluding the pilot")
    floor = float(np.median(lin[keep]))
    snr = 10 * np.log10(lin[k] / floor)
    if snr < 10:
        raise CalibrationError(f"pilot only {snr:.1f} dB above the floor (need >= 10 dB)")
    pilot_out = (lin[k] - floor) * trace.bin_width
    gain = pilot_out / u.dbm_to_watt(trace.pilot_power_at_input)
    temp = np.where(keep, lin / (gain * u.k_B), np.nan)
    return InputNoise(trace.freqs, temp, floor / (gain * u.k_B),
                      float(10 * np.log10(gain)), float(snr))


def synth_psd(offsets, t_in, chain_gain_db, pilot_power_at_input, pilot_freq,
              noise_db=0.0, rng=None) -> PSDTrace:
    """PSD a chain of gain ``chain_gain_db`` would show for input noise ``t_in`` (K).

    The pilot lands in the bin nearest zero offset.  ``noise_db`` adds
    Gaussian jitter (in dB) to every bin.
    """
    f = np.asarray(offsets, dtype=float)
    t = np.broadcast_to(np.asarray(t_in, dtype=float), f.shape)
    g = u.db_to_lin(chain_gain_db)
    lin = u.k_B * t * g
    k = int(np.argmin(np.abs(f)))
    bw = f[1] - f[0]
    lin = lin.copy()
    lin[k] += u.dbm_to_watt(pilot_power_at_input) * g / bw
    psd = u.watt_to_dbm(lin)
    if noise_db:
        rng = np.random.default_rng() if rng is None else rng
        psd = psd + noise_db * rng.standard_normal(psd.shape)
    return PSDTrace(f, psd, pilot_power_at_input, pilot_freq)


# ---------------------------------------------------------------------------
# photons and SNR


def input_referred_photons(temp, freq):
    """k_B T / (h f) with ``freq`` in GHz."""
    if np.any(np.asarray(freq) <= 0):
        raise ValueError("frequency must be > 0")
    return u.k_B * np.asarray(temp, dtype=float) / (u.h * np.asarray(freq, dtype=float) * 1e9)


def photons_to_temperature(n, freq):
    if np.any(np.asarray(freq) <= 0):
        raise ValueError("frequency must be > 0")
    return np.asarray(n, dtype=float) * u.h * np.asarray(freq, dtype=float) * 1e9 / u.k_B


def delta_snr(floor_on, floor_off) -> float:
    """SNR improvement (dB) from lowering the input-referred floor."""
    if not (floor_on > 0 and floor_off > 0):
        raise ValueError("noise floors must be > 0")
    return float(10 * np.log10(floor_off / floor_on))


@dataclass(frozen=True)
class QuantumLimit:
    """Reference line of a phase-preserving amplifier at one frequency."""

    freq: float
    photons: float = 1.0
    vacuum: float = 0.5  # photons from vacuum fluctuations at the input
    added: float = 0.5  # minimum photons added by the amplifier

    @property
    def temperature(self) -> float:
        return float(photons_to_temperature(self.photons, self.freq))

    def components(self) -> dict:
        return {"vacuum": self.vacuum, "added": self.added}


def quantum_limit(freq) -> QuantumLimit:
    return QuantumLimit(float(freq))


def quantum_limited_noise(freq) -> float:
    """Half-photon added noise h f / (2 k_B) in K."""
    return float(photons_to_temperature(0.5, freq))


def calibration_band(temp, *sigmas_db):
    """(low, high) temperature band from dB calibration errors added in quadrature."""
    s = float(np.sqrt(np.sum(np.square(sigmas_db)))) if sigmas_db else 0.0
    t = np.asarray(temp, dtype=float)
    return t * 10 ** (-s / 10), t * 10 ** (s / 10)


# ---------------------------------------------------------------------------
# referral through a lossy input


@dataclass(frozen=True)
class NoiseReferral:
    total: float
    terms: dict

    def __str__(self):
        parts = ", ".join(f"{k}={v:.4g} K" for k, v in self.terms.items())
        return f"T_in={self.total:.4g} K ({parts})"


def refer_through_attenuator(chain: NoiseChain) -> NoiseReferral:
    """Input-referred noise of the chain, with each contribution listed.

    A thermal loss lambda at ``stage_temp`` precedes the paramp; the HEMT
    contribution is divided by the paramp gain.
    """
    lam = chain.insertion_loss
    g0 = u.db_to_lin(chain.paramp_gain)
    if not g0 > 0:
        raise ValueError("paramp gain must be > 0 (linear)")
    terms = {
        "source": chain.source_noise,
        "stage": (1 - lam) / lam * chain.stage_temp,
        "paramp": chain.paramp_noise / lam,
        "hemt": chain.hemt_temp / (lam * float(g0)),
    }
    return NoiseReferral(float(sum(terms.values())), terms)


def solve_insertion_loss(chain: NoiseChain, t_in: float) -> float:
    """Linear lambda that makes the chain's input-referred noise equal ``t_in``.

    The other fields of ``chain`` are used as given; its own
    ``insertion_loss`` is ignored.
    """
    g0 = float(u.db_to_lin(chain.paramp_gain))
    num = chain.stage_temp + chain.paramp_noise + chain.hemt_temp / g0
    den = t_in - chain.source_noise + chain.stage_temp
    if den <= 0:
        raise ValueError(f"T_in={t_in} K is below what any loss allows (no positive solution)")
    lam = num / den
    if not 0 < lam <= 1:
        raise ValueError(f"solved transmission {lam:.4g} outside (0, 1]: "
                         "inputs are inconsistent with a passive loss")
    return float(lam)
