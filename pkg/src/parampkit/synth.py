"""Deterministic synthetic traces from the package's forward models.

Each generator returns ``{filename: text}`` so callers can write them or
compare them directly.  Noise is Gaussian and drawn from
``numpy.random.default_rng(seed)``.
"""

from __future__ import annotations

import json

import numpy as np

from .field import FieldModel, freq_vs_field
from .fitting import (fluorescence_s11, loaded_q, lorentzian_db, rabi_from_power,
                      reflection_model)
from .noise import synth_psd
from .report import table_text

KINDS = ("circle", "lorentzian", "fluorescence", "psd", "field-sweep", "compensation")

DEFAULTS = {
    "circle": dict(f_r=8.3, q_i=1e5, q_c=1e3, phi=0.0, amp=1.0, alpha=0.0,
                   span=10.0, points=201, noise=0.0),
    "lorentzian": dict(g0_db=20.0, bw=2.25, center=8.38, baseline_db=0.0,
                       span=10.0, points=201, noise=0.0),
    "fluorescence": dict(f_ge=8.287, kappa=0.828, gamma=0.155, attenuation=-89.3,
                         p_min=-60.0, p_max=-40.0, powers=9, span=5.0, points=201,
                         noise=0.0),
    "psd": dict(t_in=4.0, chain_gain_db=70.0, pilot_dbm=-120.0, pilot_ghz=8.193,
                bins=201, bin_hz=1e3, noise_db=0.0),
    "field-sweep": dict(critical_field=3.0, f0=8.31, b_min=0.0, b_max=1.0, points=21,
                        noise=0.0),
    "compensation": dict(slope=1.0, intercept=0.0, b_min=0.1, b_max=0.9, sweeps=5,
                         half_span=2.0, points=11, curvature=-0.05, noise=0.0),
}


class SynthError(ValueError):
    pass


def _params(kind, params):
    if kind not in KINDS:
        raise SynthError(f"unknown kind {kind!r}; choose from {', '.join(KINDS)}")
    p = dict(DEFAULTS[kind])
    for k, v in (params or {}).items():
        if k not in p:
            raise SynthError(f"{kind}: unknown parameter {k!r} (known: {', '.join(p)})")
        p[k] = float(v)
    for k in ("points", "powers", "bins", "sweeps"):
        if k in p:
            p[k] = int(p[k])
    return p


def synth(kind: str, params=None, seed: int = 0) -> dict:
    """Generate the files of one synthetic dataset."""
    p = _params(kind, params)
    rng = np.random.default_rng(seed)
    return _GEN[kind](p, rng)


def _circle(p, rng):
    ql = loaded_q(p["q_i"], p["q_c"], p["phi"])
    half = p["span"] * p["f_r"] / ql / 2
    f = np.linspace(p["f_r"] - half, p["f_r"] + half, p["points"])
    z = reflection_model(f, p["f_r"], ql, p["q_c"], p["phi"], p["amp"], p["alpha"])
    if p["noise"]:
        z = z + p["noise"] * (rng.standard_normal(f.size) + 1j * rng.standard_normal(f.size))
    return {"circle.csv": table_text(["freq_GHz", "re_s11", "im_s11"], zip(f, z.real, z.imag))}


def _lorentzian(p, rng):
    half = p["span"] * p["bw"] * 1e-3 / 2
    f = np.linspace(p["center"] - half, p["center"] + half, p["points"])
    g = lorentzian_db(f, p["g0_db"], p["bw"] * 1e-3, p["center"], p["baseline_db"])
    if p["noise"]:
        lin = 10 ** (g / 10) * (1 + p["noise"] * rng.standard_normal(f.size))
        g = 10 * np.log10(np.clip(lin, 1e-12, None))
    return {"gain.csv": table_text(["freq_GHz", "gain_dB"], zip(f, g))}


def _fluorescence(p, rng):
    decay = p["kappa"] + p["gamma"]
    half = p["span"] * decay * 1e-3 / 2
    f = np.linspace(p["f_ge"] - half, p["f_ge"] + half, p["points"])
    out, manifest = {}, []
    for k, prt in enumerate(np.linspace(p["p_min"], p["p_max"], p["powers"])):
        rabi = rabi_from_power(prt, p["attenuation"], p["f_ge"], decay)
        z = fluorescence_s11(f, p["f_ge"], p["kappa"], p["gamma"], rabi)
        if p["noise"]:
            z = z + p["noise"] * (rng.standard_normal(f.size) + 1j * rng.standard_normal(f.size))
        name = f"fluor_{k:03d}.csv"
        out[name] = table_text(["freq_GHz", "re_s11", "im_s11"], zip(f, z.real, z.imag))
        manifest.append({"trace": name, "P_RT_dBm": float(prt)})
    out["manifest.json"] = json.dumps(manifest, indent=2) + "\n"
    return out


def _psd(p, rng):
    offs = (np.arange(p["bins"]) - p["bins"] // 2) * p["bin_hz"]
    tr = synth_psd(offs, p["t_in"], p["chain_gain_db"], p["pilot_dbm"], p["pilot_ghz"],
                   noise_db=p["noise_db"], rng=rng)
    return {"psd.csv": table_text(["offset_Hz", "psd_dBm_per_Hz"], zip(tr.freqs, tr.psd))}


def _field_sweep(p, rng):
    b = np.linspace(p["b_min"], p["b_max"], p["points"])
    f = freq_vs_field(FieldModel(p["critical_field"], zero_field_frequency=p["f0"]), b)
    if p["noise"]:
        f = f * (1 + p["noise"] * rng.standard_normal(b.size))
    return {"field.csv": table_text(["b_par_T", "freq_GHz"], zip(b, f))}


def _compensation(p, rng):
    rows = []
    for bpar in np.linspace(p["b_min"], p["b_max"], p["sweeps"]):
        vertex = p["intercept"] + p["slope"] * bpar  # mT
        x = vertex + np.linspace(-p["half_span"], p["half_span"], p["points"])
        y = p["curvature"] * (x - vertex) ** 2
        if p["noise"]:
            y = y + p["noise"] * rng.standard_normal(x.size)
        rows += [(bpar, xi, yi) for xi, yi in zip(x, y)]
    return {"compensation.csv": table_text(["b_par_T", "b_perp_mT", "dphase_rad"], rows)}


_GEN = {"circle": _circle, "lorentzian": _lorentzian, "fluorescence": _fluorescence,
        "psd": _psd, "field-sweep": _field_sweep, "compensation": _compensation}
