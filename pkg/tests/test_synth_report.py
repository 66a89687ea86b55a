import io
import json

import numpy as np
import pytest

from parampkit.report import (EXIT_ERROR, EXIT_OK, EXIT_WARN, SCHEMA_TAG, RunReport, TableError,
                              json_text, read_table, table_text)
from parampkit.synth import DEFAULTS, KINDS, SynthError, synth


def _table(text, cols):
    import csv
    rows = list(csv.reader(io.StringIO(text)))
    idx = [rows[0].index(c) for c in cols]
    return [np.array([float(r[i]) for r in rows[1:]]) for i in idx]


@pytest.mark.parametrize("kind", KINDS)
def test_synth_deterministic(kind):
    assert synth(kind, {"noise" if kind != "psd" else "noise_db": 0.01}, seed=4) == \
        synth(kind, {"noise" if kind != "psd" else "noise_db": 0.01}, seed=4)


def test_synth_seed_changes_noise():
    assert synth("lorentzian", {"noise": 0.01}, 1) != synth("lorentzian", {"noise": 0.01}, 2)


def test_synth_rejects_unknown():
    with pytest.raises(SynthError, match="unknown kind"):
        synth("sine")
    with pytest.raises(SynthError, match="unknown parameter"):
        synth("circle", {"q": 1})


def test_synth_lorentzian_round_trip():
    from parampkit.fitting import lorentzian_fit
    f, g = _table(synth("lorentzian")["gain.csv"], ["freq_GHz", "gain_dB"])
    fit = lorentzian_fit(f, g)
    assert fit.g0_db == pytest.approx(20.0, abs=1e-8)
    assert fit.bw * 1e3 == pytest.approx(2.25, rel=1e-8)


def test_synth_psd_round_trip():
    from parampkit.noise import PSDTrace, psd_to_input_temperature
    f, p = _table(synth("psd")["psd.csv"], ["offset_Hz", "psd_dBm_per_Hz"])
    r = psd_to_input_temperature(PSDTrace(f, p, -120.0, 8.193))
    assert r.floor == pytest.approx(4.0, rel=1e-9)


def test_synth_circle_round_trip():
    from parampkit.fitting import ReflectionTrace, circle_fit
    f, re, im = _table(synth("circle")["circle.csv"], ["freq_GHz", "re_s11", "im_s11"])
    r = circle_fit(ReflectionTrace(f, re + 1j * im))
    assert r.q_i == pytest.approx(1e5, rel=1e-2)
    assert r.q_c == pytest.approx(1e3, rel=1e-2)


def test_synth_field_round_trip():
    from parampkit.field import fit_critical_field
    b, f = _table(synth("field-sweep")["field.csv"], ["b_par_T", "freq_GHz"])
    assert fit_critical_field(b, f).critical_field == pytest.approx(3.0, rel=1e-6)


def test_synth_fluorescence_round_trip():
    from parampkit.fitting import ReflectionTrace, fluorescence_fit, rabi_attenuation_fit
    files = synth("fluorescence")
    p = DEFAULTS["fluorescence"]
    powers, rabis = [], []
    for e in json.loads(files["manifest.json"]):
        f, re, im = _table(files[e["trace"]], ["freq_GHz", "re_s11", "im_s11"])
        fit = fluorescence_fit(ReflectionTrace(f, re + 1j * im), p["f_ge"], p["kappa"], p["gamma"])
        powers.append(e["P_RT_dBm"])
        rabis.append(fit.rabi)
    att = rabi_attenuation_fit(np.array(powers), np.array(rabis), p["f_ge"], p["kappa"] + p["gamma"])
    assert att.attenuation_db == pytest.approx(-89.3, abs=1e-6)


def test_table_round_trip(tmp_path):
    p = tmp_path / "t.csv"
    p.write_text("# comment\n" + table_text(["a", "b"], [(0.1, 1), (1 / 3, 2)]))
    t = read_table(p, ["b", "a"])
    assert t["a"][1] == 1 / 3
    with pytest.raises(TableError, match="missing column"):
        read_table(p, ["c"])
    p.write_text("a,b\n1,x\n")
    with pytest.raises(TableError, match="line 2"):
        read_table(p, ["a", "b"])
    p.write_text("a,b\n")
    with pytest.raises(TableError, match="no data"):
        read_table(p, ["a"])


def test_json_text_stable():
    doc = {"b": np.float64(np.inf), "a": [np.int64(1), np.bool_(True), np.nan]}
    assert json_text(doc) == '{\n  "a": [\n    1,\n    true,\n    "nan"\n  ],\n  "b": "inf"\n}\n'


def test_run_report(tmp_path):
    rep = RunReport("demo", ["demo"])
    assert rep.exit_code == EXIT_OK
    rep.add_table("t", ["x"], [(1.0,)])
    rep.warnings.append("w")
    assert rep.exit_code == EXIT_WARN
    written = rep.emit(tmp_path)
    assert sorted(p.name for p in written) == ["demo.json", "t.csv"]
    doc = json.loads((tmp_path / "demo.json").read_text())
    assert doc["schema"] == SCHEMA_TAG
    rep.errors.append("e")
    assert rep.exit_code == EXIT_ERROR
    rep.emit(tmp_path / "j", "json")
    assert "tables" in json.loads((tmp_path / "j" / "demo.json").read_text())
