import json

import pytest

from samples import NO_PAD, commands, make_data, snapshot
from parampkit.cli import main
from parampkit.report import SCHEMA_TAG


@pytest.fixture(scope="module")
def data(tmp_path_factory):
    return make_data(tmp_path_factory.mktemp("data"))


def run(argv, out):
    code = main([*argv, "--out", str(out)])
    doc = json.loads((out / f"{argv[0]}.json").read_text())
    return code, doc


@pytest.mark.parametrize("name", ["hybridize", "field", "align", "noise", "fit-circle",
                                  "fit-gain", "fit-fluorescence", "calibrate-attenuation", "synth"])
def test_subcommand_byte_identical_rerun(data, tmp_path, name):
    argv = commands(data)[name]
    c1, doc = run(argv, tmp_path / "a")
    c2, _ = run(argv, tmp_path / "b")
    assert c1 == c2
    assert not doc["errors"], doc["errors"]
    assert doc["schema"] == SCHEMA_TAG
    assert snapshot(tmp_path / "a") == snapshot(tmp_path / "b")


def test_report_merges(data, tmp_path):
    cmds = commands(data)
    run(cmds["fit-gain"], tmp_path)
    run(cmds["hybridize"], tmp_path)
    code, doc = run(["report", str(tmp_path / "fit-gain.json"), str(tmp_path / "hybridize.json")],
                    tmp_path / "r")
    assert code == 0
    assert doc["summary"]["fit-gain"]["g0_db"] == pytest.approx(20.0, abs=1e-6)
    assert (tmp_path / "r" / "summary.csv").read_text().startswith("command,key,value\n")


def test_hybridize_measured_modes(tmp_path):
    code, doc = run(["hybridize", "--modes", "8.41", "8.21", "23.1", "34.6"], tmp_path)
    s = doc["summary"]
    assert code == 0
    assert s["freq_plus_GHz"] == pytest.approx(8.41, rel=1e-9)
    assert s["kappa_minus_MHz"] == pytest.approx(34.6, rel=1e-9)


def test_noise_outputs(data, tmp_path):
    code, doc = run(commands(data)["noise"], tmp_path)
    s = doc["summary"]
    assert s["delta_snr_db"] == pytest.approx(10.0, abs=1e-9)
    assert s["floor_off_K"] == pytest.approx(4.0, rel=1e-9)
    assert s["quantum_limit"]["vacuum"] == 0.5
    head = (tmp_path / "noise_on.csv").read_text().splitlines()[0]
    assert head == "offset_Hz,t_in_K,n_in"


def test_gain_schema(data, tmp_path):
    code, doc = run(commands(data)["gain"], tmp_path)
    assert (tmp_path / "gain.csv").read_text().startswith("freq_GHz,gain_dB\n")
    assert doc["summary"]["g0_db"] == pytest.approx(15.0, abs=0.2)


def test_out_dir_not_echoed(data, tmp_path):
    _, doc = run(commands(data)["fit-gain"], tmp_path)
    assert str(tmp_path) not in json.dumps(doc["argv"])
    assert "<out>" in doc["argv"]


def test_warning_exit_code(data, tmp_path):
    code, doc = run(["design", "--config", str(data / "nopad.cfg")], tmp_path)
    assert code == 2
    assert doc["warnings"]


def test_error_exit_code(data, tmp_path):
    bad = data / "bad.cfg"
    bad.write_text(NO_PAD.replace("hopping", "hoping"))
    code, doc = run(["design", "--config", str(bad)], tmp_path)
    assert code == 1
    assert "unknown key" in doc["errors"][0]
    code, doc = run(["fit-gain", "--trace", str(data / "missing.csv")], tmp_path / "x")
    assert code == 1
    assert "cannot read" in doc["errors"][0]


def test_extrapolation_warns(data, tmp_path):
    code, doc = run(commands(data)["calibrate-attenuation"], tmp_path)
    assert code == 2
    assert any("8.6 GHz" in w for w in doc["warnings"])


def test_unwritable_output(data, tmp_path, capsys):
    blocker = tmp_path / "file"
    blocker.write_text("")
    assert main([*commands(data)["fit-gain"], "--out", str(blocker / "sub")]) == 1
    assert "not writable" in capsys.readouterr().err


def test_json_format(data, tmp_path):
    main([*commands(data)["fit-gain"], "--format", "json", "--out", str(tmp_path)])
    assert [p.name for p in tmp_path.iterdir()] == ["fit-gain.json"]
