"""Device files shared by the config and CLI tests."""

DEVICE = """\
[film]
resistivity = 830 uohm*cm
thickness = 40 nm
gap = 362 ueV

[strip]
width = 0.2
length = 7 um
critical_current = 14.4 uA

[resonator.left]
frequency = 8.31 GHz
kerr = -2 kHz

[resonator.right]
frequency = 8310 MHz
kerr = -2000 Hz

[dimer]
hopping = 100 MHz
kappa = 0.06 GHz

[chain]
insertion_loss_db = 1.8
stage_temp = 15 mK
hemt_temp = 4 K
paramp_gain = 20
paramp_noise = 0.2032
source_noise = 15 mK

[field]
critical_field = 3 T
zero_field_frequency = 8.31
kappa_table = 0:57.7, 0.5:50, 1.0:40
"""

NO_PAD = """\
[resonator.left]
frequency = 9.21
kerr = -2

[resonator.right]
frequency = 8.52
kerr = -2

[dimer]
hopping = 341
kappa = 107.5
"""


def make_data(d):
    """Write a device, synthetic traces and a calibration table into ``d``."""
    from parampkit.cli import main

    d.mkdir(parents=True, exist_ok=True)
    (d / "dev.cfg").write_text(DEVICE)
    (d / "nopad.cfg").write_text(NO_PAD)
    for kind in ("circle", "lorentzian", "fluorescence", "field-sweep", "compensation"):
        assert main(["synth", kind, "--seed", "1", "--out", str(d / kind)]) == 0
    assert main(["synth", "psd", "--out", str(d / "psd_off")]) == 0
    assert main(["synth", "psd", "--param", "t_in=0.4", "--out", str(d / "psd_on")]) == 0
    (d / "cal.csv").write_text("freq_GHz,att_dB,sigma_dB\n8.0,-88.5,2\n8.287,-89.3,2\n8.5,-90,2\n")
    return d


def commands(d):
    """One representative invocation per subcommand (without --out)."""
    cfg = ["--config", str(d / "dev.cfg")]
    return {
        "design": ["design", *cfg, "--numeric-kerr"],
        "hybridize": ["hybridize", "--modes", "8.41", "8.21", "23.1", "34.6"],
        "gain": ["gain", *cfg, "--pump-freq", "8.28", "--g0", "15"],
        "saturate": ["saturate", *cfg, "--pump-freq", "8.28", "--g0", "15"],
        "opmap": ["opmap", *cfg, "--pfreq", "8.26:8.28:3", "--ppow", "-76:-70:4"],
        "field": ["field", *cfg, "--data", str(d / "field-sweep" / "field.csv")],
        "align": ["align", "--data", str(d / "compensation" / "compensation.csv")],
        "noise": ["noise", *cfg, "--psd-on", str(d / "psd_on" / "psd.csv"),
                  "--psd-off", str(d / "psd_off" / "psd.csv"),
                  "--pilot-dbm", "-120", "--pilot-ghz", "8.193"],
        "fit-circle": ["fit-circle", "--trace", str(d / "circle" / "circle.csv"), "--fano", "0.8:1.2"],
        "fit-gain": ["fit-gain", "--trace", str(d / "lorentzian" / "gain.csv")],
        "fit-fluorescence": ["fit-fluorescence", "--manifest", str(d / "fluorescence" / "manifest.json"),
                             "--f-ge", "8.287", "--kappa", "0.828", "--gamma", "0.155"],
        "calibrate-attenuation": ["calibrate-attenuation", "--data", str(d / "cal.csv"),
                                  "--at", "8.287", "8.6"],
        "synth": ["synth", "lorentzian", "--param", "noise=0.01", "--seed", "3"],
    }


def snapshot(path):
    return {p.relative_to(path).as_posix(): p.read_bytes()
            for p in sorted(path.rglob("*")) if p.is_file()}
