import pytest

from samples import DEVICE, NO_PAD
from parampkit.config import ConfigError, parse_config, parse_config_text, parse_quantity
from parampkit.dimer import design_check


def test_device_config_parses_with_units():
    cfg = parse_config_text(DEVICE)
    d = cfg.dimer
    assert d.left.frequency == 8.31
    assert d.right.frequency == pytest.approx(8.31, abs=1e-12)
    assert d.right.kerr == pytest.approx(-2.0, abs=1e-12)
    assert d.external_coupling == pytest.approx(60.0)
    assert cfg.strip.inductance == pytest.approx(4.2035, abs=1e-3)
    assert cfg.chain.stage_temp == pytest.approx(0.015)
    assert cfg.chain.insertion_loss_db == pytest.approx(1.8)
    assert cfg.kappa_table(0.25) == pytest.approx((57.7 + 50) / 2)
    assert not design_check(d).flags
    assert len(cfg.digest) == 64


def test_no_pad_device_is_flagged():
    cfg = parse_config_text(NO_PAD)
    assert cfg.film is None and cfg.chain is None
    assert design_check(cfg.dimer).flags


def test_empty_file(tmp_path):
    p = tmp_path / "empty.cfg"
    p.write_text("")
    with pytest.raises(ConfigError, match="no sections"):
        parse_config(p)


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError, match="cannot read"):
        parse_config(tmp_path / "nope.cfg")


def test_unknown_key_and_section():
    with pytest.raises(ConfigError, match=r"\[dimer\] hoping: unknown key"):
        parse_config_text(NO_PAD.replace("hopping", "hoping"))
    with pytest.raises(ConfigError, match=r"unknown section \[pump\]"):
        parse_config_text("[pump]\npower = 1\n")


def test_bad_units_and_values():
    with pytest.raises(ConfigError, match="unit 'mT' not allowed"):
        parse_config_text(NO_PAD.replace("hopping = 341", "hopping = 341 mT"))
    with pytest.raises(ConfigError, match="cannot read a number"):
        parse_config_text(NO_PAD.replace("341", "many"))
    with pytest.raises(ConfigError, match="resonator.left"):
        parse_config_text(NO_PAD.replace("frequency = 9.21", "frequency = -9.21"))


def test_dimer_needs_all_parts():
    with pytest.raises(ConfigError, match=r"\[resonator.right\] missing"):
        parse_config_text(NO_PAD.split("[resonator.right]")[0])


def test_strip_without_gap():
    with pytest.raises(ConfigError, match="sheet_inductance missing"):
        parse_config_text("[strip]\nwidth = 0.2\nlength = 7\n")


def test_need():
    cfg = parse_config_text(NO_PAD)
    assert cfg.need("dimer") is cfg
    with pytest.raises(ConfigError, match="chain"):
        cfg.need("dimer", "chain")


def test_parse_quantity():
    from parampkit.config import _RATE
    assert parse_quantity("0.1 GHz", _RATE, "x") == pytest.approx(100.0)
    assert parse_quantity("-2e3", _RATE, "x") == -2000.0
