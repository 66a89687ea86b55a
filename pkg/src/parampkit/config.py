"""Device configuration files.

INI syntax.  Every value is a number in the key's canonical unit, or a
number followed by a unit from the key's dimension (``8.29 GHz``,
``99 MHz``, ``-2 kHz``).  Unknown sections and keys are rejected.

    [film]            resistivity (uohm*cm), thickness (nm), gap (ueV)
    [strip]           width, length (um), sheet_inductance (nH), critical_current (uA)
    [resonator.left]  frequency (GHz), kerr (kHz), pad_inductance (nH)
    [resonator.right] same keys
    [dimer]           hopping, kappa, gamma_plus, gamma_minus (MHz)
    [chain]           insertion_loss_db (dB), stage_temp, hemt_temp, paramp_noise,
                      source_noise (K), hemt_gain, paramp_gain (dB)
    [field]           critical_field (T), zero_field_gap (ueV),
                      zero_field_frequency (GHz), kappa_table ("B:kappa, ...", T and MHz)
"""

from __future__ import annotations

import configparser
import hashlib
import re
from dataclasses import dataclass
from pathlib import Path

from .dimer import DimerSpec, FilmSpec, ResonatorSpec, StripSpec, sheet_inductance
from .field import FieldModel, KappaTable
from .noise import NoiseChain


class ConfigError(ValueError):
    pass


_FREQ = {"GHz": 1.0, "MHz": 1e-3, "kHz": 1e-6, "Hz": 1e-9}
_RATE = {"GHz": 1e3, "MHz": 1.0, "kHz": 1e-3, "Hz": 1e-6}
_KERR = {"MHz": 1e3, "kHz": 1.0, "Hz": 1e-3}
_IND = {"nH": 1.0, "pH": 1e-3, "uH": 1e3, "H": 1e9}
_LEN = {"um": 1.0, "nm": 1e-3, "mm": 1e3}
_THICK = {"nm": 1.0, "um": 1e3}
_TEMP = {"K": 1.0, "mK": 1e-3}
_FIELD = {"T": 1.0, "mT": 1e-3}
_ENERGY = {"ueV": 1.0, "meV": 1e3}
_RHO = {"uohm*cm": 1.0, "uOhm*cm": 1.0, "uOhm.cm": 1.0}
_CURRENT = {"uA": 1.0, "nA": 1e-3, "mA": 1e3}
_DB = {"dB": 1.0}

SCHEMA = {
    "film": {"resistivity": _RHO, "thickness": _THICK, "gap": _ENERGY},
    "strip": {"width": _LEN, "length": _LEN, "sheet_inductance": _IND,
              "critical_current": _CURRENT},
    "resonator": {"frequency": _FREQ, "kerr": _KERR, "pad_inductance": _IND},
    "dimer": {"hopping": _RATE, "kappa": _RATE, "gamma_plus": _RATE, "gamma_minus": _RATE},
    "chain": {"insertion_loss_db": _DB, "stage_temp": _TEMP, "hemt_temp": _TEMP,
              "hemt_gain": _DB, "paramp_gain": _DB, "paramp_noise": _TEMP,
              "source_noise": _TEMP},
    "field": {"critical_field": _FIELD, "zero_field_gap": _ENERGY,
              "zero_field_frequency": _FREQ, "kappa_table": None},
}
SECTIONS = ("film", "strip", "resonator.left", "resonator.right", "dimer", "chain", "field")

_NUM = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*([^\s\d].*)?$")


def parse_quantity(text: str, units: dict, where: str) -> float:
    m = _NUM.match(text)
    if not m:
        raise ConfigError(f"{where}: cannot read a number from {text!r}")
    value, unit = float(m.group(1)), (m.group(2) or "").strip()
    if not unit:
        return value
    if unit not in units:
        raise ConfigError(f"{where}: unit {unit!r} not allowed, use one of {sorted(units)}")
    return value * units[unit]


@dataclass(frozen=True)
class DeviceConfig:
    film: FilmSpec | None
    strip: StripSpec | None
    dimer: DimerSpec | None
    chain: NoiseChain | None
    field: FieldModel | None
    kappa_table: KappaTable | None
    source: str
    digest: str

    def need(self, *names):
        """Raise unless every named section was configured."""
        missing = [n for n in names if getattr(self, n) is None]
        if missing:
            raise ConfigError(f"{self.source}: missing section(s) {', '.join(missing)}")
        return self


def _section_values(parser, name):
    kind = "resonator" if name.startswith("resonator.") else name
    allowed = SCHEMA[kind]
    out = {}
    for key, raw in parser.items(name):
        where = f"{parser.source}: [{name}] {key}"
        if key not in allowed:
            raise ConfigError(f"{where}: unknown key (allowed: {', '.join(allowed)})")
        if allowed[key] is None:
            out[key] = raw
        else:
            out[key] = parse_quantity(raw, allowed[key], where)
    return out


def _kappa_table(text: str, where: str) -> KappaTable:
    pairs = [p for p in re.split(r"[,;\n]", text) if p.strip()]
    if not pairs:
        raise ConfigError(f"{where}: empty kappa_table")
    b, k = [], []
    for p in pairs:
        try:
            x, y = p.split(":")
            b.append(float(x))
            k.append(float(y))
        except ValueError as exc:
            raise ConfigError(f"{where}: bad entry {p.strip()!r}, expected B_T:kappa_MHz") from exc
    try:
        return KappaTable(b, k)
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from exc


def parse_config_text(text: str, source: str = "<string>") -> DeviceConfig:
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    parser.optionxform = str  # keys are case-sensitive
    parser.source = source
    try:
        parser.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigError(f"{source}: {exc}") from exc
    if not parser.sections():
        raise ConfigError(f"{source}: no sections found")
    for name in parser.sections():
        if name not in SECTIONS:
            raise ConfigError(f"{source}: unknown section [{name}]")
    vals = {name: _section_values(parser, name) for name in parser.sections()}

    def build(what, fn, *args, **kw):
        try:
            return fn(*args, **kw)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"{source}: [{what}] {exc}") from exc

    film = build("film", FilmSpec, **vals["film"]) if "film" in vals else None
    strip = None
    if "strip" in vals:
        s = dict(vals["strip"])
        if "sheet_inductance" not in s:
            if film is None or film.gap is None:
                raise ConfigError(f"{source}: [strip] sheet_inductance missing and no film gap to derive it")
            s["sheet_inductance"] = sheet_inductance(film)
        strip = build("strip", StripSpec, **s)

    dimer = None
    res = [n for n in ("resonator.left", "resonator.right") if n in vals]
    if "dimer" in vals or res:
        for n in ("resonator.left", "resonator.right", "dimer"):
            if n not in vals:
                raise ConfigError(f"{source}: a dimer needs [resonator.left], [resonator.right] and [dimer]; [{n}] missing")
        left = build("resonator.left", ResonatorSpec, strip=strip, **vals["resonator.left"])
        right = build("resonator.right", ResonatorSpec, strip=strip, **vals["resonator.right"])
        d = vals["dimer"]
        for req in ("hopping", "kappa"):
            if req not in d:
                raise ConfigError(f"{source}: [dimer] {req} is required")
        dimer = build("dimer", DimerSpec, left, right, d["hopping"], d["kappa"],
                      d.get("gamma_plus", 0.0), d.get("gamma_minus", 0.0))

    chain = None
    if "chain" in vals:
        c = dict(vals["chain"])
        loss_db = c.pop("insertion_loss_db", 0.0)
        chain = build("chain", NoiseChain, insertion_loss=10 ** (-loss_db / 10), **c)

    fmodel = table = None
    if "field" in vals:
        f = dict(vals["field"])
        raw = f.pop("kappa_table", None)
        if raw is not None:
            table = _kappa_table(raw, f"{source}: [field] kappa_table")
        if "critical_field" in f:
            fmodel = build("field", FieldModel, **f)
        elif f:
            raise ConfigError(f"{source}: [field] critical_field is required")

    digest = hashlib.sha256(text.encode()).hexdigest()
    return DeviceConfig(film, strip, dimer, chain, fmodel, table, source, digest)


def parse_config(path) -> DeviceConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config_text(text, str(path))
