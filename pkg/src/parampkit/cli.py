"""``parampkit`` command line.

Every subcommand writes ``<command>.json`` (schema tag, echoed arguments,
input hashes, scalar summary, warnings) plus its tables as CSV into
``--out``.  Exit status: 0 ok, 2 finished with warnings, 1 failed.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .amplifier import (CompressionError, compression_point, gain_profile, kerr_shift_slopes,
                        operating_point, operational_region, stark_shifted_modes)
from .config import ConfigError, parse_config
from .dimer import (dehybridize, design_check, hybridize, jj_array_kerr, sheet_inductance)
from .engine import PumpDrive, SteadyStateError
from .field import CompensationSweep, compensation_analysis, fit_critical_field, freq_vs_field
from .fitting import (FitError, ReflectionTrace, attenuation_vs_frequency, circle_fit,
                      fluorescence_fit, lorentzian_fit, rabi_attenuation_fit)
from .noise import (PSDTrace, calibration_band, delta_snr, input_referred_photons,
                    psd_to_input_temperature, quantum_limit, refer_through_attenuator,
                    solve_insertion_loss)
from .report import RunReport, TableError, read_table
from .synth import KINDS, SynthError, synth


def frange(text: str) -> np.ndarray:
    """``a:b:n`` -> n points from a to b inclusive."""
    try:
        a, b, n = text.split(":")
        n = int(n)
        if n < 1:
            raise ValueError
        return np.linspace(float(a), float(b), n)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected a:b:n, got {text!r}") from exc


def pair(text: str):
    try:
        a, b = text.split(":")
        return float(a), float(b)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected lo:hi, got {text!r}") from exc


def keyval(text: str):
    if "=" not in text:
        raise argparse.ArgumentTypeError(f"expected key=value, got {text!r}")
    k, v = text.split("=", 1)
    return k.strip(), v.strip()


def _trace(path, rep, name="trace") -> ReflectionTrace:
    t = read_table(path, ["freq_GHz", "re_s11", "im_s11"])
    rep.add_input(name, path)
    return ReflectionTrace(t["freq_GHz"], t["re_s11"] + 1j * t["im_s11"])


def _dimer(args, rep):
    if not args.config:
        raise ConfigError("--config is required for this command")
    cfg = parse_config(args.config)
    rep.add_input("config", args.config)
    return cfg.need("dimer")


# ---------------------------------------------------------------------------
# subcommands


def cmd_design(args, rep):
    cfg = parse_config(args.config)
    rep.add_input("config", args.config)
    s = rep.summary
    if cfg.film is not None:
        s["sheet_resistance_ohm"] = cfg.film.sheet_resistance
        if cfg.film.gap is not None:
            s["sheet_inductance_nH"] = sheet_inductance(cfg.film)
    if cfg.strip is not None:
        s["strip_inductance_nH"] = cfg.strip.inductance
    if cfg.dimer is not None:
        d = cfg.dimer
        rpt = design_check(d)
        m = rpt.modes
        s["modes"] = dict(freq_plus_GHz=m.freq_plus, freq_minus_GHz=m.freq_minus,
                          kappa_plus_MHz=m.kappa_plus, kappa_minus_MHz=m.kappa_minus,
                          kappa_eq_MHz=m.kappa_eq, asymmetry=m.asymmetry,
                          predicted_product_MHz=m.kappa_eq)
        s["kerr_slopes_kHz"] = kerr_shift_slopes(d, m).as_dict() if args.numeric_kerr else \
            {k: (d.left.kerr + d.right.kerr) / 4 for k in ("K++", "K--", "K+-", "K-+")}
        for side, res in (("left", d.left), ("right", d.right)):
            if res.strip is not None and res.pad_inductance is not None:
                s[f"{side}_participation"] = res.participation
            if res.strip is not None and res.strip.critical_current is not None:
                s[f"{side}_jj_array_kerr_kHz"] = jj_array_kerr(res.strip, res.frequency)
        rep.warnings += list(rpt.flags)


def cmd_hybridize(args, rep):
    if args.modes:
        fp, fm, kp, km = args.modes
        gp, gm = args.gamma or (0.0, 0.0)
        d = dehybridize(fp, fm, kp, km, gp, gm)
        rep.summary.update(f_left_GHz=d.left.frequency, f_right_GHz=d.right.frequency,
                           hopping_MHz=d.hopping, kappa_MHz=d.external_coupling)
    else:
        d = _dimer(args, rep).dimer
    m = hybridize(d)
    rep.summary.update(freq_plus_GHz=m.freq_plus, freq_minus_GHz=m.freq_minus,
                       kappa_plus_MHz=m.kappa_plus, kappa_minus_MHz=m.kappa_minus,
                       kappa_eq_MHz=m.kappa_eq, asymmetry=m.asymmetry)


def _drive(args, d):
    if args.pump_power is not None:
        if args.pump_freq is None:
            raise ConfigError("--pump-power needs --pump-freq")
        return PumpDrive(args.pump_freq, args.pump_power)
    return operating_point(d, args.g0, args.pump_freq, args.mode)


def cmd_gain(args, rep):
    d = _dimer(args, rep).dimer
    drive = _drive(args, d)
    prof = gain_profile(d, drive, args.grid, args.mode)
    rep.add_table("gain", ["freq_GHz", "gain_dB"], zip(prof.signal_freqs, prof.gain))
    stark = stark_shifted_modes(d, drive)
    rep.summary.update(pump_freq_GHz=drive.frequency, pump_power_dBm=drive.power,
                       g0_db=prof.fitted_G0, bw_mhz=prof.fitted_BW,
                       center_ghz=prof.fitted_center, product_mhz=prof.product,
                       predicted_product_mhz=hybridize(d).kappa_eq,
                       stark_plus_GHz=stark[0], stark_minus_GHz=stark[1])
    if prof.fit_error:
        rep.warnings.append(f"Lorentzian fit failed: {prof.fit_error}")


def cmd_saturate(args, rep):
    d = _dimer(args, rep).dimer
    drive = _drive(args, d)
    res = compression_point(d, drive, args.signal_freq, p_max=args.p_max)
    rep.add_table("compression", ["p_in_dBm", "gain_dB"], zip(res.powers, res.gains))
    rep.summary.update(pump_freq_GHz=drive.frequency, pump_power_dBm=drive.power,
                       g0_db=res.small_signal_gain, signal_freq_GHz=res.signal_freq,
                       p1db_dbm=res.p1db)


def cmd_opmap(args, rep):
    d = _dimer(args, rep).dimer
    om = operational_region(d, args.pfreq, args.ppow, args.mode, args.ridge)
    rows = []
    for i, fp in enumerate(om.pump_freqs):
        for j, pp in enumerate(om.pump_powers):
            rows.append((fp, pp, om.g0_db[i, j], bool(om.multistable[i, j]), om.branches[i, j]))
    rep.add_table("opmap", ["pfreq_GHz", "ppow_dBm", "g0_dB", "multistable", "branches"], rows)
    rep.summary.update(
        ridge_level_db=om.ridge_level, ridge_connected=om.ridge_connected(),
        tunability_mhz=om.tunability,
        ridge=[dict(pfreq_GHz=f, ppow_dBm=p, center_GHz=c)
               for f, p, c in zip(om.pump_freqs, om.ridge_power, om.ridge_center)],
        boundary_dBm=dict(zip([repr(float(f)) for f in om.pump_freqs], om.boundary)))
    for (i, j), msg in sorted(om.errors.items()):
        rep.warnings.append(f"cell ({om.pump_freqs[i]:g} GHz, {om.pump_powers[j]:g} dBm): {msg}")


def cmd_field(args, rep):
    t = read_table(args.data, ["b_par_T", "freq_GHz"])
    rep.add_input("data", args.data)
    fit = fit_critical_field(t["b_par_T"], t["freq_GHz"])
    model = fit.model
    pred = freq_vs_field(model, t["b_par_T"])
    rep.add_table("field", ["b_par_T", "freq_GHz", "model_GHz"],
                  zip(t["b_par_T"], t["freq_GHz"], pred))
    bmax = float(np.max(np.abs(t["b_par_T"])))
    rep.summary.update(critical_field_T=fit.critical_field,
                       critical_field_stderr_T=fit.stderr["critical_field"],
                       zero_field_frequency_GHz=fit.zero_field_frequency,
                       zero_field_frequency_stderr_GHz=fit.stderr["zero_field_frequency"],
                       residual_norm=fit.residual_norm,
                       model_shift_at_max_field_MHz=fit.shift_at(bmax),
                       max_field_T=bmax)
    if args.config:
        cfg = parse_config(args.config)
        rep.add_input("config", args.config)
        if cfg.kappa_table is not None:
            inside = (t["b_par_T"] >= cfg.kappa_table.fields[0]) & (t["b_par_T"] <= cfg.kappa_table.fields[-1])
            rep.summary["kappa_MHz_at_data"] = [
                float(cfg.kappa_table(b)) if ok else None for b, ok in zip(t["b_par_T"], inside)]


def cmd_align(args, rep):
    t = read_table(args.data, ["b_par_T", "b_perp_mT", "dphase_rad"])
    rep.add_input("data", args.data)
    sweeps = []
    for b in np.unique(t["b_par_T"]):
        m = t["b_par_T"] == b
        order = np.argsort(t["b_perp_mT"][m])
        sweeps.append(CompensationSweep(float(b), t["b_perp_mT"][m][order], t["dphase_rad"][m][order]))
    res = compensation_analysis(sweeps)
    rep.add_table("align", ["b_par_T", "vertex_mT", "curvature", "flagged"],
                  [(v.in_plane_field, v.vertex, v.curvature, v.flagged is not None) for v in res.vertices])
    rep.summary.update(slope_mT_per_T=res.slope, intercept_mT=res.intercept,
                       angle_deg=res.angle_deg)
    rep.warnings += list(res.flags)


def _psd(path, args, rep, name):
    t = read_table(path, ["offset_Hz", "psd_dBm_per_Hz"])
    rep.add_input(name, path)
    return psd_to_input_temperature(
        PSDTrace(t["offset_Hz"], t["psd_dBm_per_Hz"], args.pilot_dbm, args.pilot_ghz),
        args.exclude)


def cmd_noise(args, rep):
    ql = quantum_limit(args.pilot_ghz)
    runs = {"on": _psd(args.psd_on, args, rep, "psd_on")}
    if args.psd_off:
        runs["off"] = _psd(args.psd_off, args, rep, "psd_off")
    for key, r in runs.items():
        keep = r.kept
        n = input_referred_photons(r.temperature[keep], args.pilot_ghz)
        rep.add_table(f"noise_{key}", ["offset_Hz", "t_in_K", "n_in"],
                      zip(r.offsets[keep], r.temperature[keep], n))
        lo, hi = calibration_band(r.floor, args.cal_sigma_db)
        rep.summary[f"floor_{key}_K"] = r.floor
        rep.summary[f"floor_{key}_band_K"] = [float(lo), float(hi)]
        rep.summary[f"n_in_{key}"] = float(input_referred_photons(r.floor, args.pilot_ghz))
        rep.summary[f"chain_gain_{key}_dB"] = r.chain_gain_db
    if "off" in runs:
        rep.summary["delta_snr_db"] = delta_snr(runs["on"].floor, runs["off"].floor)
    rep.summary["quantum_limit"] = dict(temperature_K=ql.temperature, photons=ql.photons,
                                        **ql.components())
    if args.config:
        cfg = parse_config(args.config)
        rep.add_input("config", args.config)
        if cfg.chain is not None:
            ref = refer_through_attenuator(cfg.chain)
            rep.summary["chain_referral"] = dict(total_K=ref.total, **ref.terms)
            try:
                lam = solve_insertion_loss(cfg.chain, runs["on"].floor)
                rep.summary["solved_insertion_loss_db"] = float(-10 * np.log10(lam))
            except ValueError as exc:
                rep.warnings.append(str(exc))


def cmd_fit_circle(args, rep):
    res = circle_fit(_trace(args.trace, rep), args.fano)
    rep.summary.update(f_r_GHz=res.f_r, q_l=res.q_l, q_c=res.q_c, q_i=res.q_i, phi=res.phi,
                       stderr=res.stderr, residual_norm=res.residual_norm,
                       overcoupled=res.overcoupled, q_i_interval=list(res.qi_interval),
                       q_i_is_lower_bound=res.qi_is_lower_bound)


def cmd_fit_gain(args, rep):
    t = read_table(args.trace, ["freq_GHz", "gain_dB"])
    rep.add_input("trace", args.trace)
    fit = lorentzian_fit(t["freq_GHz"], t["gain_dB"])
    rep.summary.update(g0_db=fit.g0_db, bw_mhz=fit.bw * 1e3, center_ghz=fit.center,
                       product_mhz=fit.product * 1e3, baseline_db=fit.baseline_db,
                       residual_norm=fit.residual_norm)


def cmd_fit_fluorescence(args, rep):
    manifest = Path(args.manifest)
    entries = json.loads(manifest.read_text())
    rep.add_input("manifest", manifest)
    rows, powers, rabis = [], [], []
    for k, e in enumerate(entries):
        tr = _trace(manifest.parent / e["trace"], rep, f"trace_{k:03d}")
        fit = fluorescence_fit(tr, args.f_ge, args.kappa, args.gamma)
        rows.append((e["P_RT_dBm"], fit.rabi, fit.stderr))
        powers.append(e["P_RT_dBm"])
        rabis.append(fit.rabi)
    rep.add_table("fluorescence", ["P_RT_dBm", "rabi_MHz", "rabi_stderr_MHz"], rows)
    att = rabi_attenuation_fit(np.array(powers), np.array(rabis), args.f_ge,
                               args.kappa + args.gamma, args.anharmonicity)
    rep.summary.update(attenuation_db=att.attenuation_db, attenuation_stderr_db=att.stderr_db)
    rep.warnings += list(att.warnings)


def cmd_calibrate_attenuation(args, rep):
    cols = ["freq_GHz", "att_dB"]
    t = read_table(args.data, cols)
    rep.add_input("data", args.data)
    sigma = None
    try:
        sigma = read_table(args.data, cols + ["sigma_dB"])["sigma_dB"]
    except TableError:
        pass
    line = attenuation_vs_frequency(t["freq_GHz"], t["att_dB"], sigma)
    rep.summary.update(slope_dB_per_GHz=line.slope, intercept_dB=line.intercept,
                       f_range_GHz=list(line.f_range), residual_norm=line.residual_norm)
    if args.at:
        a, s, ex = line.predict(np.array(args.at))
        rep.add_table("attenuation", ["freq_GHz", "att_dB", "sigma_dB", "extrapolated"],
                      zip(args.at, a, s, ex))
        for f, e in zip(args.at, ex):
            if e:
                rep.warnings.append(f"{f:g} GHz lies outside the calibrated range")


def cmd_synth(args, rep):
    files = synth(args.kind, dict(args.param or []), args.seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name, text in files.items():
        (out / name).write_text(text)
    rep.summary.update(kind=args.kind, seed=args.seed, files=sorted(files))


def cmd_report(args, rep):
    merged = {}
    for path in args.inputs:
        doc = json.loads(Path(path).read_text())
        rep.add_input(Path(path).name, path)
        merged[doc.get("command", Path(path).stem)] = doc.get("summary", {})
        rep.warnings += [f"{doc.get('command')}: {w}" for w in doc.get("warnings", [])]
    rows = []
    for cmd in sorted(merged):
        for key in sorted(merged[cmd]):
            v = merged[cmd][key]
            if isinstance(v, (int, float, str, bool)) or v is None:
                rows.append((cmd, key, v))
    rep.add_table("summary", ["command", "key", "value"], rows)
    rep.summary = merged


# ---------------------------------------------------------------------------


COMMANDS = {
    "design": cmd_design, "hybridize": cmd_hybridize, "gain": cmd_gain,
    "saturate": cmd_saturate, "opmap": cmd_opmap, "field": cmd_field, "align": cmd_align,
    "noise": cmd_noise, "fit-circle": cmd_fit_circle, "fit-gain": cmd_fit_gain,
    "fit-fluorescence": cmd_fit_fluorescence,
    "calibrate-attenuation": cmd_calibrate_attenuation, "synth": cmd_synth,
    "report": cmd_report,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="device configuration (INI)")
    common.add_argument("--out", default=".", help="output directory")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("csv", "json"), default="csv")

    p = argparse.ArgumentParser(prog="parampkit", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"parampkit {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, help_):
        return sub.add_parser(name, parents=[common], help=help_)

    s = add("design", "material numbers, hybrid modes and design-rule flags")
    s.add_argument("--numeric-kerr", action="store_true", help="also cross-check Kerr slopes numerically")

    s = add("hybridize", "bare <-> hybrid parameters")
    s.add_argument("--modes", nargs=4, type=float, metavar=("F_PLUS", "F_MINUS", "K_PLUS", "K_MINUS"),
                   help="measured modes (GHz, GHz, MHz, MHz): invert to bare parameters")
    s.add_argument("--gamma", nargs=2, type=float, metavar=("G_PLUS", "G_MINUS"))

    for name, help_ in (("gain", "small-signal gain profile"), ("saturate", "1-dB compression point")):
        s = add(name, help_)
        s.add_argument("--pump-freq", type=float, help="GHz (default: least-power frequency)")
        s.add_argument("--pump-power", type=float, help="dBm (default: set by --g0)")
        s.add_argument("--g0", type=float, default=20.0, help="target peak gain, dB")
        s.add_argument("--mode", choices=("+", "-"), default="+")
        if name == "gain":
            s.add_argument("--grid", type=frange, help="signal grid fmin:fmax:n (GHz)")
        else:
            s.add_argument("--signal-freq", type=float, help="GHz (default: gain peak)")
            s.add_argument("--p-max", type=float, default=-50.0, help="highest signal power, dBm")

    s = add("opmap", "gain and multistability over a pump grid")
    s.add_argument("--pfreq", type=frange, required=True, help="a:b:n GHz")
    s.add_argument("--ppow", type=frange, required=True, help="c:d:m dBm")
    s.add_argument("--mode", choices=("+", "-"), default="+")
    s.add_argument("--ridge", type=float, default=20.0, help="ridge gain level, dB")

    s = add("field", "critical-field fit of frequency vs in-plane field")
    s.add_argument("--data", required=True, help="CSV b_par_T, freq_GHz")

    s = add("align", "out-of-plane compensation and misalignment angle")
    s.add_argument("--data", required=True, help="CSV b_par_T, b_perp_mT, dphase_rad")

    s = add("noise", "input-referred noise from pilot-calibrated PSDs")
    s.add_argument("--psd-on", required=True)
    s.add_argument("--psd-off")
    s.add_argument("--pilot-dbm", type=float, required=True)
    s.add_argument("--pilot-ghz", type=float, required=True)
    s.add_argument("--exclude", type=int, default=3, help="bins around the pilot left out")
    s.add_argument("--cal-sigma-db", type=float, default=2.0)

    s = add("fit-circle", "Q_i, Q_c from a reflection trace")
    s.add_argument("--trace", required=True)
    s.add_argument("--fano", type=pair, default=(1.0, 1.0), help="lo:hi multiplicative Q_i bounds")

    s = add("fit-gain", "Lorentzian fit of a gain trace")
    s.add_argument("--trace", required=True, help="CSV freq_GHz, gain_dB")

    s = add("fit-fluorescence", "Rabi frequencies and line attenuation")
    s.add_argument("--manifest", required=True, help="JSON list of {trace, P_RT_dBm}")
    s.add_argument("--f-ge", type=float, required=True, help="GHz")
    s.add_argument("--kappa", type=float, required=True, help="MHz")
    s.add_argument("--gamma", type=float, required=True, help="MHz")
    s.add_argument("--anharmonicity", type=float, help="MHz")

    s = add("calibrate-attenuation", "linear attenuation vs frequency")
    s.add_argument("--data", required=True, help="CSV freq_GHz, att_dB[, sigma_dB]")
    s.add_argument("--at", type=float, nargs="*", help="frequencies to predict (GHz)")

    s = add("synth", "synthetic fixtures")
    s.add_argument("kind", choices=KINDS)
    s.add_argument("--param", type=keyval, action="append", help="key=value (repeatable)")

    s = add("report", "merge run summaries")
    s.add_argument("inputs", nargs="+", help="<command>.json files")
    return p


def _echo(argv):
    """Arguments as echoed in the report; the output directory is left out."""
    out, skip = [], False
    for a in argv:
        if skip:
            out.append("<out>")
            skip = False
        elif a == "--out":
            out.append(a)
            skip = True
        elif a.startswith("--out="):
            out.append("--out=<out>")
        else:
            out.append(a)
    return out


_RANGE_FLAGS = ("--pfreq", "--ppow", "--grid")


def _join_negative(argv):
    """Let ``--ppow -80:-60:41`` through argparse, which reads it as an option."""
    out, i = [], 0
    while i < len(argv):
        a = argv[i]
        if a in _RANGE_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-") and ":" in argv[i + 1]:
            out.append(f"{a}={argv[i + 1]}")
            i += 2
            continue
        out.append(a)
        i += 1
    return out


def main(argv=None) -> int:
    argv = _join_negative(list(sys.argv[1:] if argv is None else argv))
    args = build_parser().parse_args(argv)
    rep = RunReport(args.command, _echo(argv))
    try:
        COMMANDS[args.command](args, rep)
    except (ConfigError, TableError, FitError, SteadyStateError, CompressionError,
            SynthError, ValueError, OSError, KeyError, json.JSONDecodeError) as exc:
        rep.errors.append(f"{type(exc).__name__}: {exc}")
    try:
        rep.emit(args.out, args.format)
    except OSError as exc:
        print(f"parampkit: {exc}", file=sys.stderr)
        return 1
    for w in rep.warnings:
        print(f"warning: {w}", file=sys.stderr)
    for e in rep.errors:
        print(f"error: {e}", file=sys.stderr)
    return rep.exit_code


if __name__ == "__main__":
    sys.exit(main())
