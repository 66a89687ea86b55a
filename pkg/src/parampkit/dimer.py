"""Static physics of the coupled-resonator amplifier.

Material parameters to sheet inductance, the junction-array Kerr estimate,
the hybridization of two bare resonators into the dimer modes and its
closed-form inverse, plus the design-rule check.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from . import units as u


@dataclass(frozen=True)
class FilmSpec:
    """Superconducting film.

    Attributes
    ----------
    resistivity : float
        Normal-state resistivity in µΩ·cm.
    thickness : float
        Film thickness in nm.
    gap : float, optional
        Superconducting gap in µeV.  Needed for the sheet inductance.
    """

    resistivity: float
    thickness: float
    gap: float | None = None

    def __post_init__(self):
        if not self.resistivity > 0:
            raise ValueError("resistivity must be > 0")
        if not self.thickness > 0:
            raise ValueError("thickness must be > 0")
        if self.gap is not None and not self.gap > 0:
            raise ValueError("gap must be > 0 when given")

    @property
    def sheet_resistance(self) -> float:
        """Sheet resistance in Ohm per square."""
        return (self.resistivity * 1e-8) / (self.thickness * 1e-9)


@dataclass(frozen=True)
class StripSpec:
    """Nonlinear strip: geometry in µm, L per square in nH, I_c in µA."""

    width: float
    length: float
    sheet_inductance: float
    critical_current: float | None = None

    def __post_init__(self):
        if not (self.width > 0 and self.length > 0):
            raise ValueError("strip width and length must be > 0")
        if not self.sheet_inductance > 0:
            raise ValueError("sheet_inductance must be > 0")
        if self.critical_current is not None and not self.critical_current > 0:
            raise ValueError("critical_current must be > 0")

    @property
    def squares(self) -> float:
        return self.length / self.width

    @property
    def inductance(self) -> float:
        """Strip inductance in nH."""
        return self.squares * self.sheet_inductance


@dataclass(frozen=True)
class ResonatorSpec:
    """One bare resonator: frequency in GHz, pad inductance in nH, Kerr in kHz."""

    frequency: float
    kerr: float = 0.0
    pad_inductance: float | None = None
    strip: StripSpec | None = None

    def __post_init__(self):
        if not self.frequency > 0:
            raise ValueError("resonator frequency must be > 0")
        if self.pad_inductance is not None and self.pad_inductance < 0:
            raise ValueError("pad_inductance must be >= 0")

    @property
    def participation(self) -> float:
        """Inductive participation ratio of the strip."""
        if self.strip is None or self.pad_inductance is None:
            raise ValueError("participation needs both strip and pad_inductance")
        return participation_ratio(self.strip.inductance, self.pad_inductance)


@dataclass(frozen=True)
class DimerSpec:
    """Two coupled resonators with the port attached to the left one.

    ``hopping`` and ``external_coupling`` are J/2pi and kappa/2pi in MHz.
    Internal losses are given per hybrid mode (gamma_plus/minus, MHz).
    """

    left: ResonatorSpec
    right: ResonatorSpec
    hopping: float
    external_coupling: float
    internal_loss_plus: float = 0.0
    internal_loss_minus: float = 0.0

    def __post_init__(self):
        if not self.hopping > 0:
            raise ValueError("hopping must be > 0")
        if not self.external_coupling > 0:
            raise ValueError("external_coupling must be > 0")
        if self.internal_loss_plus < 0 or self.internal_loss_minus < 0:
            raise ValueError("internal losses must be >= 0")

    @classmethod
    def from_values(cls, f_left, f_right, hopping, kappa, kerr=0.0,
                    gamma_plus=0.0, gamma_minus=0.0, kerr_right=None):
        """Shortcut: frequencies in GHz, rates in MHz, Kerr in kHz."""
        kr = kerr if kerr_right is None else kerr_right
        return cls(ResonatorSpec(f_left, kerr), ResonatorSpec(f_right, kr),
                   hopping, kappa, gamma_plus, gamma_minus)

    def with_kerr(self, kerr_left, kerr_right=None) -> "DimerSpec":
        kr = kerr_left if kerr_right is None else kerr_right
        return replace(self, left=replace(self.left, kerr=kerr_left),
                       right=replace(self.right, kerr=kr))

    def scaled_kerr(self, factor) -> "DimerSpec":
        return self.with_kerr(self.left.kerr * factor, self.right.kerr * factor)


@dataclass(frozen=True)
class HybridModes:
    """Dimer normal modes (GHz for frequencies, MHz for linewidths)."""

    freq_plus: float
    freq_minus: float
    kappa_plus: float
    kappa_minus: float
    gamma_plus: float = 0.0
    gamma_minus: float = 0.0

    @property
    def kappa(self) -> float:
        return self.kappa_plus + self.kappa_minus

    @property
    def kappa_eq(self) -> float:
        return kappa_equivalent(self.kappa_plus, self.kappa_minus)

    @property
    def asymmetry(self) -> float:
        return abs(self.kappa_plus - self.kappa_minus) / self.kappa

    @property
    def splitting(self) -> float:
        """omega_+ - omega_- in MHz."""
        return (self.freq_plus - self.freq_minus) * 1e3


# ---------------------------------------------------------------------------
# material


def sheet_inductance(film: FilmSpec) -> float:
    """Mattis-Bardeen kinetic sheet inductance ``R_sq * hbar / (pi * gap)``.

    Returns nH per square.
    """
    if film.gap is None:
        raise ValueError("gap required for the sheet inductance")
    gap_j = film.gap * 1e-6 * u.e
    return film.sheet_resistance * u.hbar / (np.pi * gap_j) * 1e9


def gap_from_sheet_inductance(film: FilmSpec, l_sq: float) -> float:
    """Inverse of :func:`sheet_inductance`: the gap (µeV) giving ``l_sq`` nH/sq."""
    if not l_sq > 0:
        raise ValueError("target sheet inductance must be > 0")
    gap_j = film.sheet_resistance * u.hbar / (np.pi * l_sq * 1e-9)
    return gap_j / u.e * 1e6


def participation_ratio(l_strip: float, l_pads: float) -> float:
    if not (l_strip > 0 and l_pads >= 0):
        raise ValueError("need l_strip > 0 and l_pads >= 0")
    p = l_strip / (l_strip + l_pads)
    if not 0 < p <= 1:
        raise ValueError(f"participation ratio {p} outside (0, 1]")
    return p


def jj_array_kerr(strip: StripSpec, resonance: float) -> float:
    """Self-Kerr (kHz, negative) of the strip modeled as a junction array.

    The junction count is the inductance ratio ``L_strip / L_J`` with
    ``L_J = Phi0 / (2 pi I_c)``; ``resonance`` is the resonator frequency
    in GHz.
    """
    if strip.critical_current is None:
        raise ValueError("critical_current required for the Kerr estimate")
    ic = strip.critical_current * 1e-6
    l_strip = strip.inductance * 1e-9
    l_j = u.phi0 / (2 * np.pi * ic)
    n_j = l_strip / l_j
    if n_j < 1:
        raise ValueError(f"strip is less inductive than one junction (N_J={n_j:.3g})")
    e_j = u.phi0 * ic / (2 * np.pi)
    w_r = 2 * np.pi * resonance * 1e9
    k = -e_j / (8 * u.hbar * n_j**3) * (w_r * l_strip / u.R_Q) ** 2
    return k / (2 * np.pi) / 1e3


# ---------------------------------------------------------------------------
# hybridization


def kappa_equivalent(kappa_plus, kappa_minus):
    return 2 * kappa_plus * kappa_minus / (kappa_plus + kappa_minus)


def hybridize(dimer: DimerSpec) -> HybridModes:
    wl, wr = dimer.left.frequency, dimer.right.frequency
    det = (wl - wr) * 1e3  # MHz
    root = np.hypot(dimer.hopping, det / 2)
    mean = (wl + wr) / 2
    ratio = det / np.hypot(2 * dimer.hopping, det)
    kappa = dimer.external_coupling
    return HybridModes(
        freq_plus=float(mean + root * 1e-3),
        freq_minus=float(mean - root * 1e-3),
        kappa_plus=float(kappa / 2 * (1 + ratio)),
        kappa_minus=float(kappa / 2 * (1 - ratio)),
        gamma_plus=dimer.internal_loss_plus,
        gamma_minus=dimer.internal_loss_minus,
    )


def dehybridize(freq_plus, freq_minus, kappa_plus, kappa_minus,
                gamma_plus=0.0, gamma_minus=0.0, kerr=0.0) -> DimerSpec:
    """Recover the bare dimer from measured hybrid modes.

    ``omega_L - omega_R`` takes the sign of ``kappa_plus - kappa_minus``.
    Equal linewidths always map onto degenerate bare resonators.
    """
    if not freq_plus > freq_minus:
        raise ValueError("freq_plus must exceed freq_minus")
    if not (kappa_plus > 0 and kappa_minus > 0):
        raise ValueError("mode linewidths must be > 0")
    kappa = kappa_plus + kappa_minus
    ratio = (kappa_plus - kappa_minus) / kappa
    split = (freq_plus - freq_minus) * 1e3  # MHz
    det = ratio * split
    hopping = split * np.sqrt(1 - ratio**2) / 2
    mean = (freq_plus + freq_minus) / 2
    return DimerSpec.from_values(
        float(mean + det / 2 * 1e-3), float(mean - det / 2 * 1e-3),
        float(hopping), float(kappa), kerr=kerr,
        gamma_plus=gamma_plus, gamma_minus=gamma_minus)


def mode_vectors(dimer: DimerSpec) -> np.ndarray:
    """Columns are the (+, -) hybrid eigenvectors in the (L, R) basis.

    Signs are fixed so that the left component is non-negative.
    """
    det = (dimer.left.frequency - dimer.right.frequency) * 1e3
    theta = 0.5 * np.arctan2(2 * dimer.hopping, det)
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, s], [s, -c]])


# ---------------------------------------------------------------------------
# design rules

KERR_WINDOW_KHZ = (1.0, 100.0)


@dataclass(frozen=True)
class DesignReport:
    modes: HybridModes
    flags: tuple[str, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return not self.flags


def design_check(dimer: DimerSpec, asymmetry_threshold: float = 0.45,
                 kerr_window=KERR_WINDOW_KHZ) -> DesignReport:
    """Flag the rules a useful dimer amplifier should satisfy. Never raises."""
    modes = hybridize(dimer)
    flags = []
    if dimer.hopping > 2 * dimer.external_coupling:
        flags.append(f"hopping J={dimer.hopping:g} MHz exceeds 2*kappa="
                     f"{2 * dimer.external_coupling:g} MHz")
    if modes.asymmetry > asymmetry_threshold:
        flags.append(f"linewidth asymmetry {modes.asymmetry:.2f} above "
                     f"{asymmetry_threshold:g}")
    lo, hi = kerr_window
    for name, res in (("left", dimer.left), ("right", dimer.right)):
        if not lo <= abs(res.kerr) <= hi:
            flags.append(f"{name} Kerr |K|={abs(res.kerr):g} kHz outside "
                         f"[{lo:g}, {hi:g}] kHz")
    return DesignReport(modes, tuple(flags))
