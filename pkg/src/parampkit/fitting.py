"""Estimators that turn measured traces into device numbers.

Circle fit of single-port reflection, Lorentzian fit of gain profiles,
resonance-fluorescence fit of a driven transmon, Rabi-vs-power attenuation
calibration, transmon energy relations and the attenuation-vs-frequency
line.  Every nonlinear fit goes through :func:`least_squares_fit`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import linalg, optimize

from . import units as u


class FitError(RuntimeError):
    """A fit did not converge or its input was degenerate."""

    def __init__(self, msg, residual=None):
        super().__init__(msg if residual is None else f"{msg} (residual norm {residual:.3g})")
        self.residual = residual


@dataclass(frozen=True)
class LSQResult:
    params: np.ndarray
    covariance: np.ndarray
    residual_norm: float
    nfev: int

    @property
    def stderr(self) -> np.ndarray:
        return np.sqrt(np.clip(np.diag(self.covariance), 0, None))


def least_squares_fit(residual, p0, xtol=1e-10, max_iter=200, scale_cov=True) -> LSQResult:
    """Damped Gauss-Newton (Levenberg-Marquardt) with a numeric Jacobian.

    ``residual`` maps a parameter vector to a real residual vector.  The
    covariance is ``(J^T J)^-1`` scaled by the reduced chi-square unless
    ``scale_cov`` is false (known per-point errors already in the residual).
    """
    p0 = np.asarray(p0, dtype=float)
    n = p0.size
    r0 = np.asarray(residual(p0))
    if r0.size < n:
        raise FitError(f"underdetermined: {r0.size} residuals for {n} parameters")
    res = optimize.least_squares(residual, p0, method="lm", xtol=xtol,
                                 ftol=1e-15, gtol=1e-15, max_nfev=max_iter * (n + 1))
    if res.status <= 0:
        raise FitError(f"least squares failed: {res.message}",
                       residual=float(np.linalg.norm(res.fun)))
    jac = res.jac
    try:
        cov = linalg.pinvh(jac.T @ jac)
    except linalg.LinAlgError:
        cov = np.full((n, n), np.inf)
    dof = res.fun.size - n
    norm = float(np.linalg.norm(res.fun))
    if scale_cov and dof > 0:
        cov = cov * norm**2 / dof
    return LSQResult(res.x, cov, norm, res.nfev)


# ---------------------------------------------------------------------------
# circle fit


@dataclass(frozen=True)
class ReflectionTrace:
    """Complex reflection samples, frequencies in GHz."""

    freqs: np.ndarray
    s11: np.ndarray

    def __post_init__(self):
        f = np.asarray(self.freqs, dtype=float)
        s = np.asarray(self.s11, dtype=complex)
        if f.shape != s.shape or f.ndim != 1:
            raise ValueError("freqs and s11 must be 1-D arrays of equal length")
        if f.size < 7:
            raise ValueError("reflection trace needs at least 7 points")
        if not (np.all(np.isfinite(f)) and np.all(np.isfinite(s))):
            raise ValueError("reflection trace contains non-finite values")
        object.__setattr__(self, "freqs", f)
        object.__setattr__(self, "s11", s)


def reflection_model(freqs, f_r, q_l, q_c, phi=0.0, amp=1.0, alpha=0.0):
    """Single-port resonator reflection with environment ``amp*exp(i alpha)``.

    ``q_c`` is the magnitude of the complex coupling quality factor and
    ``phi`` its impedance-mismatch angle.
    """
    x = np.asarray(freqs, dtype=float) / f_r - 1
    return amp * np.exp(1j * alpha) * (1 - 2 * q_l / q_c * np.exp(1j * phi) / (1 + 2j * q_l * x))


def loaded_q(q_i, q_c, phi=0.0):
    return 1 / (1 / q_i + np.cos(phi) / q_c)


def _algebraic_circle(z):
    """Pratt's algebraic circle fit; returns (center, radius)."""
    x, y = z.real, z.imag
    xm, ym = x.mean(), y.mean()
    x, y = x - xm, y - ym
    zz = x**2 + y**2
    mat = np.column_stack([zz, x, y, np.ones_like(x)])
    m = mat.T @ mat / len(x)
    b = np.array([[0, 0, 0, -2], [0, 1, 0, 0], [0, 0, 1, 0], [-2, 0, 0, 0]], float)
    w, v = linalg.eig(m, b)
    w = w.real
    ok = np.isfinite(w) & (w > -1e-12 * np.abs(w[np.isfinite(w)]).max())
    if not np.any(ok):
        raise FitError("algebraic circle fit found no admissible solution")
    k = np.flatnonzero(ok)[np.argmin(w[ok])]
    a = v[:, k].real
    if abs(a[0]) < 1e-14 * np.abs(a).max():
        raise FitError("samples are collinear: no circle")
    xc, yc = -a[1] / (2 * a[0]), -a[2] / (2 * a[0])
    r = np.sqrt(a[1] ** 2 + a[2] ** 2 - 4 * a[0] * a[3]) / (2 * abs(a[0]))
    return complex(xc + xm, yc + ym), float(r)


def _fit_phase(f, theta):
    """Fit theta0 + 2*sign*arctan(2 Q (1 - f/fr)) to an unwrapped phase."""
    sign = -1.0 if theta[-1] > theta[0] else 1.0
    grad = np.gradient(theta, f)
    k = np.argmax(np.abs(grad))
    fr0 = f[k]
    q0 = max(abs(grad[k]) * fr0 / 4, 1.0)
    th0 = theta[k]

    def resid(p):
        th, fr, lq = p
        return th + 2 * sign * np.arctan(2 * np.exp(lq) * (1 - f / fr)) - theta

    fit = least_squares_fit(resid, [th0, fr0, np.log(q0)])
    th, fr, lq = fit.params
    return th, fr, float(np.exp(lq)), sign


@dataclass(frozen=True)
class CircleFitResult:
    f_r: float
    q_l: float
    q_c: float
    q_i: float
    phi: float
    environment: complex
    stderr: dict
    residual_norm: float
    covariance: np.ndarray
    overcoupled: bool
    qi_interval: tuple[float, float]

    @property
    def qi_is_lower_bound(self) -> bool:
        return self.overcoupled


def circle_fit(trace: ReflectionTrace, fano_bounds=(1.0, 1.0)) -> CircleFitResult:
    """Quality factors of a resonator from its reflection circle.

    Algebraic circle pre-fit, phase-vs-frequency fit, normalization by the
    off-resonant point, then a geometric refinement of the full complex
    model.  ``fano_bounds`` are user-supplied multiplicative (low, high)
    factors applied to Q_i; an overcoupled result reports Q_i as a lower
    bound (upper end of the interval is infinite).
    """
    f, z = trace.freqs, trace.s11
    zc, r = _algebraic_circle(z)
    spread = np.ptp(np.abs(z - z.mean())) + np.abs(z - z.mean()).max()
    if not np.isfinite(r) or r > 1e6 * max(spread, 1e-300):
        raise FitError("samples are collinear: no circle")

    def circ_resid(p):
        return np.abs(z - (p[0] + 1j * p[1])) - p[2]

    c = least_squares_fit(circ_resid, [zc.real, zc.imag, r]).params
    zc, r = complex(c[0], c[1]), abs(c[2])
    theta = np.unwrap(np.angle(z - zc))
    th0, f_r, q_l, sign = _fit_phase(f, theta)
    off = zc + r * np.exp(1j * (th0 + np.pi))
    if abs(off) == 0:
        raise FitError("off-resonant point at the origin")
    rn = r / abs(off)
    cn = zc / off
    phi = float(np.angle(1 - cn))
    q_c = q_l / rn

    scale_f = f_r

    def resid(p):
        fr, lql, lqc, ph, amp, al = p
        m = reflection_model(f, fr * scale_f, np.exp(lql), np.exp(lqc), ph, amp, al)
        d = m - z
        return np.concatenate([d.real, d.imag])

    p0 = [1.0, np.log(q_l), np.log(q_c), phi, abs(off), np.angle(off)]
    fit = least_squares_fit(resid, p0)
    fr, lql, lqc, ph, amp, al = fit.params
    f_r, q_l, q_c = fr * scale_f, np.exp(lql), np.exp(lqc)
    inv_qi = 1 / q_l - np.cos(ph) / q_c
    if inv_qi <= 0:
        q_i = np.inf
    else:
        q_i = 1 / inv_qi

    # propagate the covariance to (f_r, Q_l, Q_c, Q_i)
    def derived(p):
        fr_, lql_, lqc_, ph_ = p[:4]
        ql_, qc_ = np.exp(lql_), np.exp(lqc_)
        return np.array([fr_ * scale_f, ql_, qc_, 1 / (1 / ql_ - np.cos(ph_) / qc_)])

    jac = np.empty((4, 6))
    base = fit.params
    for k in range(6):
        step = 1e-7 * max(abs(base[k]), 1e-3)
        hi, lo = base.copy(), base.copy()
        hi[k] += step
        lo[k] -= step
        jac[:, k] = (derived(hi) - derived(lo)) / (2 * step)
    cov = jac @ fit.covariance @ jac.T
    err = np.sqrt(np.clip(np.diag(cov), 0, None))
    stderr = dict(f_r=err[0], q_l=err[1], q_c=err[2], q_i=err[3], phi=fit.stderr[3])
    overcoupled = bool(q_i > q_c)
    lo_f, hi_f = fano_bounds
    interval = (q_i * lo_f, np.inf if overcoupled else q_i * hi_f)
    return CircleFitResult(float(f_r), float(q_l), float(q_c), float(q_i), float(ph),
                           complex(amp * np.exp(1j * al)), stderr, fit.residual_norm,
                           cov, overcoupled, interval)


# ---------------------------------------------------------------------------
# Lorentzian gain fit


def lorentzian_db(freqs, g0_db, bw, center, baseline_db=0.0):
    """Gain profile in dB: Lorentzian in linear power above a baseline.

    ``bw`` (FWHM) and ``center`` share the unit of ``freqs``.
    """
    base = u.db_to_lin(baseline_db)
    amp = u.db_to_lin(g0_db) - base
    x = 2 * (np.asarray(freqs, dtype=float) - center) / bw
    return u.lin_to_db(base + amp / (1 + x**2))


@dataclass(frozen=True)
class LorentzianFit:
    g0_db: float
    bw: float
    center: float
    baseline_db: float
    stderr: dict
    residual_norm: float

    @property
    def product(self) -> float:
        """sqrt(G0) * BW, in the frequency unit of the fit."""
        return float(np.sqrt(u.db_to_lin(self.g0_db)) * self.bw)


def lorentzian_fit(freqs, gain_db) -> LorentzianFit:
    """Fit peak gain, FWHM and center of a gain trace given in dB.

    The fit is done on linear power with a free baseline; the returned
    ``g0_db`` is the fitted peak (baseline plus Lorentzian amplitude).
    """
    f = np.asarray(freqs, dtype=float)
    g = u.db_to_lin(gain_db)
    if f.size < 4:
        raise FitError("Lorentzian fit needs at least 4 points")
    k = int(np.argmax(g))
    base0 = float(np.median(np.sort(g)[: max(1, g.size // 5)]))
    if not 10 * np.log10(g[k] / base0) >= 3:
        raise FitError("no peak at least 3 dB above the baseline")
    half = base0 + (g[k] - base0) / 2
    above = np.flatnonzero(g >= half)
    bw0 = max(f[above].max() - f[above].min(), np.min(np.diff(np.sort(f))))
    fscale = max(bw0, 1e-300)
    fc = f[k]

    def resid(p):
        amp, lbw, c, base = p
        x = 2 * (f - (fc + c * fscale)) / (np.exp(lbw) * fscale)
        model = base + amp / (1 + x**2)
        return (model - g) / g[k]

    fit = least_squares_fit(resid, [g[k] - base0, 0.0, 0.0, base0])
    amp, lbw, c, base = fit.params
    if amp <= 0 or base + amp <= 0:
        raise FitError("fitted Lorentzian has no positive peak", fit.residual_norm)
    bw = np.exp(lbw) * fscale
    g0 = base + amp
    cov = fit.covariance
    se = fit.stderr
    g0_err = np.sqrt(max(cov[0, 0] + cov[3, 3] + 2 * cov[0, 3], 0)) / g0 * 10 / np.log(10)
    stderr = dict(g0_db=float(g0_err), bw=float(bw * se[1]), center=float(se[2] * fscale),
                  baseline_db=float(se[3] / abs(base) * 10 / np.log(10)) if base > 0 else np.inf)
    base_db = float(u.lin_to_db(base)) if base > 0 else -np.inf
    return LorentzianFit(float(u.lin_to_db(g0)), float(bw), float(fc + c * fscale),
                         base_db, stderr, fit.residual_norm)


# ---------------------------------------------------------------------------
# resonance fluorescence


@dataclass(frozen=True)
class FluorescenceModel:
    """Driven two-level system seen in reflection.

    ``qubit_freq`` in GHz; ``external``, ``internal`` and ``rabi`` in MHz.
    """

    qubit_freq: float
    external: float
    internal: float
    rabi: float = 0.0

    def __post_init__(self):
        if self.external < 0 or self.internal < 0:
            raise ValueError("kappa and gamma must be >= 0")
        if not self.external + self.internal > 0:
            raise ValueError("total decay rate must be > 0")

    @property
    def decay(self) -> float:
        return self.external + self.internal

    def s11(self, freqs) -> np.ndarray:
        return fluorescence_s11(freqs, self.qubit_freq, self.external, self.internal, self.rabi)


def fluorescence_s11(freqs, f_ge, kappa, gamma, rabi):
    """Reflection of a weakly driven qubit; pure dephasing neglected."""
    big = kappa + gamma
    det = (np.asarray(freqs, dtype=float) - f_ge) * 1e3
    x = 2 * det / big
    return 1 - 2 * kappa / big * (1 + 1j * x) / (1 + x**2 + 2 * (rabi / big) ** 2)


@dataclass(frozen=True)
class FluorescenceFit:
    rabi: float
    stderr: float
    residual_norm: float


def fluorescence_fit(trace: ReflectionTrace, f_ge, kappa, gamma) -> FluorescenceFit:
    """Rabi frequency (MHz) as the only free parameter, with kappa, gamma, f_ge fixed.

    Real and imaginary parts enter the residual jointly.  The objective is
    even in the Rabi frequency so its magnitude is reported.
    """
    f, z = trace.freqs, trace.s11

    def resid(p):
        d = fluorescence_s11(f, f_ge, kappa, gamma, p[0]) - z
        return np.concatenate([d.real, d.imag])

    big = kappa + gamma
    grid = big * np.logspace(-3, 3, 121)
    costs = [np.sum(resid([g]) ** 2) for g in grid]
    start = grid[int(np.argmin(costs))]
    fit = least_squares_fit(resid, [start])
    rms = fit.residual_norm / np.sqrt(2 * f.size)
    if rms > 0.5:
        raise FitError("fluorescence fit did not converge", fit.residual_norm)
    return FluorescenceFit(float(abs(fit.params[0])), float(fit.stderr[0]), fit.residual_norm)


# ---------------------------------------------------------------------------
# attenuation from Rabi frequency vs power


def rabi_from_power(p_rt_dbm, attenuation_db, f_ge, decay):
    """Forward model: Rabi frequency (MHz) reached for room-temperature power.

    ``Omega^2 = A * 2 * Gamma * P_RT / (h f_ge)`` in angular units, with
    ``decay`` (Gamma/2pi) in MHz and ``f_ge`` in GHz.
    """
    p = u.dbm_to_watt(p_rt_dbm)
    a = u.db_to_lin(attenuation_db)
    big = 2 * np.pi * decay * 1e6
    omega2 = a * 2 * big * p / (u.h * f_ge * 1e9)
    return np.sqrt(omega2) / (2 * np.pi) / 1e6


@dataclass(frozen=True)
class AttenuationFit:
    attenuation_db: float
    stderr_db: float
    slope: float
    warnings: tuple[str, ...] = ()


def rabi_attenuation_fit(p_rt_dbm, rabi_mhz, f_ge, decay, anharmonicity=None) -> AttenuationFit:
    """Line attenuation from a zero-intercept regression of Omega^2 on P_RT."""
    p = u.dbm_to_watt(p_rt_dbm)
    om = 2 * np.pi * np.asarray(rabi_mhz, dtype=float) * 1e6
    if p.size < 3 or p.size != om.size:
        raise FitError("need at least 3 (power, Rabi) pairs")
    if np.unique(np.round(p_rt_dbm, 12)).size < 2:
        raise FitError("underdetermined: all powers identical")
    y = om**2
    slope = float(np.sum(p * y) / np.sum(p * p))
    if slope <= 0:
        raise FitError("negative slope of Omega^2 vs power")
    resid = y - slope * p
    var = np.sum(resid**2) / (p.size - 1) / np.sum(p * p)
    big = 2 * np.pi * decay * 1e6
    a = slope * u.h * f_ge * 1e9 / (2 * big)
    notes = []
    if anharmonicity is not None and np.any(np.asarray(rabi_mhz) > anharmonicity):
        notes.append("Rabi frequency above the anharmonicity: weak-drive model invalid")
    return AttenuationFit(float(u.lin_to_db(a)), float(10 / np.log(10) * np.sqrt(var) / slope),
                          slope, tuple(notes))


# ---------------------------------------------------------------------------
# transmon


@dataclass(frozen=True)
class TransmonSpec:
    """Charging energy (MHz), Josephson energy (GHz), anharmonicity (MHz)."""

    charging: float
    josephson: float
    anharmonicity: float | None = None
    warnings: tuple[str, ...] = field(default=(), compare=False)

    @property
    def f_ge(self) -> float:
        """Qubit frequency in GHz."""
        ec = self.charging * 1e-3
        return float(np.sqrt(8 * ec * self.josephson) - ec)

    @property
    def f_gf_half(self) -> float:
        """Two-photon g-f transition frequency, GHz."""
        alpha = self.charging if self.anharmonicity is None else self.anharmonicity
        return self.f_ge - alpha * 1e-3 / 2

    @property
    def ratio(self) -> float:
        return self.josephson / (self.charging * 1e-3)


def transmon_relations(charging=None, josephson=None, f_ge=None, anharmonicity=None) -> TransmonSpec:
    """Complete (E_C, E_J, f_ge) from any two of them; f_ge = sqrt(8 E_C E_J) - E_C."""
    given = [x is not None for x in (charging, josephson, f_ge)]
    if sum(given) != 2:
        raise ValueError("exactly two of charging, josephson, f_ge are required")
    for name, val in (("charging", charging), ("josephson", josephson), ("f_ge", f_ge)):
        if val is not None and not val > 0:
            raise ValueError(f"{name} must be > 0 (non-transmon input)")
    if f_ge is None:
        ec, ej = charging, josephson
    elif josephson is None:
        ec = charging
        ej = (f_ge + ec * 1e-3) ** 2 / (8 * ec * 1e-3)
    else:
        # x^2 + (2f - 8 E_J) x + f^2 = 0 for x = E_C in GHz; keep the transmon root
        bq = 2 * f_ge - 8 * josephson
        disc = bq**2 - 4 * f_ge**2
        if disc < 0:
            raise ValueError("no real charging energy for this (f_ge, E_J)")
        x = (-bq - np.sqrt(disc)) / 2
        if not x > 0:
            raise ValueError("inconsistent (f_ge, E_J): non-positive charging energy")
        ec, ej = float(x * 1e3), josephson
    notes = []
    spec = TransmonSpec(float(ec), float(ej), anharmonicity)
    if spec.ratio < 50:
        notes.append(f"E_J/E_C = {spec.ratio:.1f} < 50: outside the transmon regime")
    if spec.f_ge <= 0:
        raise ValueError("non-positive qubit frequency")
    return TransmonSpec(spec.charging, spec.josephson, anharmonicity, tuple(notes))


# ---------------------------------------------------------------------------
# attenuation vs frequency


@dataclass(frozen=True)
class AttenuationLine:
    slope: float
    intercept: float
    covariance: np.ndarray
    f_range: tuple[float, float]
    residual_norm: float

    def predict(self, freq):
        """(attenuation dB, 1-sigma dB, extrapolated flag) at ``freq`` GHz."""
        f = np.asarray(freq, dtype=float)
        a = self.slope * f + self.intercept
        c = self.covariance
        var = c[0, 0] * f**2 + 2 * c[0, 1] * f + c[1, 1]
        extrap = (f < self.f_range[0] - 1e-12) | (f > self.f_range[1] + 1e-12)
        return a, np.sqrt(np.clip(var, 0, None)), extrap


def attenuation_vs_frequency(freqs, att_db, sigma_db=None) -> AttenuationLine:
    """Weighted straight-line fit of calibrated attenuation points."""
    f = np.asarray(freqs, dtype=float)
    a = np.asarray(att_db, dtype=float)
    if f.size < 2 or np.unique(f).size < 2:
        raise FitError("need at least two distinct calibration frequencies")
    s = np.ones_like(f) if sigma_db is None else np.asarray(sigma_db, dtype=float)
    w = 1 / s
    design = np.column_stack([f, np.ones_like(f)]) * w[:, None]
    coef, *_ = np.linalg.lstsq(design, a * w, rcond=None)
    cov = np.linalg.inv(design.T @ design)
    res = a - (coef[0] * f + coef[1])
    if sigma_db is None and f.size > 2:
        cov = cov * np.sum(res**2) / (f.size - 2)
    return AttenuationLine(float(coef[0]), float(coef[1]), cov,
                           (float(f.min()), float(f.max())), float(np.linalg.norm(res * w)))


