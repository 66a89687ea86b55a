"""In-plane magnetic-field response of a kinetic-inductance resonator.

Gap suppression and the resulting frequency shift, the critical-field fit,
the out-of-plane compensation analysis used to align the sample, and a
user-supplied linewidth-vs-field table.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .fitting import FitError, least_squares_fit


@dataclass(frozen=True)
class FieldModel:
    """Critical field in T, zero-field gap in µeV, zero-field frequency in GHz."""

    critical_field: float
    zero_field_gap: float | None = None
    zero_field_frequency: float | None = None

    def __post_init__(self):
        if not self.critical_field > 0:
            raise ValueError("critical_field must be > 0")


def _suppression(model: FieldModel, b_field) -> np.ndarray:
    """(1 - b^2) / (1 + b^2) with b = B / B_c; raises outside |B| < B_c."""
    b = np.asarray(b_field, dtype=float) / model.critical_field
    if np.any(np.abs(b) >= 1):
        raise ValueError(f"|B| must stay below the critical field {model.critical_field} T")
    b2 = b * b
    return (1 - b2) / (1 + b2)


def gap_vs_field(model: FieldModel, b_field):
    """Superconducting gap (µeV) at in-plane field ``b_field`` (T)."""
    if model.zero_field_gap is None:
        raise ValueError("model has no zero_field_gap")
    return model.zero_field_gap * np.sqrt(_suppression(model, b_field))


def freq_vs_field(model: FieldModel, b_field):
    """Resonance frequency (GHz) at in-plane field ``b_field`` (T).

    Kinetic inductance scales as 1/gap, so the frequency goes as gap^(1/2).
    """
    if model.zero_field_frequency is None:
        raise ValueError("model has no zero_field_frequency")
    return model.zero_field_frequency * _suppression(model, b_field) ** 0.25


@dataclass(frozen=True)
class CriticalFieldFit:
    critical_field: float
    zero_field_frequency: float
    stderr: dict
    covariance: np.ndarray
    residual_norm: float

    @property
    def model(self) -> FieldModel:
        return FieldModel(self.critical_field, zero_field_frequency=self.zero_field_frequency)

    def shift_at(self, b_field) -> float:
        """Predicted frequency drop (MHz) at ``b_field`` T, for comparison with data."""
        return float((self.zero_field_frequency - freq_vs_field(self.model, b_field)) * 1e3)


def fit_critical_field(b_field, freqs, sigma=None) -> CriticalFieldFit:
    """Fit (f(0), B_c) to frequency-vs-field data.

    Internally fits u = 1/B_c^2 so the model stays smooth near B = 0;
    B_c and its uncertainty are mapped back at the end.
    """
    b = np.asarray(b_field, dtype=float)
    f = np.asarray(freqs, dtype=float)
    if b.shape != f.shape or b.ndim != 1:
        raise ValueError("field and frequency arrays must be 1-D and equal length")
    if b.size < 3:
        raise FitError(f"need at least 3 points, got {b.size}")
    if not (np.all(np.isfinite(b)) and np.all(np.isfinite(f)) and np.all(f > 0)):
        raise ValueError("field/frequency data must be finite with positive frequencies")
    if np.ptp(b**2) == 0:
        raise FitError("all points at the same |B|: B_c is undetermined")
    # relative residuals unless absolute per-point errors (GHz) are given
    denom = f if sigma is None else np.asarray(sigma, dtype=float)

    def model(p):
        bu = b * b * p[1]
        ratio = (1 - bu) / (1 + bu)
        return p[0] * np.clip(ratio, 1e-12, None) ** 0.25

    def resid(p):
        return (model(p) - f) / denom

    # small-field expansion: (f/f0)^4 ~ 1 - 2 b^2
    f0 = f[np.argmin(np.abs(b))]
    x = b**2
    y = 1 - (f / f0) ** 4
    u0 = max(float(np.sum(x * y) / np.sum(x * x)) / 2, 1e-6)
    res = least_squares_fit(resid, [f0, u0], scale_cov=sigma is None)
    f_fit, u_fit = res.params
    if not u_fit > 0:
        raise FitError("fitted 1/B_c^2 is not positive: no gap suppression in the data",
                       residual=res.residual_norm)
    if np.any(b * b * u_fit >= 1):
        raise FitError("fitted critical field lies inside the data range",
                       residual=res.residual_norm)
    bc = u_fit ** -0.5
    # d(B_c)/du = -u^-1.5 / 2
    jac = np.diag([1.0, -0.5 * u_fit ** -1.5])
    cov = jac @ res.covariance @ jac.T
    err = np.sqrt(np.clip(np.diag(cov), 0, None))
    return CriticalFieldFit(float(bc), float(f_fit),
                            {"critical_field": float(err[1]), "zero_field_frequency": float(err[0])},
                            cov, res.residual_norm)


# ---------------------------------------------------------------------------
# alignment


@dataclass(frozen=True)
class CompensationSweep:
    """Phase response vs out-of-plane field (mT) at one in-plane field (T)."""

    in_plane_field: float
    perp_fields: np.ndarray
    phase_deltas: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.perp_fields, dtype=float)
        y = np.asarray(self.phase_deltas, dtype=float)
        if x.shape != y.shape or x.ndim != 1:
            raise ValueError("perp_fields and phase_deltas must be 1-D and equal length")
        if x.size < 3:
            raise ValueError("a compensation sweep needs at least 3 points")
        if np.any(np.diff(x) <= 0):
            raise ValueError("perp_fields must be strictly increasing")
        object.__setattr__(self, "perp_fields", x)
        object.__setattr__(self, "phase_deltas", y)


@dataclass(frozen=True)
class SweepVertex:
    in_plane_field: float
    vertex: float  # mT
    curvature: float
    flagged: str | None = None


@dataclass(frozen=True)
class CompensationResult:
    vertices: tuple[SweepVertex, ...]
    slope: float  # mT per T
    intercept: float  # mT
    angle_deg: float
    flags: tuple[str, ...] = field(default=())


def compensation_analysis(sweeps) -> CompensationResult:
    """Optimal out-of-plane field per sweep and the implied misalignment angle.

    Each sweep is fit with a parabola; its maximum is the compensation
    field.  A line through the maxima vs in-plane field gives the tilt.
    Sweeps without a maximum are flagged and left out of the line.
    """
    vertices, flags = [], []
    for sw in sweeps:
        x, y = sw.perp_fields, sw.phase_deltas
        # center x for conditioning; vertex is shift-invariant
        xm = x.mean()
        a, b, _ = np.polyfit(x - xm, y, 2)
        scale = max(np.max(np.abs(y)), 1e-300)
        if not a < -1e-12 * scale / max(np.ptp(x) ** 2, 1e-300):
            msg = f"sweep at {sw.in_plane_field:g} T has no maximum (curvature {a:.3g})"
            vertices.append(SweepVertex(sw.in_plane_field, np.nan, float(a), msg))
            flags.append(msg)
            continue
        vertices.append(SweepVertex(sw.in_plane_field, float(xm - b / (2 * a)), float(a)))
    good = [v for v in vertices if v.flagged is None]
    if len(good) < 2:
        flags.append("fewer than two usable sweeps: no misalignment estimate")
        return CompensationResult(tuple(vertices), np.nan, np.nan, np.nan, tuple(flags))
    bx = np.array([v.in_plane_field for v in good])
    vy = np.array([v.vertex for v in good])
    if np.ptp(bx) == 0:
        flags.append("all usable sweeps at the same in-plane field")
        return CompensationResult(tuple(vertices), np.nan, np.nan, np.nan, tuple(flags))
    slope, intercept = np.polyfit(bx, vy, 1)
    angle = np.degrees(np.arctan(slope * 1e-3))
    return CompensationResult(tuple(vertices), float(slope), float(intercept),
                              float(angle), tuple(flags))


def pumped_linewidth_narrowing(g0_db) -> float:
    """Linewidth reduction factor sqrt(G0) of a pumped mode (G0 in dB)."""
    if np.any(np.asarray(g0_db) < 0):
        raise ValueError("gain must be >= 0 dB")
    return 10 ** (np.asarray(g0_db, dtype=float) / 20)


# ---------------------------------------------------------------------------
# measured linewidth vs field


@dataclass(frozen=True)
class KappaTable:
    """Coupling rate (MHz) vs in-plane field (T), linearly interpolated."""

    fields: np.ndarray
    kappas: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.fields, dtype=float)
        k = np.asarray(self.kappas, dtype=float)
        if b.shape != k.shape or b.size < 1:
            raise ValueError("kappa table needs matching, non-empty columns")
        order = np.argsort(b)
        if np.any(np.diff(b[order]) == 0):
            raise ValueError("duplicate field entries in kappa table")
        object.__setattr__(self, "fields", b[order])
        object.__setattr__(self, "kappas", k[order])

    def __call__(self, b_field):
        """Interpolated kappa; raises outside the tabulated range."""
        b = np.asarray(b_field, dtype=float)
        if np.any(b < self.fields[0]) or np.any(b > self.fields[-1]):
            raise ValueError("field outside the kappa table range")
        return np.interp(b, self.fields, self.kappas)
