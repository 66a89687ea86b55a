"""Driven Kerr dimer: classical steady states and linearized scattering.

Everything runs in the frame rotating at the pump, in the rotating-wave
approximation.  Internally rates are plain MHz numbers and time is measured
in units of 1/(2*pi*1 MHz), so the equations of motion read

    d(alpha)/dt = -i (H0 + K |alpha|^2) alpha - D/2 alpha + c * eps

with the port (rate kappa) attached to the left resonator only and the
internal losses entering through the dissipation matrix D.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
from numpy.polynomial import Polynomial

from . import units as u
from .dimer import DimerSpec, hybridize, mode_vectors

#: eigenvalue real parts above this fraction of kappa count as unstable
STABILITY_TOL = 1e-9


class SteadyStateError(RuntimeError):
    """No consistent steady state could be produced."""

    def __init__(self, msg, last_branch=None):
        super().__init__(msg)
        self.last_branch = last_branch


class NoStableBranchError(SteadyStateError):
    pass


@dataclass(frozen=True)
class PumpDrive:
    """Pump tone at the device input: frequency in GHz, power in dBm."""

    frequency: float
    power: float

    def __post_init__(self):
        if not self.frequency > 0:
            raise ValueError("pump frequency must be > 0")
        if np.isnan(self.power) or self.power == np.inf:
            raise ValueError("pump power must be finite or -inf")

    @property
    def amplitude(self) -> float:
        """sqrt(photon flux) in engine units."""
        if self.power == -np.inf:
            return 0.0
        return float(np.sqrt(drive_flux(self.power, self.frequency)))


def drive_flux(power_dbm, freq_ghz):
    """Photon flux P/(hbar w) of a tone, in photons per engine time unit."""
    p = u.dbm_to_watt(power_dbm)
    return p / (u.hbar * 2 * np.pi * freq_ghz * 1e9) / u.ENGINE_RATE


def flux_to_dbm(flux, freq_ghz):
    return u.watt_to_dbm(flux * u.ENGINE_RATE * u.hbar * 2 * np.pi * freq_ghz * 1e9)


def dissipation_matrix(dimer: DimerSpec) -> np.ndarray:
    """Energy-decay matrix in the (L, R) basis, MHz.

    The port loads only the left site; the per-mode internal losses are
    rotated from the hybrid basis.
    """
    vec = mode_vectors(dimer)
    gam = vec @ np.diag([dimer.internal_loss_plus, dimer.internal_loss_minus]) @ vec.T
    return np.diag([dimer.external_coupling, 0.0]) + gam


class Frame:
    """Linear operators of the dimer seen from a frame rotating at ``f_ref``."""

    def __init__(self, dimer: DimerSpec, f_ref: float):
        self.dimer = dimer
        self.f_ref = f_ref
        self.detuning = np.array([dimer.left.frequency - f_ref,
                                  dimer.right.frequency - f_ref]) * 1e3
        self.hop = dimer.hopping
        self.kerr = np.array([dimer.left.kerr, dimer.right.kerr]) * 1e-3
        self.kappa = dimer.external_coupling
        self.diss = dissipation_matrix(dimer)
        self.port = np.array([np.sqrt(self.kappa), 0.0])

    @cached_property
    def h0(self) -> np.ndarray:
        d = self.detuning
        return np.array([[d[0], self.hop], [self.hop, d[1]]], dtype=float)

    def residual(self, alpha, eps):
        """Complex steady-state residual of both sites."""
        n = np.abs(alpha) ** 2
        return (-1j * (self.h0 @ alpha + self.kerr * n * alpha)
                - 0.5 * self.diss @ alpha + self.port * eps)

    def jacobian(self, alpha) -> np.ndarray:
        """4x4 linearization acting on (da_L, da_R, da_L*, da_R*)."""
        n = np.abs(alpha) ** 2
        h_lin = self.h0 + np.diag(2 * self.kerr * n)
        a = -1j * h_lin - 0.5 * self.diss
        b = -1j * np.diag(self.kerr * alpha**2)
        return np.block([[a, b], [b.conj(), a.conj()]])


# ---------------------------------------------------------------------------
# steady states


@dataclass(frozen=True)
class SteadyState:
    """All classical steady states for one pump setting.

    ``amplitudes`` has shape (branch_count, 2) with (alpha_L, alpha_R) rows
    ordered by total photon number.
    """

    dimer: DimerSpec
    drive: PumpDrive
    amplitudes: np.ndarray
    stable: np.ndarray
    max_growth: np.ndarray

    @property
    def branch_count(self) -> int:
        return len(self.amplitudes)

    @property
    def all_unstable(self) -> bool:
        return not bool(np.any(self.stable))

    @property
    def multistable(self) -> bool:
        return self.branch_count > 1

    def photons(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def operating_branch(self) -> np.ndarray:
        """Lowest-amplitude stable branch, the one an adiabatic ramp reaches."""
        idx = np.flatnonzero(self.stable)
        if idx.size == 0:
            raise NoStableBranchError(
                "no stable steady state: operate below the multistable boundary",
                last_branch=self.amplitudes[0])
        return self.amplitudes[idx[0]]

    def mode_photons(self, branch=None) -> np.ndarray:
        """(n_plus, n_minus) of a branch, projected on the bare hybrid modes."""
        alpha = self.operating_branch() if branch is None else self.amplitudes[branch]
        return np.abs(mode_vectors(self.dimer).T @ alpha) ** 2


def _reduced_polynomial(frame: Frame, eps: float):
    """Eliminate alpha_L; returns (F, pieces) with F(n_R) = 0 at steady states.

    Degree <= 9 in the right-site photon number, strictly negative at zero
    and positive at infinity, so the number of physical roots is odd.
    """
    d = frame.diss
    a = Polynomial([frame.detuning[1] - 0.5j * d[1, 1], frame.kerr[1]])
    j = frame.hop - 0.5j * d[1, 0]
    x = Polynomial([0.0, 1.0])
    a_conj = Polynomial(np.conj(a.coef))
    n_left = (a * a_conj * x) / abs(j) ** 2
    b = Polynomial([frame.detuning[0] - 0.5j * d[0, 0]]) + frame.kerr[0] * n_left
    q = b * a - j**2
    q_conj = Polynomial(np.conj(q.coef))
    f = q * q_conj * x - frame.kappa * eps**2 * abs(j) ** 2
    return Polynomial(f.coef.real), (a, j, q, n_left)


def _polish(poly: Polynomial, x: float, scale: float) -> float:
    dp = poly.deriv()
    for _ in range(60):
        fx, dfx = poly(x), dp(x)
        if dfx == 0:
            break
        step = fx / dfx
        x -= step
        if abs(step) <= 1e-15 * max(abs(x), scale):
            break
    return x


def steady_state(dimer: DimerSpec, drive: PumpDrive) -> SteadyState:
    """Every steady state of the pumped dimer with its linear stability."""
    frame = Frame(dimer, drive.frequency)
    eps = drive.amplitude
    if eps == 0.0:
        alphas = np.zeros((1, 2), dtype=complex)
    else:
        alphas = _solve_branches(frame, eps)
    stable, growth = [], []
    tol = STABILITY_TOL * frame.kappa
    for alpha in alphas:
        g = float(np.max(np.linalg.eigvals(frame.jacobian(alpha)).real))
        growth.append(g)
        stable.append(g <= tol)
    return SteadyState(dimer, drive, alphas, np.array(stable), np.array(growth))


def _solve_branches(frame: Frame, eps: float) -> np.ndarray:
    poly, (a, j, q, n_left) = _reduced_polynomial(frame, eps)
    # rescale n_R so the companion matrix is well conditioned
    kmax = np.max(np.abs(frame.kerr))
    rate = max(np.max(np.abs(frame.detuning)), frame.hop, frame.kappa)
    scale = rate / kmax if kmax > 0 else 1.0
    scaled = Polynomial(poly.coef * scale ** np.arange(poly.degree() + 1)).trim()
    roots = scaled.roots() * scale
    real = roots[np.abs(roots.imag) <= 1e-6 * np.maximum(np.abs(roots), 1.0)].real
    real = real[real > -1e-9 * scale]
    xs = []
    for x0 in np.sort(real):
        x = _polish(poly, max(x0, 0.0), scale)
        if x <= 0:
            continue
        if xs and abs(x - xs[-1]) <= 1e-9 * max(x, 1.0):
            continue
        xs.append(x)
    if not xs:
        raise SteadyStateError("reduced steady-state polynomial has no positive root")
    alphas = []
    for x in xs:
        alpha_r = 1j * frame.port[0] * eps * j / q(x)
        alpha_l = -a(x) * alpha_r / j
        alpha = np.array([alpha_l, alpha_r])
        alphas.append(alpha)
    alphas = np.array(alphas)
    order = np.argsort(np.sum(np.abs(alphas) ** 2, axis=1))
    return alphas[order]


# ---------------------------------------------------------------------------
# linear response


def s11_linear(dimer: DimerSpec, freqs) -> np.ndarray:
    """Undriven reflection coefficient at ``freqs`` (GHz)."""
    freqs = np.atleast_1d(np.asarray(freqs, dtype=float))
    frame = Frame(dimer, 0.0)
    out = np.empty(freqs.shape, dtype=complex)
    for k, f in enumerate(freqs):
        m = 0.5 * frame.diss + 1j * (frame.h0 - f * 1e3 * np.eye(2))
        out[k] = 1 - frame.kappa * np.linalg.solve(m, np.array([1.0, 0.0]))[0]
    return out


def signal_idler_matrix(frame: Frame, alpha, detuning) -> np.ndarray:
    """2x2 port scattering matrix between signal (w_p + d) and idler (w_p - d).

    ``detuning`` is in MHz.  Element [0, 0] is the signal reflection and
    [0, 1] the idler-to-signal conversion.
    """
    m = frame.jacobian(alpha)
    c = np.zeros((4, 2))
    c[0, 0] = c[2, 1] = np.sqrt(frame.kappa)
    x = np.linalg.solve(m + 1j * detuning * np.eye(4), c)
    return np.eye(2) + c.T @ x
