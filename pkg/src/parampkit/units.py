"""Physical constants and the unit conventions shared across the package.

Canonical storage units: frequencies in GHz, rates (J, kappa, gamma) in MHz,
Kerr coefficients in kHz, powers in dBm.  All of them are ordinary
frequencies; the 2*pi is applied only where an SI quantity is formed.
"""

from __future__ import annotations

import numpy as np
from scipy import constants as cst

hbar = cst.hbar
h = cst.h
e = cst.e
k_B = cst.k
phi0 = cst.h / (2 * cst.e)
#: hbar / 4e^2, the resistance quantum used by the junction-array Kerr model
R_Q = cst.hbar / (4 * cst.e**2)

#: one MHz rate per time unit; the engine measures time in 1/(2*pi*1 MHz)
ENGINE_RATE = 2 * np.pi * 1e6


def dbm_to_watt(p_dbm):
    return 1e-3 * 10 ** (np.asarray(p_dbm, dtype=float) / 10)


def watt_to_dbm(p_w):
    return 10 * np.log10(np.asarray(p_w, dtype=float) / 1e-3)


def db_to_lin(x_db):
    """Power ratio in dB to linear."""
    return 10 ** (np.asarray(x_db, dtype=float) / 10)


def lin_to_db(x):
    return 10 * np.log10(np.asarray(x, dtype=float))


def angular(f_hz):
    return 2 * np.pi * np.asarray(f_hz, dtype=float)
