"""Design, simulation and analysis toolkit for coupled-resonator Kerr parametric amplifiers."""

__version__ = "0.1.0"

from .dimer import (DimerSpec, FilmSpec, HybridModes, ResonatorSpec, StripSpec,
                    dehybridize, design_check, hybridize, jj_array_kerr,
                    participation_ratio, sheet_inductance)
from .engine import PumpDrive, SteadyState, s11_linear, steady_state
from .amplifier import (compression_point, gain_profile, kerr_shift_slopes,
                        operational_region, operating_point, photon_population,
                        small_signal_gain, stark_shifted_modes)
from .field import (CompensationSweep, FieldModel, compensation_analysis,
                    fit_critical_field, freq_vs_field, gap_vs_field,
                    pumped_linewidth_narrowing)
from .noise import (NoiseChain, PSDTrace, delta_snr, input_referred_photons,
                    psd_to_input_temperature, refer_through_attenuator)
from .fitting import (ReflectionTrace, circle_fit, fluorescence_fit, lorentzian_fit,
                      rabi_attenuation_fit, transmon_relations)
from .config import parse_config

__all__ = [name for name in dir() if not name.startswith("_")]
