"""Spatial walk-off and orbital angular momentum transfer in type-I
degenerate down-conversion.

The package computes two-photon joint OAM spectra for a focused pump
crossing a birefringent crystal, the leak of probability out of the
OAM-conserving line that pump walk-off causes, its scaling with focusing
and walk-off strength, far-field single-photon profiles, and the
astigmatic precompensation that moves sideband weight between odd and
even orders.
"""

from .analysis import (
    AstigmatismResult,
    ScalingFit,
    SweepResult,
    fit_scaling_law,
    jacobi_anger_sideband,
    optimize_astigmatism,
    rayleigh_range,
    spiral_bandwidth,
    suggest_grid,
    sweep_focusing,
    sweep_walkoff,
)
from .biphoton import (
    PolarGrid,
    azimuthal_kernel,
    delta_k,
    make_polar_grid,
    two_photon_amplitude,
)
from .dispersion import (
    COLLINEAR,
    NONCOLLINEAR,
    CrystalConfig,
    SellmeierModel,
    emission_ring_radius,
    index_e_at_angle,
    load_crystal,
    phase_match_angle,
    refractive_index,
    walkoff_angle,
)
from .errors import ConfigError, ConvergenceError, PhysicsError
from .farfield import IntensityMap, signal_intensity
from .oam import (
    OamSpectrum,
    f_leak,
    oam_spectrum,
    sideband_probability,
    total_oam_distribution,
)
from .pump import ISOTROPIC, LITERAL, PumpConfig, pump_envelope

__all__ = [
    "AstigmatismResult",
    "COLLINEAR",
    "ConfigError",
    "ConvergenceError",
    "CrystalConfig",
    "ISOTROPIC",
    "IntensityMap",
    "LITERAL",
    "NONCOLLINEAR",
    "OamSpectrum",
    "PhysicsError",
    "PolarGrid",
    "PumpConfig",
    "ScalingFit",
    "SellmeierModel",
    "SweepResult",
    "azimuthal_kernel",
    "delta_k",
    "emission_ring_radius",
    "f_leak",
    "fit_scaling_law",
    "index_e_at_angle",
    "jacobi_anger_sideband",
    "load_crystal",
    "make_polar_grid",
    "oam_spectrum",
    "optimize_astigmatism",
    "phase_match_angle",
    "pump_envelope",
    "rayleigh_range",
    "refractive_index",
    "sideband_probability",
    "signal_intensity",
    "spiral_bandwidth",
    "suggest_grid",
    "sweep_focusing",
    "sweep_walkoff",
    "total_oam_distribution",
    "two_photon_amplitude",
    "walkoff_angle",
]
