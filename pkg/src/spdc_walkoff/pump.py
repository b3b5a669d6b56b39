"""Pump beam configuration and its angular-spectrum envelope.

The pump enters the two-photon amplitude only through its transverse
angular spectrum evaluated at the summed daughter wavevector. The
envelope here carries the Gaussian (or Laguerre-Gauss) profile and an
optional astigmatic quadratic phase. The walk-off tilt phase is absorbed
into the longitudinal phase mismatch instead, so it never appears here.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import ConfigError

ISOTROPIC = "isotropic"
LITERAL = "literal"

MAX_PUMP_OAM = 8
MAX_WALKOFF_RAD = 0.2


@dataclass(frozen=True)
class PumpConfig:
    """Pump parameters for a degenerate down-conversion run.

    ``walkoff_rad`` is the Poynting walk-off angle of the extraordinary
    pump; positive values tilt the energy flow toward +x. ``astig_beta``
    is the dimensionless strength of a quadratic cos(2 phi) wavefront
    term. ``envelope`` selects the radially symmetric Gaussian profile
    ("isotropic") or a deliberately anisotropic variant ("literal") whose
    argument is the plain sum (qx + qy)^2; the latter exists for
    comparison runs and is not rotationally invariant.
    """

    wavelength_m: float
    waist_m: float
    oam_l: int = 0
    walkoff_rad: float = 0.0
    astig_beta: float = 0.0
    envelope: str = ISOTROPIC

    def __post_init__(self):
        if self.wavelength_m <= 0.0:
            raise ConfigError("pump wavelength must be positive")
        if self.waist_m <= 0.0:
            raise ConfigError("pump waist must be positive")
        if int(self.oam_l) != self.oam_l or abs(self.oam_l) > MAX_PUMP_OAM:
            raise ConfigError(f"pump OAM must be an integer with |l| <= {MAX_PUMP_OAM}")
        if abs(self.walkoff_rad) >= MAX_WALKOFF_RAD:
            raise ConfigError(f"|walk-off| must stay below {MAX_WALKOFF_RAD} rad")
        if self.envelope not in (ISOTROPIC, LITERAL):
            raise ConfigError(f"envelope must be '{ISOTROPIC}' or '{LITERAL}'")

    @property
    def signal_wavelength_m(self) -> float:
        """Degenerate daughter wavelength, 2 lambda_p."""
        return 2.0 * self.wavelength_m

    def with_(self, **changes) -> "PumpConfig":
        """Copy with selected fields replaced."""
        return replace(self, **changes)


def pump_envelope(pump: PumpConfig, qx, qy):
    """Angular-spectrum amplitude of the pump at transverse wavevector (qx, qy).

    Returns a complex array. The Gaussian factor is
    exp(-w^2 (qx^2 + qy^2)/4); a nonzero ``oam_l`` multiplies in
    (w q_perp / sqrt(2))^|l| exp(i l phi_q), and a nonzero ``astig_beta``
    multiplies in exp(i beta w^2 (qx^2 - qy^2)/4). Unnormalised; every
    downstream spectrum is normalised after integration.
    """
    qx = np.asarray(qx, dtype=float)
    qy = np.asarray(qy, dtype=float)
    w2 = pump.waist_m * pump.waist_m
    if pump.envelope == ISOTROPIC:
        env = np.exp(-w2 * (qx * qx + qy * qy) / 4.0)
    else:
        s = qx + qy
        env = np.exp(-w2 * s * s / 4.0)
    env = env.astype(complex)
    if pump.oam_l != 0:
        qperp = np.hypot(qx, qy)
        radial = (pump.waist_m * qperp / np.sqrt(2.0)) ** abs(pump.oam_l)
        # phi_q is undefined on the axis, but the radial factor vanishes there
        unit = np.where(qperp > 0.0, (qx + 1j * qy) / np.where(qperp > 0.0, qperp, 1.0), 0.0)
        phase = unit ** abs(pump.oam_l)
        if pump.oam_l < 0:
            phase = np.conj(phase)
        env = env * radial * phase
    if pump.astig_beta != 0.0:
        env = env * np.exp(1j * pump.astig_beta * w2 * (qx * qx - qy * qy) / 4.0)
    return env
