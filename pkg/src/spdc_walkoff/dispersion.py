"""Uniaxial crystal dispersion and birefringent phase matching.

Sellmeier evaluation for the ordinary and extraordinary rays, the
angle-tuned extraordinary index, solvers for degenerate type-I phase
matching (collinear and annular), and the Poynting-vector walk-off angle
of an extraordinary beam. Angles are radians and wavelengths metres at
every function boundary; micrometres appear only inside the Sellmeier
polynomial itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from importlib import resources

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib

import numpy as np

from .errors import (
    ConfigError,
    ConvergenceError,
    DispersionModelError,
    DispersionRangeError,
    NoPhaseMatchError,
)

COLLINEAR = "collinear"
NONCOLLINEAR = "noncollinear"

# Bracket and iteration cap for the phase-matching bisection.
_THETA_LO = math.radians(0.1)
_THETA_HI = math.radians(89.9)
_MAX_BISECT = 200


@dataclass(frozen=True)
class SellmeierModel:
    """Four-coefficient Sellmeier fit for one uniaxial crystal.

    Coefficients follow n^2 = A + B/(lambda^2 - C) - D lambda^2 with
    lambda in micrometres. ``valid_range_um`` is the wavelength interval
    the fit is trusted over; evaluation outside it raises.
    """

    name: str
    ordinary: tuple[float, float, float, float]
    extraordinary: tuple[float, float, float, float]
    valid_range_um: tuple[float, float]

    def __post_init__(self):
        for label, coeffs in (("ordinary", self.ordinary), ("extraordinary", self.extraordinary)):
            if len(coeffs) != 4:
                raise ConfigError(f"{self.name}: {label} row needs 4 Sellmeier coefficients")
        lo, hi = self.valid_range_um
        if not (0.0 < lo < hi):
            raise ConfigError(f"{self.name}: bad validity range {self.valid_range_um}")


@dataclass(frozen=True)
class CrystalConfig:
    """Crystal cut and interaction geometry for one simulation run.

    ``theta_rad`` is the angle between the pump wavevector and the optic
    axis. ``geometry`` selects whether the daughter grid is a disk around
    the pump axis (collinear) or an annulus around the degenerate
    emission ring (noncollinear).
    """

    model: SellmeierModel
    theta_rad: float
    length_m: float
    geometry: str = COLLINEAR

    def __post_init__(self):
        if not 0.0 < self.theta_rad < math.pi / 2:
            raise ConfigError(f"cut angle {self.theta_rad} rad outside (0, pi/2)")
        if self.length_m <= 0.0:
            raise ConfigError("crystal length must be positive")
        if self.geometry not in (COLLINEAR, NONCOLLINEAR):
            raise ConfigError(f"geometry must be '{COLLINEAR}' or '{NONCOLLINEAR}'")


def load_crystal(name: str = "BBO") -> SellmeierModel:
    """Load a crystal entry from the bundled Sellmeier registry."""
    text = resources.files("spdc_walkoff").joinpath("data/crystals.toml").read_text()
    table = tomllib.loads(text)
    if name not in table:
        raise ConfigError(f"unknown crystal {name!r}; registry has {sorted(table)}")
    entry = table[name]
    try:
        return SellmeierModel(
            name=name,
            ordinary=tuple(float(c) for c in entry["ordinary"]),
            extraordinary=tuple(float(c) for c in entry["extraordinary"]),
            valid_range_um=tuple(float(c) for c in entry["valid_range_um"]),
        )
    except KeyError as exc:
        raise ConfigError(f"registry entry {name!r} is missing key {exc}") from exc


def refractive_index(model: SellmeierModel, wavelength_m, ray: str = "o"):
    """Principal refractive index n_o or n_e at a vacuum wavelength.

    Parameters
    ----------
    model : SellmeierModel
    wavelength_m : float or ndarray
        Vacuum wavelength in metres.
    ray : str
        "o" for ordinary, "e" for extraordinary.
    """
    if ray == "o":
        a, b, c, d = model.ordinary
    elif ray == "e":
        a, b, c, d = model.extraordinary
    else:
        raise ConfigError(f"ray must be 'o' or 'e', not {ray!r}")
    lam = np.asarray(wavelength_m, dtype=float) * 1e6
    lo, hi = model.valid_range_um
    if np.any(lam < lo) or np.any(lam > hi):
        raise DispersionRangeError(
            f"{model.name}: wavelength {np.min(lam):.4g} um outside validity range [{lo}, {hi}] um"
        )
    lam2 = lam * lam
    # guard: the resonance pole sits below the validity range for a sane fit,
    # but a corrupt registry entry must fail loudly rather than emit NaN
    if np.any(lam2 <= c):
        raise DispersionModelError(f"{model.name}: wavelength at or below the Sellmeier pole")
    n2 = a + b / (lam2 - c) - d * lam2
    if np.any(n2 <= 1.0):
        raise DispersionModelError(f"{model.name}: Sellmeier fit gives n^2 <= 1 at {np.min(lam):.4g} um")
    n = np.sqrt(n2)
    return float(n) if np.isscalar(wavelength_m) else n


def index_e_at_angle(model: SellmeierModel, theta_rad, wavelength_m):
    """Extraordinary index seen by a wave at angle theta to the optic axis.

    1/n(theta)^2 = cos^2 theta / n_o^2 + sin^2 theta / n_e^2, which
    reduces to n_o at theta = 0 and the principal n_e at theta = pi/2.
    """
    no = refractive_index(model, wavelength_m, "o")
    ne = refractive_index(model, wavelength_m, "e")
    ct, st = np.cos(theta_rad), np.sin(theta_rad)
    n = 1.0 / np.sqrt(ct * ct / (no * no) + st * st / (ne * ne))
    return float(n) if np.isscalar(theta_rad) else n


def walkoff_angle(model: SellmeierModel, theta_rad: float, wavelength_m: float) -> float:
    """Poynting-vector walk-off angle of the extraordinary ray, in radians.

    Uses the analytic derivative of the angle-tuned index,
    tan(rho) = -(dn/dtheta)/n(theta). Positive for a negative uniaxial
    crystal at 0 < theta < pi/2, zero on the principal axes.
    """
    no = refractive_index(model, wavelength_m, "o")
    ne = refractive_index(model, wavelength_m, "e")
    n = index_e_at_angle(model, theta_rad, wavelength_m)
    dn = -(n ** 3 / 2.0) * math.sin(2.0 * theta_rad) * (1.0 / (ne * ne) - 1.0 / (no * no))
    return math.atan(-dn / n)


def phase_match_angle(model: SellmeierModel, pump_wavelength_m: float, ring_radius: float = 0.0) -> float:
    """Cut angle for degenerate type-I phase matching of an e-polarised pump.

    Solves k_p(theta) = 2 sqrt(k_s^2 - q0^2) by bisection, i.e. a pump
    photon splitting into two ordinary daughters at 2 lambda_p emitted at
    transverse radius ``ring_radius`` (1/m) on opposite azimuths.
    ring_radius = 0 is the collinear condition n_e(theta) = n_o(2 lambda_p).

    Raises NoPhaseMatchError when no sign change exists in the bracket and
    ConvergenceError if bisection stalls before reaching |delta k| below
    1e-6 per metre of crystal.
    """
    ks = 2.0 * math.pi * refractive_index(model, 2.0 * pump_wavelength_m, "o") / (2.0 * pump_wavelength_m)
    if abs(ring_radius) >= ks:
        raise NoPhaseMatchError("requested emission ring lies beyond the daughter wavevector")
    target = 2.0 * math.sqrt(ks * ks - ring_radius * ring_radius)

    def mismatch(theta):
        kp = 2.0 * math.pi * index_e_at_angle(model, theta, pump_wavelength_m) / pump_wavelength_m
        return kp - target

    lo, hi = _THETA_LO, _THETA_HI
    f_lo, f_hi = mismatch(lo), mismatch(hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if f_lo * f_hi > 0.0:
        raise NoPhaseMatchError(
            f"{model.name}: no type-I phase-matching angle for pump {pump_wavelength_m * 1e9:.1f} nm"
        )
    for _ in range(_MAX_BISECT):
        mid = 0.5 * (lo + hi)
        f_mid = mismatch(mid)
        if f_mid == 0.0 or hi - lo < 1e-15:
            break
        if f_lo * f_mid < 0.0:
            hi = mid
        else:
            lo, f_lo = mid, f_mid
    theta = 0.5 * (lo + hi)
    if abs(mismatch(theta)) > 1e-6:  # residual |delta k| in 1/m, i.e. < 1e-6 for any metre-scale L
        raise ConvergenceError("phase-matching bisection did not converge")
    return theta


def emission_ring_radius(model: SellmeierModel, theta_rad: float, pump_wavelength_m: float) -> float:
    """Transverse radius q0 (1/m) of the degenerate noncollinear emission ring.

    Inverse of ``phase_match_angle`` at fixed cut angle: the q0 where a
    degenerate pair at opposite azimuths is longitudinally matched,
    q0 = sqrt(k_s^2 - (k_p/2)^2). Raises NoPhaseMatchError where the
    pump index exceeds the daughter index (no real ring).
    """
    kp = 2.0 * math.pi * index_e_at_angle(model, theta_rad, pump_wavelength_m) / pump_wavelength_m
    ks = 2.0 * math.pi * refractive_index(model, 2.0 * pump_wavelength_m, "o") / (2.0 * pump_wavelength_m)
    q0sq = ks * ks - 0.25 * kp * kp
    if q0sq <= 0.0:
        raise NoPhaseMatchError(
            f"{model.name}: no noncollinear ring at theta = {math.degrees(theta_rad):.3f} deg"
        )
    return math.sqrt(q0sq)
