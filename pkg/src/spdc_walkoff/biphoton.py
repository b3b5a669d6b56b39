"""Two-photon amplitude of degenerate type-I down-conversion with pump walk-off.

The state of the daughter pair is sampled on a polar grid in each
photon's transverse wavevector plane. ``delta_k`` and
``two_photon_amplitude`` evaluate the longitudinal mismatch and the
joint amplitude pointwise and act as the reference implementation;
``azimuthal_kernel`` integrates the radial coordinates out with
Gauss-Legendre quadrature to produce the azimuthal correlation matrix
W(phi_s, phi_i) that every orbital-angular-momentum quantity is built
from.

The walk-off of the extraordinary pump enters as the subtracted tilt
term (q_s cos phi_s + q_i cos phi_i) tan(rho) inside the phase
mismatch, so the pump energy walks toward +x for rho > 0. The pump
envelope itself stays tilt-free.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .dispersion import COLLINEAR, NONCOLLINEAR, CrystalConfig, emission_ring_radius, index_e_at_angle, refractive_index
from .errors import ConfigError, PhysicsError
from .pump import ISOTROPIC, PumpConfig, pump_envelope

# Amplitudes whose pump-envelope weight falls below this fraction of the
# envelope peak are dropped from the radial quadrature. The induced error
# in any normalised spectrum is orders of magnitude below every tolerance
# used in the tests.
GAUSS_FLOOR = 1e-16

# Radial nodes are kept strictly below the daughter wavevector so that
# k_sz stays real on the grid.
_EVANESCENT_MARGIN = 0.995


def wavevectors(crystal: CrystalConfig, pump: PumpConfig) -> tuple[float, float]:
    """(k_pump, k_daughter) magnitudes inside the crystal, in 1/m."""
    kp = 2.0 * math.pi * index_e_at_angle(crystal.model, crystal.theta_rad, pump.wavelength_m) / pump.wavelength_m
    lam_s = pump.signal_wavelength_m
    ks = 2.0 * math.pi * refractive_index(crystal.model, lam_s, "o") / lam_s
    return kp, ks


@dataclass(eq=False)
class PolarGrid:
    """Product quadrature grid in (q, phi) for each daughter photon.

    Radial nodes are Gauss-Legendre points on [q_min, q_max] with
    ``radial_weight`` carrying the dq measure (multiply by q for the
    polar q dq measure). Azimuthal nodes are uniform with spacing
    2 pi / n_azimuthal; n_azimuthal must be a power of two.
    """

    q: np.ndarray
    radial_weight: np.ndarray
    phi: np.ndarray
    q_min: float
    q_max: float
    ring_q0: float = 0.0

    @property
    def n_radial(self) -> int:
        return self.q.size

    @property
    def n_azimuthal(self) -> int:
        return self.phi.size

    @property
    def measure(self) -> np.ndarray:
        """Radial quadrature weights including the polar q factor."""
        return self.radial_weight * self.q


def make_polar_grid(
    crystal: CrystalConfig,
    pump: PumpConfig,
    n_radial: int = 96,
    n_azimuthal: int = 128,
) -> PolarGrid:
    """Build the daughter-photon grid adapted to one configuration.

    The radial window covers the wider of the pump angular bandwidth
    (6 / w_p) and the phase-matching acceptance (3 sqrt(4 pi / lambda_s L)).
    Collinear geometry uses the disk [0, width]; noncollinear geometry an
    annulus of that half-width centred on the degenerate emission ring.
    """
    if n_radial < 8:
        raise ConfigError("n_radial must be at least 8")
    if n_azimuthal < 8 or n_azimuthal & (n_azimuthal - 1):
        raise ConfigError("n_azimuthal must be a power of two (and at least 8)")
    lam_s = pump.signal_wavelength_m
    width = max(6.0 / pump.waist_m, 3.0 * math.sqrt(4.0 * math.pi / (lam_s * crystal.length_m)))
    if crystal.geometry == COLLINEAR:
        q_min, q_max = 0.0, width
    else:
        q0 = emission_ring_radius(crystal.model, crystal.theta_rad, pump.wavelength_m)
        q_min, q_max = max(0.0, q0 - width), q0 + width
    _, ks = wavevectors(crystal, pump)
    q_max = min(q_max, _EVANESCENT_MARGIN * ks)
    if q_max <= q_min:
        raise PhysicsError("radial window collapsed: grid would sit past the evanescent edge")
    x, w = np.polynomial.legendre.leggauss(n_radial)
    half = 0.5 * (q_max - q_min)
    grid = PolarGrid(
        q=q_min + half * (x + 1.0),
        radial_weight=w * half,
        phi=2.0 * math.pi * np.arange(n_azimuthal) / n_azimuthal,
        q_min=q_min,
        q_max=q_max,
        ring_q0=0.0 if crystal.geometry == COLLINEAR else emission_ring_radius(crystal.model, crystal.theta_rad, pump.wavelength_m),
    )
    return grid


def delta_k(crystal: CrystalConfig, pump: PumpConfig, q_s, phi_s, q_i, phi_i):
    """Longitudinal phase mismatch including the pump walk-off tilt, in 1/m.

    delta_k = k_pz - k_sz - k_iz - (q_s cos phi_s + q_i cos phi_i) tan(rho)
    with k_pz = sqrt(k_p^2 - |q_s + q_i|^2). The sign convention puts the
    pump's Poynting walk along +x, so positive rho drags the far-field
    brightness toward +x. Entries whose longitudinal momentum would turn
    evanescent are returned as NaN; callers must zero the amplitude there.
    """
    q_s, phi_s, q_i, phi_i = np.broadcast_arrays(
        np.asarray(q_s, float), np.asarray(phi_s, float), np.asarray(q_i, float), np.asarray(phi_i, float)
    )
    kp, ks = wavevectors(crystal, pump)
    sum2 = q_s * q_s + q_i * q_i + 2.0 * q_s * q_i * np.cos(phi_s - phi_i)
    ok = (sum2 < kp * kp) & (q_s < ks) & (q_i < ks)
    kpz = np.sqrt(np.where(ok, kp * kp - sum2, 0.0))
    ksz = np.sqrt(np.where(ok, ks * ks - q_s * q_s, 0.0))
    kiz = np.sqrt(np.where(ok, ks * ks - q_i * q_i, 0.0))
    tilt = (q_s * np.cos(phi_s) + q_i * np.cos(phi_i)) * math.tan(pump.walkoff_rad)
    out = kpz - ksz - kiz - tilt
    return np.where(ok, out, np.nan)


def _sinc_phase(x):
    """exp(i x) sinc(x) with the unnormalised sinc, sin(x)/x."""
    return np.exp(1j * x) * np.sinc(x / np.pi)


def two_photon_amplitude(crystal: CrystalConfig, pump: PumpConfig, q_s, phi_s, q_i, phi_i):
    """Joint amplitude of one daughter pair, pointwise.

    Phi = E_p(q_s + q_i) sinc(delta_k L / 2) exp(i delta_k L / 2), zero
    where the pair would be evanescent. This is the reference evaluator;
    the production path in ``azimuthal_kernel`` must agree with it.
    """
    dk = delta_k(crystal, pump, q_s, phi_s, q_i, phi_i)
    qx = np.asarray(q_s) * np.cos(phi_s) + np.asarray(q_i) * np.cos(phi_i)
    qy = np.asarray(q_s) * np.sin(phi_s) + np.asarray(q_i) * np.sin(phi_i)
    env = pump_envelope(pump, qx, qy)
    x = np.where(np.isnan(dk), 0.0, dk) * (0.5 * crystal.length_m)
    amp = env * _sinc_phase(x)
    return np.where(np.isnan(dk), 0.0 + 0.0j, amp)


@dataclass(eq=False)
class BiphotonField:
    """Azimuthal correlation matrix W[js, ji] with its provenance."""

    W: np.ndarray
    grid: PolarGrid
    crystal: CrystalConfig
    pump: PumpConfig

    @property
    def n_azimuthal(self) -> int:
        return self.W.shape[0]


def azimuthal_kernel(
    crystal: CrystalConfig,
    pump: PumpConfig,
    grid: PolarGrid,
    gauss_floor: float = GAUSS_FLOOR,
) -> BiphotonField:
    """Integrate the radial coordinates out of the two-photon amplitude.

    W(phi_s, phi_i) = integral q_s dq_s q_i dq_i Phi(q_s, phi_s, q_i, phi_i)
    evaluated on the azimuthal node grid. The double radial quadrature is
    organised by the azimuth difference d = js - ji: every quantity that
    depends on the two radii and d alone (the summed transverse momentum,
    the pump Gaussian, the pump longitudinal momentum) is computed once
    per d, and node pairs whose envelope weight falls below
    ``gauss_floor`` are dropped before the walk-off phases are expanded
    over js. The "literal" envelope lacks a radial bound, so it runs the
    dense path.
    """
    N = grid.n_azimuthal
    L = crystal.length_m
    tanrho = math.tan(pump.walkoff_rad)
    w2 = pump.waist_m * pump.waist_m
    lp = pump.oam_l
    beta = pump.astig_beta
    kp, ks = wavevectors(crystal, pump)

    q = grid.q
    wq = grid.measure
    ksz = np.sqrt(ks * ks - q * q)
    cosphi = np.cos(grid.phi)
    sinphi = np.sin(grid.phi)
    if beta:
        cos2phi = np.cos(2.0 * grid.phi)
        sin2phi = np.sin(2.0 * grid.phi)
    pump_js = np.exp(1j * lp * grid.phi) if lp else None
    js_idx = np.arange(N)

    W = np.zeros((N, N), dtype=complex)
    q2 = q * q
    qouter = np.multiply.outer(q, q)
    need_v = bool(lp) or bool(beta) or pump.envelope != ISOTROPIC

    for d in range(N):
        # cos/sin of the azimuth difference, evaluated so that d and N - d
        # share the exact same float and W inherits exchange symmetry
        d_eff = min(d, N - d)
        cd = math.cos(2.0 * math.pi * d_eff / N)
        sd = math.sin(2.0 * math.pi * d_eff / N)
        if d > N - d:
            sd = -sd
        sum2 = q2[:, None] + q2[None, :] + (2.0 * cd) * qouter
        propagating = sum2 < kp * kp
        if pump.envelope == ISOTROPIC:
            g = np.exp(-0.25 * w2 * sum2)
            screen = g
            if lp:
                screen = g * (pump.waist_m * np.sqrt(sum2) / math.sqrt(2.0)) ** abs(lp)
            alive = (screen >= gauss_floor) & propagating
        else:
            g = None
            alive = propagating
        if not alive.any():
            continue
        ia, ib = np.nonzero(alive)
        qa, qb = q[ia], q[ib]
        base = np.sqrt(kp * kp - sum2[alive]) - ksz[ia] - ksz[ib]
        if need_v:
            v = qa + qb * complex(cd, -sd)

        coef = wq[ia] * wq[ib] * g[alive] if pump.envelope == ISOTROPIC else wq[ia] * wq[ib]
        if lp:
            av = np.sqrt(sum2[alive])
            radial = (pump.waist_m * av / math.sqrt(2.0)) ** abs(lp)
            unit = np.where(av > 0.0, v / np.where(av > 0.0, av, 1.0), 0.0)
            phase = unit ** abs(lp)
            if lp < 0:
                phase = np.conj(phase)
            coef = coef * radial * phase

        if tanrho != 0.0:
            x = (base[:, None] - tanrho * (np.multiply.outer(qa, cosphi) + qb[:, None] * np.roll(cosphi, d)[None, :])) * (0.5 * L)
        else:
            x = base[:, None] * (0.5 * L)
        amp = _sinc_phase(x)

        if pump.envelope != ISOTROPIC:
            # literal envelope: exp(-w^2 (qx + qy)^2 / 4) with the full
            # js-dependent transverse sum, no compression possible
            vr, vi = v.real, v.imag
            sx = np.multiply.outer(vr, cosphi) - np.multiply.outer(vi, sinphi)
            sy = np.multiply.outer(vr, sinphi) + np.multiply.outer(vi, cosphi)
            s = sx + sy
            amp = amp * np.exp(-0.25 * w2 * s * s)
        if beta:
            re2 = np.multiply.outer(v.real * v.real - v.imag * v.imag, cos2phi) - np.multiply.outer(2.0 * v.real * v.imag, sin2phi)
            amp = amp * np.exp((1j * 0.25 * beta * w2) * re2)

        out = coef @ amp
        if out.ndim == 0 or out.size == 1:
            out = np.broadcast_to(out, (N,)).copy()
        if lp:
            out = out * pump_js
        W[js_idx, (js_idx - d) % N] = out
    return BiphotonField(W=W, grid=grid, crystal=crystal, pump=pump)
