"""Far-field intensity of the signal photon.

The joint intensity is integrated over every idler mode on the grid,
leaving I(q_s, phi_s) on the signal's polar nodes. Astigmatic pump phase
drops out of this marginal (it is a pure phase on the envelope); the
walk-off tilt does not, and shifts the emission centroid along +x for
positive walk-off.

Centroids are reported in pump-waist units, q w_p / 2, so the pump's
angular 1/e^2 radius maps to 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .biphoton import GAUSS_FLOOR, PolarGrid, wavevectors
from .dispersion import CrystalConfig
from .errors import ConfigError
from .pump import ISOTROPIC, PumpConfig


@dataclass(eq=False)
class IntensityMap:
    """Signal far-field intensity on the polar grid, normalised to unit peak."""

    values: np.ndarray
    grid: PolarGrid
    crystal: CrystalConfig
    pump: PumpConfig

    def centroid(self) -> tuple[float, float]:
        """(x, y) intensity centroid in pump-waist units."""
        wphi = 2.0 * math.pi / self.grid.n_azimuthal
        meas = np.outer(self.grid.measure, np.full(self.grid.n_azimuthal, wphi))
        weight = (self.values * meas).sum()
        qx = np.outer(self.grid.q, np.cos(self.grid.phi))
        qy = np.outer(self.grid.q, np.sin(self.grid.phi))
        scale = 0.5 * self.pump.waist_m
        cx = (self.values * meas * qx).sum() / weight
        cy = (self.values * meas * qy).sum() / weight
        return float(cx * scale), float(cy * scale)

    def azimuthal_anisotropy(self) -> float:
        """Largest azimuthal peak-to-peak spread at fixed radius, over the peak."""
        spread = self.values.max(axis=1) - self.values.min(axis=1)
        return float(spread.max() / self.values.max())

    def radial_profile(self) -> np.ndarray:
        """Azimuthally integrated intensity at each radial node."""
        return self.values.sum(axis=1) * (2.0 * math.pi / self.grid.n_azimuthal)

    def ring_peak_q(self) -> float:
        """Radius of the brightest point of the azimuthally integrated profile."""
        return float(self.grid.q[int(np.argmax(self.radial_profile()))])


def signal_intensity(
    crystal: CrystalConfig,
    pump: PumpConfig,
    grid: PolarGrid,
    gauss_floor: float = GAUSS_FLOOR,
) -> IntensityMap:
    """Far-field signal intensity, idler integrated out.

    I(q_s, phi_s) = integral q_i dq_i dphi_i |Phi|^2 evaluated with the
    same azimuth-difference organisation and envelope-support compression
    as the kernel builder, accumulating squared magnitudes instead of
    amplitudes.
    """
    N = grid.n_azimuthal
    R = grid.n_radial
    L = crystal.length_m
    tanrho = math.tan(pump.walkoff_rad)
    w2 = pump.waist_m * pump.waist_m
    lp = pump.oam_l
    kp, ks = wavevectors(crystal, pump)

    q = grid.q
    wq = grid.measure
    ksz = np.sqrt(ks * ks - q * q)
    cosphi = np.cos(grid.phi)
    sinphi = np.sin(grid.phi)
    wphi = 2.0 * math.pi / N

    I = np.zeros(R * N)
    q2 = q * q
    qouter = np.multiply.outer(q, q)
    js_idx = np.arange(N)

    for d in range(N):
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
            alive = propagating
        if not alive.any():
            continue
        ia, ib = np.nonzero(alive)
        qa, qb = q[ia], q[ib]
        base = np.sqrt(kp * kp - sum2[alive]) - ksz[ia] - ksz[ib]

        if tanrho != 0.0:
            x = (base[:, None] - tanrho * (np.multiply.outer(qa, cosphi) + qb[:, None] * np.roll(cosphi, d)[None, :])) * (0.5 * L)
        else:
            x = np.broadcast_to(base[:, None] * (0.5 * L), (base.size, N))
        s = np.sinc(x / np.pi)
        val = s * s

        if pump.envelope == ISOTROPIC:
            env2 = g[alive]
            if lp:
                env2 = env2 * (pump.waist_m * np.sqrt(sum2[alive]) / math.sqrt(2.0)) ** abs(lp)
            weight = wq[ib] * env2 * env2
            val = val * weight[:, None]
        else:
            v = qa + qb * complex(cd, -sd)
            sx = np.multiply.outer(v.real, cosphi) - np.multiply.outer(v.imag, sinphi)
            sy = np.multiply.outer(v.real, sinphi) + np.multiply.outer(v.imag, cosphi)
            t = sx + sy
            env = np.exp(-0.25 * w2 * t * t)
            weight = wq[ib]
            if lp:
                # vortex phase is unit modulus; only the radial factor survives
                weight = weight * (pump.waist_m * np.abs(v) / math.sqrt(2.0)) ** (2 * abs(lp))
            val = val * (env * env) * weight[:, None]

        flat = (ia[:, None] * N + js_idx[None, :]).ravel()
        I += np.bincount(flat, weights=(val * wphi).ravel(), minlength=R * N)

    out = I.reshape(R, N)
    peak = out.max()
    if peak <= 0.0:
        raise ConfigError("far-field intensity vanished on the whole grid")
    return IntensityMap(values=out / peak, grid=grid, crystal=crystal, pump=pump)
