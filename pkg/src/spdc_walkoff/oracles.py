"""Independent brute-force references for the test suite.

Everything here recomputes a pipeline quantity by the most direct route
available, with none of the production shortcuts: the two-photon
amplitude is evaluated pointwise through ``two_photon_amplitude``, the
azimuthal projection is a direct Riemann double sum against explicit
exp(-i l phi) phase matrices rather than an FFT, and the walk-off angle
comes from a finite difference instead of the analytic derivative.
These paths are slow on purpose and are only meant for coarse grids.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .biphoton import BiphotonField, PolarGrid, two_photon_amplitude
from .dispersion import CrystalConfig, SellmeierModel, index_e_at_angle
from .oam import OamSpectrum
from .pump import PumpConfig


def brute_force_field(crystal: CrystalConfig, pump: PumpConfig, grid: PolarGrid) -> BiphotonField:
    """W(phi_s, phi_i) assembled pair-by-pair from the reference amplitude."""
    N = grid.n_azimuthal
    W = np.zeros((N, N), dtype=complex)
    QS, QI = np.meshgrid(grid.q, grid.q, indexing="ij")
    for js in range(N):
        for ji in range(N):
            amp = two_photon_amplitude(crystal, pump, QS, grid.phi[js], QI, grid.phi[ji])
            W[js, ji] = np.einsum("a,b,ab->", grid.measure, grid.measure, amp)
    return BiphotonField(W=W, grid=grid, crystal=crystal, pump=pump)


def brute_force_spectrum(field: BiphotonField, l_max: int = 10) -> OamSpectrum:
    """Joint OAM spectrum by direct Riemann quadrature of the projection integral.

    The double sum over azimuthal nodes is written out against explicit
    phase matrices, with no Fourier-transform shortcut, then normalised
    and windowed exactly like the production path.
    """
    N = field.n_azimuthal
    modes = np.arange(N)
    # exp(-i l phi_j) for every ring mode l and node j
    E = np.exp(-1j * np.outer(modes, field.grid.phi))
    A = E @ field.W @ E.T
    S_full = np.abs(A) ** 2
    S_full /= S_full.sum()

    ring = np.empty(N)
    for t in range(N):
        ring[t] = sum(S_full[ls, (t - ls) % N] for ls in range(N))

    ls = np.arange(-l_max, l_max + 1)
    window = S_full[np.ix_(ls % N, ls % N)]
    return OamSpectrum(
        S=window,
        l_values=ls,
        l_max=l_max,
        truncation_mass=float(max(0.0, 1.0 - window.sum())),
        ring_prob=ring,
        l_tot_pump=field.pump.oam_l,
        n_azimuthal=N,
    )


def finite_difference_walkoff(model: SellmeierModel, theta_rad: float, wavelength_m: float, step: float = 1e-7) -> float:
    """Walk-off angle from a central difference of the angle-tuned index."""
    n_plus = index_e_at_angle(model, theta_rad + step, wavelength_m)
    n_minus = index_e_at_angle(model, theta_rad - step, wavelength_m)
    n = index_e_at_angle(model, theta_rad, wavelength_m)
    return float(np.arctan(-(n_plus - n_minus) / (2.0 * step) / n))


@dataclass
class OracleReport:
    """Worst-case deviation between a production spectrum and its oracle."""

    max_abs_deviation: float
    peak: float
    worst_entry: tuple[int, int]
    ring_deviation: float

    @property
    def relative_to_peak(self) -> float:
        return self.max_abs_deviation / self.peak if self.peak > 0 else np.inf


def compare_spectra(spectrum: OamSpectrum, oracle: OamSpectrum) -> OracleReport:
    """Elementwise windowed comparison, scaled against the spectrum peak.

    Probabilities many orders below the peak are noise-dominated in both
    paths, so the deviation that matters is absolute, reported relative
    to the largest probability in the window.
    """
    if spectrum.S.shape != oracle.S.shape or spectrum.n_azimuthal != oracle.n_azimuthal:
        raise ValueError("spectra were built on different grids")
    diff = np.abs(spectrum.S - oracle.S)
    worst = np.unravel_index(np.argmax(diff), diff.shape)
    return OracleReport(
        max_abs_deviation=float(diff[worst]),
        peak=float(spectrum.S.max()),
        worst_entry=(int(worst[0] - spectrum.l_max), int(worst[1] - spectrum.l_max)),
        ring_deviation=float(np.abs(spectrum.ring_prob - oracle.ring_prob).max()),
    )
