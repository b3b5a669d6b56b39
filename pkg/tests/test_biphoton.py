"""Polar grid construction, phase mismatch, and the azimuthal kernel."""

import math

import numpy as np
import pytest

from spdc_walkoff.biphoton import (
    azimuthal_kernel,
    delta_k,
    make_polar_grid,
    two_photon_amplitude,
    wavevectors,
)
from spdc_walkoff.errors import ConfigError
from spdc_walkoff.oracles import brute_force_field
from spdc_walkoff.pump import LITERAL

from conftest import make_pump


# -- grid ------------------------------------------------------------------

def test_grid_shapes_and_weights(crystal_1mm, pump_plain):
    grid = make_polar_grid(crystal_1mm, pump_plain, n_radial=24, n_azimuthal=32)
    assert grid.n_radial == 24 and grid.n_azimuthal == 32
    assert grid.q_min == 0.0
    assert np.all(grid.q > grid.q_min) and np.all(grid.q < grid.q_max)
    assert np.all(grid.radial_weight > 0.0)
    # quadrature integrates q dq over the disk exactly for a polynomial
    disk = np.sum(grid.measure)
    assert disk == pytest.approx(0.5 * grid.q_max**2, rel=1e-12)
    assert grid.phi[0] == 0.0 and grid.phi.size == 32
    assert np.allclose(np.diff(grid.phi), 2.0 * np.pi / 32)


def test_grid_covers_pump_bandwidth(crystal_1mm, pump_plain):
    grid = make_polar_grid(crystal_1mm, pump_plain)
    assert grid.q_max >= 6.0 / pump_plain.waist_m


def test_grid_annulus_noncollinear(crystal_noncollinear, pump_plain):
    grid = make_polar_grid(crystal_noncollinear, pump_plain)
    assert grid.ring_q0 > 0.0
    assert grid.q_min < grid.ring_q0 < grid.q_max


def test_grid_rejects_bad_counts(crystal_1mm, pump_plain):
    with pytest.raises(ConfigError):
        make_polar_grid(crystal_1mm, pump_plain, n_radial=4)
    with pytest.raises(ConfigError):
        make_polar_grid(crystal_1mm, pump_plain, n_azimuthal=96)  # not a power of two
    with pytest.raises(ConfigError):
        make_polar_grid(crystal_1mm, pump_plain, n_azimuthal=4)


# -- mismatch --------------------------------------------------------------

def test_delta_k_zero_for_matched_pair(crystal_1mm, pump_plain):
    """Daughters with equal transverse wavevectors stay matched at any radius."""
    kp, ks = wavevectors(crystal_1mm, pump_plain)
    assert kp == pytest.approx(2.0 * ks, rel=1e-12)
    for q in (0.0, 1e4, 1e5):
        dk = delta_k(crystal_1mm, pump_plain, q, 0.7, q, 0.7)
        # the only residual is the phase-matching bisection tolerance
        assert abs(float(dk)) < 1e-5


def test_delta_k_tilt_free_curvature(crystal_1mm, pump_plain):
    """The mismatch grows as |q_s - q_i|^2 / (4 kbar) to leading order."""
    _, ks = wavevectors(crystal_1mm, pump_plain)
    qs, qi = 2e5, 1e5
    same = float(delta_k(crystal_1mm, pump_plain, qs, 0.3, qi, 0.3))
    assert same == pytest.approx((qs - qi) ** 2 / (4.0 * ks), rel=1e-3)
    opposite = float(delta_k(crystal_1mm, pump_plain, qs, 0.3, qi, 0.3 + np.pi))
    assert opposite == pytest.approx((qs + qi) ** 2 / (4.0 * ks), rel=1e-3)
    assert 0.0 < same < opposite


def test_delta_k_walkoff_sign(crystal_1mm):
    """The tilt term is subtracted: +x daughters lower delta_k for rho > 0."""
    pump = make_pump(walkoff_rad=math.radians(3.0))
    flat = make_pump()
    q = 2e5
    plus_x = float(delta_k(crystal_1mm, pump, q, 0.0, q, 0.0) - delta_k(crystal_1mm, flat, q, 0.0, q, 0.0))
    assert plus_x == pytest.approx(-2.0 * q * math.tan(pump.walkoff_rad), rel=1e-9)
    minus_x = float(delta_k(crystal_1mm, pump, q, np.pi, q, np.pi) - delta_k(crystal_1mm, flat, q, np.pi, q, np.pi))
    assert minus_x == pytest.approx(+2.0 * q * math.tan(pump.walkoff_rad), rel=1e-9)


def test_delta_k_evanescent_nan(crystal_1mm, pump_plain):
    _, ks = wavevectors(crystal_1mm, pump_plain)
    assert np.isnan(delta_k(crystal_1mm, pump_plain, 1.01 * ks, 0.0, 1e4, 0.0))
    assert two_photon_amplitude(crystal_1mm, pump_plain, 1.01 * ks, 0.0, 1e4, 0.0) == 0.0


# -- kernel ----------------------------------------------------------------

def _random_pump(rng):
    return make_pump(
        waist_m=float(rng.uniform(15e-6, 60e-6)),
        oam_l=int(rng.integers(-2, 3)),
        walkoff_rad=math.radians(float(rng.uniform(0.0, 4.0))),
        astig_beta=float(rng.uniform(-2.0, 2.0)),
    )


def test_kernel_matches_brute_force(crystal_1mm):
    rng = np.random.default_rng(7)
    pump = _random_pump(rng)
    grid = make_polar_grid(crystal_1mm, pump, n_radial=16, n_azimuthal=16)
    fast = azimuthal_kernel(crystal_1mm, pump, grid).W
    slow = brute_force_field(crystal_1mm, pump, grid).W
    scale = np.abs(slow).max()
    assert np.abs(fast - slow).max() / scale < 1e-12


def test_kernel_matches_brute_force_literal(crystal_1mm):
    # nonzero pump OAM so the vortex factor is exercised on this branch too
    pump = make_pump(envelope=LITERAL, oam_l=2, walkoff_rad=math.radians(2.0))
    grid = make_polar_grid(crystal_1mm, pump, n_radial=12, n_azimuthal=16)
    fast = azimuthal_kernel(crystal_1mm, pump, grid).W
    slow = brute_force_field(crystal_1mm, pump, grid).W
    assert np.abs(fast - slow).max() / np.abs(slow).max() < 1e-12


def test_kernel_circulant_without_walkoff(crystal_1mm, pump_plain):
    """rho = 0 leaves only the azimuth difference: W is circulant."""
    grid = make_polar_grid(crystal_1mm, pump_plain, n_radial=24, n_azimuthal=32)
    W = azimuthal_kernel(crystal_1mm, pump_plain, grid).W
    for shift in (1, 5):
        rolled = np.roll(np.roll(W, shift, axis=0), shift, axis=1)
        assert np.abs(W - rolled).max() < 1e-16 * np.abs(W).max() + 1e-300


def test_kernel_exchange_symmetry(crystal_1mm):
    """Degenerate daughters are exchange symmetric to rounding."""
    pump = make_pump(walkoff_rad=math.radians(3.0), astig_beta=1.0)
    grid = make_polar_grid(crystal_1mm, pump, n_radial=20, n_azimuthal=32)
    W = azimuthal_kernel(crystal_1mm, pump, grid).W
    assert np.abs(W - W.T).max() < 1e-13 * np.abs(W).max()


def test_kernel_walkoff_breaks_circulant(crystal_1mm):
    pump = make_pump(walkoff_rad=math.radians(3.0))
    grid = make_polar_grid(crystal_1mm, pump, n_radial=24, n_azimuthal=32)
    W = azimuthal_kernel(crystal_1mm, pump, grid).W
    rolled = np.roll(np.roll(W, 3, axis=0), 3, axis=1)
    assert np.abs(W - rolled).max() > 1e-6 * np.abs(W).max()
