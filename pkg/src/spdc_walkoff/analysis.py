"""Parameter sweeps, sideband scaling fits, and pump-shape optimization.

The sweep drivers rerun the whole kernel -> spectrum pipeline per point,
so every point is an independent job; ``workers`` > 1 hands them to a
process pool and the results are reassembled in axis order either way.

``jacobi_anger_sideband`` is a second, structurally different route to
the sideband probabilities: the sinc is unrolled into a z integral, the
two walk-off exponentials are expanded into Bessel-weighted azimuthal
harmonics, and the sideband amplitudes are assembled order by order.
Truncating that expansion is what makes it an estimate; with generous
order it converges to the direct pipeline and serves as a cross-check.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np
from scipy.special import jv
from scipy.stats import linregress

from .biphoton import azimuthal_kernel, make_polar_grid, wavevectors
from .dispersion import COLLINEAR, CrystalConfig, index_e_at_angle, refractive_index
from .errors import ConfigError, ConvergenceError, PhysicsError
from .oam import f_leak, oam_spectrum, sideband_probability
from .pump import ISOTROPIC, PumpConfig

ODD_SIDEBANDS = "odd_sidebands"
TOTAL_LEAK = "total_leak"

DEFAULT_SIDEBAND_ORDERS = (-3, -2, -1, 0, 1, 2, 3)
DEFAULT_SCALING_RHO_DEG = (0.25, 0.5, 1.0, 2.0, 3.0, 4.0, 5.0)

# everything below this is treated as quadrature noise, not signal
PROBABILITY_FLOOR = 1e-14

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
_MAX_GOLDEN_ITER = 200


def rayleigh_range(crystal: CrystalConfig, pump: PumpConfig) -> float:
    """In-medium Rayleigh range pi w_p^2 n_pump(theta) / lambda_p."""
    n_pump = index_e_at_angle(crystal.model, crystal.theta_rad, pump.wavelength_m)
    return math.pi * pump.waist_m * pump.waist_m * n_pump / pump.wavelength_m


def spiral_bandwidth(crystal: CrystalConfig, pump: PumpConfig) -> float:
    """Rough one-sigma width of the spectrum in azimuthal mode number.

    Collinear, the width comes from the pump waist sampling the sinc
    acceptance, w_p sqrt(pi^2 n_o / (lambda_s L)); walk-off sidebands add
    tan(rho) L / (sqrt(2) w_p) in quadrature, the Bessel reach of the
    tilt phase at the pump-limited summed wavevector. Noncollinear
    emission adds w_p q_0 / 2 from the angular correlation across the
    ring. Pump OAM widens everything by |l_p|. This only steers grid
    sizing, so it errs simple rather than exact.
    """
    lam_s = pump.signal_wavelength_m
    n_o = refractive_index(crystal.model, lam_s, "o")
    sampling = math.pi * pump.waist_m * math.sqrt(n_o / (lam_s * crystal.length_m))
    walkoff = abs(math.tan(pump.walkoff_rad)) * crystal.length_m / (math.sqrt(2.0) * pump.waist_m)
    sigma = math.hypot(sampling, walkoff)
    if crystal.geometry != COLLINEAR:
        grid_probe = make_polar_grid(crystal, pump, n_radial=8, n_azimuthal=8)
        sigma += 0.5 * pump.waist_m * grid_probe.ring_q0
    return sigma + abs(pump.oam_l)


def suggest_grid(crystal: CrystalConfig, pump: PumpConfig) -> tuple[int, int]:
    """(n_radial, n_azimuthal) sized from the physics of one configuration.

    The azimuthal count is the next power of two holding about six sigma
    of spiral bandwidth; the radial count tracks the number of sinc
    oscillations across the radial window plus the phase swing of the
    walk-off tilt.
    """
    sigma = spiral_bandwidth(crystal, pump)
    n_az = 64
    while n_az < min(6.0 * sigma + 24.0, 4096.0):
        n_az *= 2
    grid_probe = make_polar_grid(crystal, pump, n_radial=8, n_azimuthal=8)
    _, ks = wavevectors(crystal, pump)
    span = grid_probe.q_max - grid_probe.q_min
    x_max = span * (grid_probe.q_max + grid_probe.q_min) * crystal.length_m / (2.0 * ks)
    x_tilt = 0.5 * abs(math.tan(pump.walkoff_rad)) * span * crystal.length_m
    n_rad = int(max(64, min(4.0 * x_max / math.pi + 0.35 * x_tilt + 32.0, 512.0)))
    return n_rad, n_az


@dataclass(eq=False)
class SweepResult:
    """One sweep axis with f_leak and sideband probabilities per point."""

    axis_name: str
    values: np.ndarray
    f_leak: np.ndarray
    sidebands: dict[int, np.ndarray]
    config: dict

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=float)
        self.f_leak = np.asarray(self.f_leak, dtype=float)
        if self.values.ndim != 1 or self.values.size == 0:
            raise ConfigError("sweep axis must be a non-empty 1D array")
        if np.any(np.diff(self.values) <= 0.0):
            raise ConfigError("sweep axis values must be strictly increasing")
        if not (np.all(np.isfinite(self.values)) and np.all(np.isfinite(self.f_leak))):
            raise ConfigError("sweep produced non-finite values")


@dataclass(eq=False)
class ScalingFit:
    """Log-log fit of one sideband probability against tan(rho)."""

    order: int
    tan_rho: np.ndarray
    probability: np.ndarray
    slope: float
    slope_stderr: float
    intercept: float


def _sweep_point(job):
    crystal, pump, n_radial, n_azimuthal, l_max, orders = job
    grid = make_polar_grid(crystal, pump, n_radial=n_radial, n_azimuthal=n_azimuthal)
    field = azimuthal_kernel(crystal, pump, grid)
    spectrum = oam_spectrum(field, l_max=l_max)
    return f_leak(spectrum), [sideband_probability(spectrum, n) for n in orders]


def _run_points(jobs, workers):
    if workers is not None and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_sweep_point, jobs))
    return [_sweep_point(job) for job in jobs]


def _assemble(axis_name, values, results, orders, config) -> SweepResult:
    leak = np.array([r[0] for r in results])
    sidebands = {n: np.array([r[1][i] for r in results]) for i, n in enumerate(orders)}
    return SweepResult(axis_name=axis_name, values=np.asarray(values, float),
                       f_leak=leak, sidebands=sidebands, config=config)


def sweep_focusing(
    crystal: CrystalConfig,
    pump: PumpConfig,
    focusing_values,
    l_max: int = 10,
    orders=DEFAULT_SIDEBAND_ORDERS,
    n_radial: int | None = None,
    n_azimuthal: int | None = None,
    workers: int | None = None,
) -> SweepResult:
    """f_leak against the focusing parameter sqrt(L / z_R).

    The waist is held fixed and the crystal length set to z_R f^2 per
    point, with the in-medium Rayleigh range of ``rayleigh_range``. Both
    conventions are recorded in the result config.
    """
    values = np.asarray(focusing_values, dtype=float)
    if values.size == 0 or np.any(values <= 0.0) or np.any(values > 2.0):
        raise ConfigError("focusing values must lie in (0, 2]")
    z_r = rayleigh_range(crystal, pump)
    jobs = []
    resolutions = []
    for f in values:
        point = replace(crystal, length_m=z_r * f * f)
        nr, na = (n_radial, n_azimuthal)
        if nr is None or na is None:
            nr_auto, na_auto = suggest_grid(point, pump)
            nr, na = nr or nr_auto, na or na_auto
        resolutions.append((nr, na))
        jobs.append((point, pump, nr, na, l_max, tuple(orders)))
    results = _run_points(jobs, workers)
    config = {
        "knob": "length_at_fixed_waist",
        "rayleigh_convention": "in_medium",
        "rayleigh_range_m": z_r,
        "waist_m": pump.waist_m,
        "walkoff_rad": pump.walkoff_rad,
        "geometry": crystal.geometry,
        "theta_rad": crystal.theta_rad,
        "l_max": l_max,
        "grid_per_point": resolutions,
    }
    return _assemble("focusing", values, results, tuple(orders), config)


def sweep_walkoff(
    crystal: CrystalConfig,
    pump: PumpConfig,
    walkoff_values_rad,
    l_max: int = 10,
    orders=DEFAULT_SIDEBAND_ORDERS,
    n_radial: int | None = None,
    n_azimuthal: int | None = None,
    workers: int | None = None,
) -> SweepResult:
    """Sideband probabilities against the walk-off angle at fixed geometry."""
    values = np.asarray(walkoff_values_rad, dtype=float)
    if values.size == 0 or np.any(values < 0.0):
        raise ConfigError("walk-off values must be non-negative radians")
    if n_radial is None or n_azimuthal is None:
        nr_auto, na_auto = suggest_grid(crystal, pump)
        n_radial, n_azimuthal = n_radial or nr_auto, n_azimuthal or na_auto
    jobs = [
        (crystal, pump.with_(walkoff_rad=float(rho)), n_radial, n_azimuthal, l_max, tuple(orders))
        for rho in values
    ]
    results = _run_points(jobs, workers)
    config = {
        "knob": "walkoff_at_fixed_geometry",
        "length_m": crystal.length_m,
        "waist_m": pump.waist_m,
        "geometry": crystal.geometry,
        "theta_rad": crystal.theta_rad,
        "l_max": l_max,
        "grid": (n_radial, n_azimuthal),
        "perturbative_limit": "L tan(rho) / w_p < 0.5 for scaling fits",
    }
    return _assemble("walkoff_rad", values, results, tuple(orders), config)


def fit_scaling_law(sweep: SweepResult, order: int, floor: float = PROBABILITY_FLOOR) -> ScalingFit:
    """Slope of log P(order) against log tan(rho) from a walk-off sweep.

    Points at rho = 0 or with probability at the quadrature floor are
    dropped; at least five must survive.
    """
    if sweep.axis_name != "walkoff_rad":
        raise ConfigError("scaling fits need a walk-off sweep")
    if order not in sweep.sidebands:
        raise ConfigError(f"sweep does not record sideband order {order}")
    prob = sweep.sidebands[order]
    tan_rho = np.tan(sweep.values)
    keep = (tan_rho > 0.0) & (prob > floor)
    if int(keep.sum()) < 5:
        raise ConvergenceError(
            f"scaling fit for order {order} has {int(keep.sum())} usable points, needs 5"
        )
    fit = linregress(np.log(tan_rho[keep]), np.log(prob[keep]))
    return ScalingFit(
        order=order,
        tan_rho=tan_rho[keep],
        probability=prob[keep],
        slope=float(fit.slope),
        slope_stderr=float(fit.stderr),
        intercept=float(fit.intercept),
    )


def _perturbative_strength(crystal: CrystalConfig, pump: PumpConfig) -> float:
    return crystal.length_m * math.tan(pump.walkoff_rad) / pump.waist_m


def jacobi_anger_sideband(
    crystal: CrystalConfig,
    pump: PumpConfig,
    order: int,
    max_bessel_order: int = 10,
    n_radial: int = 64,
    n_azimuthal: int | None = None,
    l_window: int | None = None,
    n_z: int = 48,
) -> float:
    """P(order) via Bessel expansion of the walk-off phase.

    The sinc is restored to its z integral, each arm's walk-off
    exponential exp(-i tan(rho) q z cos(phi)) is expanded into azimuthal
    harmonics weighted by J_m(tan(rho) q z) up to |m| <= max_bessel_order,
    and the z and radial integrals are done by Gauss-Legendre quadrature.
    The azimuth-difference structure of everything else (pump envelope,
    tilt-free mismatch) is handled exactly through its discrete Fourier
    transform, so the truncation order is the only approximation beyond
    shared quadrature.

    Restricted to the isotropic envelope without astigmatism; pump OAM is
    allowed and shifts the conserved line as usual.
    """
    if max_bessel_order < abs(order):
        raise ConfigError("max_bessel_order must be at least |order|")
    if pump.envelope != ISOTROPIC or pump.astig_beta != 0.0:
        raise ConfigError("the Bessel expansion covers the isotropic, non-astigmatic pump only")
    strength = _perturbative_strength(crystal, pump)
    if strength >= 0.3:
        raise PhysicsError(
            f"L tan(rho) / w_p = {strength:.3f} is outside the perturbative regime (< 0.3)"
        )

    if n_azimuthal is None:
        _, n_azimuthal = suggest_grid(crystal, pump)
    grid = make_polar_grid(crystal, pump, n_radial=n_radial, n_azimuthal=n_azimuthal)
    N = grid.n_azimuthal
    R = grid.n_radial
    kp, ks = wavevectors(crystal, pump)
    tanrho = math.tan(pump.walkoff_rad)
    lp = pump.oam_l
    w2 = pump.waist_m * pump.waist_m
    L = crystal.length_m
    if l_window is None:
        l_window = int(max(16.0, math.ceil(5.0 * spiral_bandwidth(crystal, pump)))) + max_bessel_order
    if 2 * l_window + 1 > N:
        l_window = (N - 1) // 2

    q = grid.q
    delta = 2.0 * math.pi * np.arange(N) / N
    ksz = np.sqrt(ks * ks - q * q)
    # tilt-free mismatch and pump envelope over (q_s, q_i, azimuth difference)
    sum2 = q[:, None, None] ** 2 + q[None, :, None] ** 2 + 2.0 * np.cos(delta)[None, None, :] * (q[:, None] * q[None, :])[:, :, None]
    open_channel = sum2 < kp * kp
    dk0 = np.where(open_channel, np.sqrt(np.where(open_channel, kp * kp - sum2, 0.0)) - ksz[:, None, None] - ksz[None, :, None], 0.0)
    G = np.where(open_channel, np.exp(-0.25 * w2 * sum2), 0.0).astype(complex)
    if lp:
        v = q[:, None, None] + (q[None, :, None] * np.exp(-1j * delta)[None, None, :])
        av = np.sqrt(sum2)
        radial = (pump.waist_m * av / math.sqrt(2.0)) ** abs(lp)
        unit = np.where(av > 0.0, v / np.where(av > 0.0, av, 1.0), 0.0)
        phase = unit ** abs(lp)
        if lp < 0:
            phase = np.conj(phase)
        G = G * radial * phase
    G = G * (grid.measure[:, None, None] * grid.measure[None, :, None])

    z_nodes, z_weights = np.polynomial.legendre.leggauss(n_z)
    z_nodes = 0.5 * L * (z_nodes + 1.0)
    z_weights = z_weights * (0.5 * L)

    m_orders = np.arange(-max_bessel_order, max_bessel_order + 1)
    m_phase = (-1j) ** m_orders
    t_span = l_window + max_bessel_order + abs(lp)
    t_values = range(-t_span, t_span + 1)
    side = 2 * l_window + 1
    A = np.zeros((side, side), dtype=complex)

    for z_k, w_k in zip(z_nodes, z_weights):
        H = G * np.exp(1j * z_k * dk0)
        # Hhat[t] = sum_d H(d) exp(-2 pi i t d / N), the forward transform
        Hhat = np.fft.fft(H, axis=2)
        C = m_phase[:, None] * jv(m_orders[:, None], tanrho * z_k * q[None, :])
        for t in t_values:
            block = w_k * (C @ Hhat[:, :, t % N] @ C.T)
            # rows land on l_s = m_s + t + l_p, columns on l_i = m_i - t
            r_lo = t + lp - max_bessel_order + l_window
            c_lo = -t - max_bessel_order + l_window
            r_hi, c_hi = r_lo + m_orders.size, c_lo + m_orders.size
            br_lo, bc_lo = max(0, -r_lo), max(0, -c_lo)
            br_hi = m_orders.size - max(0, r_hi - side)
            bc_hi = m_orders.size - max(0, c_hi - side)
            if br_lo >= br_hi or bc_lo >= bc_hi:
                continue
            A[max(0, r_lo):min(side, r_hi), max(0, c_lo):min(side, c_hi)] += block[br_lo:br_hi, bc_lo:bc_hi]

    S = np.abs(A) ** 2
    total = S.sum()
    if total <= 0.0:
        raise PhysicsError("expansion produced an empty spectrum")
    ls = np.arange(-l_window, l_window + 1)
    n_tot = ls[:, None] + ls[None, :] - lp
    return float(S[n_tot == order].sum() / total)


@dataclass(eq=False)
class AstigmatismResult:
    """Outcome of the one-dimensional astigmatism search."""

    beta_opt: float
    objective: str
    objective_value: float
    at_boundary: bool
    baseline_sidebands: dict[int, float]
    corrected_sidebands: dict[int, float]
    baseline_f_leak: float
    corrected_f_leak: float


def golden_section(func, lo: float, hi: float, tol: float = 1e-3):
    """Minimize a unimodal scalar function on [lo, hi].

    Returns (x, f(x), at_boundary) where at_boundary reports the minimum
    sitting within 2 tol of either end, meaning the interval did not
    bracket it.
    """
    if not hi > lo:
        raise ConfigError("golden_section needs hi > lo")
    a, b = float(lo), float(hi)
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = func(c), func(d)
    for _ in range(_MAX_GOLDEN_ITER):
        if b - a <= tol:
            break
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = func(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = func(d)
    else:
        raise ConvergenceError("golden section failed to shrink the interval")
    x = c if fc < fd else d
    fx = min(fc, fd)
    at_boundary = min(x - lo, hi - x) <= 2.0 * tol
    return x, fx, at_boundary


def optimize_astigmatism(
    crystal: CrystalConfig,
    pump: PumpConfig,
    beta_range: tuple[float, float] = (-10.0, 10.0),
    objective: str = ODD_SIDEBANDS,
    tol: float = 1e-3,
    l_max: int = 10,
    orders=DEFAULT_SIDEBAND_ORDERS,
    n_radial: int | None = None,
    n_azimuthal: int | None = None,
) -> AstigmatismResult:
    """Search the astigmatism coefficient that minimizes sideband leakage.

    ``odd_sidebands`` minimizes P(+1) + P(-1); ``total_leak`` minimizes
    f_leak. The search interval must be symmetric about zero. If the
    optimum does not beat beta = 0 by more than quadrature noise the
    uncorrected pump is returned, which also covers the degenerate
    rho = 0 case where the objective is flat.
    """
    lo, hi = float(beta_range[0]), float(beta_range[1])
    if not math.isclose(lo, -hi, rel_tol=1e-12, abs_tol=1e-12) or hi <= 0.0:
        raise ConfigError("beta_range must be symmetric about zero, (-b, b)")
    if objective not in (ODD_SIDEBANDS, TOTAL_LEAK):
        raise ConfigError(f"unknown objective {objective!r}")
    if n_radial is None or n_azimuthal is None:
        nr_auto, na_auto = suggest_grid(crystal, pump)
        n_radial, n_azimuthal = n_radial or nr_auto, n_azimuthal or na_auto
    grid = make_polar_grid(crystal, pump, n_radial=n_radial, n_azimuthal=n_azimuthal)

    def sidebands_at(beta: float):
        shaped = pump.with_(astig_beta=beta)
        spectrum = oam_spectrum(azimuthal_kernel(crystal, shaped, grid), l_max=l_max)
        probs = {n: sideband_probability(spectrum, n) for n in orders}
        return probs, f_leak(spectrum)

    cache: dict[float, float] = {}

    def score(beta: float) -> float:
        if beta not in cache:
            probs, leak = sidebands_at(beta)
            cache[beta] = leak if objective == TOTAL_LEAK else probs[1] + probs[-1]
        return cache[beta]

    beta_opt, value_opt, at_boundary = golden_section(score, lo, hi, tol=tol)
    baseline_probs, baseline_leak = sidebands_at(0.0)
    baseline_value = baseline_leak if objective == TOTAL_LEAK else baseline_probs[1] + baseline_probs[-1]
    if baseline_value <= value_opt + PROBABILITY_FLOOR:
        beta_opt, value_opt, at_boundary = 0.0, baseline_value, False
    corrected_probs, corrected_leak = sidebands_at(beta_opt)
    return AstigmatismResult(
        beta_opt=float(beta_opt),
        objective=objective,
        objective_value=float(value_opt),
        at_boundary=at_boundary,
        baseline_sidebands=baseline_probs,
        corrected_sidebands=corrected_probs,
        baseline_f_leak=float(baseline_leak),
        corrected_f_leak=float(corrected_leak),
    )
