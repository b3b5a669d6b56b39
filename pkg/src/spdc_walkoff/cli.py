"""Command-line front end.

Configuration files are TOML (or the JSON snapshot of a previous run;
the two carry the same sections). Every numeric key names its unit.
Results are written as CSV plus a JSON summary whose ``config`` block
echoes all resolved values, so any summary can be fed back in as a
config and reproduces the run bit for bit: floats are serialized with
17 significant digits everywhere and no output carries a timestamp.

Exit codes: 0 success, 2 configuration errors, 3 physics or domain
errors, 4 numerical non-convergence. Failures print a one-line JSON
object on stderr with the category and message.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

import numpy as np

from . import analysis
from .biphoton import azimuthal_kernel, make_polar_grid
from .dispersion import (
    COLLINEAR,
    NONCOLLINEAR,
    CrystalConfig,
    load_crystal,
    phase_match_angle,
    walkoff_angle,
)
from .errors import ConfigError, ConvergenceError, PhysicsError
from .farfield import signal_intensity
from .oam import f_leak, oam_spectrum, sideband_probability, total_oam_distribution
from .pump import ISOTROPIC, LITERAL, PumpConfig

SCHEMA_VERSION = 1
ENV_OUTPUT_DIR = "SPDCWALK_OUTPUT_DIR"

SUBCOMMANDS = (
    "phase-match",
    "walkoff",
    "spectrum",
    "total-oam",
    "farfield",
    "sweep-focus",
    "sweep-walkoff",
    "fit-scaling",
    "optimize-astig",
)

_SECTIONS = {
    "crystal": {"name", "theta_deg", "length_mm", "geometry"},
    "pump": {"wavelength_nm", "waist_um", "oam_l", "walkoff_deg", "astig_beta", "envelope"},
    "grid": {"n_radial", "n_azimuthal", "l_max"},
    "output": {"directory", "formats"},
    "sweep": {"focusing", "walkoff_deg", "workers"},
    "fit": {"orders"},
    "astig": {"beta_max", "objective", "tolerance"},
}


def format_float(value: float) -> str:
    """One float, 17 significant digits, bit-stable through a re-parse."""
    text = format(float(value), ".17g")
    # keep integral floats typed as floats on the way back in
    return text + ".0" if text.lstrip("-").isdigit() else text


def _emit(obj, out: list, indent: int) -> None:
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        keys = sorted(obj, key=str)
        for i, k in enumerate(keys):
            out.append(f'{pad}  "{k}": ')
            _emit(obj[k], out, indent + 1)
            out.append(",\n" if i < len(keys) - 1 else "\n")
        out.append(pad + "}")
    elif isinstance(obj, (list, tuple)):
        if not obj:
            out.append("[]")
            return
        out.append("[\n")
        for i, item in enumerate(obj):
            out.append(pad + "  ")
            _emit(item, out, indent + 1)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(pad + "]")
    elif isinstance(obj, bool):
        out.append("true" if obj else "false")
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(format_float(obj))
    elif obj is None:
        out.append("null")
    else:
        out.append(json.dumps(str(obj)))


def dump_json(obj) -> str:
    """Deterministic JSON: sorted keys, 17-digit floats, trailing newline."""
    out: list = []
    _emit(obj, out, 0)
    return "".join(out) + "\n"


def write_json(path: Path, obj) -> None:
    path.write_text(dump_json(obj))


def write_csv(path: Path, header, rows) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(format_float(v) if isinstance(v, (float, np.floating)) else str(v) for v in row))
    path.write_text("\n".join(lines) + "\n")


def load_config(path: str) -> dict:
    """Read a TOML config or a JSON summary from a previous run."""
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if p.suffix.lower() == ".json":
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON in {path}: {exc}") from exc
        # a summary nests the sections under "config"
        if isinstance(raw, dict) and "config" in raw and isinstance(raw["config"], dict):
            raw = raw["config"]
    else:
        try:
            raw = tomllib.loads(text)
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"invalid TOML in {path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a table of sections")
    return raw


def validate_sections(raw: dict) -> None:
    for section, table in raw.items():
        if section not in _SECTIONS:
            raise ConfigError(f"unknown config section [{section}]")
        if not isinstance(table, dict):
            raise ConfigError(f"section [{section}] must be a table")
        for key in table:
            if key not in _SECTIONS[section]:
                raise ConfigError(f"unknown key {key!r} in section [{section}]")


def parse_override(text: str):
    """One --set section.key=value with the value read as a TOML literal."""
    if "=" not in text:
        raise ConfigError(f"--set needs section.key=value, got {text!r}")
    target, value = text.split("=", 1)
    parts = target.strip().split(".")
    if len(parts) != 2:
        raise ConfigError(f"--set target must be section.key, got {target!r}")
    try:
        parsed = tomllib.loads(f"v = {value}")["v"]
    except tomllib.TOMLDecodeError:
        parsed = value.strip()
    return parts[0], parts[1], parsed


def apply_overrides(raw: dict, overrides) -> dict:
    for text in overrides or ():
        section, key, value = parse_override(text)
        raw.setdefault(section, {})[key] = value
    return raw


def _get(raw: dict, section: str, key: str, default=None, required: bool = False):
    value = raw.get(section, {}).get(key, default)
    if required and value is None:
        raise ConfigError(f"missing required config value {section}.{key}")
    return value


def _number(raw, section, key, default=None, required=False) -> float | None:
    value = _get(raw, section, key, default, required)
    if value is None:
        return None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{section}.{key} must be a number, got {value!r}")
    return float(value)


class _Resolved:
    """Everything a subcommand needs, plus the snapshot of how it got there.

    The unit-suffixed values from the config are the canonical numbers:
    SI quantities are derived from them, never the other way around, so
    a snapshot re-read as a config reproduces the run bit for bit even
    when the scale factors are not exactly invertible.
    """

    def __init__(self, crystal, pump, n_radial, n_azimuthal, l_max, raw, units):
        self.crystal = crystal
        self.pump = pump
        self.n_radial = n_radial
        self.n_azimuthal = n_azimuthal
        self.l_max = l_max
        self.raw = raw
        self.units = units

    def grid(self):
        return make_polar_grid(self.crystal, self.pump, n_radial=self.n_radial, n_azimuthal=self.n_azimuthal)

    def snapshot(self) -> dict:
        crystal = {
            "name": _get(self.raw, "crystal", "name", "BBO"),
            "theta_deg": self.units["theta_deg"],
            "length_mm": self.units["length_mm"],
            "geometry": self.crystal.geometry,
        }
        pump = {
            "wavelength_nm": self.units["wavelength_nm"],
            "waist_um": self.units["waist_um"],
            "oam_l": self.pump.oam_l,
            "walkoff_deg": self.units["walkoff_deg"],
            "astig_beta": self.pump.astig_beta,
            "envelope": self.pump.envelope,
        }
        grid = {"n_radial": self.n_radial, "n_azimuthal": self.n_azimuthal, "l_max": self.l_max}
        snap = {"crystal": crystal, "pump": pump, "grid": grid}
        for section in ("sweep", "fit", "astig"):
            if section in self.raw:
                snap[section] = dict(self.raw[section])
        return snap


def resolve(raw: dict) -> _Resolved:
    validate_sections(raw)
    name = _get(raw, "crystal", "name", "BBO")
    if not isinstance(name, str):
        raise ConfigError("crystal.name must be a string")
    model = load_crystal(name)

    wavelength_nm = _number(raw, "pump", "wavelength_nm", required=True)
    lam_p = wavelength_nm * 1e-9

    theta_raw = _get(raw, "crystal", "theta_deg", "auto-phase-match")
    if theta_raw == "auto-phase-match":
        theta_deg = math.degrees(phase_match_angle(model, lam_p))
    elif isinstance(theta_raw, (int, float)) and not isinstance(theta_raw, bool):
        theta_deg = float(theta_raw)
    else:
        raise ConfigError(f'crystal.theta_deg must be a number or "auto-phase-match", got {theta_raw!r}')
    theta = math.radians(theta_deg)

    geometry = _get(raw, "crystal", "geometry", COLLINEAR)
    if geometry not in (COLLINEAR, NONCOLLINEAR):
        raise ConfigError(f"crystal.geometry must be {COLLINEAR!r} or {NONCOLLINEAR!r}")
    length_mm = _number(raw, "crystal", "length_mm", required=True)
    crystal = CrystalConfig(model=model, theta_rad=theta, length_m=length_mm * 1e-3, geometry=geometry)

    walkoff_raw = _get(raw, "pump", "walkoff_deg", 0.0)
    if walkoff_raw == "auto-from-dispersion":
        walkoff_deg = math.degrees(walkoff_angle(model, theta, lam_p))
    elif isinstance(walkoff_raw, (int, float)) and not isinstance(walkoff_raw, bool):
        walkoff_deg = float(walkoff_raw)
    else:
        raise ConfigError(f'pump.walkoff_deg must be a number or "auto-from-dispersion", got {walkoff_raw!r}')

    envelope = _get(raw, "pump", "envelope", ISOTROPIC)
    if envelope not in (ISOTROPIC, LITERAL):
        raise ConfigError(f"pump.envelope must be {ISOTROPIC!r} or {LITERAL!r}")
    oam_l = _get(raw, "pump", "oam_l", 0)
    if isinstance(oam_l, bool) or not isinstance(oam_l, int):
        raise ConfigError("pump.oam_l must be an integer")
    waist_um = _number(raw, "pump", "waist_um", required=True)
    pump = PumpConfig(
        wavelength_m=lam_p,
        waist_m=waist_um * 1e-6,
        oam_l=oam_l,
        walkoff_rad=math.radians(walkoff_deg),
        astig_beta=_number(raw, "pump", "astig_beta", 0.0),
        envelope=envelope,
    )
    units = {
        "wavelength_nm": wavelength_nm,
        "waist_um": waist_um,
        "length_mm": length_mm,
        "theta_deg": theta_deg,
        "walkoff_deg": walkoff_deg,
    }

    n_radial = _get(raw, "grid", "n_radial")
    n_azimuthal = _get(raw, "grid", "n_azimuthal")
    if n_radial in (None, "auto") or n_azimuthal in (None, "auto"):
        nr_auto, na_auto = analysis.suggest_grid(crystal, pump)
        n_radial = nr_auto if n_radial in (None, "auto") else n_radial
        n_azimuthal = na_auto if n_azimuthal in (None, "auto") else n_azimuthal
    for label, value in (("n_radial", n_radial), ("n_azimuthal", n_azimuthal)):
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f'grid.{label} must be an integer or "auto"')
    l_max = _get(raw, "grid", "l_max", 10)
    if isinstance(l_max, bool) or not isinstance(l_max, int):
        raise ConfigError("grid.l_max must be an integer")
    return _Resolved(crystal, pump, n_radial, n_azimuthal, l_max, raw, units)


def _formats(raw) -> set:
    formats = _get(raw, "output", "formats", ["csv", "json"])
    if not isinstance(formats, list) or not formats or any(f not in ("csv", "json") for f in formats):
        raise ConfigError('output.formats must be a non-empty list drawn from ["csv", "json"]')
    return set(formats)


def _output_dir(args, raw) -> Path:
    candidate = args.output_dir or os.environ.get(ENV_OUTPUT_DIR) or _get(raw, "output", "directory") or "."
    path = Path(candidate)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _summary(run: _Resolved, results: dict) -> dict:
    return {"schema_version": SCHEMA_VERSION, "config": run.snapshot(), "results": results}


def _sideband_block(spectrum) -> dict:
    return {str(n): sideband_probability(spectrum, n) for n in analysis.DEFAULT_SIDEBAND_ORDERS}


def cmd_phase_match(run: _Resolved, outdir: Path, formats: set) -> str:
    theta_deg = run.units["theta_deg"]
    if "json" in formats:
        write_json(outdir / "phase_match.json", _summary(run, {"theta_deg": theta_deg}))
    return f"phase-match: theta = {theta_deg:.6f} deg"


def cmd_walkoff(run: _Resolved, outdir: Path, formats: set) -> str:
    rho = walkoff_angle(run.crystal.model, run.crystal.theta_rad, run.pump.wavelength_m)
    rho_deg = math.degrees(rho)
    if "json" in formats:
        write_json(outdir / "walkoff.json", _summary(run, {"rho_deg": rho_deg, "theta_deg": run.units["theta_deg"]}))
    return f"walkoff: rho = {rho_deg:.6f} deg at theta = {run.units['theta_deg']:.6f} deg"


def _spectrum(run: _Resolved):
    field = azimuthal_kernel(run.crystal, run.pump, run.grid())
    return oam_spectrum(field, l_max=run.l_max)


def cmd_spectrum(run: _Resolved, outdir: Path, formats: set) -> str:
    spectrum = _spectrum(run)
    leak = f_leak(spectrum)
    if "csv" in formats:
        rows = [
            (int(ls), int(li), spectrum.probability(int(ls), int(li)))
            for ls in spectrum.l_values
            for li in spectrum.l_values
        ]
        write_csv(outdir / "spectrum.csv", ("l_s", "l_i", "probability"), rows)
    if "json" in formats:
        write_json(outdir / "spectrum.json", _summary(run, {
            "f_leak": leak,
            "truncation_mass": spectrum.truncation_mass,
            "l_max": spectrum.l_max,
            "l_tot_pump": spectrum.l_tot_pump,
            "S": [float(v) for v in spectrum.S.ravel()],
            "sidebands": _sideband_block(spectrum),
        }))
    return f"spectrum: f_leak = {format_float(leak)}, truncation_mass = {format_float(spectrum.truncation_mass)}"


def cmd_total_oam(run: _Resolved, outdir: Path, formats: set) -> str:
    spectrum = _spectrum(run)
    n_values, window = total_oam_distribution(spectrum)
    ring = [
        sideband_probability(spectrum, int(n) - spectrum.l_tot_pump)
        if abs(int(n) - spectrum.l_tot_pump) <= spectrum.n_azimuthal // 4 else 0.0
        for n in n_values
    ]
    if "csv" in formats:
        rows = [(int(n), float(window[i]), float(ring[i])) for i, n in enumerate(n_values)]
        write_csv(outdir / "total_oam.csv", ("l_total", "window_probability", "ring_probability"), rows)
    if "json" in formats:
        write_json(outdir / "total_oam.json", _summary(run, {
            "f_leak": f_leak(spectrum),
            "sidebands": _sideband_block(spectrum),
        }))
    return f"total-oam: f_leak = {format_float(f_leak(spectrum))}"


def cmd_farfield(run: _Resolved, outdir: Path, formats: set) -> str:
    intensity = signal_intensity(run.crystal, run.pump, run.grid())
    cx, cy = intensity.centroid()
    if "csv" in formats:
        grid = intensity.grid
        rows = [
            (float(grid.q[a]), float(grid.phi[j]), float(intensity.values[a, j]))
            for a in range(grid.n_radial)
            for j in range(grid.n_azimuthal)
        ]
        write_csv(outdir / "farfield.csv", ("q_s", "phi_s", "intensity"), rows)
    if "json" in formats:
        write_json(outdir / "farfield.json", _summary(run, {
            "centroid_x_waist": cx,
            "centroid_y_waist": cy,
            "azimuthal_anisotropy": intensity.azimuthal_anisotropy(),
            "ring_peak_q": intensity.ring_peak_q(),
            "q_min": intensity.grid.q_min,
            "q_max": intensity.grid.q_max,
            "n_radial": intensity.grid.n_radial,
            "n_azimuthal": intensity.grid.n_azimuthal,
        }))
    return f"farfield: centroid = ({cx:.6f}, {cy:.6f}) waist units"


def _sweep_files(run, sweep, outdir: Path, formats: set, stem: str, axis_header: str, axis_values) -> None:
    orders = sorted(sweep.sidebands)
    if "csv" in formats:
        header = (axis_header, "f_leak") + tuple(f"P_{n}" for n in orders)
        rows = [
            (float(axis_values[i]), float(sweep.f_leak[i])) + tuple(float(sweep.sidebands[n][i]) for n in orders)
            for i in range(sweep.values.size)
        ]
        write_csv(outdir / f"{stem}.csv", header, rows)
    if "json" in formats:
        write_json(outdir / f"{stem}.json", {
            "schema_version": SCHEMA_VERSION,
            "config": run.snapshot(),
            "sweep_meta": sweep.config,
            "axis_name": sweep.axis_name,
            "values": [float(v) for v in sweep.values],
            "f_leak": [float(v) for v in sweep.f_leak],
            "sidebands": {str(n): [float(v) for v in sweep.sidebands[n]] for n in orders},
        })


def cmd_sweep_focus(run: _Resolved, outdir: Path, formats: set, workers=None) -> str:
    focusing = _get(run.raw, "sweep", "focusing", required=True)
    if not isinstance(focusing, list) or not focusing:
        raise ConfigError("sweep.focusing must be a non-empty list of numbers")
    workers = workers or _get(run.raw, "sweep", "workers")
    sweep = analysis.sweep_focusing(
        run.crystal, run.pump, [float(v) for v in focusing],
        l_max=run.l_max, workers=workers,
    )
    _sweep_files(run, sweep, outdir, formats, "sweep_focus", "focusing", sweep.values)
    return f"sweep-focus: {sweep.values.size} points, f_leak in [{format_float(sweep.f_leak.min())}, {format_float(sweep.f_leak.max())}]"


def _walkoff_values_deg(run: _Resolved):
    values = _get(run.raw, "sweep", "walkoff_deg", list(analysis.DEFAULT_SCALING_RHO_DEG))
    if not isinstance(values, list) or not values:
        raise ConfigError("sweep.walkoff_deg must be a non-empty list of degrees")
    return [float(v) for v in values]


def cmd_sweep_walkoff(run: _Resolved, outdir: Path, formats: set, workers=None) -> str:
    degrees = _walkoff_values_deg(run)
    workers = workers or _get(run.raw, "sweep", "workers")
    sweep = analysis.sweep_walkoff(
        run.crystal, run.pump, np.radians(degrees),
        l_max=run.l_max, n_radial=run.n_radial, n_azimuthal=run.n_azimuthal, workers=workers,
    )
    _sweep_files(run, sweep, outdir, formats, "sweep_walkoff", "walkoff_deg", degrees)
    return f"sweep-walkoff: {sweep.values.size} points, f_leak up to {format_float(sweep.f_leak.max())}"


def cmd_fit_scaling(run: _Resolved, outdir: Path, formats: set, workers=None) -> str:
    orders = _get(run.raw, "fit", "orders", [1, 2, 3])
    if not isinstance(orders, list) or not orders or any(isinstance(n, bool) or not isinstance(n, int) for n in orders):
        raise ConfigError("fit.orders must be a non-empty list of integers")
    degrees = _walkoff_values_deg(run)
    workers = workers or _get(run.raw, "sweep", "workers")
    sweep = analysis.sweep_walkoff(
        run.crystal, run.pump, np.radians(degrees),
        l_max=run.l_max, n_radial=run.n_radial, n_azimuthal=run.n_azimuthal, workers=workers,
    )
    fits = {n: analysis.fit_scaling_law(sweep, n) for n in orders}
    if "csv" in formats:
        rows = [
            (n, float(t), float(p))
            for n, fit in sorted(fits.items())
            for t, p in zip(fit.tan_rho, fit.probability)
        ]
        write_csv(outdir / "fit_scaling.csv", ("order", "tan_rho", "probability"), rows)
    if "json" in formats:
        write_json(outdir / "fit_scaling.json", {
            "schema_version": SCHEMA_VERSION,
            "config": run.snapshot(),
            "sweep_meta": sweep.config,
            "fits": {
                str(n): {
                    "slope": fit.slope,
                    "slope_stderr": fit.slope_stderr,
                    "intercept": fit.intercept,
                    "expected_slope": 2 * abs(n),
                    "points": int(fit.tan_rho.size),
                }
                for n, fit in fits.items()
            },
        })
    parts = ", ".join(f"n={n}: {fit.slope:.3f}" for n, fit in sorted(fits.items()))
    return f"fit-scaling: {parts}"


def cmd_optimize_astig(run: _Resolved, outdir: Path, formats: set) -> str:
    beta_max = _number(run.raw, "astig", "beta_max", 10.0)
    objective = _get(run.raw, "astig", "objective", analysis.ODD_SIDEBANDS)
    tolerance = _number(run.raw, "astig", "tolerance", 1e-3)
    result = analysis.optimize_astigmatism(
        run.crystal, run.pump, beta_range=(-beta_max, beta_max), objective=objective,
        tol=tolerance, l_max=run.l_max, n_radial=run.n_radial, n_azimuthal=run.n_azimuthal,
    )
    if "csv" in formats:
        orders = sorted(result.baseline_sidebands)
        rows = [
            (n, float(result.baseline_sidebands[n]), float(result.corrected_sidebands[n]))
            for n in orders
        ]
        write_csv(outdir / "astig_compare.csv", ("order", "baseline", "corrected"), rows)
    if "json" in formats:
        write_json(outdir / "optimize_astig.json", _summary(run, {
            "beta_opt": result.beta_opt,
            "objective": result.objective,
            "objective_value": result.objective_value,
            "at_boundary": result.at_boundary,
            "baseline_sidebands": {str(n): v for n, v in result.baseline_sidebands.items()},
            "corrected_sidebands": {str(n): v for n, v in result.corrected_sidebands.items()},
            "baseline_f_leak": result.baseline_f_leak,
            "corrected_f_leak": result.corrected_f_leak,
        }))
    flag = " (boundary)" if result.at_boundary else ""
    return f"optimize-astig: beta = {result.beta_opt:.4f}{flag}, objective = {format_float(result.objective_value)}"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="spdcwalk", description="Walk-off effects on OAM conservation in type-I down-conversion")
    parser.add_argument("command", choices=SUBCOMMANDS)
    parser.add_argument("config", help="TOML config file, or the JSON summary of a previous run")
    parser.add_argument("--set", action="append", metavar="SECTION.KEY=VALUE",
                        help="override one config value (repeatable)")
    parser.add_argument("--output-dir", help=f"output directory (overrides ${ENV_OUTPUT_DIR} and the config)")
    parser.add_argument("--workers", type=int, help="process count for sweep points")
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        raw = apply_overrides(load_config(args.config), getattr(args, "set"))
        run = resolve(raw)
        outdir = _output_dir(args, raw)
        formats = _formats(raw)
        if args.command == "phase-match":
            line = cmd_phase_match(run, outdir, formats)
        elif args.command == "walkoff":
            line = cmd_walkoff(run, outdir, formats)
        elif args.command == "spectrum":
            line = cmd_spectrum(run, outdir, formats)
        elif args.command == "total-oam":
            line = cmd_total_oam(run, outdir, formats)
        elif args.command == "farfield":
            line = cmd_farfield(run, outdir, formats)
        elif args.command == "sweep-focus":
            line = cmd_sweep_focus(run, outdir, formats, workers=args.workers)
        elif args.command == "sweep-walkoff":
            line = cmd_sweep_walkoff(run, outdir, formats, workers=args.workers)
        elif args.command == "fit-scaling":
            line = cmd_fit_scaling(run, outdir, formats, workers=args.workers)
        else:
            line = cmd_optimize_astig(run, outdir, formats)
    except ConfigError as exc:
        print(json.dumps({"category": "config", "error": str(exc)}), file=sys.stderr)
        return 2
    except PhysicsError as exc:
        print(json.dumps({"category": "physics", "error": str(exc)}), file=sys.stderr)
        return 3
    except ConvergenceError as exc:
        print(json.dumps({"category": "convergence", "error": str(exc)}), file=sys.stderr)
        return 4
    print(line)
    return 0
