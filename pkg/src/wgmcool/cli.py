"""Command-line front end: spectra, resonances, cooling reports, dynamics.

Configuration is a flat file of dotted keys (`beam.power_w = 0.1`), merged
with repeatable `--set key=value` pairs and per-command flags, in that
order of increasing precedence.  Frequencies are given in Hz and converted
to angular units internally.  Every report embeds the resolved config in a
section that re-parses to the identical configuration, and all files are
written atomically (temp file + rename).  Exit codes: 0 success, 1 domain
error, 2 usage error.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from importlib import resources

import numpy as np

from . import __version__, doppler_model, dynamics_sim, gas_drag, toy_resonators, wgm_finder
from .constants import PA_PER_TORR, SPEED_OF_LIGHT
from .doppler_model import CoolingParams
from .dynamics_sim import SimConfig, TrapConfig
from .errors import DomainError
from .gas_drag import GasEnvironment
from .mie_core import Sphere


class UsageError(Exception):
    """Bad invocation or configuration; maps to exit code 2."""


def _parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("true", "yes", "1"):
        return True
    if lowered in ("false", "no", "0"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


# every accepted config key and its parser; unknown keys are rejected
KEY_TYPES = {
    "sphere.radius_m": float,
    "sphere.index": float,
    "sphere.density_kg_m3": float,
    "sphere.mass_kg": float,
    "beam.power_w": float,
    "beam.background_power_w": float,
    "beam.wavelength_m": float,
    "beam.detuning_hz": float,
    "beam.detuning_delta": float,
    "beam.linewidth_hz": float,
    "beam.count": int,
    "trap.kind": str,
    "trap.spring_constant_n_m": float,
    "trap.mass_kg": float,
    "trap.frequency_hz": float,
    "gas.pressure_pa": float,
    "gas.pressure_mtorr": float,
    "gas.temperature_k": float,
    "gas.viscosity_pa_s": float,
    "gas.molar_mass_kg_mol": float,
    "gas.beta_target_kg_s": float,
    "sim.duration_s": float,
    "sim.timestep_s": float,
    "sim.seed": int,
    "sim.record_stride": int,
    "sim.trajectory_index": int,
    "sim.x0_m": float,
    "sim.v0_m_s": float,
    "sim.thermal_noise": _parse_bool,
    "sim.recoil_noise": _parse_bool,
    "scan.x_min": float,
    "scan.x_max": float,
    "scan.step": float,
    "scan.sample_budget": int,
    "resonance.mode_kind": str,
    "resonance.n": int,
    "resonance.l": int,
    "resonance.x_lo": float,
    "resonance.x_hi": float,
    "toy.model": str,
    "toy.reflectivity": float,
    "toy.reflectivity2": float,
    "toy.n_mirrors": int,
    "toy.phase_points": int,
    "toy.power_w": float,
}

PRESET_NAMES = ("paper_scenario",)


def _convert(key: str, raw: str):
    if key not in KEY_TYPES:
        raise UsageError(f"unknown config key {key!r}")
    try:
        return KEY_TYPES[key](raw)
    except ValueError as exc:
        raise UsageError(f"bad value for {key}: {exc}") from exc


def parse_config_text(text: str) -> dict:
    """Flat `key = value` lines; `#` starts a comment, blank lines skipped."""
    config = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise UsageError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, raw = body.split("=", 1)
        config[key.strip()] = _convert(key.strip(), raw.strip())
    return config


def load_config(path_or_preset: str) -> dict:
    if path_or_preset in PRESET_NAMES:
        text = (
            resources.files("wgmcool.data")
            .joinpath(f"{path_or_preset}.cfg")
            .read_text(encoding="utf-8")
        )
    else:
        try:
            with open(path_or_preset, encoding="utf-8") as f:
                text = f.read()
        except OSError as exc:
            raise UsageError(f"cannot read config {path_or_preset!r}: {exc}") from exc
    return parse_config_text(text)


def serialize_config(config: dict) -> str:
    lines = []
    for key in sorted(config):
        value = config[key]
        if isinstance(value, bool):
            rendered = "true" if value else "false"
        else:
            rendered = repr(value) if isinstance(value, float) else str(value)
        lines.append(f"{key} = {rendered}")
    return "\n".join(lines)


def _require(config: dict, keys: list[str], command: str) -> None:
    missing = [k for k in keys if k not in config]
    if missing:
        raise UsageError(
            f"{command} needs config keys: {', '.join(missing)} "
            "(set them in a config file, with --set, or with flags)"
        )


# --------------------------------------------------------------------------
# config -> domain objects


def build_sphere(config: dict) -> Sphere:
    _require(config, ["sphere.radius_m", "sphere.index"], "this command")
    kwargs = {}
    if "sphere.density_kg_m3" in config:
        kwargs["mass_density"] = config["sphere.density_kg_m3"]
    if "sphere.mass_kg" in config:
        kwargs["mass"] = config["sphere.mass_kg"]
    return Sphere(
        radius_a=config["sphere.radius_m"],
        refractive_index_m=config["sphere.index"],
        **kwargs,
    )


def build_cooling(config: dict) -> CoolingParams:
    _require(
        config,
        ["beam.power_w", "beam.wavelength_m", "beam.linewidth_hz"],
        "a cooling command",
    )
    delta = 2.0 * math.pi * config["beam.linewidth_hz"]
    if "beam.detuning_hz" in config:
        detuning = 2.0 * math.pi * config["beam.detuning_hz"]
    elif "beam.detuning_delta" in config:
        detuning = config["beam.detuning_delta"] * delta
    else:
        raise UsageError(
            "a cooling command needs beam.detuning_hz or beam.detuning_delta"
        )
    k = 2.0 * math.pi / config["beam.wavelength_m"]
    return CoolingParams(
        p_background=config.get("beam.background_power_w", 0.0),
        p_peak=config["beam.power_w"],
        delta=delta,
        detuning=detuning,
        k=k,
    )


def build_trap(config: dict) -> TrapConfig | None:
    keys = ("trap.spring_constant_n_m", "trap.mass_kg", "trap.frequency_hz")
    if not any(k in config for k in keys):
        return None
    freq = config.get("trap.frequency_hz")
    return TrapConfig(
        kind=config.get("trap.kind", "optical_trap"),
        spring_constant=config.get("trap.spring_constant_n_m"),
        effective_mass=config.get("trap.mass_kg"),
        trap_frequency=2.0 * math.pi * freq if freq is not None else None,
    )


def build_gas(config: dict) -> GasEnvironment | None:
    has_pa = "gas.pressure_pa" in config
    has_mtorr = "gas.pressure_mtorr" in config
    if not (has_pa or has_mtorr):
        return None
    if has_pa and has_mtorr:
        raise UsageError("give gas.pressure_pa or gas.pressure_mtorr, not both")
    pressure = (
        config["gas.pressure_pa"]
        if has_pa
        else config["gas.pressure_mtorr"] * 1e-3 * PA_PER_TORR
    )
    kwargs = {}
    if "gas.temperature_k" in config:
        kwargs["temperature"] = config["gas.temperature_k"]
    if "gas.viscosity_pa_s" in config:
        kwargs["viscosity"] = config["gas.viscosity_pa_s"]
    if "gas.molar_mass_kg_mol" in config:
        kwargs["molar_mass"] = config["gas.molar_mass_kg_mol"]
    return GasEnvironment(pressure=pressure, **kwargs)


# --------------------------------------------------------------------------
# output helpers


def atomic_write(path: str, text: str) -> None:
    tmp = f"{path}.tmp{os.getpid()}"
    with open(tmp, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)
    os.replace(tmp, path)


def write_csv(path: str, header: str, rows) -> None:
    lines = [header]
    for row in rows:
        lines.append(",".join(repr(float(v)) for v in row))
    atomic_write(path, "\n".join(lines) + "\n")


CONFIG_MARKER = "# --- resolved config (re-parseable) ---"


def write_report(path: str, command: str, lines: list[str], config: dict) -> None:
    body = [f"wgmcool {command} report", f"version: {__version__}", ""]
    body.extend(lines)
    body += ["", CONFIG_MARKER, serialize_config(config)]
    atomic_write(path, "\n".join(body) + "\n")


def embedded_config(report_text: str) -> dict:
    """Re-parse the config section of a report (round-trip check hook)."""
    marker_at = report_text.find(CONFIG_MARKER)
    if marker_at < 0:
        raise UsageError("report has no embedded config section")
    return parse_config_text(report_text[marker_at + len(CONFIG_MARKER):])


# --------------------------------------------------------------------------
# commands


def cmd_spectrum(config: dict, args) -> None:
    _require(config, ["scan.x_min", "scan.x_max", "scan.step", "sphere.index"],
             "spectrum")
    budget = config.get("scan.sample_budget", wgm_finder.DEFAULT_SAMPLE_BUDGET)
    samples = wgm_finder.scan_spectrum(
        config["scan.x_min"],
        config["scan.x_max"],
        config["scan.step"],
        config["sphere.index"],
        power=config.get("beam.power_w", wgm_finder.REFERENCE_POWER),
        sample_budget=budget,
    )
    write_csv(
        args.out or "spectrum.csv",
        "x,q_ext,q_rad,force_N",
        ((s.x, s.q_ext, s.q_rad, s.force) for s in samples),
    )


def cmd_resonance(config: dict, args) -> None:
    _require(config, ["sphere.index", "resonance.n", "resonance.x_lo",
                      "resonance.x_hi"], "resonance")
    line = wgm_finder.locate_resonance(
        config.get("resonance.mode_kind", "electric_a"),
        config["resonance.n"],
        config.get("resonance.l", 1),
        config["sphere.index"],
        (config["resonance.x_lo"], config["resonance.x_hi"]),
        power=config.get("beam.power_w", wgm_finder.REFERENCE_POWER),
    )
    lines = [
        f"mode: {line.mode_kind} n={line.mode_number_n} l={line.mode_order_l}",
        f"x0: {line.x0!r}",
        f"half_width_x: {line.half_width_x!r}",
        f"q_factor: {line.q_factor!r}",
        f"peak_force_N: {line.peak_force!r}",
        f"offset_force_N: {line.offset_force!r}",
        f"fit_quality: {line.fit_quality!r}",
        f"reference_power_W: {line.reference_power!r}",
    ]
    if "sphere.radius_m" in config:
        bound = wgm_finder.bind_radius(line, config["sphere.radius_m"])
        lines += [
            f"omega0_rad_s: {bound.omega0!r}",
            f"half_width_rad_s: {bound.half_width_omega!r}",
            f"half_width_hz: {bound.half_width_omega / (2 * math.pi)!r}",
        ]
    write_report(args.out or "resonance.txt", "resonance", lines, config)


def _limits_mass(config: dict) -> float | None:
    if "trap.mass_kg" in config:
        return config["trap.mass_kg"]
    if "sphere.mass_kg" in config:
        return config["sphere.mass_kg"]
    if "sphere.radius_m" in config and "sphere.index" in config:
        return build_sphere(config).mass
    return None


def cmd_limits(config: dict, args) -> None:
    params = build_cooling(config)
    beta_single = doppler_model.single_beam_beta(params).beta
    beta_pair = doppler_model.molasses_beta(params).beta
    rate = doppler_model.scattering_rate(params)
    lines = [
        f"beta_single_kg_s: {beta_single!r}",
        f"beta_molasses_kg_s: {beta_pair!r}",
        f"f0_per_beam_N: {doppler_model.static_force_offset(params)!r}",
        f"scattering_rate_per_s: {rate!r}",
        f"recoil_diffusion_kg2_m2_s3: {doppler_model.recoil_diffusion(params.k, rate)!r}",
    ]
    if params.detuning != 0:
        lines.append(
            f"doppler_limit_K: {doppler_model.doppler_limit(params.delta, params.detuning)!r}"
        )
    minimum = doppler_model.doppler_limit(params.delta, -params.delta)
    lines.append(f"doppler_minimum_K: {minimum!r}")
    mass = _limits_mass(config)
    if mass is not None and beta_pair > 0:
        lines.append(
            f"cooling_time_single_s: {doppler_model.cooling_time(mass, beta_single)!r}"
        )
        lines.append(
            f"cooling_time_molasses_s: {doppler_model.cooling_time(mass, beta_pair)!r}"
        )
    trap_keys = ("trap.spring_constant_n_m", "trap.mass_kg", "trap.frequency_hz")
    if sum(k in config for k in trap_keys) >= 2:
        # a lone trap.mass_kg is just the cooling-time mass, not a trap
        trap = build_trap(config)
        lines.append(f"trap_frequency_rad_s: {trap.trap_frequency!r}")
        lines.append(f"sideband_resolved: {params.delta < trap.trap_frequency}")
    write_report(args.out or "limits.txt", "limits", lines, config)


def cmd_gas(config: dict, args) -> None:
    _require(config, ["sphere.radius_m"], "gas")
    env = build_gas(config)
    if env is None:
        raise UsageError("gas needs gas.pressure_pa or gas.pressure_mtorr")
    radius = config["sphere.radius_m"]
    selection = gas_drag.effective_drag(env, radius)
    lines = [
        f"viscous_drag_kg_s: {gas_drag.viscous_drag(env, radius)!r}",
        f"epstein_drag_kg_s: {gas_drag.epstein_drag(env, radius)!r}",
        f"knudsen: {selection.knudsen!r}",
        f"regime: {selection.regime}",
        f"selected_drag_kg_s: {selection.gamma!r}",
    ]
    if "gas.beta_target_kg_s" in config:
        beta_target = config["gas.beta_target_kg_s"]
    else:
        try:
            beta_target = doppler_model.single_beam_beta(build_cooling(config)).beta
        except UsageError:
            beta_target = None
    if beta_target is not None and beta_target > 0:
        crossover = gas_drag.crossover_pressure(beta_target, env, radius)
        lines += [
            f"crossover_beta_target_kg_s: {beta_target!r}",
            f"crossover_pressure_pa: {crossover!r}",
            f"crossover_pressure_mtorr: {crossover / PA_PER_TORR * 1e3!r}",
        ]
    write_report(args.out or "gas.txt", "gas", lines, config)


def cmd_cool(config: dict, args) -> None:
    _require(config, ["sim.duration_s", "sim.timestep_s", "sim.seed"], "cool")
    beam_count = config.get("beam.count", 0)
    if beam_count not in (0, 1, 2):
        raise UsageError(f"beam.count must be 0, 1, or 2, got {beam_count}")
    cooling = build_cooling(config) if beam_count else None
    signs = {0: (), 1: (1.0,), 2: (1.0, -1.0)}[beam_count]
    sphere = None
    if "sphere.radius_m" in config and "sphere.index" in config:
        sphere = build_sphere(config)
    sim = SimConfig(
        duration=config["sim.duration_s"],
        timestep=config["sim.timestep_s"],
        seed=config["sim.seed"],
        sphere=sphere,
        trap=build_trap(config),
        gas=build_gas(config),
        cooling=cooling,
        beam_signs=signs,
        record_stride=config.get("sim.record_stride", 1),
        x0=config.get("sim.x0_m", 0.0),
        v0=config.get("sim.v0_m_s", 0.0),
        thermal_noise=config.get("sim.thermal_noise", True),
        recoil_noise=config.get("sim.recoil_noise", True),
    )
    traj = dynamics_sim.simulate(sim, config.get("sim.trajectory_index", 0))
    write_csv(
        args.out or "trajectory.csv",
        "t_s,x_m,v_m_per_s",
        zip(traj.times, traj.positions, traj.velocities),
    )
    lines = [
        f"seed: {traj.metadata['seed']}",
        f"trajectory_index: {traj.metadata['trajectory_index']}",
        f"timestep_s: {traj.metadata['timestep']!r}",
        f"n_steps: {traj.metadata['n_steps']}",
        f"gamma_gas_kg_s: {traj.metadata['gamma_gas']!r}",
        f"beta_optical_kg_s: {traj.metadata['beta_optical']!r}",
        f"f0_net_N: {traj.metadata['f0_net']!r}",
        f"x_equilibrium_m: {traj.metadata['x_equilibrium']!r}",
        f"sideband_resolved: {traj.metadata['sideband_resolved']}",
        f"config_digest: {traj.metadata['config_digest']}",
    ]
    half = (traj.times[0] + traj.times[-1]) / 2.0
    try:
        t_est = dynamics_sim.estimate_temperature(traj, (half, traj.times[-1]))
        lines.append(f"temperature_estimate_K: {t_est!r}")
    except DomainError as exc:
        lines.append(f"temperature_estimate_K: not available ({exc})")
    try:
        rate = dynamics_sim.fit_energy_decay(traj)
        lines.append(f"energy_decay_rate_per_s: {rate!r}")
    except DomainError as exc:
        lines.append(f"energy_decay_rate_per_s: not available ({exc})")
    write_report(args.report or "cool_report.txt", "cool", lines, config)


def cmd_toy(config: dict, args) -> None:
    _require(config, ["toy.model"], "toy")
    model = config["toy.model"]
    points = config.get("toy.phase_points", 2001)
    power = config.get("toy.power_w", 1.0)
    phases = np.linspace(-math.pi, math.pi, points)
    if model == "fp":
        if "toy.reflectivity" in config:
            r = config["toy.reflectivity"]
        elif "toy.reflectivity2" in config:
            r = math.sqrt(config["toy.reflectivity2"])
        else:
            raise UsageError("toy model fp needs toy.reflectivity or toy.reflectivity2")
        forces = toy_resonators.fabry_perot_sweep(power, r, phases)
    elif model == "ring":
        _require(config, ["toy.reflectivity", "toy.n_mirrors"], "toy model ring")
        cavity = toy_resonators.RingCavity(
            n_mirrors=config["toy.n_mirrors"],
            amplitude_reflectivity=config["toy.reflectivity"],
        )
        forces = toy_resonators.ring_sweep(cavity, power, phases)
    else:
        raise UsageError(f"toy.model must be 'fp' or 'ring', got {model!r}")
    write_csv(args.out or "toy_sweep.csv", "phase_rad,force_N", zip(phases, forces))


COMMANDS = {
    "spectrum": cmd_spectrum,
    "resonance": cmd_resonance,
    "limits": cmd_limits,
    "gas": cmd_gas,
    "cool": cmd_cool,
    "toy": cmd_toy,
}

# convenience flags and the config keys they set
FLAG_KEYS = {
    "spectrum": {
        "x_min": "scan.x_min",
        "x_max": "scan.x_max",
        "step": "scan.step",
        "index": "sphere.index",
        "power": "beam.power_w",
        "budget": "scan.sample_budget",
    },
    "resonance": {
        "mode_kind": "resonance.mode_kind",
        "n": "resonance.n",
        "l": "resonance.l",
        "x_lo": "resonance.x_lo",
        "x_hi": "resonance.x_hi",
        "index": "sphere.index",
        "radius": "sphere.radius_m",
        "power": "beam.power_w",
    },
    "limits": {
        "power": "beam.power_w",
        "wavelength": "beam.wavelength_m",
        "linewidth_hz": "beam.linewidth_hz",
        "detuning_hz": "beam.detuning_hz",
        "detuning_delta": "beam.detuning_delta",
        "mass": "trap.mass_kg",
    },
    "gas": {
        "pressure_pa": "gas.pressure_pa",
        "pressure_mtorr": "gas.pressure_mtorr",
        "radius": "sphere.radius_m",
        "beta_target": "gas.beta_target_kg_s",
    },
    "cool": {
        "duration": "sim.duration_s",
        "timestep": "sim.timestep_s",
        "seed": "sim.seed",
        "stride": "sim.record_stride",
        "traj_index": "sim.trajectory_index",
    },
    "toy": {
        "model": "toy.model",
        "reflectivity": "toy.reflectivity",
        "reflectivity2": "toy.reflectivity2",
        "n_mirrors": "toy.n_mirrors",
        "power": "toy.power_w",
        "points": "toy.phase_points",
    },
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wgmcool",
        description="Radiation-pressure spectra, whispering-gallery resonances, "
        "and Doppler cooling of dielectric microspheres.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for command in COMMANDS:
        p = sub.add_parser(command)
        p.add_argument("--config", help="config file path, or preset name "
                       f"({', '.join(PRESET_NAMES)})")
        p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                       help="override one config key")
        p.add_argument("--out", help="output file path")
        if command == "cool":
            p.add_argument("--report", help="summary report path")
        for flag in FLAG_KEYS[command]:
            p.add_argument(f"--{flag.replace('_', '-')}", dest=flag)
    return parser


def resolve_config(args) -> dict:
    config: dict = {}
    if args.config:
        config.update(load_config(args.config))
    for pair in args.set:
        if "=" not in pair:
            raise UsageError(f"--set needs KEY=VALUE, got {pair!r}")
        key, raw = pair.split("=", 1)
        config[key.strip()] = _convert(key.strip(), raw.strip())
    for flag, key in FLAG_KEYS[args.command].items():
        raw = getattr(args, flag, None)
        if raw is not None:
            config[key] = _convert(key, raw)
    return config


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if not hasattr(args, "report"):
        args.report = None
    try:
        config = resolve_config(args)
        COMMANDS[args.command](config, args)
        return 0
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
