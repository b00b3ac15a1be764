"""Stochastic 1-D motion of a sphere under trap, gas, and light forces.

The equation of motion is m x'' = -kappa x - Gamma x' + F_opt(v) + noise,
with the optical force kept fully nonlinear in v (each beam contributes its
Lorentzian, so optical damping emerges rather than being put in by hand).
Integration uses a BAOAB splitting: half kick, half drift, an exact
Ornstein-Uhlenbeck step for the linear gas drag plus the photon-recoil
kicks, then the mirrored drift and kick.  The O-step is exact in law for
the gas bath, so thermal statistics are right at any stable timestep, and
the scheme reduces to velocity Verlet (symplectic) when the bath is off.

Noise is drawn from a counter-based generator keyed by (seed, trajectory
index): ensembles get provably disjoint streams and reruns are bit-exact.
"""

from __future__ import annotations

import hashlib
import math
import warnings
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from numba import njit

from . import gas_drag
from .constants import BOLTZMANN, HBAR, SPEED_OF_LIGHT
from .doppler_model import CoolingParams, lorentzian_force, single_beam_beta
from .errors import DomainError, TimestepError
from .gas_drag import GasEnvironment
from .mie_core import Sphere

TRAP_KINDS = ("optical_trap", "cantilever")

# timestep must resolve the fastest of the oscillation and damping times
STABILITY_MARGIN = 50.0

_CHUNK_STEPS = 1 << 20


@dataclass(frozen=True)
class TrapConfig:
    """Harmonic restoring force, specified by any two of (kappa, mass, omega0).

    The third is derived; an over-specified inconsistent triple keeps the
    spring constant and mass and warns that the frequency was recomputed.
    """

    kind: str = "optical_trap"
    spring_constant: float | None = None  # N/m
    effective_mass: float | None = None  # kg
    trap_frequency: float | None = None  # rad/s

    def __post_init__(self):
        if self.kind not in TRAP_KINDS:
            raise DomainError(f"trap kind must be one of {TRAP_KINDS}, got {self.kind!r}")
        k, m, w = self.spring_constant, self.effective_mass, self.trap_frequency
        given = sum(v is not None for v in (k, m, w))
        if given < 2:
            raise DomainError(
                "trap needs at least two of spring_constant, effective_mass, "
                "trap_frequency"
            )
        for name, v in (("spring_constant", k), ("effective_mass", m),
                        ("trap_frequency", w)):
            if v is not None and not v > 0:
                raise DomainError(f"{name} must be positive, got {v}")
        if k is None:
            k = m * w**2
        elif m is None:
            m = k / w**2
        elif w is None:
            w = math.sqrt(k / m)
        elif abs(w**2 * m - k) > 1e-12 * k:
            derived = math.sqrt(k / m)
            warnings.warn(
                f"inconsistent trap triple: sqrt(kappa/mass) = {derived:.6g} rad/s "
                f"but trap_frequency = {w:.6g} rad/s; keeping spring constant and "
                "mass, recomputing the frequency",
                stacklevel=2,
            )
            w = derived
        object.__setattr__(self, "spring_constant", float(k))
        object.__setattr__(self, "effective_mass", float(m))
        object.__setattr__(self, "trap_frequency", float(w))


@dataclass(frozen=True)
class SimConfig:
    """One trajectory's physics and numerics.

    trap is optional (free particle otherwise); gas requires a sphere for
    the drag radius.  cooling + beam_signs define 0, 1, or 2 beams sharing
    one parameter set; a pair must be counter-propagating.  gamma_override
    replaces the gas-derived drag coefficient (analysis hook; the thermal
    noise toggle is separate so pure exponential decays can be simulated).
    """

    duration: float
    timestep: float
    seed: int
    sphere: Sphere | None = None
    trap: TrapConfig | None = None
    gas: GasEnvironment | None = None
    cooling: CoolingParams | None = None
    beam_signs: tuple[float, ...] = ()
    record_stride: int = 1
    x0: float = 0.0
    v0: float = 0.0
    thermal_noise: bool = True
    recoil_noise: bool = True
    gamma_override: float | None = None

    def __post_init__(self):
        if not self.duration > 0:
            raise DomainError(f"duration must be positive, got {self.duration}")
        if not self.timestep > 0:
            raise DomainError(f"timestep must be positive, got {self.timestep}")
        if not (isinstance(self.seed, int) and 0 <= self.seed < 2**64):
            raise DomainError("seed must be an integer in [0, 2^64)")
        if not (isinstance(self.record_stride, int) and self.record_stride >= 1):
            raise DomainError(f"record_stride must be an integer >= 1, got {self.record_stride}")
        if len(self.beam_signs) > 2:
            raise DomainError(f"at most 2 beams, got {len(self.beam_signs)}")
        if any(s not in (1.0, -1.0, 1, -1) for s in self.beam_signs):
            raise DomainError(f"beam signs must be +1 or -1, got {self.beam_signs}")
        if len(self.beam_signs) == 2 and self.beam_signs[0] + self.beam_signs[1] != 0:
            raise DomainError("a beam pair must be counter-propagating (signs +1 and -1)")
        if self.beam_signs and self.cooling is None:
            raise DomainError("beam_signs given without cooling parameters")
        if self.gas is not None and self.sphere is None:
            raise DomainError("gas drag needs a sphere (radius sets the drag)")
        if self.gamma_override is not None and self.gamma_override < 0:
            raise DomainError(f"gamma_override must be >= 0, got {self.gamma_override}")
        if self.mass() is None:
            raise DomainError("no mass available: provide a trap or a sphere")

    def mass(self) -> float | None:
        if self.trap is not None:
            return self.trap.effective_mass
        if self.sphere is not None:
            return self.sphere.mass
        return None

    def gas_gamma(self) -> float:
        if self.gamma_override is not None:
            return self.gamma_override
        if self.gas is not None:
            return gas_drag.effective_drag(self.gas, self.sphere.radius_a).gamma
        return 0.0

    def optical_beta(self) -> float:
        """Linearized optical damping of the configured beams at v = 0."""
        if not self.beam_signs or self.cooling is None:
            return 0.0
        per_beam = single_beam_beta(self.cooling).beta
        return per_beam * len(self.beam_signs)

    def total_damping(self) -> float:
        return self.gas_gamma() + abs(self.optical_beta())

    def timestep_bounds(self) -> dict[str, float]:
        """Stability bounds the timestep must respect (each /margin)."""
        bounds = {}
        if self.trap is not None:
            bounds["oscillation: 2 pi / omega0 / 50"] = (
                2.0 * math.pi / self.trap.trap_frequency / STABILITY_MARGIN
            )
        gamma = self.total_damping()
        if gamma > 0:
            bounds["damping: mass / Gamma_total / 50"] = (
                self.mass() / gamma / STABILITY_MARGIN
            )
        return bounds

    def digest(self) -> str:
        """Hash of every physics- and numerics-defining field."""
        parts = []
        for name, value in sorted(vars(self).items()):
            parts.append(f"{name}={value!r}")
        return hashlib.sha256("\n".join(parts).encode()).hexdigest()


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    positions: np.ndarray
    velocities: np.ndarray
    metadata: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        n = len(self.times)
        if len(self.positions) != n or len(self.velocities) != n:
            raise DomainError("times, positions, velocities must have equal length")

    def shifted_positions(self) -> np.ndarray:
        """Positions relative to the static-force equilibrium."""
        return self.positions - self.metadata.get("x_equilibrium", 0.0)


@njit(cache=True)
def _baoab_chunk(x, v, h, mass, kappa, gamma, c1, gas_amp, signs, p_bg, p_pk,
                 delta, big_delta, k_wave, inv_c, rec_d0, recoil_on,
                 normals, step0, stride, out_x, out_v):
    half = 0.5 * h
    d2 = delta * delta
    n = normals.shape[0]
    for i in range(n):
        # B: half kick with trap + nonlinear optical force
        f = -kappa * x
        for b in range(signs.shape[0]):
            s = signs[b]
            det = big_delta - s * k_wave * v
            f += s * (p_bg + p_pk * d2 / (det * det + d2)) * inv_c
        v += half * f / mass
        # A: half drift
        x += half * v
        # O: exact gas OU step plus recoil kicks
        v = c1 * v + gas_amp * normals[i, 0]
        if recoil_on:
            d_tot = 0.0
            for b in range(signs.shape[0]):
                det = big_delta - signs[b] * k_wave * v
                d_tot += rec_d0 * d2 / (det * det + d2)
            v += math.sqrt(d_tot * h) / mass * normals[i, 1]
        # A, B mirrored
        x += half * v
        f = -kappa * x
        for b in range(signs.shape[0]):
            s = signs[b]
            det = big_delta - s * k_wave * v
            f += s * (p_bg + p_pk * d2 / (det * det + d2)) * inv_c
        v += half * f / mass
        g = step0 + i + 1
        if g % stride == 0:
            out_x[g // stride] = x
            out_v[g // stride] = v
    return x, v


def simulate(config: SimConfig, trajectory_index: int = 0) -> Trajectory:
    """Integrate one trajectory; bit-identical for identical inputs.

    trajectory_index selects a disjoint noise stream for ensemble runs
    without touching the seed.
    """
    if not (isinstance(trajectory_index, int) and trajectory_index >= 0):
        raise DomainError(f"trajectory_index must be a non-negative integer, got {trajectory_index}")
    mass = config.mass()
    kappa = config.trap.spring_constant if config.trap is not None else 0.0
    gamma = config.gas_gamma()

    bounds = config.timestep_bounds()
    for name, bound in bounds.items():
        if config.timestep > bound:
            raise TimestepError(
                f"timestep {config.timestep:g} s exceeds the stability bound "
                f"{bound:g} s from {name}",
                bound=bound,
            )

    h = config.timestep
    n_steps = int(round(config.duration / h))
    if n_steps < 1:
        raise DomainError("duration shorter than one timestep")

    c1 = math.exp(-gamma * h / mass) if gamma > 0 else 1.0
    if config.gas is not None and config.thermal_noise and gamma > 0:
        kbt = BOLTZMANN * config.gas.temperature
        gas_amp = math.sqrt((1.0 - c1 * c1) * kbt / mass)
    else:
        gas_amp = 0.0

    if config.cooling is not None and config.beam_signs:
        p = config.cooling
        signs = np.array(config.beam_signs, dtype=np.float64)
        p_bg, p_pk = p.p_background, p.p_peak
        delta, big_delta, k_wave = p.delta, p.detuning, p.k
        rec_d0 = (HBAR * p.k) ** 2 * p.p_peak / (HBAR * p.omega)
        recoil_on = config.recoil_noise
    else:
        signs = np.zeros(0, dtype=np.float64)
        p_bg = p_pk = delta = big_delta = k_wave = 0.0
        delta = 1.0  # unused but avoids 0/0 in the kernel's d2 constant
        rec_d0 = 0.0
        recoil_on = False

    stride = config.record_stride
    n_rec = n_steps // stride + 1
    out_x = np.empty(n_rec)
    out_v = np.empty(n_rec)
    out_x[0], out_v[0] = config.x0, config.v0

    rng = np.random.Generator(np.random.Philox(key=[config.seed, trajectory_index]))
    inv_c = 1.0 / SPEED_OF_LIGHT
    x, v = float(config.x0), float(config.v0)
    done = 0
    while done < n_steps:
        chunk = min(_CHUNK_STEPS, n_steps - done)
        normals = rng.standard_normal((chunk, 2))
        x, v = _baoab_chunk(
            x, v, h, mass, kappa, gamma, c1, gas_amp, signs, p_bg, p_pk,
            delta, big_delta, k_wave, inv_c, rec_d0, recoil_on,
            normals, done, stride, out_x, out_v,
        )
        done += chunk

    times = np.arange(n_rec) * (h * stride)
    f0_net = sum(
        s * lorentzian_force(config.cooling, 0.0, s) for s in config.beam_signs
    ) if config.cooling is not None else 0.0
    x_eq = f0_net / kappa if kappa > 0 else 0.0
    beta_opt = config.optical_beta()
    sideband = (
        bool(config.cooling.delta < config.trap.trap_frequency)
        if (config.cooling is not None and config.trap is not None)
        else None
    )
    metadata = {
        "seed": config.seed,
        "trajectory_index": trajectory_index,
        "timestep": h,
        "record_stride": stride,
        "n_steps": n_steps,
        "mass": mass,
        "spring_constant": kappa,
        "trap_frequency": config.trap.trap_frequency if config.trap else None,
        "gamma_gas": gamma,
        "beta_optical": beta_opt,
        "f0_net": f0_net,
        "x_equilibrium": x_eq,
        "sideband_resolved": sideband,
        "config_digest": config.digest(),
    }
    return Trajectory(times=times, positions=out_x, velocities=out_v,
                      metadata=metadata)


MIN_TEMPERATURE_PERIODS = 100.0


def estimate_temperature(traj: Trajectory, window: tuple[float, float] | None = None) -> float:
    """Kinetic temperature m <v^2> / k_B over a time window.

    For trapped motion the window must span at least 100 oscillation
    periods, otherwise the phase of the oscillation biases <v^2>.
    """
    t0, t1 = window if window is not None else (traj.times[0], traj.times[-1])
    if t0 < traj.times[0] or t1 > traj.times[-1] or not t1 > t0:
        raise DomainError(f"window [{t0}, {t1}] not inside the trajectory")
    omega0 = traj.metadata.get("trap_frequency")
    if omega0:
        min_span = MIN_TEMPERATURE_PERIODS * 2.0 * math.pi / omega0
        if t1 - t0 < min_span:
            raise DomainError(
                f"window of {t1 - t0:g} s too short: need at least {min_span:g} s "
                f"({MIN_TEMPERATURE_PERIODS:g} oscillation periods)"
            )
    mass = traj.metadata["mass"]
    sel = (traj.times >= t0) & (traj.times <= t1)
    return mass * float(np.mean(traj.velocities[sel] ** 2)) / BOLTZMANN


def fit_energy_decay(traj: Trajectory, n_bins: int = 100) -> float:
    """Exponential decay rate of the total energy envelope, 1/s.

    Energy is binned in time and the log of the bin means is fit linearly;
    bin averaging commutes with a pure exponential, so an exact envelope is
    recovered exactly.  The potential term uses equilibrium-shifted
    positions; a free particle contributes kinetic energy only.
    """
    mass = traj.metadata["mass"]
    kappa = traj.metadata.get("spring_constant", 0.0) or 0.0
    x = traj.shifted_positions()
    energy = 0.5 * mass * traj.velocities**2 + 0.5 * kappa * x**2
    n = len(energy)
    if n < 2 * n_bins:
        n_bins = max(n // 2, 2)
    edges = np.linspace(0, n, n_bins + 1, dtype=int)
    means = np.array([energy[a:b].mean() for a, b in zip(edges[:-1], edges[1:])])
    starts = traj.times[edges[:-1]]
    if means[-1] >= means[0] or np.any(means <= 0):
        raise DomainError("energy envelope does not decay; nothing to fit")
    slope, _ = np.polyfit(starts, np.log(means), 1)
    return float(-slope)


def oscillation_frequency(traj: Trajectory) -> float:
    """Frequency in Hz from interpolated zero crossings of the position."""
    x = traj.shifted_positions()
    t = traj.times
    flips = np.nonzero(np.sign(x[:-1]) * np.sign(x[1:]) < 0)[0]
    if len(flips) < 2:
        raise DomainError("fewer than two zero crossings; cannot estimate a frequency")
    # linear interpolation of each crossing time
    frac = x[flips] / (x[flips] - x[flips + 1])
    t_cross = t[flips] + frac * (t[flips + 1] - t[flips])
    return (len(t_cross) - 1) / (2.0 * (t_cross[-1] - t_cross[0]))
