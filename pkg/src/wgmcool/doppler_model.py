"""Velocity-dependent light force on a sphere parked on a narrow line.

The force from one beam is a flat background plus a Lorentzian in the
Doppler-shifted detuning.  Red-detuned beams damp the motion exactly as in
atomic Doppler cooling, with the line half-width delta playing the role of
the natural linewidth; the recoil of the scattered photons sets the floor.
All frequencies here are angular (rad/s), all powers are watts.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from .constants import BOLTZMANN, HBAR, SPEED_OF_LIGHT
from .errors import DomainError


@dataclass(frozen=True)
class CoolingParams:
    """Beam and line parameters for the cooling force.

    p_background : W, broadband part of the power (no velocity dependence)
    p_peak : W, resonant part riding on the line
    delta : rad/s, line half-width at half-maximum
    detuning : rad/s, laser offset from the line center (red is negative)
    k : rad/m, laser wavenumber
    omega : rad/s, laser angular frequency; defaults to c*k
    """

    p_background: float
    p_peak: float
    delta: float
    detuning: float
    k: float
    omega: float | None = None

    def __post_init__(self):
        if self.p_background < 0 or self.p_peak < 0:
            raise DomainError("beam powers must be >= 0")
        if not self.delta > 0:
            raise DomainError(f"half-width delta must be positive, got {self.delta}")
        if not self.k > 0:
            raise DomainError(f"wavenumber must be positive, got {self.k}")
        if self.omega is None:
            object.__setattr__(self, "omega", SPEED_OF_LIGHT * self.k)
        elif not self.omega > 0:
            raise DomainError(f"omega must be positive, got {self.omega}")


@dataclass(frozen=True)
class DampingResult:
    beta: float  # kg/s; > 0 means the net force is -beta*v (damping)
    f0_offset: float  # N, per-beam static force at v = 0
    regime: str  # "molasses_two_beam" or "single_beam"


class LinearizedForce(NamedTuple):
    f0: float
    minus_beta_v: float
    within_linear_range: bool


def _check_sign(beam_sign: float) -> float:
    if beam_sign not in (1.0, -1.0, 1, -1):
        raise DomainError(f"beam_sign must be +1 or -1, got {beam_sign}")
    return float(beam_sign)


def lorentzian_force(params: CoolingParams, v: float, beam_sign: float = 1.0):
    """Force magnitude of one beam on a sphere moving with velocity v.

    The beam propagates along beam_sign * x, so the sphere sees the
    detuning shifted to ``detuning - beam_sign * k * v`` (moving toward a
    beam raises the apparent frequency).  The force points along the beam;
    this returns its magnitude.
    """
    _check_sign(beam_sign)
    shifted = params.detuning - beam_sign * params.k * v
    resonant = params.p_peak * params.delta**2 / (shifted**2 + params.delta**2)
    return (params.p_background + resonant) / SPEED_OF_LIGHT


def net_two_beam_force(params: CoolingParams, v: float):
    """Counter-propagating pair: backgrounds cancel, the Lorentzian pair
    leaves a force odd in v."""
    return lorentzian_force(params, v, 1.0) - lorentzian_force(params, v, -1.0)


def static_force_offset(params: CoolingParams) -> float:
    """One beam's v = 0 force P0/c + (P_p/c) delta^2/(detuning^2 + delta^2)."""
    lsq = params.detuning**2 + params.delta**2
    return (
        params.p_background + params.p_peak * params.delta**2 / lsq
    ) / SPEED_OF_LIGHT


def _beta_molasses(params: CoolingParams) -> float:
    lsq = params.detuning**2 + params.delta**2
    return (
        -4.0
        * params.k
        * params.p_peak
        * params.detuning
        * params.delta**2
        / (SPEED_OF_LIGHT * lsq**2)
    )


def molasses_beta(params: CoolingParams) -> DampingResult:
    """Two-beam damping: net force = -beta v near v = 0.

    beta = -4 k P_p detuning delta^2 / (c (detuning^2 + delta^2)^2),
    positive (damping) for red detuning.  The static offsets of the two
    beams cancel; f0_offset reports the per-beam value.
    """
    return DampingResult(
        beta=_beta_molasses(params),
        f0_offset=static_force_offset(params),
        regime="molasses_two_beam",
    )


def single_beam_beta(params: CoolingParams) -> DampingResult:
    """One beam damps at exactly half the molasses rate (its push remains)."""
    return DampingResult(
        beta=0.5 * _beta_molasses(params),
        f0_offset=static_force_offset(params),
        regime="single_beam",
    )


def linearized_force(params: CoolingParams, v: float) -> LinearizedForce:
    """First-order expansion of a single beam's force about v = 0.

    F(v) ~ F0 - beta v with the single-beam beta; good to a few percent
    while |k v| < delta/10, which is what within_linear_range reports.
    """
    return LinearizedForce(
        f0=static_force_offset(params),
        minus_beta_v=-single_beam_beta(params).beta * v,
        within_linear_range=bool(abs(params.k * v) < params.delta / 10.0),
    )


def cooling_time(mass: float, beta: float) -> float:
    """Velocity 1/e time m/beta of the linearized drag."""
    if not mass > 0:
        raise DomainError(f"mass must be positive, got {mass}")
    if not beta > 0:
        raise DomainError(f"no damping: cooling time needs beta > 0, got {beta}")
    return mass / beta


def scattering_rate(params: CoolingParams, v: float = 0.0) -> float:
    """Resonant photon scattering rate of one beam, photons/s.

    Gamma = (P_p / hbar omega) delta^2 / ((detuning + k v)^2 + delta^2);
    positive v here means motion toward the beam source (blue shift).
    """
    shifted = params.detuning + params.k * v
    return (
        params.p_peak
        / (HBAR * params.omega)
        * params.delta**2
        / (shifted**2 + params.delta**2)
    )


def recoil_diffusion(k: float, gamma_sc: float) -> float:
    """Momentum diffusion (hbar k)^2 Gamma_sc of photon shot noise."""
    if gamma_sc < 0:
        raise DomainError(f"scattering rate must be >= 0, got {gamma_sc}")
    return (HBAR * k) ** 2 * gamma_sc


def doppler_limit(delta: float, detuning: float) -> float:
    """Steady-state temperature of the linearized cooling/recoil balance.

    T = hbar (detuning^2 + delta^2) / (4 k_B |detuning|), minimized at
    |detuning| = delta where it reduces to hbar delta / 2 k_B.
    """
    if not delta > 0:
        raise DomainError(f"half-width delta must be positive, got {delta}")
    if detuning == 0:
        raise DomainError("no damping at zero detuning, limit undefined")
    lsq = detuning**2 + delta**2
    return HBAR * lsq / (4.0 * BOLTZMANN * abs(detuning))
