"""Gas damping of a microsphere across pressure regimes.

Two closed forms cover the extremes: Stokes drag 6 pi eta a when the mean
free path is short, and the free-molecular (Epstein) drag, linear in
pressure, when molecules hit the sphere ballistically.  The Knudsen number
picks the regime; in the transition zone the smaller of the two is a
conservative bridge.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .constants import BOLTZMANN, GAS_CONSTANT
from .errors import DomainError

# effective collision diameter of an air molecule, m
AIR_MOLECULE_DIAMETER = 3.7e-10

# free-molecular drag prefactor for diffuse reflection
EPSTEIN_COEFF = 4.0 / 3.0 + 3.0 * math.pi / 16.0

KNUDSEN_FREE_MOLECULAR = 10.0
KNUDSEN_CONTINUUM = 0.01


@dataclass(frozen=True)
class GasEnvironment:
    """Background gas state; defaults describe air at 288 K."""

    pressure: float  # Pa
    temperature: float = 288.0  # K
    viscosity: float = 1.81e-5  # Pa s
    molar_mass: float = 0.02897  # kg/mol

    def __post_init__(self):
        # pressure and viscosity may be exactly zero (vacuum, inviscid limit)
        for name in ("pressure", "viscosity"):
            if not getattr(self, name) >= 0:
                raise DomainError(f"{name} must be nonnegative, got {getattr(self, name)}")
        for name in ("temperature", "molar_mass"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be positive, got {getattr(self, name)}")

    @property
    def mass_density(self) -> float:
        """Ideal-gas density p M / (R T), kg/m^3."""
        return self.pressure * self.molar_mass / (GAS_CONSTANT * self.temperature)


class DragSelection(NamedTuple):
    gamma: float  # kg/s
    regime: str  # "free_molecular", "viscous", or "transition"
    knudsen: float


def _check_radius(radius_a: float) -> float:
    if not radius_a > 0:
        raise DomainError(f"radius must be positive, got {radius_a}")
    return radius_a


def viscous_drag(env: GasEnvironment, radius_a: float) -> float:
    """Stokes drag coefficient 6 pi eta a, kg/s (pressure-independent)."""
    _check_radius(radius_a)
    return 6.0 * math.pi * env.viscosity * radius_a


def mean_thermal_speed(temperature: float, molar_mass: float) -> float:
    """Mean molecular speed sqrt(8 R T / (pi M)), m/s."""
    if temperature < 0 or not molar_mass > 0:
        raise DomainError("temperature must be nonnegative and molar mass positive")
    return math.sqrt(8.0 * GAS_CONSTANT * temperature / (math.pi * molar_mass))


def epstein_drag(env: GasEnvironment, radius_a: float) -> float:
    """Free-molecular drag (4/3 + 3 pi/16) pi rho <v> a^2, kg/s."""
    _check_radius(radius_a)
    v_mean = mean_thermal_speed(env.temperature, env.molar_mass)
    return EPSTEIN_COEFF * math.pi * env.mass_density * v_mean * radius_a**2


def crossover_pressure(
    beta_target: float, env_template: GasEnvironment, radius_a: float
) -> float:
    """Pressure at which the Epstein drag equals a target damping, Pa.

    The Epstein drag is exactly linear in pressure, so the crossover is the
    target divided by the drag per unit pressure (temperature and gas
    composition taken from the template environment).
    """
    if not beta_target > 0:
        raise DomainError(f"beta_target must be positive, got {beta_target}")
    _check_radius(radius_a)
    per_pascal = epstein_drag(
        GasEnvironment(
            pressure=1.0,
            temperature=env_template.temperature,
            viscosity=env_template.viscosity,
            molar_mass=env_template.molar_mass,
        ),
        radius_a,
    )
    return beta_target / per_pascal


def mean_free_path(env: GasEnvironment) -> float:
    """Hard-sphere mean free path k_B T / (sqrt(2) pi d^2 p), m."""
    if env.pressure == 0.0:
        return math.inf
    return BOLTZMANN * env.temperature / (
        math.sqrt(2.0) * math.pi * AIR_MOLECULE_DIAMETER**2 * env.pressure
    )


def knudsen_number(env: GasEnvironment, radius_a: float) -> float:
    """Mean free path over sphere radius."""
    _check_radius(radius_a)
    return mean_free_path(env) / radius_a


def effective_drag(env: GasEnvironment, radius_a: float) -> DragSelection:
    """Drag coefficient with Knudsen-number regime selection.

    Kn > 10: ballistic molecules, Epstein.  Kn < 0.01: continuum, Stokes.
    Between, take the smaller of the two; both limits overestimate in the
    transition zone, so min() is a conservative bridge.
    """
    kn = knudsen_number(env, radius_a)
    g_eps = epstein_drag(env, radius_a)
    g_vis = viscous_drag(env, radius_a)
    if kn > KNUDSEN_FREE_MOLECULAR:
        return DragSelection(g_eps, "free_molecular", kn)
    if kn < KNUDSEN_CONTINUUM:
        return DragSelection(g_vis, "viscous", kn)
    return DragSelection(min(g_eps, g_vis), "transition", kn)
