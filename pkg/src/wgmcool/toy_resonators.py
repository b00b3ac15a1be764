"""Plane-cavity toys contrasting the two radiation-force lineshapes.

A two-mirror cavity pushed from one side transmits everything on resonance,
so its force dips to zero there and saturates at 2 P_i / c far off
resonance.  A ring of n mirrors side-coupled by two symmetric rays reflects
least on resonance, so the net force on the ring peaks there instead, the
same sense as the force on an atom.  Mirrors are lossless throughout:
r^2 + t^2 = 1.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace

import numpy as np

from .constants import SPEED_OF_LIGHT
from .errors import DomainError


@dataclass(frozen=True)
class RingCavity:
    """Regular n-gon ring cavity, one mirror per vertex.

    round_trip_phase is the total phase k L accumulated over one loop.
    """

    n_mirrors: int
    amplitude_reflectivity: float
    round_trip_phase: float = 0.0

    def __post_init__(self):
        if self.n_mirrors < 3:
            raise DomainError(f"need at least 3 mirrors, got {self.n_mirrors}")
        if not 0 < self.amplitude_reflectivity < 1:
            raise DomainError(
                f"amplitude reflectivity must be in (0, 1), got "
                f"{self.amplitude_reflectivity}"
            )

    @property
    def amplitude_transmissivity(self) -> float:
        return math.sqrt(1.0 - self.amplitude_reflectivity**2)

    def at_phase(self, phase: float) -> "RingCavity":
        return replace(self, round_trip_phase=phase)


def _check_power(p_i: float) -> float:
    if p_i < 0:
        raise DomainError(f"input power must be >= 0, got {p_i}")
    return p_i


def fabry_perot_transmission(r: float, phase: float) -> float:
    """Airy transmitted fraction of a lossless two-mirror cavity."""
    if not 0 < r < 1:
        raise DomainError(f"amplitude reflectivity must be in (0, 1), got {r}")
    t_sq = 1.0 - r * r
    return t_sq**2 / abs(1.0 - r * r * cmath.exp(2j * phase)) ** 2


def fabry_perot_force(p_i: float, r: float, phase: float) -> float:
    """Axial force on a two-mirror cavity illuminated from one side.

    Momentum bookkeeping of the three external beams: the incident beam
    delivers P_i/c, the reflected beam recoils the cavity by another P_r/c,
    and the transmitted beam carries P_t/c straight through, so
    F = (P_i + P_r - P_t)/c.  With the lossless split P_r = P_i - P_t this
    vanishes on resonance (full transmission) and approaches 2 P_i / c when
    the cavity rejects the light.
    """
    _check_power(p_i)
    p_t = p_i * fabry_perot_transmission(r, phase)
    p_r = p_i - p_t
    return (p_i + p_r - p_t) / SPEED_OF_LIGHT


def ring_reflection_amplitude(cavity: RingCavity) -> complex:
    """Amplitude reflected back out of one coupling mirror.

    Direct reflection r interferes with the field leaking back out after
    round trips: rho = r - (r - r^3) e^{-i phi} / (1 - r^n e^{-i phi}).
    """
    r = cavity.amplitude_reflectivity
    loop = cmath.exp(-1j * cavity.round_trip_phase)
    return r - (r - r**3) * loop / (1.0 - r**cavity.n_mirrors * loop)


def ring_reflected_power(cavity: RingCavity, p_i: float) -> float:
    """Power reflected back along one input ray, clamped to [0, P_i]."""
    _check_power(p_i)
    return min(max(p_i * abs(ring_reflection_amplitude(cavity)) ** 2, 0.0), p_i)


def ring_force_vector(cavity: RingCavity, p_i: float) -> tuple[float, float]:
    """(F_x, F_y) on the ring from two equal rays coupled symmetrically.

    Both rays travel along +y into the two mirrors flanking the y-axis; each
    reflected ray leaves along the specular direction, rotated from +y by
    the n-gon exterior angle 2 pi / n, one to each side.  Transmitted light
    exits around the ring and cancels by the same symmetry.
    """
    _check_power(p_i)
    p_r = ring_reflected_power(cavity, p_i)
    turn = 2.0 * math.pi / cavity.n_mirrors
    f_x = (
        p_r * math.sin(turn) - p_r * math.sin(turn)
    ) / SPEED_OF_LIGHT  # mirror-image rays
    f_y = 2.0 * (p_i - p_r * math.cos(turn)) / SPEED_OF_LIGHT
    return f_x, f_y


def ring_force_y(cavity: RingCavity, p_i: float) -> float:
    """Net y-force of the symmetric two-ray coupling."""
    return ring_force_vector(cavity, p_i)[1]


def fabry_perot_sweep(p_i: float, r: float, phases) -> np.ndarray:
    """Force at each round-trip phase of a two-mirror cavity."""
    return np.array([fabry_perot_force(p_i, r, ph) for ph in np.asarray(phases)])


def ring_sweep(cavity: RingCavity, p_i: float, phases) -> np.ndarray:
    """y-force at each round-trip phase of a ring cavity."""
    return np.array(
        [ring_force_y(cavity.at_phase(float(ph)), p_i) for ph in np.asarray(phases)]
    )
