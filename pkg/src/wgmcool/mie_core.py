"""Lorenz-Mie partial-wave coefficients and radiation-pressure efficiencies.

Evaluates the scattering coefficients a_n, b_n of a non-absorbing dielectric
sphere in a plane wave, the extinction and radiation-pressure efficiencies
Q_ext and Q_rad built from them, and the force F = (P/c) * Q_rad.

The numerical scheme is the standard stable one for real size parameters:
the logarithmic derivative D_n(mx) = psi_n'(mx)/psi_n(mx) by downward
recurrence, and the Riccati-Bessel pair psi_n(x) = x j_n(x),
chi_n(x) = -x y_n(x) by upward recurrence from their closed-form n = 0, 1
values.  For a real (lossless) index every coefficient then sits on the
unitarity circle |c - 1/2| = 1/2 to machine precision, which the tests use
as a stringent correctness check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .constants import SPEED_OF_LIGHT
from .errors import DomainError, SeriesConvergenceError

# Trailing |a_n|, |b_n| must fall below this before the sums are trusted.
SERIES_TAIL_TOL = 1e-14

# Extra orders past the Wiscombe cutoff; enough for tails below SERIES_TAIL_TOL.
TAIL_ORDERS = 12


@dataclass(frozen=True)
class Sphere:
    """Microsphere geometry and material.

    Parameters
    ----------
    radius_a : float
        Radius in m.
    refractive_index_m : float
        Real refractive index relative to the surrounding vacuum.
    mass_density : float
        Material density in kg/m^3.
    mass : float, optional
        Override in kg.  When omitted the mass is (4/3) pi a^3 rho.
    """

    radius_a: float
    refractive_index_m: float
    mass_density: float = 2200.0
    mass: float | None = None

    def __post_init__(self):
        if not (self.radius_a > 0 and math.isfinite(self.radius_a)):
            raise DomainError(f"radius_a must be positive and finite, got {self.radius_a}")
        _check_index(self.refractive_index_m)
        if not (self.mass_density > 0):
            raise DomainError(f"mass_density must be positive, got {self.mass_density}")
        if self.mass is None:
            derived = 4.0 / 3.0 * math.pi * self.radius_a**3 * self.mass_density
            object.__setattr__(self, "mass", derived)
        elif not (self.mass > 0):
            raise DomainError(f"mass must be positive, got {self.mass}")


@dataclass(frozen=True)
class MieSeries:
    """Partial-wave coefficients a_n, b_n for n = 1..n_max at one (x, m).

    ``truncated`` is set when n_max was requested below the Wiscombe cutoff,
    in which case the efficiency sums would not have converged.
    """

    x: float
    refractive_index_m: float
    a: np.ndarray
    b: np.ndarray
    truncated: bool = False

    @property
    def n_max(self) -> int:
        return len(self.a)


class Efficiencies(NamedTuple):
    q_ext: float
    q_rad: float


def size_parameter(radius_a: float, wavelength: float) -> float:
    """Size parameter x = 2 pi a / lambda for a sphere in a plane wave."""
    if not (radius_a > 0 and wavelength > 0):
        raise DomainError("radius and wavelength must be positive")
    return 2.0 * math.pi * radius_a / wavelength


def wiscombe_cutoff(x: float) -> int:
    """Number of partial waves needed for convergence at size parameter x."""
    if not (x > 0 and math.isfinite(x)):
        raise DomainError(f"size parameter must be positive and finite, got {x}")
    return int(math.ceil(x + 4.0 * x ** (1.0 / 3.0) + 2.0))


def default_n_max(x: float) -> int:
    """Series length with enough tail margin for SERIES_TAIL_TOL."""
    return wiscombe_cutoff(x) + TAIL_ORDERS


def _check_index(m) -> float:
    if isinstance(m, complex) or np.iscomplexobj(m):
        raise DomainError(
            "complex refractive index not supported: only non-absorbing spheres "
            "(real m) are handled"
        )
    m = float(m)
    if not (m > 0 and math.isfinite(m)):
        raise DomainError(f"refractive index must be positive and finite, got {m}")
    return m


def log_derivative_down(z: float, n_top: int) -> np.ndarray:
    """D_n(z) = psi_n'(z)/psi_n(z) for n = 0..n_top, by downward recurrence.

    Seeded with D = 0 well above n_top; the recurrence is self-correcting
    downward, so the seed error decays away long before n_top is reached.
    """
    n_start = max(n_top, wiscombe_cutoff(abs(z)), int(math.ceil(abs(z)))) + 15
    d = np.empty(n_start + 1)
    d[n_start] = 0.0
    for n in range(n_start, 0, -1):
        rn = n / z
        d[n - 1] = rn - 1.0 / (d[n] + rn)
    return d[: n_top + 1]


def riccati_psi_chi(x: float, n_max: int) -> tuple[np.ndarray, np.ndarray]:
    """psi_n(x) = x j_n(x) and chi_n(x) = -x y_n(x) for n = 0..n_max.

    Upward recurrence from the closed-form n = 0, 1 terms; stable for real x
    (psi loses accuracy only far beyond the cutoff, where terms are already
    negligible).
    """
    psi = np.empty(n_max + 1)
    chi = np.empty(n_max + 1)
    sx, cx = math.sin(x), math.cos(x)
    psi[0] = sx
    chi[0] = cx
    if n_max >= 1:
        psi[1] = sx / x - cx
        chi[1] = cx / x + sx
    for n in range(1, n_max):
        fac = (2 * n + 1) / x
        psi[n + 1] = fac * psi[n] - psi[n - 1]
        chi[n + 1] = fac * chi[n] - chi[n - 1]
    return psi, chi


def mie_coefficients(x: float, m: float, n_max: int | None = None) -> MieSeries:
    """Mie coefficients a_n, b_n for n = 1..n_max.

    Parameters
    ----------
    x : float
        Size parameter 2 pi a / lambda, > 0.
    m : float
        Real relative refractive index.
    n_max : int, optional
        Series length; defaults to wiscombe_cutoff(x) + 12.  Requesting
        fewer orders than the cutoff sets ``truncated`` on the result.

    Returns
    -------
    MieSeries
    """
    m = _check_index(m)
    if not (x > 0 and math.isfinite(x)):
        raise DomainError(f"size parameter must be positive and finite, got {x}")
    cutoff = wiscombe_cutoff(x)
    if n_max is None:
        n_max = cutoff + TAIL_ORDERS
    if n_max < 1:
        raise DomainError(f"n_max must be >= 1, got {n_max}")

    if m == 1.0:
        # Index matched: no scattered field at all.
        zeros = np.zeros(n_max, dtype=complex)
        return MieSeries(x, m, zeros, zeros.copy(), truncated=n_max < cutoff)

    d = log_derivative_down(m * x, n_max)[1:]
    psi, chi = riccati_psi_chi(x, n_max)
    n = np.arange(1, n_max + 1)
    nx = n / x
    fa = d / m + nx
    fb = d * m + nx
    # a_n = (fa psi_n - psi_{n-1}) / (fa xi_n - xi_{n-1}),  xi = psi - i chi
    num_a = fa * psi[1:] - psi[:-1]
    num_b = fb * psi[1:] - psi[:-1]
    den_a_im = fa * chi[1:] - chi[:-1]
    den_b_im = fb * chi[1:] - chi[:-1]
    a = num_a / (num_a - 1j * den_a_im)
    b = num_b / (num_b - 1j * den_b_im)
    return MieSeries(x, m, a, b, truncated=n_max < cutoff)


def _require_converged(series: MieSeries) -> None:
    last = max(abs(series.a[-1]), abs(series.b[-1]))
    if series.truncated or last >= SERIES_TAIL_TOL:
        raise SeriesConvergenceError(
            f"Mie series not converged at n_max={series.n_max} "
            f"(last term {last:.3e}, need < {SERIES_TAIL_TOL:.0e}); "
            f"use n_max >= {default_n_max(series.x)}",
            last_term=last,
        )


def q_ext(series: MieSeries) -> float:
    """Extinction efficiency Q_ext = (2/x^2) sum (2n+1) Re(a_n + b_n)."""
    _require_converged(series)
    n = np.arange(1, series.n_max + 1)
    return 2.0 / series.x**2 * float(np.sum((2 * n + 1) * (series.a + series.b).real))


def q_rad(series: MieSeries) -> float:
    """Radiation-pressure efficiency.

    Q_rad = Q_ext - (4/x^2) sum { n(n+2)/(n+1) Re(a_n a*_{n+1} + b_n b*_{n+1})
                                   + (2n+1)/(n(n+1)) Re(a_n b*_n) }

    The cross terms remove the forward-scattered momentum; for a lossless
    sphere this equals Q_ext (1 - g) with g the asymmetry parameter.
    """
    _require_converged(series)
    a, b, x = series.a, series.b, series.x
    n = np.arange(1, series.n_max)
    cross = float(
        np.sum(n * (n + 2) / (n + 1) * (a[:-1] * a[1:].conj() + b[:-1] * b[1:].conj()).real)
    )
    nn = np.arange(1, series.n_max + 1)
    cross += float(np.sum((2 * nn + 1) / (nn * (nn + 1)) * (a * b.conj()).real))
    return q_ext(series) - 4.0 / x**2 * cross


def efficiencies(x: float, m: float, n_max: int | None = None) -> Efficiencies:
    """Q_ext and Q_rad at (x, m) with an automatically converged series."""
    series = mie_coefficients(x, m, n_max)
    if m == 1.0:
        return Efficiencies(0.0, 0.0)
    return Efficiencies(q_ext(series), q_rad(series))


def radiation_force(power: float, q: float) -> float:
    """Radiation-pressure force F = (P/c) Q_rad on the sphere, in N."""
    if not (power >= 0 and math.isfinite(power)):
        raise DomainError(f"beam power must be >= 0, got {power}")
    return power / SPEED_OF_LIGHT * q


def efficiency_batch(x: np.ndarray, m: float) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized Q_ext, Q_rad over an ascending array of size parameters.

    Used by spectrum scans; identical physics to the scalar path, evaluated
    chunk-wise with one shared series length per chunk.  Chunks are split
    whenever the cutoff grows too much across the chunk so that chi_n stays
    inside double-precision range at the low-x end.
    """
    m = _check_index(m)
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size == 0:
        raise DomainError("x must be a non-empty 1-D array")
    if not np.all(np.isfinite(x)) or np.any(x <= 0):
        raise DomainError("all size parameters must be positive and finite")
    if m == 1.0:
        z = np.zeros_like(x)
        return z, z.copy()

    qe = np.empty_like(x)
    qr = np.empty_like(x)
    start = 0
    while start < x.size:
        stop = min(start + 4096, x.size)
        base = default_n_max(x[start])
        # keep chi_n(min x in chunk) representable: cap cutoff growth per chunk
        while stop > start + 1 and default_n_max(x[stop - 1]) > base + 30:
            stop -= (stop - start) // 2
        qe[start:stop], qr[start:stop] = _batch_chunk(x[start:stop], m)
        start = stop
    return qe, qr


def _batch_chunk(x: np.ndarray, m: float) -> tuple[np.ndarray, np.ndarray]:
    n_max = default_n_max(float(np.max(x)))
    n_start = max(n_max, int(np.ceil(m * np.max(x)))) + 15

    mx = m * x
    d = np.zeros((n_max + 1, x.size))
    scratch = np.zeros(x.size)
    for n in range(n_start, 0, -1):
        rn = n / mx
        scratch = rn - 1.0 / (scratch + rn)
        if n - 1 <= n_max:
            d[n - 1] = scratch

    psi = np.empty((n_max + 1, x.size))
    chi = np.empty((n_max + 1, x.size))
    sx, cx = np.sin(x), np.cos(x)
    psi[0], chi[0] = sx, cx
    psi[1], chi[1] = sx / x - cx, cx / x + sx
    for n in range(1, n_max):
        fac = (2 * n + 1) / x
        psi[n + 1] = fac * psi[n] - psi[n - 1]
        chi[n + 1] = fac * chi[n] - chi[n - 1]

    n = np.arange(1, n_max + 1)[:, None]
    nx = n / x[None, :]
    fa = d[1:] / m + nx
    fb = d[1:] * m + nx
    num_a = fa * psi[1:] - psi[:-1]
    num_b = fb * psi[1:] - psi[:-1]
    den_a = num_a - 1j * (fa * chi[1:] - chi[:-1])
    den_b = num_b - 1j * (fb * chi[1:] - chi[:-1])
    a = num_a / den_a
    b = num_b / den_b

    w = (2 * n + 1) * (a + b).real
    qe = 2.0 / x**2 * np.sum(w, axis=0)
    nc = np.arange(1, n_max)[:, None]
    cross = np.sum(nc * (nc + 2) / (nc + 1) * (a[:-1] * a[1:].conj() + b[:-1] * b[1:].conj()).real, axis=0)
    cross += np.sum((2 * n + 1) / (n * (n + 1)) * (a * b.conj()).real, axis=0)
    qr = qe - 4.0 / x**2 * cross
    return qe, qr
