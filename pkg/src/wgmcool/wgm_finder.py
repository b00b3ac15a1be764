"""Whispering-gallery resonance search over the Mie spectrum.

A WGM line of partial wave n is a point where the single coefficient sweeps
through its unitarity maximum |c_n|^2 = 1.  For a real index the coefficient
can be written c_n = A/(A - iB) with real A(x), B(x) built from the same
recurrences as the full series; the resonance condition Im(c_n) = 0 with
maximal response is exactly B = 0, while A = 0 marks the anti-resonance
(the ambiguity the maximum condition resolves).  Lines are bracketed by sign
changes of B/A on a coarse grid, refined by root-finding, polished against a
golden-section maximization of |c_n|^2, and characterized by a Lorentzian
fit of the force spectrum in a window sized by the measured half-width.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from importlib import resources
from typing import NamedTuple

import numpy as np
from scipy.optimize import brentq, least_squares, minimize_scalar

from . import mie_core
from .constants import SPEED_OF_LIGHT
from .errors import (
    DomainError,
    FitConvergenceError,
    ResonanceNotFoundError,
    SampleBudgetError,
)

MODE_KINDS = ("electric_a", "magnetic_b")

# Default reference power for force columns, W.
REFERENCE_POWER = 10e-3

DEFAULT_SAMPLE_BUDGET = 1_000_000


@dataclass(frozen=True)
class SpectrumSample:
    x: float
    q_ext: float
    q_rad: float
    force: float  # N, at the scan's reference power


@dataclass(frozen=True)
class ResonanceLine:
    """A located WGM line of one partial wave.

    omega0 and half_width_omega are None until bound to a sphere radius
    with ``bind_radius`` (the x coordinate alone does not fix a frequency).
    """

    mode_kind: str
    mode_number_n: int
    mode_order_l: int
    x0: float
    half_width_x: float
    peak_force: float
    offset_force: float
    fit_quality: float
    reference_power: float = REFERENCE_POWER
    omega0: float | None = None
    half_width_omega: float | None = None

    @property
    def q_factor(self) -> float:
        return self.x0 / (2.0 * self.half_width_x)


class LorentzianFit(NamedTuple):
    x0: float
    half_width: float
    peak: float
    offset: float
    fit_quality: float


def scan_spectrum(
    x_min: float,
    x_max: float,
    step: float,
    m: float,
    power: float = REFERENCE_POWER,
    sample_budget: int = DEFAULT_SAMPLE_BUDGET,
) -> list[SpectrumSample]:
    """Uniform Q_ext/Q_rad/force spectrum over [x_min, x_max].

    The grid is x_min + i*step for every i with x_i <= x_max (to within a
    few ulps, so an exact multiple lands on the endpoint).
    """
    if not (0 < x_min < x_max):
        raise DomainError(f"need 0 < x_min < x_max, got [{x_min}, {x_max}]")
    if not (step > 0 and math.isfinite(step)):
        raise DomainError(f"step must be positive and finite, got {step}")
    if power < 0:
        raise DomainError(f"power must be >= 0, got {power}")
    ratio = (x_max - x_min) / step
    tol = max(32 * np.finfo(float).eps * max(abs(x_min), abs(x_max)) / step, 1e-12)
    n_samples = int(math.floor(ratio + tol)) + 1
    if n_samples > sample_budget:
        raise SampleBudgetError(
            f"scan would take {n_samples} samples, exceeding the sample budget "
            f"of {sample_budget}; increase the step or the budget",
            budget=sample_budget,
            requested=n_samples,
        )
    xs = x_min + step * np.arange(n_samples)
    qe, qr = mie_core.efficiency_batch(xs, m)
    forces = power / SPEED_OF_LIGHT * qr
    return [
        SpectrumSample(float(x), float(e), float(r), float(f))
        for x, e, r, f in zip(xs, qe, qr, forces)
    ]


# --------------------------------------------------------------------------
# single-coefficient response


def _check_kind(mode_kind: str) -> str:
    if mode_kind not in MODE_KINDS:
        raise DomainError(f"mode_kind must be one of {MODE_KINDS}, got {mode_kind!r}")
    return mode_kind


def partial_wave_response(x: float, m: float, n: int, mode_kind: str):
    """Real pair (A, B) with c_n = A/(A - iB) for the requested partial wave.

    B = 0 at resonance (|c_n|^2 = 1), A = 0 at anti-resonance (c_n = 0).
    """
    d = mie_core.log_derivative_down(m * x, n)[n]
    psi, chi = mie_core.riccati_psi_chi(x, n)
    f = d / m + n / x if mode_kind == "electric_a" else d * m + n / x
    A = f * psi[n] - psi[n - 1]
    B = f * chi[n] - chi[n - 1]
    return A, B


def coefficient(x: float, m: float, n: int, mode_kind: str) -> complex:
    """The single Mie coefficient c_n(x) of the requested kind."""
    A, B = partial_wave_response(x, m, n, mode_kind)
    return A / (A - 1j * B)


def _response_ratio(x: float, m: float, n: int, mode_kind: str) -> float:
    A, B = partial_wave_response(x, m, n, mode_kind)
    return B / A


def _coeff_sq(x: float, m: float, n: int, mode_kind: str) -> float:
    A, B = partial_wave_response(x, m, n, mode_kind)
    return A * A / (A * A + B * B)


def locate_resonance(
    mode_kind: str,
    n: int,
    l: int,
    m: float,
    x_bracket: tuple[float, float],
    power: float = REFERENCE_POWER,
    coarse_points: int = 2001,
) -> ResonanceLine:
    """Locate the l-th resonance (ascending x) of partial wave n in a bracket.

    Parameters
    ----------
    mode_kind : {"electric_a", "magnetic_b"}
    n : int
        Partial-wave (mode) number, >= 1.
    l : int
        Mode order: which root of the resonance condition inside the
        bracket, counted from low x (l = 1 is the narrowest).
    m : float
        Real refractive index.
    x_bracket : (float, float)
        Search interval in size parameter.
    power : float
        Reference power for the force levels on the returned line.

    Returns
    -------
    ResonanceLine
        Center located to better than 1e-9 absolute in x.
    """
    mode_kind = _check_kind(mode_kind)
    if n < 1 or l < 1:
        raise DomainError(f"mode number and order must be >= 1, got n={n}, l={l}")
    lo, hi = float(x_bracket[0]), float(x_bracket[1])
    if not (0 < lo < hi):
        raise DomainError(f"bad bracket {x_bracket}")
    if m == 1.0:
        raise ResonanceNotFoundError(
            "index-matched sphere (m = 1) has no resonances", peaks_seen=[]
        )

    peaks = _bracket_resonances(mode_kind, n, m, lo, hi, coarse_points)
    if len(peaks) < l:
        raise ResonanceNotFoundError(
            f"bracket [{lo}, {hi}] contains {len(peaks)} resonance(s) of "
            f"partial wave n={n}, need order l={l}; peaks seen: {peaks}",
            peaks_seen=peaks,
        )
    x0 = peaks[l - 1]
    half_width = _half_width(mode_kind, n, m, x0)
    _verify_line(mode_kind, n, m, x0, half_width)

    fit = _fit_line(mode_kind, n, m, x0, half_width, power)
    return ResonanceLine(
        mode_kind=mode_kind,
        mode_number_n=n,
        mode_order_l=l,
        x0=x0,
        half_width_x=fit.half_width,
        peak_force=fit.offset + fit.peak,
        offset_force=fit.offset,
        fit_quality=fit.fit_quality,
        reference_power=power,
    )


def _bracket_resonances(mode_kind, n, m, lo, hi, coarse_points) -> list[float]:
    """All B/A sign changes in [lo, hi] that refine to unitarity maxima."""
    xs = np.linspace(lo, hi, coarse_points)
    g = np.array([_response_ratio(x, m, n, mode_kind) for x in xs])
    peaks = []
    for i in range(len(xs) - 1):
        if g[i] == 0.0:
            candidate = xs[i]
        elif np.sign(g[i]) != np.sign(g[i + 1]):
            candidate = brentq(
                _response_ratio, xs[i], xs[i + 1], args=(m, n, mode_kind),
                xtol=1e-13, rtol=8.9e-16,
            )
        else:
            continue
        # a sign change is either a resonance (B root) or an anti-resonance
        # (A root, where g blows up); only the former reaches |c|^2 ~ 1
        if _coeff_sq(candidate, m, n, mode_kind) > 0.5:
            peaks.append(float(candidate))
    return peaks


def _half_width(mode_kind, n, m, x0) -> float:
    """HWHM from the |B/A| = 1 half-response points around x0."""

    def off_half(x):
        return abs(_response_ratio(x, m, n, mode_kind)) - 1.0

    sides = []
    for direction in (+1.0, -1.0):
        dx = 1e-9
        while off_half(x0 + direction * dx) < 0:
            dx *= 2.0
            if dx > 1.0:
                raise FitConvergenceError(
                    f"half-response point not found within 1.0 of x0={x0}"
                )
        a, b = sorted((x0, x0 + direction * dx))
        sides.append(brentq(off_half, a, b, xtol=1e-15, rtol=8.9e-16))
    return 0.5 * abs(sides[0] - sides[1])


def _verify_line(mode_kind, n, m, x0, hw) -> None:
    """Sanity checks: unitarity maximum at x0, Im crossing, golden agreement."""
    c0 = _coeff_sq(x0, m, n, mode_kind)
    if not (1.0 - c0 < 1e-6):
        raise FitConvergenceError(
            f"|c_n|^2 = {c0} at located center, expected unitarity maximum 1"
        )
    im_left = coefficient(x0 - hw, m, n, mode_kind).imag
    im_right = coefficient(x0 + hw, m, n, mode_kind).imag
    if np.sign(im_left) == np.sign(im_right):
        raise FitConvergenceError(f"Im(c_n) does not change sign across x0={x0}")
    polish = minimize_scalar(
        lambda x: -_coeff_sq(x, m, n, mode_kind),
        bracket=(x0 - hw, x0, x0 + hw),
        method="golden",
        options={"xtol": 1e-13},
    )
    if abs(polish.x - x0) > hw / 10.0:
        raise FitConvergenceError(
            f"golden-section maximum {polish.x} disagrees with root {x0}"
        )


def _fit_line(mode_kind, n, m, x0, hw, power) -> LorentzianFit:
    """Lorentzian parameters of the force spectrum around a located line.

    Fits the raw force first; if broad neighboring modes distort the window
    (poor fit quality or a center shifted off the located root), falls back
    to the single-coefficient weighted response, which isolates the line.
    """
    xs = x0 + np.linspace(-4.0, 4.0, 161) * hw
    series_len = mie_core.default_n_max(xs[-1])
    force = np.array(
        [power / SPEED_OF_LIGHT * mie_core.efficiencies(x, m, series_len).q_rad for x in xs]
    )
    try:
        fit = fit_lorentzian(xs, force)
        if fit.fit_quality >= 0.99 and abs(fit.x0 - x0) <= hw / 10.0:
            return fit
    except FitConvergenceError:
        pass
    # weighted response: background plus the isolated |c_n|^2 line profile
    f_peak = power / SPEED_OF_LIGHT * mie_core.efficiencies(x0, m, series_len).q_rad
    f_off = 0.5 * (force[0] + force[-1])
    weighted = f_off + (f_peak - f_off) * np.array(
        [_coeff_sq(x, m, n, mode_kind) for x in xs]
    )
    return fit_lorentzian(xs, weighted)


# --------------------------------------------------------------------------
# Lorentzian fitting


def _lorentz(u, u0, hw, peak, offset):
    return offset + peak * hw**2 / ((u - u0) ** 2 + hw**2)


def fit_lorentzian(x, y) -> LorentzianFit:
    """Least-squares Lorentzian fit L(x) = offset + peak*hw^2/((x-x0)^2+hw^2).

    Expects at least 7 samples spanning a few half-widths with a single
    dominant peak.  Returns center, HWHM, peak height above offset, offset,
    and the R^2 fit quality.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise DomainError("x and y must be 1-D arrays of equal length")
    if x.size < 7:
        raise DomainError(f"need at least 7 samples, got {x.size}")
    span = float(np.ptp(x))
    if span <= 0:
        raise DomainError("x samples must span a nonzero interval")
    if np.ptp(y) == 0:
        raise FitConvergenceError("flat input: no peak to fit", residual_norm=0.0)

    # work in shifted/scaled coordinates, the line can be 1e-6 wide at x ~ 40
    i_max = int(np.argmax(y))
    x_ref = x[i_max]
    offset0 = float(min(np.median(y[: max(3, x.size // 8)]),
                        np.median(y[-max(3, x.size // 8):])))
    peak0 = float(y[i_max] - offset0)
    above = y - offset0 >= 0.5 * peak0
    hw0 = max(float(x[above].max() - x[above].min()) / 2.0, span / 100.0)
    u = (x - x_ref) / hw0

    def residual(p):
        return _lorentz(u, *p) - y

    result = least_squares(residual, (0.0, 1.0, peak0, offset0), method="lm",
                           max_nfev=10_000)
    if not result.success:
        raise FitConvergenceError(
            f"Lorentzian fit did not converge: {result.message}",
            residual_norm=float(np.linalg.norm(result.fun)),
        )
    u0, hw_u, peak, offset = result.x
    hw = abs(hw_u) * hw0
    if span < 4.0 * hw:
        raise FitConvergenceError(
            f"window spans {span / hw:.2f} half-widths, need >= 4",
            residual_norm=float(np.linalg.norm(result.fun)),
        )
    ss_res = float(np.sum(result.fun**2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r_squared = 1.0 - ss_res / ss_tot
    return LorentzianFit(
        x0=float(x_ref + u0 * hw0),
        half_width=float(hw),
        peak=float(peak),
        offset=float(offset),
        fit_quality=float(r_squared),
    )


# --------------------------------------------------------------------------
# frequency conversion and index calibration


def to_angular_frequency(line: ResonanceLine, radius_a: float) -> tuple[float, float]:
    """(omega0, delta) in rad/s for a line bound to a sphere radius.

    omega = c x / a applied to the center and to the HWHM.
    """
    if not (radius_a > 0):
        raise DomainError(f"radius must be positive, got {radius_a}")
    scale = SPEED_OF_LIGHT / radius_a
    return line.x0 * scale, line.half_width_x * scale


def bind_radius(line: ResonanceLine, radius_a: float) -> ResonanceLine:
    """Copy of the line with omega0 and half_width_omega filled in."""
    omega0, delta = to_angular_frequency(line, radius_a)
    return replace(line, omega0=omega0, half_width_omega=delta)


CALIBRATION_RESOURCE = "calibration.json"


def calibrate_index(
    target_x0: float = 40.62425,
    mode_kind: str = "electric_a",
    n: int = 52,
    l: int = 1,
    index_bounds: tuple[float, float] = (1.44, 1.46),
    search_bracket: tuple[float, float] = (39.5, 42.0),
) -> dict:
    """Find the refractive index that puts a given line at a target center.

    The line center moves smoothly and monotonically (downward) in m, so the
    calibration is a scalar root-solve of x0(m) = target over the bounds.
    Returns a dict suitable for freezing as the repository fixture.
    """

    def center(m):
        return locate_resonance(mode_kind, n, l, m, search_bracket).x0

    m_lo, m_hi = index_bounds
    f_lo, f_hi = center(m_lo) - target_x0, center(m_hi) - target_x0
    if f_lo * f_hi > 0:
        # target not straddled: nearest endpoint is the best available
        m_star = m_lo if abs(f_lo) < abs(f_hi) else m_hi
    else:
        m_star = brentq(lambda m: center(m) - target_x0, m_lo, m_hi, xtol=1e-12)
    x0 = center(m_star)
    line = locate_resonance(mode_kind, n, l, m_star, search_bracket)
    return {
        "refractive_index": float(m_star),
        "target_x0": target_x0,
        "achieved_x0": float(x0),
        "mode_kind": mode_kind,
        "mode_number_n": n,
        "mode_order_l": l,
        "half_width_x": line.half_width_x,
        "q_factor": line.q_factor,
        "index_bounds": list(index_bounds),
        "method": "scalar root-solve of the line center over the index bounds",
    }


def calibrated_index() -> float:
    """Refractive index from the bundled calibration fixture."""
    text = resources.files("wgmcool.data").joinpath(CALIBRATION_RESOURCE).read_text()
    return float(json.loads(text)["refractive_index"])
