"""Scattering-series tests against an independent extended-precision oracle.

The frozen table below was produced by tests/oracle_mie.py (mpmath at 60
digits, direct Bessel-function formulas, no shared code with the package).
Rerun that script to regenerate.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wgmcool import errors, mie_core

# (x, m) -> (q_ext, q_rad), 17 significant digits from the oracle
ORACLE_EFFICIENCIES = {
    (1.0, 1.45): (0.17469974850011367, 0.14076603669752562),
    (1.0, 1.5): (0.21509759604288531, 0.17230554369588834),
    (10.0, 1.45): (2.2875055255482709, 0.78970324362385219),
    (10.0, 1.5): (2.8819989520758974, 0.74092475691729978),
    (40.5, 1.45): (2.3691939023133478, 0.44223674944416031),
    (40.5, 1.5): (2.1608798722240777, 0.47380121255453145),
}

ORACLE_A1 = 0.034872697078027158 - 0.18345733039737418j
ORACLE_B1 = 0.00080050584632154241 - 0.028281885310416409j


@pytest.mark.parametrize(("x", "m"), sorted(ORACLE_EFFICIENCIES))
def test_efficiencies_match_oracle(x, m):
    qe_ref, qr_ref = ORACLE_EFFICIENCIES[(x, m)]
    eff = mie_core.efficiencies(x, m)
    assert eff.q_ext == pytest.approx(qe_ref, rel=1e-10)
    assert eff.q_rad == pytest.approx(qr_ref, rel=1e-10)


def test_first_coefficients_match_oracle():
    # arrays hold n = 1..n_max, so index 0 is the dipole term
    series = mie_core.mie_coefficients(1.0, 1.5)
    assert series.a[0] == pytest.approx(ORACLE_A1, rel=1e-12)
    assert series.b[0] == pytest.approx(ORACLE_B1, rel=1e-12)


def test_index_matched_sphere_scatters_nothing():
    series = mie_core.mie_coefficients(5.0, 1.0)
    assert np.all(series.a == 0) and np.all(series.b == 0)
    eff = mie_core.efficiencies(5.0, 1.0)
    assert eff.q_ext == 0.0 and eff.q_rad == 0.0


def test_rayleigh_limit():
    # x = 0.1 is small enough that the leading x^4 term dominates
    m = 1.5
    x = 0.1
    expected = 8.0 / 3.0 * x**4 * ((m**2 - 1) / (m**2 + 2)) ** 2
    eff = mie_core.efficiencies(x, m)
    assert eff.q_ext == pytest.approx(expected, rel=0.02)
    assert eff.q_rad == pytest.approx(expected, rel=0.02)
    assert eff.q_rad == pytest.approx(eff.q_ext, rel=0.02)


@pytest.mark.parametrize(("x", "m"), sorted(ORACLE_EFFICIENCIES))
def test_unitarity_circle(x, m):
    # lossless sphere: every coefficient lies on the circle |c - 1/2| = 1/2
    series = mie_core.mie_coefficients(x, m)
    n_top = mie_core.wiscombe_cutoff(x)
    for c in (series.a[:n_top], series.b[:n_top]):
        assert np.max(np.abs(np.abs(c - 0.5) - 0.5)) < 1e-8


@given(
    x=st.floats(min_value=0.5, max_value=60.0),
    m=st.floats(min_value=1.05, max_value=2.0),
)
@settings(max_examples=40, deadline=None)
def test_unitarity_holds_everywhere(x, m):
    series = mie_core.mie_coefficients(x, m)
    n_top = mie_core.wiscombe_cutoff(x)
    c = np.concatenate([series.a[:n_top], series.b[:n_top]])
    assert np.max(np.abs(np.abs(c - 0.5) - 0.5)) < 1e-8


@pytest.mark.parametrize("x", [1.0, 10.0, 40.5])
def test_series_tail_negligible_beyond_cutoff(x):
    series = mie_core.mie_coefficients(x, 1.5)
    tail = mie_core.wiscombe_cutoff(x) + 9  # index of n = cutoff + 10
    assert np.all(np.abs(series.a[tail:]) < 1e-14)
    assert np.all(np.abs(series.b[tail:]) < 1e-14)


def test_q_rad_below_q_ext():
    for (x, m), (qe, qr) in ORACLE_EFFICIENCIES.items():
        eff = mie_core.efficiencies(x, m)
        assert 0 < eff.q_rad < eff.q_ext


def test_truncated_series_rejected():
    # far too short a series: the tail is still large, so q_ext must refuse
    series = mie_core.mie_coefficients(40.5, 1.5, n_max=10)
    assert series.truncated
    with pytest.raises(errors.SeriesConvergenceError):
        mie_core.q_ext(series)
    with pytest.raises(errors.SeriesConvergenceError):
        mie_core.q_rad(series)


def test_complex_index_rejected():
    with pytest.raises(errors.DomainError):
        mie_core.mie_coefficients(1.0, 1.5 + 0.1j)
    with pytest.raises(errors.DomainError):
        mie_core.efficiencies(1.0, 0.0)


def test_batch_matches_scalar():
    xs = np.linspace(39.0, 41.0, 50)
    qe, qr = mie_core.efficiency_batch(xs, 1.45)
    for i in (0, 17, 49):
        eff = mie_core.efficiencies(xs[i], 1.45)
        assert qe[i] == pytest.approx(eff.q_ext, rel=1e-12)
        assert qr[i] == pytest.approx(eff.q_rad, rel=1e-12)


def test_batch_index_matched_is_zero():
    qe, qr = mie_core.efficiency_batch(np.linspace(1.0, 1.2, 21), 1.0)
    assert np.all(qe == 0.0) and np.all(qr == 0.0)


def test_radiation_force():
    assert mie_core.radiation_force(0.0, 2.0) == 0.0
    # F = P q / c with exact c
    assert mie_core.radiation_force(0.01, 0.45) == pytest.approx(
        0.01 * 0.45 / 299792458.0, rel=1e-15
    )
    with pytest.raises(errors.DomainError):
        mie_core.radiation_force(-1e-3, 0.5)


def test_size_parameter():
    # x = 2 pi a / lambda
    assert mie_core.size_parameter(5e-6, 773e-9) == pytest.approx(
        2 * math.pi * 5e-6 / 773e-9, rel=1e-15
    )
    with pytest.raises(errors.DomainError):
        mie_core.size_parameter(-1e-6, 773e-9)


def test_wiscombe_cutoff_values():
    assert mie_core.wiscombe_cutoff(1.0) == math.ceil(1.0 + 4.0 + 2.0)
    assert mie_core.wiscombe_cutoff(40.5) == math.ceil(40.5 + 4 * 40.5 ** (1 / 3) + 2)


def test_sphere_mass():
    s = mie_core.Sphere(radius_a=10e-6, refractive_index_m=1.45)
    assert s.mass == pytest.approx(4 / 3 * math.pi * (10e-6) ** 3 * 2200.0, rel=1e-12)
    # explicit override wins over the density-derived value
    assert mie_core.Sphere(10e-6, 1.45, mass=4e-12).mass == 4e-12
    with pytest.raises(errors.DomainError):
        mie_core.Sphere(-1e-6, 1.45)
