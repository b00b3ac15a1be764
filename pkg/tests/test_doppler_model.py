"""Velocity-dependent force model tests.

Reference scenario throughout: a 773 nm beam with 100 mW in the resonant
part, line half-width 2 pi x 32 MHz, detuned one half-width to the red.
The closed forms are simple enough to check against frozen numbers and
against each other.
"""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wgmcool import doppler_model as dm
from wgmcool.constants import BOLTZMANN, HBAR, SPEED_OF_LIGHT

K = 2 * math.pi / 773e-9
DELTA = 2 * math.pi * 32e6


def paper_beam(detuning=-DELTA, delta=DELTA, p_peak=0.1, p_background=0.0):
    return dm.CoolingParams(
        p_background=p_background, p_peak=p_peak, delta=delta, detuning=detuning, k=K
    )


# force levels chosen so the background pushes with 14.3 pN and the
# resonant part adds 4.2 pN on resonance
FORCE_LEVELS = dm.CoolingParams(
    p_background=14.3e-12 * SPEED_OF_LIGHT,
    p_peak=4.2e-12 * SPEED_OF_LIGHT,
    delta=DELTA,
    detuning=-DELTA,
    k=K,
)


# --------------------------------------------------------------------------
# single-beam force


def test_force_on_resonance_at_rest():
    params = dm.CoolingParams(0.01, 0.02, DELTA, 0.0, K)
    assert dm.lorentzian_force(params, 0.0) == pytest.approx(
        (0.01 + 0.02) / SPEED_OF_LIGHT, rel=1e-12
    )


def test_resonant_part_halves_one_halfwidth_out():
    on = dm.lorentzian_force(dm.CoolingParams(0.0, 0.1, DELTA, 0.0, K), 0.0)
    off = dm.lorentzian_force(dm.CoolingParams(0.0, 0.1, DELTA, -DELTA, K), 0.0)
    assert off == pytest.approx(on / 2, rel=1e-12)


def test_paper_force_levels():
    on_resonance = dm.CoolingParams(
        FORCE_LEVELS.p_background, FORCE_LEVELS.p_peak, DELTA, 0.0, K
    )
    assert dm.lorentzian_force(on_resonance, 0.0) == pytest.approx(18.5e-12, rel=1e-12)
    # detuned one half-width: background plus half the resonant part
    assert dm.static_force_offset(FORCE_LEVELS) == pytest.approx(16.4e-12, rel=1e-12)


def test_doppler_shift_direction():
    # v > 0 runs away from the +x beam (red shift, further off a red-detuned
    # line) and into the -x beam (blue shift, toward resonance); the
    # opposing beam winning is what makes the pair damp
    params = paper_beam()
    v = 1.0
    assert dm.lorentzian_force(params, v, 1.0) < dm.lorentzian_force(params, 0.0, 1.0)
    assert dm.lorentzian_force(params, v, -1.0) > dm.lorentzian_force(params, 0.0, -1.0)


def test_beam_sign_validated():
    with pytest.raises(dm.DomainError):
        dm.lorentzian_force(paper_beam(), 0.0, beam_sign=0.5)


# --------------------------------------------------------------------------
# two beams and damping


@given(v=st.floats(min_value=-100.0, max_value=100.0, allow_nan=False))
@settings(max_examples=50, deadline=None)
def test_net_two_beam_force_is_odd(v):
    params = paper_beam()
    assert dm.net_two_beam_force(params, v) == pytest.approx(
        -dm.net_two_beam_force(params, -v), abs=1e-30
    )


def test_net_force_damps_red_and_antidamps_blue():
    v = 0.5
    assert dm.net_two_beam_force(paper_beam(detuning=-DELTA), v) < 0
    assert dm.net_two_beam_force(paper_beam(detuning=+DELTA), v) > 0


def test_molasses_beta_value():
    result = dm.molasses_beta(paper_beam())
    # at |detuning| = delta the closed form collapses to k P / (c delta)
    assert result.beta == pytest.approx(K * 0.1 / (SPEED_OF_LIGHT * DELTA), rel=1e-12)
    assert result.beta == pytest.approx(1.3484965038735125e-11, rel=1e-12)
    assert result.regime == "molasses_two_beam"
    assert result.f0_offset == pytest.approx(
        dm.static_force_offset(paper_beam()), rel=1e-12
    )


def test_single_beam_is_half_molasses():
    params = paper_beam()
    single = dm.single_beam_beta(params)
    assert single.beta == pytest.approx(dm.molasses_beta(params).beta / 2, rel=1e-15)
    assert single.regime == "single_beam"


def test_beta_is_odd_in_detuning_and_zero_on_resonance():
    assert dm.molasses_beta(paper_beam(detuning=+DELTA)).beta == pytest.approx(
        -dm.molasses_beta(paper_beam(detuning=-DELTA)).beta, rel=1e-15
    )
    assert dm.molasses_beta(paper_beam(detuning=0.0)).beta == 0.0


def test_beta_matches_force_slope():
    # the quoted damping must equal the actual derivative of the net force
    params = paper_beam()
    h = 1e-2
    slope = (
        dm.net_two_beam_force(params, h) - dm.net_two_beam_force(params, -h)
    ) / (2 * h)
    assert slope == pytest.approx(-dm.molasses_beta(params).beta, rel=1e-6)


def test_linearized_force():
    params = paper_beam(p_background=FORCE_LEVELS.p_background,
                        p_peak=FORCE_LEVELS.p_peak)
    at_rest = dm.linearized_force(params, 0.0)
    assert at_rest.f0 == pytest.approx(16.4e-12, rel=1e-12)
    assert at_rest.minus_beta_v == 0.0
    assert at_rest.within_linear_range

    v_small = DELTA / 100 / K
    lin = dm.linearized_force(params, v_small)
    exact = dm.lorentzian_force(params, v_small)
    assert lin.f0 + lin.minus_beta_v == pytest.approx(exact, rel=1e-3)
    assert lin.within_linear_range

    v_fast = DELTA / K  # far outside the linear range
    assert not dm.linearized_force(params, v_fast).within_linear_range
    # the flag boundary sits at |k v| = delta/10
    assert not dm.linearized_force(params, 1.01 * DELTA / 10 / K).within_linear_range
    assert dm.linearized_force(params, 0.99 * DELTA / 10 / K).within_linear_range


# --------------------------------------------------------------------------
# cooling time


def test_cooling_time_reference_value():
    tau = dm.cooling_time(4e-12, dm.molasses_beta(paper_beam()).beta)
    assert tau == pytest.approx(0.29662664964352, rel=1e-12)


def test_cooling_time_scales_with_linewidth():
    # at |detuning| = delta, beta ~ 1/delta, so tau ~ delta
    wide = dm.molasses_beta(paper_beam()).beta
    narrow = dm.molasses_beta(
        paper_beam(delta=2 * math.pi * 1e6, detuning=-2 * math.pi * 1e6)
    ).beta
    ratio = dm.cooling_time(4e-12, wide) / dm.cooling_time(4e-12, narrow)
    assert ratio == pytest.approx(32.0, rel=1e-12)


def test_cooling_time_linear_in_mass():
    beta = dm.molasses_beta(paper_beam()).beta
    assert dm.cooling_time(8e-12, beta) == pytest.approx(
        2 * dm.cooling_time(4e-12, beta), rel=1e-15
    )


def test_cooling_time_rejects_heating():
    with pytest.raises(dm.DomainError, match="no damping"):
        dm.cooling_time(4e-12, -1e-12)
    with pytest.raises(dm.DomainError):
        dm.cooling_time(0.0, 1e-12)


# --------------------------------------------------------------------------
# scattering and recoil


def test_scattering_rate_values():
    peak = dm.scattering_rate(paper_beam(detuning=0.0))
    assert peak == pytest.approx(0.1 / (HBAR * SPEED_OF_LIGHT * K), rel=1e-12)
    assert peak == pytest.approx(3.891372109094833e17, rel=1e-12)
    # one half-width out: half the photons
    assert dm.scattering_rate(paper_beam()) == pytest.approx(peak / 2, rel=1e-12)


def test_scattering_rate_velocity_shift():
    # detuned to the red, moving away from the beam shifts further out
    params = paper_beam()
    assert dm.scattering_rate(params, -1.0) < dm.scattering_rate(params, 0.0)


def test_recoil_diffusion():
    gamma = dm.scattering_rate(paper_beam())
    assert dm.recoil_diffusion(K, gamma) == pytest.approx((HBAR * K) ** 2 * gamma)
    assert dm.recoil_diffusion(K, gamma) == pytest.approx(1.4296371881953362e-37)
    assert dm.recoil_diffusion(K, 0.0) == 0.0
    with pytest.raises(dm.DomainError):
        dm.recoil_diffusion(K, -1.0)


# --------------------------------------------------------------------------
# temperature limit


def test_doppler_limit_reference_values():
    assert dm.doppler_limit(DELTA, -DELTA) == pytest.approx(767.88e-6, rel=1e-4)
    assert dm.doppler_limit(2 * math.pi * 1e6, -2 * math.pi * 1e6) == pytest.approx(
        23.996e-6, rel=1e-4
    )
    # optimum detuning gives hbar delta / 2 k_B
    assert dm.doppler_limit(DELTA, -DELTA) == pytest.approx(
        HBAR * DELTA / (2 * BOLTZMANN), rel=1e-12
    )


def test_doppler_limit_minimized_at_one_halfwidth():
    best = dm.doppler_limit(DELTA, -DELTA)
    assert dm.doppler_limit(DELTA, -0.5 * DELTA) > best
    assert dm.doppler_limit(DELTA, -2.0 * DELTA) > best
    # even in detuning
    assert dm.doppler_limit(DELTA, +DELTA) == pytest.approx(best, rel=1e-15)


def test_doppler_limit_rejects_degenerate_inputs():
    with pytest.raises(dm.DomainError, match="zero detuning"):
        dm.doppler_limit(DELTA, 0.0)
    with pytest.raises(dm.DomainError):
        dm.doppler_limit(0.0, -DELTA)


# --------------------------------------------------------------------------
# parameter validation


def test_params_validation():
    with pytest.raises(dm.DomainError):
        dm.CoolingParams(-0.1, 0.1, DELTA, -DELTA, K)
    with pytest.raises(dm.DomainError):
        dm.CoolingParams(0.0, 0.1, 0.0, -DELTA, K)
    with pytest.raises(dm.DomainError):
        dm.CoolingParams(0.0, 0.1, DELTA, -DELTA, -K)
    with pytest.raises(dm.DomainError):
        dm.CoolingParams(0.0, 0.1, DELTA, -DELTA, K, omega=-1.0)


def test_omega_defaults_to_ck():
    assert paper_beam().omega == pytest.approx(SPEED_OF_LIGHT * K, rel=1e-15)
    explicit = dm.CoolingParams(0.0, 0.1, DELTA, -DELTA, K, omega=2.4e15)
    assert explicit.omega == 2.4e15
