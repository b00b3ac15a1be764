"""Radiation pressure on dielectric microspheres: Mie force spectra,
whispering-gallery resonance search, and Doppler cooling dynamics."""

__version__ = "0.1.0"

from .constants import (
    BOLTZMANN,
    GAS_CONSTANT,
    HBAR,
    PA_PER_TORR,
    SPEED_OF_LIGHT,
    pa_to_torr,
    torr_to_pa,
)
from .doppler_model import (
    CoolingParams,
    DampingResult,
    cooling_time,
    doppler_limit,
    linearized_force,
    lorentzian_force,
    molasses_beta,
    net_two_beam_force,
    recoil_diffusion,
    scattering_rate,
    single_beam_beta,
    static_force_offset,
)
from .dynamics_sim import (
    SimConfig,
    TrapConfig,
    Trajectory,
    estimate_temperature,
    fit_energy_decay,
    oscillation_frequency,
    simulate,
)
from .errors import (
    DomainError,
    FitConvergenceError,
    ResonanceNotFoundError,
    SampleBudgetError,
    SeriesConvergenceError,
    TimestepError,
)
from .gas_drag import (
    GasEnvironment,
    crossover_pressure,
    effective_drag,
    epstein_drag,
    knudsen_number,
    mean_free_path,
    mean_thermal_speed,
    viscous_drag,
)
from .mie_core import (
    Efficiencies,
    MieSeries,
    Sphere,
    efficiencies,
    efficiency_batch,
    mie_coefficients,
    q_ext,
    q_rad,
    radiation_force,
    size_parameter,
    wiscombe_cutoff,
)
from .toy_resonators import (
    RingCavity,
    fabry_perot_force,
    fabry_perot_sweep,
    ring_force_y,
    ring_reflected_power,
    ring_sweep,
)
from .wgm_finder import (
    LorentzianFit,
    ResonanceLine,
    SpectrumSample,
    bind_radius,
    calibrate_index,
    calibrated_index,
    fit_lorentzian,
    locate_resonance,
    scan_spectrum,
    to_angular_frequency,
)

__all__ = [name for name in dir() if not name.startswith("_")]
