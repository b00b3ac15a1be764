"""Physical constants used throughout the package (CODATA 2018, SI units)."""

SPEED_OF_LIGHT = 299_792_458.0        # m/s, exact
HBAR = 1.054_571_817e-34              # J s
BOLTZMANN = 1.380_649e-23             # J/K, exact
GAS_CONSTANT = 8.314_462_618          # J/(mol K)

PA_PER_TORR = 133.322                 # 1 Torr in Pa


def torr_to_pa(p_torr: float) -> float:
    return p_torr * PA_PER_TORR


def pa_to_torr(p_pa: float) -> float:
    return p_pa / PA_PER_TORR
