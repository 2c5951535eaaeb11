from ruijsenaars.functions.gammalib import Periods, cgamma, hyp_gamma, log_hyp_gamma
from ruijsenaars.functions.wavefn import (
    ComplexModelParams, DoubledPoint, HypWaveParams, MasterParams, SpectralPoint,
    f_cm_hyp, f_complex_barnes, f_complex_euler, f_master, phi_hyp,
)
