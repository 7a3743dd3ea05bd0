"""Key-dependent feedback configurations for word-oriented sigma-LFSRs.

Subpackages and modules:
  gf2         polynomial and bit-matrix arithmetic over GF(2)
  sigma_lfsr  word-oriented LFSR state, stepping, periods, char polys
  confgen     the configuration-generation pipeline and counting formula
  snow2       the SNOW 2.0 keystream generator and its LFSR gain matrices
  kdfc        key-dependent configuration derivation and keystream API
  symbolic    ANF-symbolic construction of Q and the config matrix
  attacks     bias/linearization arithmetic and guess-and-determine search
  randtests   statistical randomness battery
  cli         command-line front end (console script ``kdfc-snow``)
"""

from kdfc_snow.confgen import count_configurations, generate_config
from kdfc_snow.kdfc import KdfcParams, kdfc_init, kdfc_keystream, target_poly
from kdfc_snow.sigma_lfsr import SigmaConfig, config_char_poly
from kdfc_snow.snow2 import snow2_gains, snow2_init, snow2_keystream

__version__ = "0.1.0"

__all__ = [
    "KdfcParams",
    "SigmaConfig",
    "config_char_poly",
    "count_configurations",
    "generate_config",
    "kdfc_init",
    "kdfc_keystream",
    "snow2_gains",
    "snow2_init",
    "snow2_keystream",
    "target_poly",
    "__version__",
]
