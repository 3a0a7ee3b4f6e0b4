"""Extended Gini welfare index for infinite utility streams."""

from .kernels import BACKEND
from .streams import Alphabet, Stream, frequencies, swap_coordinates
from .pairing import PairingFunction, density, pairing_domain, validate_pairing
from .gini import compare, double_sum_fast, double_sum_naive, w_prefix, welfare_estimate, welfare_exact

__version__ = "0.1.0"
