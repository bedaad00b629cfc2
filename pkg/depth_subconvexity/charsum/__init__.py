from .exponent import LinearForm, exponent_optimizer
from .params import CharsumParams, PoissonPair
from .sums import cbeta_pair, charsum_bruteforce, charsum_reduced, charsum_unrestricted

__all__ = [
    "CharsumParams",
    "LinearForm",
    "PoissonPair",
    "cbeta_pair",
    "charsum_bruteforce",
    "charsum_reduced",
    "charsum_unrestricted",
    "exponent_optimizer",
]
