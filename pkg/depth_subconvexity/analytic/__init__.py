from .bessel import bessel_J, bessel_K0, bessel_oscillatory_split, bessel_Y0
from .delta import DeltaExpansion, dfi_delta, g_properties_check, n2_truncation_check
from .phase import OscIntegral, nonstationary_decay_check, stationary_phase_compare
from .testfunctions import Bump, GaussianBump, LogGaussian, TestFunction, make_test_function

__all__ = [
    "Bump",
    "DeltaExpansion",
    "GaussianBump",
    "LogGaussian",
    "OscIntegral",
    "TestFunction",
    "bessel_J",
    "bessel_K0",
    "bessel_Y0",
    "bessel_oscillatory_split",
    "dfi_delta",
    "g_properties_check",
    "make_test_function",
    "n2_truncation_check",
    "nonstationary_decay_check",
    "stationary_phase_compare",
]
