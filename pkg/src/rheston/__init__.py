"""Rough Heston pricing and calibration toolkit.

Vanilla option prices under the rough Heston model via a remainder-form
fractional Adams solver for the characteristic function and sinh-accelerated
Fourier inversion with contour-agreement error control, plus the competing
inversion methods (flat trapezoid, Brownian control variate, Gauss-Legendre,
Gauss-Laguerre, FFT) for benchmarking, and an implied-volatility calibration
layer with ghost-calibration diagnostics.
"""

from .bootstrap import BootstrapReport, BootstrapStatus, bootstrap_price
from .calibration import (CalibrationResult, Quote, ave_metric, bs_price,
                          calibrate, ghost_calibration_demo, implied_vol,
                          smile_objective)
from .charfn import (AdamsConfig, BMCF, DecayProfile, HestonCF, HestonParams,
                     RoughCF, RoughHestonParams, VolterraBatch, cf_bm,
                     cf_heston, cf_rough, decay_profile,
                     solve_volterra_bl, solve_volterra_standard)
from .engine import (NumericalSettings, PriceReport, PriceStatus,
                     benchmark_price, calib_price, refine_settings)
from .inversion import (OptionSpec, SinhContour, TruncationPlan,
                        build_sinh_contour, convert_payoff, plan_truncation,
                        price_carr_madan_fft, price_flat_ift,
                        price_flat_ift_bm, price_gauss_laguerre,
                        price_lewis_gl, price_sinh, sinh_map)
from .numerics import (QuadratureRule, SimplexConfig, build_rule, gamma_real,
                       nelder_mead, trapezoid_complex)

__version__ = "0.1.0"

__all__ = [
    "AdamsConfig", "BMCF", "BootstrapReport", "BootstrapStatus",
    "CalibrationResult", "DecayProfile", "HestonCF", "HestonParams",
    "NumericalSettings", "OptionSpec", "PriceReport", "PriceStatus",
    "QuadratureRule", "Quote", "RoughCF", "RoughHestonParams", "SimplexConfig",
    "SinhContour", "TruncationPlan", "VolterraBatch", "ave_metric",
    "benchmark_price", "bootstrap_price", "bs_price", "build_rule",
    "build_sinh_contour", "calib_price", "calibrate", "cf_bm", "cf_heston",
    "cf_rough", "convert_payoff", "decay_profile", "gamma_real",
    "ghost_calibration_demo", "implied_vol", "nelder_mead",
    "plan_truncation", "price_carr_madan_fft", "price_flat_ift",
    "price_flat_ift_bm", "price_gauss_laguerre", "price_lewis_gl",
    "price_sinh", "refine_settings", "sinh_map", "smile_objective",
    "solve_volterra_bl", "solve_volterra_standard", "trapezoid_complex",
]
