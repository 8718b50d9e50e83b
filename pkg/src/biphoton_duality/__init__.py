"""Time-frequency duality of biphotons: joint spectral and temporal amplitudes,
virtual coincidence scanners and a width/time-bandwidth-product analysis."""
from .analysis import (DegenerateProfileError, FitResult, ResolutionLimitedError, WidthReport,
                       correlation_sign, deconvolve_width, fit_gaussian, fwhm_numeric,
                       model_fields, model_report, reproduce_field, widths_report)
from .grid import (Axis, Curve, Field2D, OutOfRangeError, cross_section, diagonal_projection,
                   from_rotated, make_centered_axis, marginal, to_rotated)
from .instrument import (ScanResult, SpectrometerConfig, UpconversionConfig, simulate_tsi_scan,
                         simulate_tti_scan)
from .model import (BiphotonModel, PhaseMatchSpec, PumpSpec, analytic_jta, calibrate,
                    gaussian_model, jsa, wavelength_bw_to_frequency_bw)
from .transform import SamplingWarning, TransformPlan, dft1, dft2, plan_dft2

__version__ = "0.1.0"

__all__ = [
    "Axis", "BiphotonModel", "Curve", "DegenerateProfileError", "Field2D", "FitResult",
    "OutOfRangeError", "PhaseMatchSpec", "PumpSpec", "ResolutionLimitedError", "SamplingWarning",
    "ScanResult", "SpectrometerConfig", "TransformPlan", "UpconversionConfig", "WidthReport",
    "analytic_jta", "calibrate", "correlation_sign", "cross_section", "deconvolve_width",
    "dft1", "dft2", "diagonal_projection", "fit_gaussian", "from_rotated", "fwhm_numeric",
    "gaussian_model", "jsa", "make_centered_axis", "marginal", "model_fields", "model_report",
    "plan_dft2", "reproduce_field", "simulate_tsi_scan", "simulate_tti_scan", "to_rotated",
    "wavelength_bw_to_frequency_bw", "widths_report",
]
