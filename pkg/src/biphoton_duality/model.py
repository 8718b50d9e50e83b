"""Biphoton spectral amplitude: Gaussian pump envelope times sinc phase matching.

Frequencies are shifts from the degenerate center frequency in THz; times
are in ps. ``sinc`` is the unnormalized ``sin(x) / x``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import optimize, special

from .grid import Axis, Field2D

C_NM_THZ = 299792.458  # speed of light in nm * THz
SINC2_HALF = 1.3915573782515103  # sinc(x)**2 = 1/2
# minus-direction FWHM of sinc(b*sqrt2*nu_minus)**2 is SINC_WIDTH / b
SINC_WIDTH = 2 * SINC2_HALF / np.sqrt(2.0)
DEFAULT_CENTER_NM = 1584.0
PUMP_CENTER_NM = 792.0


def wavelength_bw_to_frequency_bw(center: float, bw: float) -> float:
    """Convert a bandwidth in nm at ``center`` nm to THz (``c * bw / center**2``)."""
    if np.any(np.asarray(center) <= 0):
        raise ValueError(f"center wavelength must be positive, got {center}")
    if np.any(np.asarray(bw) < 0):
        raise ValueError(f"bandwidth must be non-negative, got {bw}")
    return C_NM_THZ * bw / center ** 2


@dataclass(frozen=True)
class PumpSpec:
    """Pump envelope ``exp(-a * nu_sum**2)``, optionally convolved with a rectangle."""

    a: float
    shape: str = "gaussian"
    rect_full_width: float = 0.0
    center_wavelength: float = PUMP_CENTER_NM
    bandwidth_fwhm: float | None = None

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError(f"pump coefficient a must be positive, got {self.a}")
        if self.shape not in ("gaussian", "gauss_rect"):
            raise ValueError(f"unknown pump shape {self.shape!r}")
        if self.rect_full_width < 0:
            raise ValueError("rect_full_width must be >= 0")
        if self.shape == "gauss_rect" and not self.rect_full_width > 0:
            raise ValueError("gauss_rect pump needs rect_full_width > 0")


@dataclass(frozen=True)
class PhaseMatchSpec:
    b: float
    crystal_length_label: float | None = None

    def __post_init__(self):
        if not self.b > 0:
            raise ValueError(f"phase-matching coefficient b must be positive, got {self.b}")


@dataclass(frozen=True)
class BiphotonModel:
    pump: PumpSpec
    pm: PhaseMatchSpec
    label: str = field(default="", compare=False)

    @property
    def a(self) -> float:
        return self.pump.a

    @property
    def b(self) -> float:
        return self.pm.b


def gaussian_model(a: float, b: float, label: str = "") -> BiphotonModel:
    return BiphotonModel(PumpSpec(a=a), PhaseMatchSpec(b=b), label=label)


def pump_envelope(pump: PumpSpec, nu_sum):
    """Pump amplitude at ``nu_sum = nu_1 + nu_2``, unit peak."""
    x = np.asarray(nu_sum, dtype=float)
    a = pump.a
    if pump.shape == "gaussian":
        return np.exp(-a * x ** 2)
    # closed-form Gaussian * rect convolution, written with erfc so the far
    # wings keep relative precision
    ra = np.sqrt(a)
    half = pump.rect_full_width / 2
    if ra * half < 1e-4:
        # erfc difference cancels catastrophically; second-order series instead
        return np.exp(-a * x ** 2) * (1 + (2 / 3) * a ** 2 * x ** 2 * half ** 2)
    ax = np.abs(x)
    num = special.erfc(ra * (ax - half)) - special.erfc(ra * (ax + half))
    return num / (2 * special.erf(ra * half))


def phase_matching(pm: PhaseMatchSpec, nu_diff):
    """``sin(b * nu_diff) / (b * nu_diff)`` with value 1 at zero."""
    return np.sinc(pm.b * np.asarray(nu_diff, dtype=float) / np.pi)


def _check_unit(axes, unit):
    for ax in axes:
        if ax.unit != unit:
            raise ValueError(f"expected {unit} axes, got {ax.unit}")


def jsa(model: BiphotonModel, grid: tuple[Axis, Axis]) -> Field2D:
    """Joint spectral amplitude on a frequency grid (axis 1: y photon, axis 2: z photon)."""
    a1, a2 = grid
    _check_unit(grid, "THz")
    n1, n2 = np.meshgrid(a1.values, a2.values, indexing="ij")
    vals = pump_envelope(model.pump, n1 + n2) * phase_matching(model.pm, n1 - n2)
    return Field2D(a1, a2, vals.astype(complex))


def analytic_jta(model: BiphotonModel, grid: tuple[Axis, Axis]) -> Field2D:
    """Closed-form joint temporal amplitude for a Gaussian pump, unit peak.

    Under the ``exp(-2j pi nu t)`` kernel the transform of the amplitude is
    ``exp(-pi**2 (t1 + t2)**2 / (4a)) * rect(pi (t1 - t2) / (2b))``; the
    rectangle is nonzero for ``|t1 - t2| <= b / pi``.
    """
    if model.pump.shape != "gaussian":
        raise NotImplementedError("no closed form for a gauss_rect pump; use transform.dft2")
    a1, a2 = grid
    _check_unit(grid, "ps")
    t1, t2 = np.meshgrid(a1.values, a2.values, indexing="ij")
    gauss = np.exp(-np.pi ** 2 * (t1 + t2) ** 2 / (4 * model.a))
    rect = (np.abs(t1 - t2) <= model.b / np.pi).astype(float)
    return Field2D(a1, a2, (gauss * rect).astype(complex))


def calibrate(target_dnu_plus: float, target_dnu_minus: float, label: str = "") -> BiphotonModel:
    """Gaussian-pump model whose TSI has the given FWHMs along nu_plus and nu_minus."""
    if not (target_dnu_plus > 0 and target_dnu_minus > 0):
        raise ValueError("calibration targets must be positive")
    a = np.log(2) / target_dnu_plus ** 2
    b = SINC_WIDTH / target_dnu_minus
    return gaussian_model(a, b, label=label)


def pump_intensity_fwhm(pump: PumpSpec) -> float:
    """FWHM of ``|pump_envelope|**2`` in the pump frequency shift ``nu_sum``."""
    if pump.shape == "gaussian":
        return np.sqrt(2 * np.log(2) / pump.a)
    g = np.sqrt(2 * np.log(2) / pump.a)
    hi = pump.rect_full_width + 4 * g
    root = optimize.brentq(lambda x: pump_envelope(pump, x) ** 2 - 0.5, 0.0, hi, xtol=1e-13)
    return 2 * root


def gauss_rect_pump(bandwidth_thz: float, gaussian_fraction: float = 0.2,
                    center_wavelength: float = PUMP_CENTER_NM,
                    bandwidth_nm: float | None = None) -> PumpSpec:
    """Near-rectangular pump whose intensity FWHM equals ``bandwidth_thz``.

    The Gaussian component's own intensity FWHM is fixed to
    ``gaussian_fraction * bandwidth_thz``; the rectangle width is solved for.
    """
    if not 0 < gaussian_fraction < 1:
        raise ValueError("gaussian_fraction must lie in (0, 1)")
    g = gaussian_fraction * bandwidth_thz
    a = 2 * np.log(2) / g ** 2

    def excess(w):
        return pump_intensity_fwhm(PumpSpec(a=a, shape="gauss_rect", rect_full_width=w)) - bandwidth_thz

    w = optimize.brentq(excess, 1e-6 * bandwidth_thz, 2 * bandwidth_thz, xtol=1e-12)
    return PumpSpec(a=a, shape="gauss_rect", rect_full_width=w,
                    center_wavelength=center_wavelength, bandwidth_fwhm=bandwidth_nm)


def pump_from_bandwidth(bandwidth_nm: float, center_nm: float = PUMP_CENTER_NM,
                        shape: str = "gaussian", gaussian_fraction: float = 0.2) -> PumpSpec:
    dnu = wavelength_bw_to_frequency_bw(center_nm, bandwidth_nm)
    if shape == "gaussian":
        return PumpSpec(a=2 * np.log(2) / dnu ** 2, center_wavelength=center_nm,
                        bandwidth_fwhm=bandwidth_nm)
    if shape == "gauss_rect":
        return gauss_rect_pump(dnu, gaussian_fraction, center_nm, bandwidth_nm)
    raise ValueError(f"unknown pump shape {shape!r}")


# minus-direction TSI widths per crystal length (mm), averaged over the
# measured conditions that used each crystal
CRYSTAL_DNU_MINUS = {30.0: 0.135, 10.0: 0.33}


def phase_match_from_crystal(length_mm: float) -> PhaseMatchSpec:
    try:
        dnu_minus = CRYSTAL_DNU_MINUS[float(length_mm)]
    except KeyError:
        known = ", ".join(f"{k:g}" for k in CRYSTAL_DNU_MINUS)
        raise ValueError(f"no calibrated phase matching for a {length_mm} mm crystal "
                         f"(known: {known} mm)") from None
    return PhaseMatchSpec(b=SINC_WIDTH / dnu_minus, crystal_length_label=float(length_mm))


def plus_width(model: BiphotonModel) -> float:
    """Analytic FWHM of the TSI along nu_plus."""
    return pump_intensity_fwhm(model.pump) / np.sqrt(2.0)


def minus_width(model: BiphotonModel) -> float:
    """Analytic FWHM of the TSI along nu_minus."""
    return SINC_WIDTH / model.b
