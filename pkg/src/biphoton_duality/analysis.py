"""Width extraction, deconvolution, time-bandwidth products and field reproduction."""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import fft as sfft
from scipy import optimize

from . import grid as g
from .grid import Axis, Curve, Field2D
from .model import BiphotonModel, jsa, minus_width, plus_width
from .transform import SamplingWarning, dft2

FOUR_LN2 = 4 * np.log(2)


class DegenerateProfileError(ValueError):
    """Curve never drops below half maximum on one side of its peak."""


class ResolutionLimitedError(ValueError):
    """Measured width does not exceed the instrument width."""


@dataclass(frozen=True)
class FitResult:
    center: float
    fwhm: float
    amplitude: float
    offset: float
    rms_residual: float
    converged: bool


def gaussian(x, center, fwhm, amplitude, offset):
    return offset + amplitude * np.exp(-FOUR_LN2 * (x - center) ** 2 / fwhm ** 2)


def fwhm_numeric(curve: Curve, subtract_min: bool = True) -> float:
    """Full width at half maximum by linear interpolation around the global peak."""
    y = np.asarray(curve.values, dtype=float)
    x = curve.x
    if subtract_min:
        y = y - y.min()
    k = int(np.argmax(y))
    half = y[k] / 2
    if not half > 0:
        raise DegenerateProfileError("curve has no positive peak")
    left = np.nonzero(y[:k] < half)[0]
    right = np.nonzero(y[k + 1:] < half)[0]
    if left.size == 0 or right.size == 0:
        raise DegenerateProfileError("profile does not fall to half maximum on both sides")
    i = left[-1]
    j = k + 1 + right[0]
    xl = x[i] + (half - y[i]) * (x[i + 1] - x[i]) / (y[i + 1] - y[i])
    xr = x[j - 1] + (half - y[j - 1]) * (x[j] - x[j - 1]) / (y[j] - y[j - 1])
    return float(xr - xl)


def fit_gaussian(curve: Curve, max_iter: int = 200, xtol: float = 1e-10) -> FitResult:
    """Least-squares fit of ``offset + amplitude * exp(-4 ln2 (x - center)**2 / fwhm**2)``.

    Initial guess: center at the argmax, numeric FWHM, amplitude = peak - min,
    offset = min. Solved with Levenberg-Marquardt.
    """
    x = curve.x
    y = np.asarray(curve.values, dtype=float)
    if y.size < 5:
        raise ValueError(f"need at least 5 samples to fit, got {y.size}")
    lo, hi = y.min(), y.max()
    if hi - lo <= 1e-300 or np.ptp(y) <= 1e-14 * max(abs(hi), abs(lo)):
        raise ValueError("cannot fit a constant curve")
    try:
        w0 = fwhm_numeric(curve)
    except DegenerateProfileError:
        w0 = (x[-1] - x[0]) / 4
    p0 = np.array([x[np.argmax(y)], max(w0, curve.axis.step), hi - lo, lo])

    def resid(p):
        return gaussian(x, *p) - y

    def jac(p):
        c, w, amp, _ = p
        e = np.exp(-FOUR_LN2 * (x - c) ** 2 / w ** 2)
        return np.column_stack([
            amp * e * 2 * FOUR_LN2 * (x - c) / w ** 2,
            amp * e * 2 * FOUR_LN2 * (x - c) ** 2 / w ** 3,
            e,
            np.ones_like(x),
        ])

    res = optimize.least_squares(resid, p0, jac=jac, method="lm", xtol=xtol,
                                 ftol=1e-14, gtol=1e-14, max_nfev=max_iter, x_scale="jac")
    c, w, amp, off = res.x
    w = abs(w)
    converged = bool(res.status > 0 and w > curve.axis.step)
    rms = float(np.sqrt(np.mean(res.fun ** 2)))
    return FitResult(float(c), float(w), float(amp), float(off), rms, converged)


def deconvolve_width(measured_fwhm: float, instrument_fwhm: float) -> float:
    """Quadrature subtraction of a Gaussian instrument width."""
    if instrument_fwhm < 0:
        raise ValueError("instrument width must be >= 0")
    if measured_fwhm <= instrument_fwhm:
        raise ResolutionLimitedError(
            f"measured width {measured_fwhm:.4g} does not exceed instrument width "
            f"{instrument_fwhm:.4g}")
    return float(np.sqrt(measured_fwhm ** 2 - instrument_fwhm ** 2))


def _cross_section_var(plus2, minus2, s1=0.0, s2=0.0):
    # slice variance along axis 1 of a field separable in rotated coordinates
    # (plus/minus variances) after an axis-aligned blur (s1, s2)
    cov = 0.5 * np.array([[plus2 + minus2, plus2 - minus2],
                          [plus2 - minus2, plus2 + minus2]])
    cov += np.diag([s1, s2])
    return np.linalg.det(cov) / cov[1, 1]


def deconvolve_cross_section(measured: float, plus: float, minus: float,
                             instrument: tuple[float, float]) -> float:
    """Remove an axis-aligned blur from a slice width of a tilted distribution.

    ``plus``/``minus`` are the already-deconvolved rotated widths. The slice
    width is rescaled by the ratio of Gaussian-model slice widths without and
    with the blur, which reduces to quadrature subtraction for an isotropic
    field and to ``sqrt(2)`` times the instrument width for a thin ridge.
    """
    r1, r2 = instrument
    true_var = _cross_section_var(plus ** 2, minus ** 2)
    blurred_var = _cross_section_var(plus ** 2, minus ** 2, r1 ** 2, r2 ** 2)
    return float(measured * np.sqrt(true_var / blurred_var))


@dataclass(frozen=True)
class WidthReport:
    dnu_y: float
    dnu_yc: float
    dnu_plus: float
    dnu_minus: float
    dtau_y: float
    dtau_yc: float
    dtau_plus: float
    dtau_minus: float
    flags: tuple[str, ...] = field(default=())

    WIDTHS = ("dnu_y", "dnu_yc", "dnu_plus", "dnu_minus",
              "dtau_y", "dtau_yc", "dtau_plus", "dtau_minus")
    TBPS = ("tbp_plus", "tbp_minus", "tbp_y")

    def __post_init__(self):
        for name in self.WIDTHS:
            v = getattr(self, name)
            if not (np.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be a positive width, got {v}")

    @property
    def tbp_plus(self) -> float:
        return self.dtau_plus * self.dnu_plus

    @property
    def tbp_minus(self) -> float:
        return self.dtau_minus * self.dnu_minus

    @property
    def tbp_y(self) -> float:
        return self.dtau_y * self.dnu_y

    def widths(self) -> dict[str, float]:
        return {k: getattr(self, k) for k in self.WIDTHS}

    def to_dict(self) -> dict:
        d = {k: float(getattr(self, k)) for k in self.WIDTHS + self.TBPS}
        d["flags"] = list(self.flags)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "WidthReport":
        return cls(**{k: float(d[k]) for k in cls.WIDTHS}, flags=tuple(d.get("flags", ())))


def _pair(r) -> tuple[float, float]:
    if np.ndim(r) == 0:
        return float(r), float(r)
    r1, r2 = r
    return float(r1), float(r2)


def _extract(tsi: Field2D, tti: Field2D) -> dict[str, float]:
    fit = lambda c: fit_gaussian(c).fwhm  # noqa: E731
    return {
        "dnu_y": fit(g.marginal(tsi, 1)),
        "dnu_yc": fit(g.cross_section(tsi, 1, 0.0)),
        "dnu_plus": fit(g.diagonal_projection(tsi, "plus")),
        "dnu_minus": fwhm_numeric(g.diagonal_projection(tsi, "minus")),
        "dtau_y": fwhm_numeric(g.marginal(tti, 1)),
        "dtau_yc": fit(g.cross_section(tti, 1, 0.0)),
        "dtau_plus": fit(g.diagonal_projection(tti, "plus")),
        "dtau_minus": fwhm_numeric(g.diagonal_projection(tti, "minus")),
    }


def widths_report(tsi: Field2D, tti: Field2D, freq_resolution=0.0,
                  time_resolution=0.0) -> WidthReport:
    """Eight FWHMs of a TSI/TTI pair with instrument broadening removed.

    Gaussian-like widths (all frequency widths, ``dtau_yc``, ``dtau_plus``)
    are fitted; the rect-like time widths (``dtau_y``, ``dtau_minus``) use
    the half-maximum crossing and are left as measured, since a symmetric
    blur narrower than a rectangle does not move its half-maximum points.

    Parameters
    ----------
    tsi, tti : Field2D
        Intensities on THz and ps grids (peak normalization not required).
    freq_resolution, time_resolution : float or (float, float)
        Gaussian instrument FWHM per axis; a scalar applies to both axes.
    """
    raw = _extract(tsi, tti)
    out = dict(raw)
    flags = []
    for dom, res in (("nu", _pair(freq_resolution)), ("tau", _pair(time_resolution))):
        r1, r2 = res
        if r1 == 0 and r2 == 0:
            continue
        r_rot = np.sqrt((r1 ** 2 + r2 ** 2) / 2)
        gaussian_dirs = {f"d{dom}_y": r1, f"d{dom}_plus": r_rot}
        if dom == "nu":
            gaussian_dirs[f"d{dom}_minus"] = r_rot
        for name, r in gaussian_dirs.items():
            try:
                out[name] = deconvolve_width(raw[name], r)
            except ResolutionLimitedError:
                flags.append(f"{name}:resolution-limited")
        out[f"d{dom}_yc"] = deconvolve_cross_section(
            raw[f"d{dom}_yc"], out[f"d{dom}_plus"], out[f"d{dom}_minus"], (r1, r2))
    return WidthReport(**out, flags=tuple(flags))


def correlation_sign(intensity: Field2D) -> float:
    """Pearson correlation of the intensity treated as a 2D probability mass.

    Negative samples (noise left after background subtraction) get zero weight.
    """
    w = np.real(np.asarray(intensity.values, dtype=complex)).astype(float)
    w = np.clip(w, 0.0, None)
    total = w.sum()
    if not total > 0:
        raise ValueError("intensity has zero total mass")
    w = w / total
    x = intensity.axis_1.values[:, None]
    y = intensity.axis_2.values[None, :]
    mx = (w * x).sum()
    my = (w * y).sum()
    cov = (w * (x - mx) * (y - my)).sum()
    vx = (w * (x - mx) ** 2).sum()
    vy = (w * (y - my) ** 2).sum()
    if vx <= 0 or vy <= 0:
        return 0.0
    return float(np.clip(cov / np.sqrt(vx * vy), -1.0, 1.0))


def _square_axis(half: float, step: float, unit: str, max_n: int = 2001) -> Axis:
    n = 2 * int(np.ceil(half / step)) + 1
    if n > max_n:
        n = max_n
        step = 2 * half / (n - 1)
    return Axis(0.0, step, max(n, 5), unit)


def reproduce_field(widths: WidthReport, domain: str = "frequency") -> Field2D:
    """Smooth intensity rebuilt from the rotated widths of a report.

    The plus direction is Gaussian in both domains. The minus direction is
    Gaussian in frequency and a rectangle of full width ``dtau_minus`` in time.
    """
    if domain == "frequency":
        wp, wm, unit = widths.dnu_plus, widths.dnu_minus, "THz"
        ext_m = 2 * wm
    elif domain == "time":
        wp, wm, unit = widths.dtau_plus, widths.dtau_minus, "ps"
        ext_m = 0.6 * wm
    else:
        raise ValueError(f"domain must be 'frequency' or 'time', got {domain!r}")
    half = (2 * wp + ext_m) / np.sqrt(2)
    ax = _square_axis(half, min(wp, wm) / 12, unit)
    x1, x2 = np.meshgrid(ax.values, ax.values, indexing="ij")
    p, m = g.to_rotated(x1, x2)
    vals = np.exp(-FOUR_LN2 * p ** 2 / wp ** 2)
    if domain == "frequency":
        vals = vals * np.exp(-FOUR_LN2 * m ** 2 / wm ** 2)
    else:
        vals = vals * (np.abs(m) <= wm / 2)
    return Field2D(ax, ax, vals)


def _tau_plus_estimate(model):
    # transform-limited Gaussian width; only used to size grids
    return 2 * np.log(2) / np.pi / plus_width(model)


def _time_half_window(model):
    return 1.5 * model.b / (2 * np.pi) + 3 * _tau_plus_estimate(model)


def model_grids(model: BiphotonModel, n: int | None = None, span_thz: float | None = None,
                span_ps: float | None = None) -> tuple[Axis, Axis, float]:
    """Spectral window axis, transform axis and the time half-window.

    Defaults: the TSI window spans twice the pump-limited width (and at
    least eight phase-matching widths) each side of center; the transform
    grid's conjugate time window is three times the TTI half-window so the
    periodic copies stay clear, with enough samples to resolve the
    plus-direction temporal width and the rectangle edges.
    """
    dnu_p, dnu_m = plus_width(model), minus_width(model)
    half = max(2 * dnu_p, 8 * dnu_m) if span_thz is None else span_thz / 2
    if n is None:
        spec = _square_axis(half, min(dnu_p, dnu_m) / 10, "THz")
    else:
        spec = Axis(0.0, 2 * half / (n - 1), n, "THz")
    t_half = _time_half_window(model) if span_ps is None else span_ps / 2
    window = 3 * t_half
    if n is None:
        dt = min(_tau_plus_estimate(model) / 12, np.sqrt(2) * model.b / np.pi / 100)
        n_fft = sfft.next_fast_len(max(int(np.ceil(window / dt)), 64))
        n_fft += n_fft % 2
    else:
        n_fft = n
    return spec, Axis(0.0, 1.0 / window, n_fft, "THz"), t_half


def model_fields(model: BiphotonModel, n: int | None = None, span_thz: float | None = None,
                 span_ps: float | None = None) -> tuple[Field2D, Field2D]:
    """Peak-normalized TSI and TTI of ``model``.

    The TSI is evaluated directly on the spectral window; the TTI is the
    transform of the amplitude on a wider grid, cropped to the time window.
    """
    spec, fft_axis, t_half = model_grids(model, n, span_thz, span_ps)
    tsi = jsa(model, (spec, spec)).intensity()
    with warnings.catch_warnings():
        # sinc tails never fall to the edge tolerance on a finite grid
        warnings.simplefilter("ignore", SamplingWarning)
        jta = dft2(jsa(model, (fft_axis, fft_axis)))
    tti = jta.intensity().crop(t_half)
    return tsi, tti


def model_report(model: BiphotonModel) -> WidthReport:
    tsi, tti = model_fields(model)
    return widths_report(tsi, tti)
