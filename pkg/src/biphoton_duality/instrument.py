"""Virtual coincidence scanners: a two-filter spectrometer and an upconversion delay scanner.

Both produce Poisson count maps. Every scan point draws from its own
counter-based stream keyed by ``(seed, i, j)``, so the output does not
depend on how points are scheduled across threads.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np
from scipy import ndimage

from ._parallel import worker_count
from .grid import Axis, Field2D, OutOfRangeError
from .model import C_NM_THZ, DEFAULT_CENTER_NM, wavelength_bw_to_frequency_bw

SIGMA_PER_FWHM = 1 / (2 * np.sqrt(2 * np.log(2)))
TUNABLE_BAND_NM = (1560.0, 1620.0)


@dataclass(frozen=True)
class SpectrometerConfig:
    """Two tunable Gaussian band-pass filters followed by a coincidence counter."""

    bpf_fwhm: float = 0.56
    scan_center: float = DEFAULT_CENTER_NM
    scan_step: float = 0.5
    steps_per_axis: int = 60
    dwell: float = 5.0
    pair_rate_peak: float = 1000.0
    efficiency_per_arm: float = 0.2
    dark_rate: float = 2000.0
    coincidence_window: float = 1e-9

    def __post_init__(self):
        for name in ("bpf_fwhm", "scan_center", "scan_step", "dwell", "dark_rate",
                     "coincidence_window"):
            if not getattr(self, name) > 0:
                raise ValueError(f"spectrometer {name} must be positive")
        if self.pair_rate_peak < 0:
            raise ValueError("spectrometer pair_rate_peak must be >= 0")
        if not 0 < self.efficiency_per_arm <= 1:
            raise ValueError("spectrometer efficiency_per_arm must lie in (0, 1]")
        if int(self.steps_per_axis) != self.steps_per_axis or self.steps_per_axis < 2:
            raise ValueError("spectrometer steps_per_axis must be an integer >= 2")
        ax = self.scan_axis()
        if ax.lo < TUNABLE_BAND_NM[0] or ax.hi > TUNABLE_BAND_NM[1]:
            raise ValueError(f"scan range {ax.lo:.2f}-{ax.hi:.2f} nm leaves the "
                             f"{TUNABLE_BAND_NM[0]:g}-{TUNABLE_BAND_NM[1]:g} nm tunable band")

    def scan_axis(self) -> Axis:
        return Axis(self.scan_center, self.scan_step, self.steps_per_axis, "nm")

    @property
    def accidental_rate(self) -> float:
        return self.dark_rate ** 2 * self.coincidence_window


@dataclass(frozen=True)
class UpconversionConfig:
    delay_step: float = 0.13
    steps_per_axis: int = 76
    two_photon_resolution_fwhm: float = 0.48
    background_rate: float = 0.0
    pair_rate_peak: float = 50.0
    dwell: float = 5.0

    def __post_init__(self):
        for name in ("delay_step", "two_photon_resolution_fwhm", "dwell"):
            if not getattr(self, name) > 0:
                raise ValueError(f"upconversion {name} must be positive")
        if self.background_rate < 0 or self.pair_rate_peak < 0:
            raise ValueError("upconversion rates must be >= 0")
        if int(self.steps_per_axis) != self.steps_per_axis or self.steps_per_axis < 2:
            raise ValueError("upconversion steps_per_axis must be an integer >= 2")

    def scan_axis(self) -> Axis:
        return Axis(0.0, self.delay_step, self.steps_per_axis, "ps")


@dataclass(frozen=True)
class ScanResult:
    axis_1: Axis
    axis_2: Axis
    counts: np.ndarray
    seed: int
    config: SpectrometerConfig | UpconversionConfig | None = None

    def __post_init__(self):
        c = np.asarray(self.counts)
        if c.shape != (self.axis_1.n, self.axis_2.n):
            raise ValueError("counts shape does not match scan axes")
        if np.any(c < 0):
            raise ValueError("counts must be non-negative")
        object.__setattr__(self, "counts", c.astype(np.int64))

    def to_field(self, reference_nm: float = DEFAULT_CENTER_NM) -> Field2D:
        """Counts on analysis axes: THz shifts for wavelength scans, ps for delays.

        Wavelength axes are linearized around ``reference_nm`` and reversed so
        that frequency increases with index.
        """
        vals = self.counts.astype(float)
        axes = []
        for dim, ax in enumerate((self.axis_1, self.axis_2)):
            if ax.unit == "nm":
                scale = C_NM_THZ / reference_nm ** 2
                axes.append(Axis(-(ax.center - reference_nm) * scale, ax.step * scale, ax.n, "THz"))
                vals = np.flip(vals, axis=dim)
            else:
                axes.append(ax)
        return Field2D(axes[0], axes[1], vals)

    def config_dict(self) -> dict:
        return {} if self.config is None else asdict(self.config)


def wavelength_to_shift(wl_nm, reference_nm: float = DEFAULT_CENTER_NM):
    """Linearized frequency shift (THz) of a wavelength relative to ``reference_nm``."""
    return -(np.asarray(wl_nm, dtype=float) - reference_nm) * C_NM_THZ / reference_nm ** 2


def _filter_matrix(centers_nm, cfg: SpectrometerConfig, axis: Axis) -> np.ndarray:
    centers_nm = np.atleast_1d(np.asarray(centers_nm, dtype=float))
    fwhm = wavelength_bw_to_frequency_bw(centers_nm, cfg.bpf_fwhm)
    sigma = fwhm * SIGMA_PER_FWHM
    shift = wavelength_to_shift(centers_nm)
    d = axis.values[None, :] - shift[:, None]
    g = np.exp(-0.5 * (d / sigma[:, None]) ** 2)
    # normalize to the filter's full-plane integral so a flat unit TSI gives 1
    return g * axis.step / (sigma[:, None] * np.sqrt(2 * np.pi))


def _check_band(centers):
    c = np.asarray(centers, dtype=float)
    if np.any(c < TUNABLE_BAND_NM[0]) or np.any(c > TUNABLE_BAND_NM[1]):
        raise OutOfRangeError(f"filter centers must lie in {TUNABLE_BAND_NM} nm")


def expected_tsi_map(tsi: Field2D, cfg: SpectrometerConfig,
                     centers_1, centers_2) -> np.ndarray:
    """Expected coincidence rate (Hz) for every pair of filter centers (nm)."""
    if tsi.axis_1.unit != "THz" or tsi.axis_2.unit != "THz":
        raise ValueError("TSI must be sampled on THz axes")
    _check_band(centers_1)
    _check_band(centers_2)
    f1 = _filter_matrix(centers_1, cfg, tsi.axis_1)
    f2 = _filter_matrix(centers_2, cfg, tsi.axis_2)
    avg = f1 @ np.real(tsi.values) @ f2.T
    return cfg.pair_rate_peak * cfg.efficiency_per_arm ** 2 * avg + cfg.accidental_rate


def expected_tsi_response(tsi: Field2D, cfg: SpectrometerConfig,
                          center_1: float, center_2: float) -> float:
    """Expected coincidence rate with the two filters at ``center_1``/``center_2`` nm.

    The TSI is averaged over the product of the two Gaussian filter
    transmissions, scaled by ``pair_rate_peak * efficiency**2``, and the
    accidental floor ``dark_rate**2 * coincidence_window`` is added.
    """
    return float(expected_tsi_map(tsi, cfg, [center_1], [center_2])[0, 0])


def _point_rng(seed: int, i: int, j: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, i, j])))


def poisson_counts(mean: np.ndarray, seed: int) -> np.ndarray:
    """Poisson draws with one independent stream per ``(seed, i, j)`` point."""
    mean = np.asarray(mean, dtype=float)
    out = np.empty(mean.shape, dtype=np.int64)

    def row(i):
        for j in range(mean.shape[1]):
            out[i, j] = _point_rng(seed, i, j).poisson(mean[i, j])

    with ThreadPoolExecutor(max_workers=worker_count()) as pool:
        list(pool.map(row, range(mean.shape[0])))
    return out


def simulate_tsi_scan(tsi: Field2D, cfg: SpectrometerConfig, seed: int) -> ScanResult:
    ax = cfg.scan_axis()
    rate = expected_tsi_map(tsi, cfg, ax.values, ax.values)
    return ScanResult(ax, ax, poisson_counts(rate * cfg.dwell, seed), int(seed), cfg)


def response_convolve(field: Field2D, fwhm_1: float, fwhm_2: float) -> Field2D:
    """Separable Gaussian blur with per-axis FWHMs (in axis units); zero means no blur."""
    if fwhm_1 < 0 or fwhm_2 < 0:
        raise ValueError("blur widths must be >= 0")
    sigma = (fwhm_1 * SIGMA_PER_FWHM / field.axis_1.step,
             fwhm_2 * SIGMA_PER_FWHM / field.axis_2.step)

    def blur(v):
        v = np.asarray(v, dtype=float)
        for dim, s in enumerate(sigma):
            if s > 0:
                v = ndimage.gaussian_filter1d(v, s, axis=dim, mode="constant", truncate=6.0)
        return v

    vals = field.values
    if np.iscomplexobj(vals):
        out = blur(vals.real) + 1j * blur(vals.imag)
    else:
        out = blur(vals)
    return Field2D(field.axis_1, field.axis_2, out)


def expected_tti_map(tti: Field2D, cfg: UpconversionConfig) -> np.ndarray:
    """Expected counts per delay point: blurred TTI (unit peak) times rate, plus background."""
    if tti.axis_1.unit != "ps" or tti.axis_2.unit != "ps":
        raise ValueError("TTI must be sampled on ps axes")
    r = cfg.two_photon_resolution_fwhm
    blurred = np.real(response_convolve(tti, r, r).values)
    peak = blurred.max()
    if peak > 0:
        blurred = blurred / peak
    ax = cfg.scan_axis()
    i1 = (ax.values - tti.axis_1.lo) / tti.axis_1.step
    i2 = (ax.values - tti.axis_2.lo) / tti.axis_2.step
    c1, c2 = np.meshgrid(i1, i2, indexing="ij")
    shape = ndimage.map_coordinates(blurred, [c1, c2], order=3, mode="constant", cval=0.0)
    shape = np.clip(shape, 0.0, None)
    return (cfg.pair_rate_peak * shape + cfg.background_rate) * cfg.dwell


def simulate_tti_scan(tti: Field2D, cfg: UpconversionConfig, seed: int) -> ScanResult:
    ax = cfg.scan_axis()
    return ScanResult(ax, ax, poisson_counts(expected_tti_map(tti, cfg), seed), int(seed), cfg)
