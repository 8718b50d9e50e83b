"""Centered sampling axes, 2D fields and the 45-degree projections.

All fields are stored with the first array index running along ``axis_1``
(rows) and the second along ``axis_2`` (columns).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

UNITS = ("THz", "ps", "nm")
SQRT2 = np.sqrt(2.0)


class OutOfRangeError(ValueError):
    """Requested coordinate lies outside the sampled range."""


@dataclass(frozen=True)
class Axis:
    """Uniform axis symmetric about ``center``.

    Sample ``k`` sits at ``center + (k - (n - 1) / 2) * step``.
    """

    center: float
    step: float
    n: int
    unit: str = "THz"

    def __post_init__(self):
        if not np.isfinite(self.step) or self.step <= 0:
            raise ValueError(f"axis step must be positive, got {self.step}")
        if int(self.n) != self.n or self.n < 2:
            raise ValueError(f"axis needs at least 2 samples, got {self.n}")
        if self.unit not in UNITS:
            raise ValueError(f"unknown unit {self.unit!r}, expected one of {UNITS}")
        object.__setattr__(self, "n", int(self.n))

    @property
    def values(self) -> np.ndarray:
        return self.center + (np.arange(self.n) - (self.n - 1) / 2) * self.step

    @property
    def span(self) -> float:
        return (self.n - 1) * self.step

    @property
    def lo(self) -> float:
        return self.center - self.span / 2

    @property
    def hi(self) -> float:
        return self.center + self.span / 2

    def nearest(self, x: float) -> int:
        """Index of the sample closest to ``x``; raises if ``x`` is off-axis."""
        half = self.step / 2
        if not (self.lo - half <= x <= self.hi + half):
            raise OutOfRangeError(
                f"{x} {self.unit} outside axis range [{self.lo}, {self.hi}]")
        k = int(np.rint((x - self.center) / self.step + (self.n - 1) / 2))
        return min(max(k, 0), self.n - 1)


def make_centered_axis(center: float, span: float, n: int, unit: str = "THz") -> Axis:
    if not span > 0:
        raise ValueError(f"span must be positive, got {span}")
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    return Axis(center=float(center), step=span / (n - 1), n=int(n), unit=unit)


@dataclass(frozen=True)
class Curve:
    axis: Axis
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.axis.n,):
            raise ValueError(f"curve has {v.shape} samples, axis expects {self.axis.n}")
        if not np.all(np.isfinite(v)):
            raise ValueError("curve values must be finite")
        object.__setattr__(self, "values", v)

    @property
    def x(self) -> np.ndarray:
        return self.axis.values


@dataclass(frozen=True)
class Field2D:
    """Complex (or real) amplitude sampled on ``axis_1 x axis_2``."""

    axis_1: Axis
    axis_2: Axis
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values)
        if v.shape != (self.axis_1.n, self.axis_2.n):
            raise ValueError(
                f"values shape {v.shape} does not match axes "
                f"({self.axis_1.n}, {self.axis_2.n})")
        if not np.all(np.isfinite(v)):
            raise ValueError("field values must be finite")
        object.__setattr__(self, "values", v)

    @property
    def unit(self) -> str:
        return self.axis_1.unit

    def intensity(self, normalize: bool = True) -> "Field2D":
        """Return ``|values|**2``, optionally scaled to unit peak."""
        inten = np.abs(self.values) ** 2
        if normalize:
            peak = inten.max()
            if peak > 0:
                inten = inten / peak
        return Field2D(self.axis_1, self.axis_2, inten)

    def normalized(self) -> "Field2D":
        peak = np.abs(self.values).max()
        return Field2D(self.axis_1, self.axis_2, self.values / peak if peak > 0 else self.values)

    def crop(self, half_width: float) -> "Field2D":
        """Keep the samples lying within ``half_width`` of each axis center."""
        slices, axes = [], []
        for ax in (self.axis_1, self.axis_2):
            lo = max(int(np.ceil((ax.n - 1) / 2 - half_width / ax.step - 1e-9)), 0)
            hi = ax.n - lo
            if hi - lo < 2:
                raise ValueError("crop leaves fewer than 2 samples")
            slices.append(slice(lo, hi))
            axes.append(Axis(ax.center, ax.step, hi - lo, ax.unit))
        return Field2D(axes[0], axes[1], self.values[slices[0], slices[1]])


Selector = Literal[1, 2]


def _other(onto: int) -> int:
    if onto not in (1, 2):
        raise ValueError(f"axis selector must be 1 or 2, got {onto!r}")
    return 2 if onto == 1 else 1


def to_rotated(x, y):
    """Lab coordinates to (plus, minus) = ((x + y)/sqrt2, (x - y)/sqrt2)."""
    return (x + y) / SQRT2, (x - y) / SQRT2


def from_rotated(plus, minus):
    return (plus + minus) / SQRT2, (plus - minus) / SQRT2


def marginal(intensity: Field2D, onto: Selector = 1) -> Curve:
    """Integrate out the other axis (Riemann sum scaled by its step)."""
    _other(onto)
    v = np.real(intensity.values)
    if onto == 1:
        vals = v.sum(axis=1) * intensity.axis_2.step
        ax = intensity.axis_1
    else:
        vals = v.sum(axis=0) * intensity.axis_1.step
        ax = intensity.axis_2
    return Curve(ax, vals)


def cross_section(intensity: Field2D, along: Selector = 1, at: float = 0.0) -> Curve:
    """Slice along one axis at the row/column of the other axis nearest ``at``."""
    _other(along)
    v = np.real(intensity.values)
    if along == 1:
        j = intensity.axis_2.nearest(at)
        return Curve(intensity.axis_1, v[:, j].copy())
    i = intensity.axis_1.nearest(at)
    return Curve(intensity.axis_2, v[i, :].copy())


def diagonal_projection(intensity: Field2D, sign: Literal["plus", "minus"] = "plus") -> Curve:
    """Marginal onto the rotated ``plus`` or ``minus`` coordinate.

    On a square grid with equal steps the lines of constant plus-coordinate
    are exactly the anti-diagonals ``i + j = const`` (constant minus: the
    diagonals ``i - j = const``), spaced ``step / sqrt(2)`` apart with samples
    ``sqrt(2) * step`` apart along each line. Summing along them is therefore
    an exact Riemann sum with no resampling.

    Returns
    -------
    Curve
        ``2n - 1`` samples with step ``step / sqrt(2)``.
    """
    a1, a2 = intensity.axis_1, intensity.axis_2
    if a1.n != a2.n or not np.isclose(a1.step, a2.step, rtol=1e-12, atol=0):
        raise ValueError("diagonal_projection needs a square grid with equal steps")
    if sign not in ("plus", "minus"):
        raise ValueError(f"sign must be 'plus' or 'minus', got {sign!r}")
    n = a1.n
    v = np.real(intensity.values)
    if sign == "minus":
        # i - j = k - (n - 1)  <=>  i + (n - 1 - j) = k
        v = v[:, ::-1]
        center = (a1.center - a2.center) / SQRT2
    else:
        center = (a1.center + a2.center) / SQRT2
    idx = np.add.outer(np.arange(n), np.arange(n))
    sums = np.bincount(idx.ravel(), weights=v.ravel(), minlength=2 * n - 1)
    step = a1.step / SQRT2
    vals = sums * SQRT2 * a1.step
    return Curve(Axis(center, step, 2 * n - 1, a1.unit), vals)
