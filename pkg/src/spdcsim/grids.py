"""Uniform-grid carriers shared by the exact and analytic engines."""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np


@dataclass(frozen=True)
class GridAxis:
    """Uniform axis: lo..hi inclusive with n points."""

    lo: float
    hi: float
    n: int

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError(f"axis needs lo < hi, got [{self.lo}, {self.hi}]")
        if self.n < 2:
            raise ValueError("axis needs at least 2 points")

    @property
    def points(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.n)

    @property
    def step(self) -> float:
        return (self.hi - self.lo) / (self.n - 1)


@dataclass
class SpectrumGrid:
    """2D spectral density on a uniform grid.

    values has shape (axis_y.n, axis_x.n), row index increasing along k_y.
    normalization is "raw" or "peak"; peak-normalized grids have max exactly 1.
    converged, when present, flags per-point quadrature convergence.
    """

    axis_x: GridAxis
    axis_y: GridAxis
    values: np.ndarray
    normalization: str = "raw"
    meta: dict = field(default_factory=dict)
    converged: np.ndarray | None = None

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.axis_y.n, self.axis_x.n):
            raise ValueError(
                f"values shape {self.values.shape} does not match axes "
                f"({self.axis_y.n}, {self.axis_x.n})"
            )
        if np.any(self.values < 0):
            raise ValueError("spectral densities must be non-negative")
        if self.normalization not in ("raw", "peak"):
            raise ValueError(f"unknown normalization tag {self.normalization!r}")
        if self.normalization == "peak" and self.values.size \
                and self.values.max() != 1.0:
            raise ValueError("peak-normalized grid must have max value 1")

    def peak_normalized(self) -> "SpectrumGrid":
        """Scale so the maximum value is exactly 1; raw scale kept in meta."""
        peak = float(self.values.max())
        if peak <= 0:
            raise ValueError("cannot peak-normalize an all-zero grid")
        meta = dict(self.meta, raw_peak=peak)
        return replace(self, values=self.values / peak,
                       normalization="peak", meta=meta)


@dataclass
class Marginal1D:
    """1D marginal distribution on a uniform axis."""

    axis: GridAxis
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.axis.n,):
            raise ValueError("marginal values must match the axis length")
        if np.any(self.values < 0):
            raise ValueError("marginal values must be non-negative")


def marginal(grid: SpectrumGrid, axis: str) -> Marginal1D:
    """Trapezoid-rule marginal along the other axis.

    axis="x" integrates over k_y leaving a function of k_x, and vice versa.
    """
    if axis == "x":
        vals = np.trapz(grid.values, dx=grid.axis_y.step, axis=0)
        return Marginal1D(grid.axis_x, vals)
    if axis == "y":
        vals = np.trapz(grid.values, dx=grid.axis_x.step, axis=1)
        return Marginal1D(grid.axis_y, vals)
    raise ValueError("axis must be 'x' or 'y'")
