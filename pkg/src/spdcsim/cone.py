"""On-cone angular correlations of the photon pair.

Both daughter wave vectors are pinned to the emission-cone radius and the
joint density is resolved in the mean angle theta_plus = (theta_i +
theta_s)/2 and difference angle theta_minus = theta_s - theta_i.  The
radius comes from the analytic engine while |F|^2 uses the exact
dispersion relations.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .analytic import cone_params
from .crystal import CrystalConfig
from .grids import GridAxis, Marginal1D
from .numeric import _density_xy
from .pump import PumpConfig


@dataclass
class ConeCorrelation:
    """Peak-normalized correlation over (theta_plus, theta_minus).

    values has shape (theta_minus.n, theta_plus.n); radius is the cone
    radius the angles are pinned to.
    """

    theta_plus: GridAxis
    theta_minus: GridAxis
    values: np.ndarray
    radius: float
    raw_peak: float

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.theta_minus.n, self.theta_plus.n):
            raise ValueError("values shape must be (theta_minus.n, theta_plus.n)")


def cone_correlation(theta_plus, theta_minus, crystal: CrystalConfig,
                     pump: PumpConfig, dispersion: str = "exact"):
    """Correlation density at cone-pinned angles (unnormalized).

    ks = r (cos(t+ + t-/2), sin(t+ + t-/2)) and
    ki = r (cos(t+ - t-/2), sin(t+ - t-/2)) with r the analytic cone radius.
    """
    r = cone_params(crystal, pump).r_as
    tp = np.asarray(theta_plus, dtype=float)
    tm = np.asarray(theta_minus, dtype=float)
    a_s = tp + tm / 2
    a_i = tp - tm / 2
    return _density_xy(r * np.cos(a_s), r * np.sin(a_s),
                       r * np.cos(a_i), r * np.sin(a_i),
                       crystal, pump, dispersion)


def cone_correlation_grid(crystal: CrystalConfig, pump: PumpConfig,
                          theta_plus: GridAxis = GridAxis(-np.pi, np.pi, 361),
                          theta_minus: GridAxis | None = None,
                          dispersion: str = "exact") -> ConeCorrelation:
    """Peak-normalized correlation grid.

    The default theta_minus window spans 160..200 degrees around the
    anti-collinear point; theta_plus covers the full circle.
    """
    if theta_minus is None:
        theta_minus = GridAxis(np.radians(160.0), np.radians(200.0), 181)
    tp, tm = np.meshgrid(theta_plus.points, theta_minus.points)
    values = cone_correlation(tp, tm, crystal, pump, dispersion)
    peak = float(values.max())
    if peak <= 0:
        raise ValueError("cone correlation vanishes on the requested window")
    r = cone_params(crystal, pump).r_as
    return ConeCorrelation(theta_plus, theta_minus, values / peak, r, peak)


def cone_marginals(corr: ConeCorrelation) -> tuple[Marginal1D, Marginal1D]:
    """Trapezoid marginals over each angle, peak-normalized to 1."""
    over_minus = np.trapz(corr.values, dx=corr.theta_minus.step, axis=0)
    over_plus = np.trapz(corr.values, dx=corr.theta_plus.step, axis=1)
    return (
        Marginal1D(corr.theta_plus, over_minus / over_minus.max()),
        Marginal1D(corr.theta_minus, over_plus / over_plus.max()),
    )
