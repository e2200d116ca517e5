"""Design sweeps over crystal cut angle and pump wavelength.

Sweeps evaluate the cone geometry with the analytic engine; brightness is
an exact-engine scalar, the conditional spectrum integrated over the
signal window at the optimal idler, so it is comparable only between
design points sharing pump waist and crystal length.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import brentq

from .analytic import ConeStats, NoConeError, aperture_stats
from .crystal import CrystalConfig
from .grids import marginal
from .numeric import cas_grid, find_peak_idler
from .pump import PumpConfig


class BracketError(RuntimeError):
    """Wavelength bracket unusable: non-monotone or target out of range."""


@dataclass(frozen=True)
class DesignPoint:
    """One sweep sample: configuration plus its cone statistics.

    cone is None when the configuration has no real emission cone;
    brightness is None unless explicitly computed.
    """

    theta_a: float
    lambda_p: float
    cone: ConeStats | None
    brightness: float | None = None


@dataclass(frozen=True)
class SweepResult:
    """Ordered sweep samples plus an echo of the swept objective."""

    points: tuple[DesignPoint, ...]
    objective: str


def _design_point(crystal: CrystalConfig, pump: PumpConfig) -> DesignPoint:
    try:
        cone = aperture_stats(crystal, pump)
    except NoConeError:
        cone = None
    return DesignPoint(theta_a=crystal.cut_angle, lambda_p=pump.wavelength,
                       cone=cone)


def sweep_cut_angle(theta_lo: float, theta_hi: float, steps: int,
                    crystal: CrystalConfig, pump: PumpConfig,
                    compute_brightness: bool = False) -> SweepResult:
    """Cone statistics versus cut angle over [theta_lo, theta_hi] (rad)."""
    if steps < 1:
        raise ValueError("sweep needs at least one step")
    angles = np.linspace(theta_lo, theta_hi, steps)
    points = []
    for th in angles:
        cfg = replace(crystal, cut_angle=float(th))
        point = _design_point(cfg, pump)
        if compute_brightness and point.cone is not None:
            point = replace(point, brightness=brightness(cfg, pump))
        points.append(point)
    if not any(p.cone for p in points):
        raise NoConeError("no angle in the swept range yields a real cone")
    return SweepResult(tuple(points), objective="cut-angle")


def sweep_wavelength(lambda_lo: float, lambda_hi: float, steps: int,
                     crystal: CrystalConfig, pump: PumpConfig,
                     compute_brightness: bool = False) -> SweepResult:
    """Cone statistics versus pump wavelength at fixed cut angle."""
    if steps < 1:
        raise ValueError("sweep needs at least one step")
    lams = np.linspace(lambda_lo, lambda_hi, steps)
    points = []
    for lam in lams:
        pcfg = replace(pump, wavelength=float(lam))
        point = _design_point(crystal, pcfg)
        if compute_brightness and point.cone is not None:
            point = replace(point, brightness=brightness(crystal, pcfg))
        points.append(point)
    if not any(p.cone for p in points):
        raise NoConeError("no wavelength in the swept range yields a real cone")
    return SweepResult(tuple(points), objective="wavelength")


def match_wavelength_to_angle(theta_target: float, crystal: CrystalConfig,
                              pump: PumpConfig,
                              bracket: tuple[float, float] = (0.408, 0.52),
                              tol: float = 1e-6) -> float:
    """Pump wavelength that mimics a cut-angle change at the base angle.

    Solves <Theta_AS>(lambda, theta_base) = <Theta_AS>(lambda_base,
    theta_target) for lambda by bisection; the mean aperture angle is the
    cone observable the two knobs share.  The bracket must map to a
    monotone segment of <Theta_AS>(lambda) containing the target.
    """
    target_stats = aperture_stats(replace(crystal, cut_angle=theta_target), pump)
    target = target_stats.theta_mean

    def theta_of(lam):
        stats = aperture_stats(crystal, replace(pump, wavelength=lam))
        return stats.theta_mean

    samples = [theta_of(l) for l in np.linspace(bracket[0], bracket[1], 9)]
    diffs = np.diff(samples)
    if not (np.all(diffs > 0) or np.all(diffs < 0)):
        raise BracketError(
            f"<Theta_AS>(lambda) is not monotone over {bracket}")
    lo, hi = samples[0] - target, samples[-1] - target
    if lo * hi > 0:
        raise BracketError(
            f"target aperture angle {target:.5f} rad outside bracket {bracket}")
    return float(brentq(lambda lam: theta_of(lam) - target,
                        bracket[0], bracket[1], xtol=tol))


def brightness(crystal: CrystalConfig, pump: PumpConfig,
               ki=None) -> float:
    """Conditional-spectrum mass at the optimal idler (relative units).

    Integrates the unnormalized exact CAS over its auto window at the
    idler returned by find_peak_idler (or the one supplied).
    """
    if ki is None:
        ki = find_peak_idler(crystal, pump)
    grid = cas_grid(ki, crystal, pump)
    per_row = marginal(grid, "y")
    return float(np.trapz(per_row.values, dx=grid.axis_y.step))
