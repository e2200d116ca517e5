"""Shared numerical utilities: fixed-grid quadrature and peak refinement.

All integrands here are smooth and Gaussian-damped, so uniform trapezoid
grids with one Richardson refinement are accurate and, unlike adaptive
trees, bit-reproducible.  Sums rely on numpy's pairwise summation, which is
deterministic for fixed shapes.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import erf as _erf


@dataclass(frozen=True)
class QuadratureSpec:
    """Base resolution per axis, relative tolerance, refinement count."""

    base_resolution: int = 96
    rel_tol: float = 1e-4
    max_refinements: int = 1

    def __post_init__(self):
        if self.base_resolution < 16:
            raise ValueError("base resolution must be at least 16")
        if not 0 < self.rel_tol <= 1e-2:
            raise ValueError("relative tolerance must lie in (0, 1e-2]")


def erf(x):
    """Error function, exact to double precision."""
    out = _erf(np.asarray(x, dtype=float))
    return out if np.ndim(out) else float(out)


def trapezoid_weights(n: int) -> np.ndarray:
    """Composite trapezoid weights for n uniform intervals (n+1 nodes)."""
    w = np.ones(n + 1)
    w[0] = w[-1] = 0.5
    return w


def integrate_2d(f, xlim, ylim, spec: QuadratureSpec = QuadratureSpec()):
    """Trapezoid + Richardson integral of f(x, y) over a rectangle.

    f must accept meshgrid arrays.  Returns (value, converged); converged
    means the coarse and fine estimates agree to spec.rel_tol relatively.
    Non-finite samples raise with the offending coordinate.
    """
    n = spec.base_resolution
    coarse = trapezoid_2d(f, xlim, ylim, n)
    value = coarse
    converged = False
    for _ in range(spec.max_refinements):
        n *= 2
        fine = trapezoid_2d(f, xlim, ylim, n)
        converged = abs(fine - coarse) <= spec.rel_tol * max(abs(fine), 1e-300)
        value = (4 * fine - coarse) / 3
        coarse = fine
        if converged:
            break
    return value, converged


def trapezoid_2d(f, xlim, ylim, n):
    """Plain composite trapezoid rule on an n x n uniform grid."""
    x = np.linspace(xlim[0], xlim[1], n + 1)
    y = np.linspace(ylim[0], ylim[1], n + 1)
    hx = (xlim[1] - xlim[0]) / n
    hy = (ylim[1] - ylim[0]) / n
    xx, yy = np.meshgrid(x, y)
    vals = np.asarray(f(xx, yy), dtype=float)
    if not np.all(np.isfinite(vals)):
        i, j = np.argwhere(~np.isfinite(vals))[0]
        raise ValueError(f"non-finite integrand sample at (x={xx[i, j]}, y={yy[i, j]})")
    w = trapezoid_weights(n)
    return float(w @ vals @ w) * hx * hy


def integrate_periodic(f, n: int = 128) -> float:
    """n-point trapezoid of a 2*pi-periodic function over [0, 2*pi).

    Spectrally accurate for smooth periodic integrands.
    """
    theta = np.arange(n) * (2 * np.pi / n)
    return float(np.sum(np.asarray(f(theta), dtype=float))) * 2 * np.pi / n


def refine_peak(f, seed, radius: float, resolution: float = 1e-3):
    """Locate the maximum of a 2D field by iterative grid shrinking.

    Scans a 9x9 grid spanning +-radius around the running argmax and shrinks
    the radius fourfold per iteration until the grid spacing drops below
    `resolution`.  Returns (point, converged); converged is False when the
    argmax keeps sitting on the scan boundary (plateau or peak outside).
    """
    cx, cy = float(seed[0]), float(seed[1])
    r = float(radius)
    on_edge = False
    while True:
        offs = np.linspace(-r, r, 9)
        xx, yy = np.meshgrid(cx + offs, cy + offs)
        vals = np.asarray(f(xx, yy), dtype=float)
        flat = int(np.argmax(vals))
        i, j = divmod(flat, 9)
        on_edge = i in (0, 8) or j in (0, 8)
        cx, cy = float(xx[i, j]), float(yy[i, j])
        if r / 4 < resolution:
            break
        r /= 4
    return np.array([cx, cy]), not on_edge
