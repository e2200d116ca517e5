"""Exact engine: joint density and angular spectra by direct quadrature.

Everything here evaluates |F|^2 = |pump amplitude|^2 |phase matching|^2 with
the exact birefringent dispersion relations at the degenerate operating
point (both daughters at half the pump frequency).  Grid evaluations are
vectorized with numpy; accumulation order is fixed, so identical inputs
produce bit-identical outputs.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .crystal import (
    CrystalConfig,
    _check_band,
    _n_squared,
    axis_coefficients,
    delta_kz_taylor,
    ordinary_index,
)
from .grids import GridAxis, Marginal1D, SpectrumGrid, marginal  # noqa: F401
from .pump import PumpConfig, angular_intensity
from .quadrature import QuadratureSpec, trapezoid_weights


class DegeneratePeakError(RuntimeError):
    """Peak-idler landscape too flat to define a maximum."""


@dataclass(frozen=True)
class _Degenerate:
    """Cached constants of the degenerate operating point."""

    k0: float          # pump omega/c, rad/um
    K2: float          # eps_perp(2 lam) (k0/2)^2: daughter kz^2 at k_perp=0
    n_eff: float
    beta_ay: float     # walk-off beta * a_y
    eta: float
    L: float


def _constants(crystal: CrystalConfig, pump: PumpConfig) -> _Degenerate:
    k0 = pump.k0
    lam_d = 2 * pump.wavelength
    _check_band(lam_d)
    ax = axis_coefficients(crystal, pump.wavelength)
    return _Degenerate(
        k0=k0,
        K2=_n_squared(crystal.sellmeier_o, lam_d) * (k0 / 2) ** 2,
        n_eff=ax.n_eff,
        beta_ay=ax.beta * crystal.axis_y,
        eta=ax.eta,
        L=crystal.length,
    )


def phase_matching(dkz, L: float):
    """Phase-matching amplitude L sinc(L dkz / 2) exp(i L dkz / 2)."""
    dkz = np.asarray(dkz, dtype=float)
    out = L * np.sinc(dkz * (L / (2 * np.pi))) * np.exp(1j * dkz * (L / 2))
    return out if np.ndim(out) else complex(out)


def _density_xy(ksx, ksy, kix, kiy, crystal, pump, dispersion="exact"):
    """Joint density on component arrays; evanescent points are zero."""
    c = _constants(crystal, pump)
    ksx = np.asarray(ksx, dtype=float)
    ksy = np.asarray(ksy, dtype=float)
    kix = np.asarray(kix, dtype=float)
    kiy = np.asarray(kiy, dtype=float)
    qx = ksx + kix
    qy = ksy + kiy

    rad_s = c.K2 - ksx * ksx - ksy * ksy
    rad_i = c.K2 - kix * kix - kiy * kiy
    rad_p = 1.0 - (qx * qx + qy * qy) * (c.eta / (c.k0 * c.k0))
    ok = (rad_s >= 0) & (rad_i >= 0) & (rad_p >= 0)

    if dispersion == "exact":
        dkz = (-c.beta_ay * qy + c.k0 * c.n_eff * np.sqrt(np.maximum(rad_p, 0.0))
               - np.sqrt(np.maximum(rad_s, 0.0)) - np.sqrt(np.maximum(rad_i, 0.0)))
    elif dispersion == "taylor":
        ks = np.stack(np.broadcast_arrays(ksx, ksy), axis=-1)
        ki = np.stack(np.broadcast_arrays(kix, kiy), axis=-1)
        dkz = np.asarray(delta_kz_taylor(ks, ki, c.k0, crystal))
    else:
        raise ValueError("dispersion must be 'exact' or 'taylor'")

    sinc = np.sinc(dkz * (c.L / (2 * np.pi)))
    out = angular_intensity(qx, qy, pump) * (c.L * c.L) * sinc * sinc * ok
    return out


def joint_density(ks, ki, crystal: CrystalConfig, pump: PumpConfig,
                  dispersion: str = "exact"):
    """Coincidence probability density |E(ks+ki)|^2 |f(delta_kz)|^2.

    ks, ki: transverse wave vectors, shape (2,) or (..., 2), rad/um.  This
    is exactly the conditional-angular-spectrum integrand with the coupling
    and spectral amplitudes set to 1.
    """
    ks = np.asarray(ks, dtype=float)
    ki = np.asarray(ki, dtype=float)
    out = _density_xy(ks[..., 0], ks[..., 1], ki[..., 0], ki[..., 1],
                      crystal, pump, dispersion)
    return out if np.ndim(out) else float(out)


def cas_grid(ki, crystal: CrystalConfig, pump: PumpConfig,
             axis_x: GridAxis | None = None, axis_y: GridAxis | None = None,
             count: int = 161) -> SpectrumGrid:
    """Conditional angular spectrum over a signal window at fixed idler.

    Without explicit axes the window is auto-sized to 6 Gaussian widths
    around -ki using the analytic engine's sigma_x, sigma_y as a pilot.
    An under-resolved window (fewer than 8 samples across 1/sigma) warns
    but still evaluates.
    """
    kix, kiy = float(ki[0]), float(ki[1])
    from .analytic import gauss_cas_params

    params = gauss_cas_params((-kix, -kiy), crystal, pump)
    if axis_x is None or axis_y is None:
        hx = 6.0 / (math.sqrt(2) * params.sigma_x)
        hy = 6.0 / (math.sqrt(2) * params.sigma_y)
        axis_x = axis_x or GridAxis(-kix - hx, -kix + hx, count)
        axis_y = axis_y or GridAxis(-kiy - hy, -kiy + hy, count)
    for ax, sigma in ((axis_x, params.sigma_x), (axis_y, params.sigma_y)):
        if 1.0 / sigma < 8 * ax.step:
            warnings.warn(
                f"CAS window step {ax.step:g} under-resolves the expected "
                f"width {1.0 / sigma:g}", stacklevel=2)
    xx, yy = np.meshgrid(axis_x.points, axis_y.points)
    values = _density_xy(xx, yy, kix, kiy, crystal, pump)
    meta = {"kind": "cas", "engine": "exact", "idler_kx": kix, "idler_ky": kiy}
    return SpectrumGrid(axis_x, axis_y, values, "raw", meta)


def _inner_nodes(crystal, pump, axis_x, axis_y, quad):
    """Inner q-grid (pump transverse vector) for the idler quadrature.

    The integrand support is set by the pump angular amplitude: beyond
    |q| = 8.5/W the Gaussian is below double precision, so the idler domain
    +-1.2 n_o omega/(2c) collapses to a box around q = 0 with no loss.  The
    node count tracks the sinc oscillation rate over the window.
    """
    c = _constants(crystal, pump)
    half = 8.5 / min(pump.waist_x, pump.waist_y)
    corner = math.hypot(max(abs(axis_x.lo), abs(axis_x.hi)),
                        max(abs(axis_y.lo), abs(axis_y.hi)))
    ki_max = min(corner + half * 1.4143, 0.97 * math.sqrt(c.K2))
    kz_min = math.sqrt(c.K2 - ki_max * ki_max)
    rate = (abs(c.beta_ay) + ki_max / kz_min
            + c.n_eff * c.eta * half * 1.4143 / c.k0)
    period = 4 * math.pi / (c.L * rate)
    n = max(quad.base_resolution, int(math.ceil(12 * half / period)))
    n = min(n + n % 2, 512)
    return half, n


def as_grid(crystal: CrystalConfig, pump: PumpConfig,
            axis_x: GridAxis = GridAxis(-1.0, 1.0, 256),
            axis_y: GridAxis = GridAxis(-1.0, 1.0, 256),
            quad: QuadratureSpec | None = None,
            mirror: bool = True) -> SpectrumGrid:
    """Angular spectrum: joint density integrated over the idler plane.

    Trapezoid quadrature with one Richardson refinement; per-point flags in
    `converged` mark where coarse and fine estimates agree to quad.rel_tol.
    With mirror=True (default) the exact k_x -> -k_x symmetry of the
    integrand is used to evaluate only half of a symmetric window.
    """
    quad = quad or QuadratureSpec(base_resolution=48)
    c = _constants(crystal, pump)
    half, n = _inner_nodes(crystal, pump, axis_x, axis_y, quad)

    xs = axis_x.points
    use_mirror = mirror and abs(axis_x.lo + axis_x.hi) < 1e-14
    ncols = (axis_x.n + 1) // 2 if use_mirror else axis_x.n
    cols = xs[axis_x.n - ncols:] if use_mirror else xs
    KSX, KSY = np.meshgrid(cols, axis_y.points)
    shape = KSX.shape
    KSX = KSX.ravel()
    KSY = KSY.ravel()

    ks2 = KSX * KSX + KSY * KSY
    rad_s = c.K2 - ks2
    mask_s = rad_s >= 0
    kz_s = np.sqrt(np.maximum(rad_s, 0.0))
    g0 = c.K2 - ks2  # idler radicand offset: rad_i = g0 - qq + 2 q.ks
    ksx2 = 2.0 * KSX
    ksy2 = 2.0 * KSY

    # fine grid: 2n intervals; coarse nodes are the even-index subset
    qs = np.linspace(-half, half, 2 * n + 1)
    wf = trapezoid_weights(2 * n) * (half / n)
    wc = np.zeros(2 * n + 1)
    wc[::2] = trapezoid_weights(n) * (2 * half / n)

    fine = np.zeros(KSX.size)
    coarse = np.zeros(KSX.size)
    lam_scale = c.L / 2
    inv_pi = lam_scale / np.pi
    peak_int = abs(pump.spectral_amplitude) ** 2

    for i, qy in enumerate(qs):
        pump_row = angular_intensity(qs, qy, pump)
        rad_p = 1.0 - (qs * qs + qy * qy) * (c.eta / (c.k0 * c.k0))
        kz_e = -c.beta_ay * qy + c.k0 * c.n_eff * np.sqrt(np.maximum(rad_p, 0.0))
        for j, qx in enumerate(qs):
            w = pump_row[j]
            if w < 1e-18 * peak_int or rad_p[j] < 0:
                continue
            rad_i = g0 - (qx * qx + qy * qy) + qx * ksx2 + qy * ksy2
            ok = rad_i > 0
            kz_i = np.sqrt(np.maximum(rad_i, 0.0))
            dkz = kz_e[j] - kz_s - kz_i
            s = np.sinc(dkz * inv_pi)
            v = s * s
            v *= ok
            v *= w * (c.L * c.L)
            fine += (wf[i] * wf[j]) * v
            cw = wc[i] * wc[j]
            if cw:
                coarse += cw * v
    fine *= mask_s
    coarse *= mask_s

    values = np.maximum((4 * fine - coarse) / 3, 0.0)
    peak = values.max() if values.size else 0.0
    converged = (np.abs(fine - coarse) <= quad.rel_tol * np.abs(fine)) \
        | (fine <= 1e-12 * max(peak, 1e-300))

    values = values.reshape(shape)
    converged = converged.reshape(shape)
    if use_mirror:
        pad = axis_x.n - ncols
        values = np.hstack([values[:, ::-1][:, :pad], values])
        converged = np.hstack([converged[:, ::-1][:, :pad], converged])
    meta = {"kind": "as", "engine": "exact", "inner_n": n,
            "inner_half": half,
            "n_unconverged": int(converged.size - converged.sum())}
    return SpectrumGrid(axis_x, axis_y, values, "raw", meta, converged)


@dataclass(frozen=True)
class PeakSearchSpec:
    """Coarse-scan domain and refinement settings for find_peak_idler."""

    k_max: float | None = None
    n_azimuth: int = 181
    n_radial: int = 48
    tie_rel: float = 0.005
    resolution: float = 1e-3


def find_peak_idler(crystal: CrystalConfig, pump: PumpConfig,
                    search: PeakSearchSpec = PeakSearchSpec()) -> np.ndarray:
    """Idler wave vector maximizing the conditional coincidence counts.

    Scans the k_y < 0 half-plane in polar form, evaluating the
    anti-collinear conditional count joint_density(-ki, ki) and refining
    the radius of its ridge along every azimuth.  On the emission cone the
    ridge height is a degenerate continuum, so among near-equal azimuths
    (within tie_rel) the smallest |k_x| wins.  A flat landscape
    (max/median < 1.05) raises DegeneratePeakError.
    """
    c = _constants(crystal, pump)
    lam_d = 2 * pump.wavelength
    n_o = ordinary_index(lam_d, crystal)
    r2 = 0.5 * (n_o * c.k0) ** 2 * (1 - c.n_eff / n_o)
    r_guess = math.sqrt(max(r2, 0.0))
    k_max = search.k_max
    if k_max is None:
        k_max = 1.3 * r_guess + 6.0 / min(pump.waist_x, pump.waist_y) + 0.02
        k_max = min(k_max, 0.97 * math.sqrt(c.K2))

    phi = np.linspace(math.pi, 2 * math.pi, search.n_azimuth)
    ux, uy = np.cos(phi), np.sin(phi)
    uy = np.minimum(uy, -1e-12 / k_max)  # keep strictly inside k_y < 0
    ts = np.linspace(k_max / search.n_radial, k_max, search.n_radial)
    KX = ts[:, None] * ux[None, :]
    KY = ts[:, None] * uy[None, :]
    J = _density_xy(-KX, -KY, KX, KY, crystal, pump)

    j_max = float(J.max())
    j_med = float(np.median(J))
    if j_med > 0 and j_max / j_med < 1.05:
        raise DegeneratePeakError(
            f"peak-idler landscape is flat (max/median = {j_max / j_med:.4f})")
    if j_max <= 0:
        raise DegeneratePeakError("joint density vanishes on the search grid")

    # per-azimuth ridge: refine the radial maximum to `resolution`
    t_best = ts[np.argmax(J, axis=0)]
    h = np.full_like(t_best, ts[1] - ts[0])
    while h[0] >= search.resolution:
        offs = np.linspace(-1.0, 1.0, 9)
        tt = np.maximum(t_best[None, :] + h[None, :] * offs[:, None], 1e-9)
        vals = _density_xy(-tt * ux, -tt * uy, tt * ux, tt * uy, crystal, pump)
        t_best = np.take_along_axis(
            tt, np.argmax(vals, axis=0)[None, :], axis=0)[0]
        h = h / 4
    ridge = _density_xy(-t_best * ux, -t_best * uy, t_best * ux, t_best * uy,
                        crystal, pump)

    ties = np.flatnonzero(ridge >= (1 - search.tie_rel) * ridge.max())
    kx_tie = t_best[ties] * ux[ties]
    best = ties[np.lexsort((-ridge[ties], np.abs(kx_tie)))[0]]
    bx = t_best[best] * ux[best]
    by = t_best[best] * uy[best]
    if abs(bx) < 1e-9:
        bx = 0.0
    return np.array([bx, by])


def slice_correlation(axis: str, crystal: CrystalConfig, pump: PumpConfig,
                      axis_s: GridAxis | None = None,
                      axis_i: GridAxis | None = None) -> SpectrumGrid:
    """Joint density over one shared component with the other pinned to 0.

    axis="y" gives the (k_{y,s}, k_{y,i}) conditional map with
    k_{x,s} = k_{x,i} = 0; axis="x" the transposed condition.  Rows run over
    the idler component, columns over the signal component.
    """
    if axis not in ("x", "y"):
        raise ValueError("axis must be 'x' or 'y'")
    c = _constants(crystal, pump)
    n_o2 = c.K2 / (c.k0 / 2) ** 2
    r_guess = math.sqrt(max(0.5 * n_o2 * c.k0**2
                            * (1 - c.n_eff / math.sqrt(n_o2)), 0.0))
    span = r_guess + 8.0 / min(pump.waist_x, pump.waist_y) + 0.1
    axis_s = axis_s or GridAxis(-span, span, 257)
    axis_i = axis_i or GridAxis(-span, span, 257)
    SS, II = np.meshgrid(axis_s.points, axis_i.points)
    zero = np.zeros_like(SS)
    if axis == "x":
        values = _density_xy(SS, zero, II, zero, crystal, pump)
    else:
        values = _density_xy(zero, SS, zero, II, crystal, pump)
    meta = {"kind": f"slice-{axis}", "engine": "exact"}
    return SpectrumGrid(axis_s, axis_i, values, "raw", meta)
