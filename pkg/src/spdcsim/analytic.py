"""Approximate engine built on the Gaussian model of the sinc.

Replacing sinc(x) by exp(-(gamma x)^2) with gamma = 0.4393 and linearizing
the phase mismatch turns the conditional angular spectrum into a product of
Gaussians and the angular spectrum into a ring profile with closed-form
radius, width and aperture statistics.  These are fast enough for design
sweeps and cross-validate the exact quadrature engine.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .crystal import (
    CrystalConfig,
    _check_band,
    axis_coefficients,
    ordinary_index,
)
from .grids import GridAxis, SpectrumGrid
from .pump import PumpConfig
from .quadrature import erf

#: Width of the Gaussian stand-in for sinc: sinc(x) ~ exp(-(GAMMA x)^2).
GAMMA = 0.4393


class NoConeError(ValueError):
    """The configuration has no real emission cone (n_eff > n_o)."""


@dataclass(frozen=True)
class GaussCasParams:
    """Gaussian-model CAS parameters anchored at one signal point.

    sigma_x^2 = (W_x^2 + gamma^2 L^2 d_x^2)/2 and the y analog, with the
    pump waists optionally replaced by the long-crystal effective widths.
    """

    sigma_x: float
    sigma_y: float
    kappa: float
    d: tuple[float, float]
    gamma: float = GAMMA


@dataclass(frozen=True)
class ConeStats:
    """Summary geometry of the emission cone.

    sigma_as is the inverse square root of the quartic exponent coefficient
    (units (rad/um)^2); radial_width is the 1/e half-width of the ring's
    radial profile derived from it.  Aperture fields are filled by
    aperture_stats.
    """

    r_as: float
    sigma_as: float
    zeta_x: float
    radial_width: float
    theta_mean: float | None = None
    dtheta_max: float | None = None
    dtheta_min: float | None = None
    d_ext_max: float | None = None
    d_ext_min: float | None = None


def sinc_gaussian(x):
    """Gaussian approximation exp(-(gamma x)^2) of sinc(x)."""
    x = np.asarray(x, dtype=float)
    out = np.exp(-((GAMMA * x) ** 2))
    return out if np.ndim(out) else float(out)


@dataclass(frozen=True)
class _Model:
    """Shared degenerate-point quantities for the Gaussian model."""

    k0: float
    n_o: float       # daughter-wavelength ordinary index
    n_eff: float
    beta: float
    beta_ay: float
    eta: float
    eps_perp: float
    eps_par: float
    ay: float
    L: float
    c2: float        # 2c/(n_o omega) = 2/(n_o k0)

    @property
    def un(self) -> float:
        """n_o omega / c."""
        return self.n_o * self.k0

    @property
    def r_as2(self) -> float:
        return 0.5 * self.un**2 * (1 - self.n_eff / self.n_o)


def _model(crystal: CrystalConfig, pump: PumpConfig) -> _Model:
    k0 = pump.k0
    lam_d = 2 * pump.wavelength
    _check_band(lam_d)
    ax = axis_coefficients(crystal, pump.wavelength)
    n_o = ordinary_index(lam_d, crystal)
    return _Model(
        k0=k0, n_o=n_o, n_eff=ax.n_eff, beta=ax.beta,
        beta_ay=ax.beta * crystal.axis_y, eta=ax.eta,
        eps_perp=ax.eps_perp, eps_par=ax.eps_par, ay=crystal.axis_y,
        L=crystal.length, c2=2.0 / (n_o * k0),
    )


def _symmetric_waist(pump: PumpConfig) -> float:
    if abs(pump.waist_x - pump.waist_y) > 1e-9 * pump.waist_x:
        raise ValueError("angular-spectrum formulas assume a symmetric pump")
    return pump.waist_x


def effective_widths(pump: PumpConfig, crystal: CrystalConfig) -> tuple[float, float]:
    """Pump waists with the long-crystal curvature correction.

    W~^2 = W^2 + gamma^2 L^2 n_o^2 eta (n_eff/n_o - n_eff^2/n_o^2); the
    increment vanishes with L and when n_eff = n_o, and is non-negative for
    any real cone, so W~ >= W.
    """
    m = _model(crystal, pump)
    ratio = m.n_eff / m.n_o
    add = (GAMMA * m.L) ** 2 * m.n_o**2 * m.eta * (ratio - ratio * ratio)
    return (math.sqrt(pump.waist_x**2 + add), math.sqrt(pump.waist_y**2 + add))


def gauss_cas_params(ks, crystal: CrystalConfig, pump: PumpConfig,
                     use_effective_widths: bool = False) -> GaussCasParams:
    """Gaussian CAS parameters anchored at the signal point ks.

    use_effective_widths enables the long-crystal replacement of the pump
    waists; the plain waists reproduce the exact engine's widths better for
    short crystals and on-cone anchors, so it defaults off.
    """
    m = _model(crystal, pump)
    ksx, ksy = float(ks[0]), float(ks[1])
    kappa = m.k0 * (m.n_eff - m.n_o) + m.c2 * (ksx * ksx + ksy * ksy)
    d = (m.c2 * ksx, m.beta_ay + m.c2 * ksy)
    if use_effective_widths:
        wx, wy = effective_widths(pump, crystal)
    else:
        wx, wy = pump.waist_x, pump.waist_y
    gl = GAMMA * m.L
    return GaussCasParams(
        sigma_x=math.sqrt((wx * wx + (gl * d[0]) ** 2) / 2),
        sigma_y=math.sqrt((wy * wy + (gl * d[1]) ** 2) / 2),
        kappa=kappa, d=d,
    )


def cas_analytic(ks, ki, crystal: CrystalConfig, pump: PumpConfig,
                 use_effective_widths: bool = False):
    """Gaussian-model conditional angular spectrum (overall constant 1).

    Product of the sum-coordinate Gaussian, the mismatch cross term
    exp(-gamma^2 L^2 (kappa^2 - 2 kappa d.q)/2) and the d_x d_y cross term,
    with kappa and d evaluated at each signal point.
    """
    ks = np.asarray(ks, dtype=float)
    ki = np.asarray(ki, dtype=float)
    return _cas_analytic_xy(ks[..., 0], ks[..., 1], ki[..., 0], ki[..., 1],
                            crystal, pump, use_effective_widths)


def _cas_analytic_xy(ksx, ksy, kix, kiy, crystal, pump,
                     use_effective_widths=False):
    m = _model(crystal, pump)
    ksx = np.asarray(ksx, dtype=float)
    ksy = np.asarray(ksy, dtype=float)
    qx = ksx + np.asarray(kix, dtype=float)
    qy = ksy + np.asarray(kiy, dtype=float)
    kappa = m.k0 * (m.n_eff - m.n_o) + m.c2 * (ksx * ksx + ksy * ksy)
    dx = m.c2 * ksx
    dy = m.beta_ay + m.c2 * ksy
    if use_effective_widths:
        wx, wy = effective_widths(pump, crystal)
    else:
        wx, wy = pump.waist_x, pump.waist_y
    g2l2 = (GAMMA * m.L) ** 2
    sig2x = (wx * wx + g2l2 * dx * dx) / 2
    sig2y = (wy * wy + g2l2 * dy * dy) / 2
    expo = (-sig2x * qx * qx - sig2y * qy * qy
            - 0.5 * g2l2 * (kappa * kappa - 2 * kappa * (dx * qx + dy * qy))
            - g2l2 * dx * dy * qx * qy)
    out = np.exp(expo)
    return out if np.ndim(out) else float(out)


def _ring_quantities(m: _Model, W: float, abs_d):
    """Quartic ring exponent coefficient for given |d|."""
    gl = GAMMA * m.L
    return 2 * (gl / m.un) ** 2 / (1 + (gl * abs_d / W) ** 2)


def pump_boundary(crystal: CrystalConfig, pump: PumpConfig):
    """Propagation boundary k~(theta) of the pump transverse wave vector.

    k~ = (omega/c) sqrt(eps_perp eps_par) / sqrt(eps_perp + delta_eps
    a_y^2 cos^2 theta); the transverse axis component a_y plays the role of
    the in-plane projection.
    """
    m = _model(crystal, pump)
    de = m.eps_par - m.eps_perp

    def boundary(theta):
        cos2 = np.cos(theta) ** 2
        return m.k0 * math.sqrt(m.eps_perp * m.eps_par) / np.sqrt(
            m.eps_perp + de * m.ay * m.ay * cos2)

    return boundary


def cone_params(crystal: CrystalConfig, pump: PumpConfig,
                ks=None) -> ConeStats:
    """Ring radius, quartic width parameter and zeta at a signal point.

    With ks omitted the summary point |ks| = r_AS along +x is used, where
    kappa (hence zeta_x) vanishes by construction.  Configurations with
    n_eff > n_o have no real cone and are rejected.
    """
    m = _model(crystal, pump)
    W = _symmetric_waist(pump)
    if m.r_as2 < 0:
        raise NoConeError(
            f"no real cone: n_eff = {m.n_eff:.6f} exceeds n_o = {m.n_o:.6f}")
    r_as = math.sqrt(m.r_as2)
    if ks is None:
        ks = (r_as, 0.0)
    ksx, ksy = float(ks[0]), float(ks[1])
    kappa = m.k0 * (m.n_eff - m.n_o) + m.c2 * (ksx * ksx + ksy * ksy)
    abs_d = math.hypot(m.c2 * ksx, m.beta_ay + m.c2 * ksy)
    gl = GAMMA * m.L
    sig_inv2 = _ring_quantities(m, W, abs_d)
    zeta = kappa * abs_d / (abs_d * abs_d + (W / gl) ** 2)
    sigma_as = sig_inv2 ** -0.5
    if r_as > 0:
        width = 1.0 / (2 * math.sqrt(2) * r_as * math.sqrt(sig_inv2))
    else:
        width = sig_inv2 ** -0.25
    return ConeStats(r_as=r_as, sigma_as=sigma_as, zeta_x=zeta,
                     radial_width=width)


def as_semianalytic(ks, crystal: CrystalConfig, pump: PumpConfig,
                    n_theta: int = 256) -> float:
    """Ring profile with the radial integral done in error functions.

    The polar-angle integral is evaluated with an n_theta-point periodic
    trapezoid rule; the radial integral over the pump wave vector magnitude
    is exact for the Gaussian model.
    """
    m = _model(crystal, pump)
    W = _symmetric_waist(pump)
    ksx, ksy = float(ks[0]), float(ks[1])
    k2 = ksx * ksx + ksy * ksy
    kappa = m.k0 * (m.n_eff - m.n_o) + m.c2 * k2
    abs_d = math.hypot(m.c2 * ksx, m.beta_ay + m.c2 * ksy)
    gl = GAMMA * m.L
    P = W * W + (gl * abs_d) ** 2
    zeta = kappa * abs_d / (abs_d * abs_d + (W / gl) ** 2)

    theta = np.arange(n_theta) * (2 * np.pi / n_theta)
    cos = np.cos(theta)
    sin = np.sin(theta)
    den = P * cos * cos + W * W * sin * sin
    de = m.eps_par - m.eps_perp
    k_t = m.k0 * math.sqrt(m.eps_perp * m.eps_par) / np.sqrt(
        m.eps_perp + de * m.ay * m.ay * cos * cos)

    b = P * zeta * cos
    mean = b / den
    u0 = 0.5 * P * zeta * zeta
    u_kt = 0.5 * (P * (k_t * cos - zeta) ** 2 + W * W * k_t * k_t * sin * sin)
    # int_0^kt exp(-u) dk in error functions
    gauss_norm = np.exp(-0.5 * (P * zeta * zeta - b * mean))
    root = np.sqrt(den / 2)
    radial = gauss_norm * np.sqrt(np.pi / (2 * den)) * (
        erf(root * (k_t - mean)) + erf(root * mean))

    integrand = (np.exp(-u0) - np.exp(-u_kt)) / den \
        + (P * zeta) * cos / den * radial
    bracket = float(np.sum(integrand)) * 2 * np.pi / n_theta

    sig_inv2 = _ring_quantities(m, W, abs_d)
    prefactor = math.exp(-sig_inv2 * (k2 - m.r_as2) ** 2)
    return prefactor * bracket


def as_closedform(ksx, ksy, crystal: CrystalConfig, pump: PumpConfig):
    """Stationary-phase closed form of the ring profile.

    pi exp(-sigma^-2 (k^2 - r^2)^2) / (W^2 sqrt(1 + (gamma L |d|/W)^2))
    times (1 - exp(-u(k~, theta_est))); the stationary angle satisfies
    cos(theta_est) = kappa/(|d| k), clamped to [-1, 1] where no stationary
    point exists.
    """
    m = _model(crystal, pump)
    W = _symmetric_waist(pump)
    ksx = np.asarray(ksx, dtype=float)
    ksy = np.asarray(ksy, dtype=float)
    k2 = ksx * ksx + ksy * ksy
    kappa = m.k0 * (m.n_eff - m.n_o) + m.c2 * k2
    abs_d = np.hypot(m.c2 * ksx, m.beta_ay + m.c2 * ksy)
    gl = GAMMA * m.L

    denom = np.maximum(abs_d * np.sqrt(k2), 1e-300)
    cos_est = np.clip(kappa / denom, -1.0, 1.0)
    de = m.eps_par - m.eps_perp
    k_t = m.k0 * math.sqrt(m.eps_perp * m.eps_par) / np.sqrt(
        m.eps_perp + de * m.ay * m.ay * cos_est * cos_est)
    u_est = 0.5 * (W * k_t) ** 2 - 0.5 * (gl * kappa) ** 2 * W * W / (
        W * W + (gl * abs_d) ** 2)

    sig_inv2 = _ring_quantities(m, W, abs_d)
    out = np.pi * np.exp(-sig_inv2 * (k2 - m.r_as2) ** 2) \
        / (W * W * np.sqrt(1 + (gl * abs_d / W) ** 2)) \
        * (1 - np.exp(-np.maximum(u_est, 0.0)))
    return out if np.ndim(out) else float(out)


def aperture_stats(crystal: CrystalConfig, pump: PumpConfig) -> ConeStats:
    """Mean aperture angle of the cone and its extreme angular spreads.

    The spread extremes use |d_ext| = |beta -/+ (2c/n_o omega) r_AS| (the
    full walk-off coefficient, which reproduces the reference spreads) in
    DTheta = (1 + (gamma L |d_ext|/W)^2)^(1/4) / (2^(5/4) sqrt(gamma L
    omega n_o / 2c)).
    """
    m = _model(crystal, pump)
    W = _symmetric_waist(pump)
    base = cone_params(crystal, pump)
    r = base.r_as
    half_un = m.un / 2
    theta_mean = math.asin(r / math.sqrt(half_un**2 - r * r))
    d_a = abs(m.beta - m.c2 * r)
    d_b = abs(m.beta + m.c2 * r)
    d_max, d_min = max(d_a, d_b), min(d_a, d_b)
    gl = GAMMA * m.L
    norm = 2 ** 1.25 * math.sqrt(gl * half_un)
    dtheta = tuple((1 + (gl * dd / W) ** 2) ** 0.25 / norm for dd in (d_max, d_min))
    return ConeStats(
        r_as=base.r_as, sigma_as=base.sigma_as, zeta_x=base.zeta_x,
        radial_width=base.radial_width, theta_mean=theta_mean,
        dtheta_max=dtheta[0], dtheta_min=dtheta[1],
        d_ext_max=d_max, d_ext_min=d_min,
    )


def as_grid(crystal: CrystalConfig, pump: PumpConfig,
            axis_x: GridAxis = GridAxis(-1.0, 1.0, 256),
            axis_y: GridAxis = GridAxis(-1.0, 1.0, 256)) -> SpectrumGrid:
    """Angular spectrum from the stationary-phase closed form."""
    xx, yy = np.meshgrid(axis_x.points, axis_y.points)
    values = as_closedform(xx, yy, crystal, pump)
    meta = {"kind": "as", "engine": "analytic"}
    return SpectrumGrid(axis_x, axis_y, values, "raw", meta)


def cas_grid(ki, crystal: CrystalConfig, pump: PumpConfig,
             axis_x: GridAxis | None = None, axis_y: GridAxis | None = None,
             count: int = 161,
             use_effective_widths: bool = False) -> SpectrumGrid:
    """Gaussian-model CAS over a signal window at fixed idler."""
    kix, kiy = float(ki[0]), float(ki[1])
    params = gauss_cas_params((-kix, -kiy), crystal, pump)
    if axis_x is None or axis_y is None:
        hx = 6.0 / (math.sqrt(2) * params.sigma_x)
        hy = 6.0 / (math.sqrt(2) * params.sigma_y)
        axis_x = axis_x or GridAxis(-kix - hx, -kix + hx, count)
        axis_y = axis_y or GridAxis(-kiy - hy, -kiy + hy, count)
    xx, yy = np.meshgrid(axis_x.points, axis_y.points)
    values = _cas_analytic_xy(xx, yy, kix, kiy, crystal, pump,
                              use_effective_widths)
    meta = {"kind": "cas", "engine": "analytic", "idler_kx": kix,
            "idler_ky": kiy}
    return SpectrumGrid(axis_x, axis_y, values, "raw", meta)
