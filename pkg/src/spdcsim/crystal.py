"""Dielectric response of a uniaxial nonlinear crystal.

Refractive indices come from a four-coefficient Sellmeier model
n^2(lam) = A + B/(lam^2 - C) - D*lam^2 with lam in um.  The optical axis
lies in the y-z plane, a = (0, sin(theta_a), cos(theta_a)), so the pump
propagates as an extraordinary wave with walk-off along y while the
degenerate daughter photons are ordinary waves.

Units throughout: lengths um, transverse wave vectors rad/um, angles rad.
Angular frequencies enter only as omega/c = 2*pi/lambda (vacuum), also in
rad/um, so no time unit appears anywhere.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

# Supported Sellmeier band, um
BAND_MIN = 0.2
BAND_MAX = 1.2

#: Named Sellmeier sets: (ordinary, extraordinary) coefficient quadruples.
#: "bbo-eimerl" is the beta-BaB2O4 set of Eimerl et al. (1987).
SELLMEIER_SETS = {
    "bbo-eimerl": (
        (2.7405, 0.0184, 0.0179, 0.0155),
        (2.3730, 0.0128, 0.0156, 0.0044),
    ),
}


class WavelengthBandError(ValueError):
    """Wavelength outside the supported Sellmeier band."""


@dataclass(frozen=True)
class CrystalConfig:
    """Uniaxial crystal: Sellmeier model, cut angle and length.

    sellmeier_o / sellmeier_e: (A, B, C, D) with n^2 = A + B/(lam^2-C) - D lam^2.
    cut_angle: angle between optical axis and propagation direction, rad.
    length: crystal length along z, um.
    """

    sellmeier_o: tuple[float, float, float, float]
    sellmeier_e: tuple[float, float, float, float]
    cut_angle: float
    length: float
    sellmeier_name: str = "custom"

    def __post_init__(self):
        object.__setattr__(self, "sellmeier_o", tuple(float(v) for v in self.sellmeier_o))
        object.__setattr__(self, "sellmeier_e", tuple(float(v) for v in self.sellmeier_e))
        if len(self.sellmeier_o) != 4 or len(self.sellmeier_e) != 4:
            raise ValueError("Sellmeier models take exactly 4 coefficients")
        # boundary angles (axis along z or fully transverse) are allowed as
        # degenerate but well-defined limits
        if not 0.0 <= self.cut_angle <= math.pi / 2:
            raise ValueError(f"cut angle {self.cut_angle} rad outside [0, pi/2]")
        if not self.length > 0:
            raise ValueError(f"crystal length must be positive, got {self.length}")
        for name, coeff in (("ordinary", self.sellmeier_o), ("extraordinary", self.sellmeier_e)):
            for lam in np.linspace(BAND_MIN, BAND_MAX, 21):
                if _n_squared(coeff, float(lam)) <= 1.0:
                    raise ValueError(
                        f"{name} Sellmeier model gives n^2 <= 1 at {lam:.3f} um"
                    )

    @property
    def axis_y(self) -> float:
        return math.sin(self.cut_angle)

    @property
    def axis_z(self) -> float:
        return math.cos(self.cut_angle)


def bbo_crystal(cut_angle: float, length: float) -> CrystalConfig:
    """BBO crystal with the built-in 'bbo-eimerl' Sellmeier set."""
    o, e = SELLMEIER_SETS["bbo-eimerl"]
    return CrystalConfig(o, e, cut_angle, length, sellmeier_name="bbo-eimerl")


@dataclass(frozen=True)
class AxisCoefficients:
    """Derived dielectric quantities of the pump wave at one wavelength.

    For a negative uniaxial crystal delta_eps < 0, beta < 0 and
    n_e <= n_eff <= n_o.  eta carries units of inverse permittivity.
    """

    n_eff: float
    beta: float
    eta: float
    eps_perp: float
    eps_par: float
    delta_eps: float


@dataclass(frozen=True)
class TaylorMismatch:
    """First-order expansion of the phase mismatch around a signal point.

    delta_kz ~ kappa - d . (k_s + k_i); kappa in rad/um, d dimensionless.
    Only the transverse components of d couple (the axis has a_x = 0 and
    the a_z part multiplies no transverse wave vector).
    """

    kappa: float
    d: tuple[float, float]


def _n_squared(coeff, lam):
    A, B, C, D = coeff
    return A + B / (lam * lam - C) - D * lam * lam


def _check_band(lam: float):
    if not BAND_MIN <= lam <= BAND_MAX:
        raise WavelengthBandError(
            f"wavelength {lam:g} um outside supported band {BAND_MIN}-{BAND_MAX} um"
        )


def ordinary_index(lam: float, cfg: CrystalConfig) -> float:
    """Ordinary refractive index n_o(lam), lam in um."""
    _check_band(lam)
    return math.sqrt(_n_squared(cfg.sellmeier_o, lam))


def extraordinary_principal_index(lam: float, cfg: CrystalConfig) -> float:
    """Principal extraordinary index n_e(lam) (field along the optical axis)."""
    _check_band(lam)
    return math.sqrt(_n_squared(cfg.sellmeier_e, lam))


@lru_cache(maxsize=256)
def axis_coefficients(cfg: CrystalConfig, lam_p: float) -> AxisCoefficients:
    """Effective index, walk-off and astigmatism coefficients at lam_p.

    n_eff = sqrt(eps_perp eps_par / (eps_perp + delta_eps a_z^2)),
    beta  = delta_eps a_z / (eps_perp + delta_eps a_z^2),
    eta   = 1 / (eps_perp + delta_eps a_z^2).
    """
    eps_perp = ordinary_index(lam_p, cfg) ** 2
    eps_par = extraordinary_principal_index(lam_p, cfg) ** 2
    delta_eps = eps_par - eps_perp
    az = cfg.axis_z
    den = eps_perp + delta_eps * az * az
    return AxisCoefficients(
        n_eff=math.sqrt(eps_perp * eps_par / den),
        beta=delta_eps * az / den,
        eta=1.0 / den,
        eps_perp=eps_perp,
        eps_par=eps_par,
        delta_eps=delta_eps,
    )


def _pump_wavelength(k0: float) -> float:
    """Vacuum wavelength from omega/c in rad/um."""
    return 2 * math.pi / k0


def _kz_ordinary_masked(k_perp, k0: float, cfg: CrystalConfig):
    """Daughter-photon kz and propagating mask.

    k0 is the PUMP omega/c; the degenerate daughters carry omega/2, hence
    the (k0/2)^2 factor.  eps_perp is evaluated at the daughter wavelength
    2*lambda_p.
    """
    lam_d = 2 * _pump_wavelength(k0)
    _check_band(lam_d)
    eps_perp = _n_squared(cfg.sellmeier_o, lam_d)
    radicand = eps_perp * (k0 / 2) ** 2 - np.square(np.asarray(k_perp, dtype=float))
    ok = radicand >= 0.0
    return np.sqrt(np.where(ok, radicand, 0.0)), ok


def kz_ordinary(k_perp, k0: float, cfg: CrystalConfig):
    """Longitudinal wave vector of an ordinary daughter photon, rad/um.

    Evanescent transverse vectors (k_perp beyond n_o(2 lam_p) k0/2) map to 0;
    the spectra engines treat such points as zero density.
    """
    kz, _ = _kz_ordinary_masked(k_perp, k0, cfg)
    return kz if kz.ndim else float(kz)


def _kz_extraordinary_masked(kx, ky, k0: float, cfg: CrystalConfig):
    """Pump (extraordinary) kz and propagating mask at omega/c = k0."""
    ax = axis_coefficients(cfg, _pump_wavelength(k0))
    k2 = np.square(np.asarray(kx, dtype=float)) + np.square(np.asarray(ky, dtype=float))
    radicand = 1.0 - k2 * ax.eta / (k0 * k0)
    ok = radicand >= 0.0
    kz = -ax.beta * cfg.axis_y * np.asarray(ky, dtype=float) \
        + k0 * ax.n_eff * np.sqrt(np.where(ok, radicand, 0.0))
    return kz, ok


def kz_extraordinary(k_perp_vec, k0: float, cfg: CrystalConfig):
    """Longitudinal wave vector of the extraordinary pump wave, rad/um.

    At k_perp = 0 this reduces to n_eff * k0 exactly.  The walk-off term
    -beta a.k_perp only involves k_y because a_x = 0.
    """
    kx, ky = np.asarray(k_perp_vec[0]), np.asarray(k_perp_vec[1])
    kz, _ = _kz_extraordinary_masked(kx, ky, k0, cfg)
    return kz if np.ndim(kz) else float(kz)


def delta_kz_exact(ks, ws: float, ki, wi: float, cfg: CrystalConfig):
    """Exact phase mismatch kz_pump - kz_signal - kz_idler, rad/um.

    ks, ki: transverse daughter wave vectors; ws, wi their omega/c.
    Transverse momentum conservation fixes the pump at ks + ki and energy
    conservation its frequency at ws + wi.  Each daughter's ordinary
    dispersion is evaluated with twice its own frequency, which at the
    degenerate point equals the pump frequency.
    """
    ks = np.asarray(ks, dtype=float)
    ki = np.asarray(ki, dtype=float)
    kz_p = kz_extraordinary((ks[..., 0] + ki[..., 0], ks[..., 1] + ki[..., 1]),
                            ws + wi, cfg)
    kz_s = kz_ordinary(np.hypot(ks[..., 0], ks[..., 1]), 2 * ws, cfg)
    kz_i = kz_ordinary(np.hypot(ki[..., 0], ki[..., 1]), 2 * wi, cfg)
    return kz_p - kz_s - kz_i


def taylor_mismatch(ks, k0: float, cfg: CrystalConfig) -> TaylorMismatch:
    """First-order mismatch coefficients at the degenerate operating point.

    kappa = k0 (n_eff - n_o) + (2/(n_o k0)) |ks|^2 and
    d = (2/(n_o k0)) ks + beta a restricted to the transverse plane,
    with n_o at the daughter wavelength 2*lambda_p and n_eff at lambda_p.
    """
    lam_p = _pump_wavelength(k0)
    _check_band(2 * lam_p)
    ax = axis_coefficients(cfg, lam_p)
    n_o = ordinary_index(2 * lam_p, cfg)
    ksx, ksy = float(ks[0]), float(ks[1])
    c2 = 2.0 / (n_o * k0)
    kappa = k0 * (ax.n_eff - n_o) + c2 * (ksx * ksx + ksy * ksy)
    return TaylorMismatch(kappa=kappa, d=(c2 * ksx, ax.beta * cfg.axis_y + c2 * ksy))


def delta_kz_taylor(ks, ki, k0: float, cfg: CrystalConfig):
    """Linearized mismatch kappa - d.(ks+ki) anchored at the signal point(s)."""
    lam_p = _pump_wavelength(k0)
    _check_band(2 * lam_p)
    ax = axis_coefficients(cfg, lam_p)
    n_o = ordinary_index(2 * lam_p, cfg)
    c2 = 2.0 / (n_o * k0)
    ks = np.asarray(ks, dtype=float)
    ki = np.asarray(ki, dtype=float)
    ksx, ksy = ks[..., 0], ks[..., 1]
    kappa = k0 * (ax.n_eff - n_o) + c2 * (ksx * ksx + ksy * ksy)
    dx = c2 * ksx
    dy = ax.beta * cfg.axis_y + c2 * ksy
    out = kappa - dx * (ksx + ki[..., 0]) - dy * (ksy + ki[..., 1])
    return out if np.ndim(out) else float(out)
