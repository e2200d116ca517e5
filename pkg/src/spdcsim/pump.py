"""Angular (Fourier) amplitude of the Gaussian pump beam.

The pump is quasi monochromatic with possibly astigmatic waists W_x, W_y
and a focal plane offset z_o.  The offset only contributes a phase through
the Rayleigh lengths, so every modulus-based spectrum downstream is
independent of it; the engines therefore use `angular_intensity`, which
never touches z_o.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .crystal import BAND_MAX, BAND_MIN


@dataclass(frozen=True)
class PumpConfig:
    """Gaussian pump: wavelength (um), waists W_x, W_y (um), focal offset z_o (um).

    spectral_amplitude is the constant monochromatic amplitude; spectra are
    reported up to its modulus, so the default 1 sets the overall scale.
    """

    wavelength: float
    waist_x: float
    waist_y: float
    focal_offset: float = 0.0
    spectral_amplitude: complex = 1.0

    def __post_init__(self):
        if not BAND_MIN <= self.wavelength <= BAND_MAX:
            raise ValueError(
                f"pump wavelength {self.wavelength:g} um outside band "
                f"{BAND_MIN}-{BAND_MAX} um"
            )
        if self.waist_x <= 0 or self.waist_y <= 0:
            raise ValueError("pump waists must be positive")

    @property
    def k0(self) -> float:
        """Pump omega/c = 2 pi / lambda, rad/um."""
        return 2 * math.pi / self.wavelength

    @property
    def rayleigh_x(self) -> float:
        """z_Rx = pi W_x^2 / lambda (vacuum), um."""
        return math.pi * self.waist_x**2 / self.wavelength

    @property
    def rayleigh_y(self) -> float:
        return math.pi * self.waist_y**2 / self.wavelength


def symmetric_pump(wavelength: float, waist: float, focal_offset: float = 0.0) -> PumpConfig:
    """Pump with equal waists along x and y."""
    return PumpConfig(wavelength, waist, waist, focal_offset)


def angular_amplitude(kp, cfg: PumpConfig):
    """Complex pump amplitude at transverse wave vector kp = (k_x, k_y).

    alpha * exp(-(k_x W_x/2)^2 (1 - i z_o/z_Rx)) * (y analog).  The modulus
    is independent of z_o.
    """
    kx = np.asarray(kp[0], dtype=float)
    ky = np.asarray(kp[1], dtype=float)
    ex = (kx * cfg.waist_x / 2) ** 2 * (1 - 1j * cfg.focal_offset / cfg.rayleigh_x)
    ey = (ky * cfg.waist_y / 2) ** 2 * (1 - 1j * cfg.focal_offset / cfg.rayleigh_y)
    out = cfg.spectral_amplitude * np.exp(-ex - ey)
    return out if np.ndim(out) else complex(out)


def angular_intensity(kx, ky, cfg: PumpConfig):
    """|angular_amplitude|^2 evaluated without the focal phase.

    exp(-(W_x^2 k_x^2 + W_y^2 k_y^2) / 2) times |alpha|^2; bit-identical for
    any focal offset by construction.
    """
    kx = np.asarray(kx, dtype=float)
    ky = np.asarray(ky, dtype=float)
    return abs(cfg.spectral_amplitude) ** 2 * np.exp(
        -0.5 * (cfg.waist_x**2 * kx * kx + cfg.waist_y**2 * ky * ky)
    )
