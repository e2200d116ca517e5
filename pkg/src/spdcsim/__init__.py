"""Type-I degenerate SPDC simulator for focused Gaussian pump beams.

Two engines compute the angular spectrum (AS) and conditional angular
spectrum (CAS) of the photon pairs: an exact one built on the full
birefringent dispersion relations and a fast analytic one built on the
Gaussian model of the phase-matching sinc.  On top of those sit the
on-cone angular correlation and design sweeps over cut angle and pump
wavelength.
"""
from .analytic import (
    GAMMA,
    ConeStats,
    GaussCasParams,
    NoConeError,
    aperture_stats,
    as_closedform,
    as_semianalytic,
    cas_analytic,
    cone_params,
    effective_widths,
    gauss_cas_params,
    pump_boundary,
    sinc_gaussian,
)
from .cone import ConeCorrelation, cone_correlation, cone_correlation_grid, cone_marginals
from .crystal import (
    SELLMEIER_SETS,
    AxisCoefficients,
    CrystalConfig,
    TaylorMismatch,
    WavelengthBandError,
    axis_coefficients,
    bbo_crystal,
    delta_kz_exact,
    delta_kz_taylor,
    extraordinary_principal_index,
    kz_extraordinary,
    kz_ordinary,
    ordinary_index,
    taylor_mismatch,
)
from .grids import GridAxis, Marginal1D, SpectrumGrid, marginal
from .numeric import (
    DegeneratePeakError,
    PeakSearchSpec,
    as_grid,
    cas_grid,
    find_peak_idler,
    joint_density,
    phase_matching,
    slice_correlation,
)
from .optimize import (
    BracketError,
    DesignPoint,
    SweepResult,
    brightness,
    match_wavelength_to_angle,
    sweep_cut_angle,
    sweep_wavelength,
)
from .pump import PumpConfig, angular_amplitude, angular_intensity, symmetric_pump
from .quadrature import QuadratureSpec, erf, integrate_2d, integrate_periodic, refine_peak

__version__ = "0.1.0"
