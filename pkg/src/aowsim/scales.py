"""Conversion of physical waveguide parameters to dimensionless units.

Everything downstream works in recoil units (Omega_r = 1, k_a = 2*pi).
This module produces those ratios from SI material data, and computes
slow-light miniband parameters (bandwidth, enhanced effective mass) for
a static index lattice.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

import numpy as np

HBAR = 1.054571817e-34  # J s
C_LIGHT = 2.99792458e8  # m/s


class ValidationError(ValueError):
    """Raised when a physical input is out of range; names the field."""


class ConvergenceError(RuntimeError):
    """Raised when a truncated diagonalization fails to converge."""


@dataclass(frozen=True)
class MaterialSpec:
    """Waveguide material: index, sound speed, optical cutoff, modulation depth.

    `optical_frequency_hz` is omega_c/(2*pi); `index_modulation` is the
    relative depth delta_n/n of the acoustically induced index change.
    """

    name: str
    refractive_index: float
    speed_of_sound: float
    optical_frequency_hz: float
    index_modulation: float

    def validate(self) -> None:
        if not self.refractive_index > 1.0:
            raise ValidationError(f"refractive_index must be > 1, got {self.refractive_index}")
        if not self.speed_of_sound > 0.0:
            raise ValidationError(f"speed_of_sound must be > 0, got {self.speed_of_sound}")
        if not self.optical_frequency_hz > 0.0:
            raise ValidationError(
                f"optical_frequency_hz must be > 0, got {self.optical_frequency_hz}"
            )
        if not 0.0 <= self.index_modulation < 1.0:
            raise ValidationError(
                f"index_modulation must be in [0, 1), got {self.index_modulation}"
            )


@dataclass(frozen=True)
class ScaledParams:
    """Dimensionless parameter set for one (material, acoustic wavelength) point.

    Carries both the SI scales (m_star, omega_r, e_r, gamma_0) and the
    ratios consumed by the solvers.
    """

    acoustic_wavelength: float  # m
    acoustic_wavevector: float  # 1/m
    m_star: float  # kg
    omega_r: float  # rad/s
    e_r: float  # J
    omega_ratio: float  # Omega / Omega_r
    va_ratio: float  # V_a / E_r
    g0_ratio: float  # g_0 / Omega_r
    gamma_0: float  # rad/s, 4*pi*g0^2/Omega_r

    @property
    def omega_acoustic(self) -> float:
        """Acoustic angular frequency Omega = v*k_a in rad/s."""
        return self.omega_ratio * self.omega_r


@dataclass(frozen=True)
class MinibandSpec:
    """Lowest band of a static cosine lattice and the implied effective mass."""

    v_st: float  # J
    period: float  # m
    bandwidth: float  # rad/s, full width of the lowest band
    m_eff: float  # kg, 2*hbar/(B a^2)
    omega_r_eff: float  # rad/s, recoil at the acoustic k_a with m_eff
    band_min: float  # rad/s, bottom of the lowest band relative to the bare cutoff


def load_materials() -> dict[str, MaterialSpec]:
    """Material presets shipped with the package."""
    text = resources.files("aowsim").joinpath("materials.json").read_text()
    raw = json.loads(text)
    return {key: MaterialSpec(**val) for key, val in raw.items()}


def derive_scales(material: MaterialSpec, wavelength: float, g0_ratio: float = 0.0) -> ScaledParams:
    """Reduce material + acoustic wavelength to recoil-unit ratios.

    Uses the quadratic-dispersion effective mass m* = omega_c*hbar*n^2/c^2,
    valid near the cutoff.  The acoustic frequency follows from
    Omega = v*k_a, the potential depth from V_a = hbar*omega_c*(dn/n).
    """
    material.validate()
    if not wavelength > 0.0:
        raise ValidationError(f"wavelength must be > 0, got {wavelength}")
    if g0_ratio < 0.0:
        raise ValidationError(f"g0_ratio must be >= 0, got {g0_ratio}")

    omega_c = 2.0 * np.pi * material.optical_frequency_hz
    n = material.refractive_index
    k_a = 2.0 * np.pi / wavelength
    m_star = omega_c * HBAR * n**2 / C_LIGHT**2
    omega_r = HBAR * k_a**2 / (2.0 * m_star)
    e_r = HBAR * omega_r
    omega_ac = material.speed_of_sound * k_a
    v_a = HBAR * omega_c * material.index_modulation
    g0 = g0_ratio * omega_r
    return ScaledParams(
        acoustic_wavelength=wavelength,
        acoustic_wavevector=k_a,
        m_star=m_star,
        omega_r=omega_r,
        e_r=e_r,
        omega_ratio=omega_ac / omega_r,
        va_ratio=v_a / e_r,
        g0_ratio=g0_ratio,
        gamma_0=4.0 * np.pi * g0**2 / omega_r,
    )


def _lowest_band(s: float, n_harm: int, nk: int = 65) -> np.ndarray:
    """Lowest Bloch band of -psi'' + s*cos(2*pi*x/a)*psi in static recoil units.

    k runs over half the Brillouin zone (band is symmetric); plane-wave
    basis exp(i*(k + nu*k_st)*x) truncated at |nu| <= n_harm.
    """
    kappas = np.linspace(0.0, 0.5, nk)
    nu = np.arange(-n_harm, n_harm + 1)
    dim = 2 * n_harm + 1
    h = np.zeros((nk, dim, dim))
    idx = np.arange(dim)
    h[:, idx, idx] = (nu[None, :] + kappas[:, None]) ** 2
    h[:, idx[:-1], idx[1:]] = 0.5 * s
    h[:, idx[1:], idx[:-1]] = 0.5 * s
    return np.linalg.eigvalsh(h)[:, 0]


def miniband_params(
    v_st: float,
    period: float,
    m_bare: float,
    acoustic_wavevector: float | None = None,
    rel_tol: float = 1e-8,
) -> MinibandSpec:
    """Bandwidth and effective mass of the lowest miniband of a cosine lattice.

    Diagonalizes the static Bloch problem on a plane-wave basis, doubling
    the cutoff from 16 harmonics until the bandwidth is converged to
    `rel_tol` relative.  `acoustic_wavevector` (1/m) sets the recoil
    Omega_r_eff reported for the enhanced mass; if omitted it defaults to
    the static lattice wavevector.
    """
    if not v_st > 0.0:
        raise ValidationError(f"v_st must be > 0, got {v_st}")
    if not period > 0.0:
        raise ValidationError(f"period must be > 0, got {period}")
    k_st = 2.0 * np.pi / period
    e_r_st = HBAR**2 * k_st**2 / (2.0 * m_bare)
    s = v_st / e_r_st

    n_harm = 16
    band = _lowest_band(s, n_harm)
    width = band.max() - band.min()
    for _ in range(6):
        band2 = _lowest_band(s, 2 * n_harm)
        width2 = band2.max() - band2.min()
        if abs(width2 - width) <= rel_tol * max(abs(width2), 1e-300):
            band, width, n_harm = band2, width2, 2 * n_harm
            break
        band, width, n_harm = band2, width2, 2 * n_harm
    else:
        raise ConvergenceError(
            f"miniband width not converged to {rel_tol} at {n_harm} harmonics"
        )

    bandwidth = width * e_r_st / HBAR  # rad/s
    m_eff = 2.0 * HBAR / (bandwidth * period**2)
    k_a = acoustic_wavevector if acoustic_wavevector is not None else k_st
    omega_r_eff = HBAR * k_a**2 / (2.0 * m_eff)
    return MinibandSpec(
        v_st=v_st,
        period=period,
        bandwidth=bandwidth,
        m_eff=m_eff,
        omega_r_eff=omega_r_eff,
        band_min=band.min() * e_r_st / HBAR,
    )
