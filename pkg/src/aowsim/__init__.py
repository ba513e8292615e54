"""Acousto-optic waveguide QED simulator.

Simulates two-level emitters coupled to a guided photonic band whose
refractive index is modulated by traveling acoustic waves.  Covers
quasi-energy band structures, directional spontaneous emission, exact
single-excitation dynamics, correlated-decay master equations, moving
photon bound states and 2D directional couplings.

Internal unit convention (used by every module except `scales`, which
converts from SI):

* lengths in the acoustic wavelength lambda, so k_a = 2*pi
* energies and frequencies in the recoil Omega_r = hbar*k_a^2/(2 m*),
  with hbar = 1 (so E_r = 1 as well)
* time in 1/Omega_r, velocities in lambda*Omega_r
* couplings g_0 in Omega_r; the characteristic emission rate is
  Gamma_0 = 4*pi*g_0^2/Omega_r
"""

__version__ = "0.1.0"

K_A = 6.283185307179586  # acoustic wavevector in internal units (2*pi)
