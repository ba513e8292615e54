"""Correlated decay of N driven emitters through the modulated guide.

Builds the complex coupling matrix A_ij from the resonance set (emission
by emitter i, reabsorption by j, with the unfolded propagation phase),
evolves the resulting master equation, and solves for steady states.
Entanglement diagnostics: concurrence (two emitters), purity, and the
correlation parameter Lambda = |A_12|/(Gamma + Gamma_ng).

Rates and times inside this module are in Gamma_0 units of the shared
emitter coupling; `CouplingMatrix.gamma0` converts back to recoil units.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .dynamics1d import EmitterSpec
from .floquet1d import GAMMA0_UNIT, ResonanceSet

MAX_EMITTERS = 6


@dataclass(frozen=True)
class CouplingMatrix:
    """Complex N x N correlated-decay amplitudes, Gamma_0 units.

    Diagonal: (Gamma + Gamma_ng)/2, real (small frequency shifts dropped).
    `gamma` is the total guided rate, `gamma0` the Gamma_0 value in
    recoil units for unit conversion.
    """

    a: np.ndarray
    gamma: float
    gamma_ng: float
    gamma0: float = 1.0

    @property
    def n(self) -> int:
        return self.a.shape[0]

    def lam(self, i: int = 0, j: int = 1) -> float:
        """Correlation parameter Lambda_ij = |A_ij|/(Gamma + Gamma_ng)."""
        return float(abs(self.a[i, j]) / (self.gamma + self.gamma_ng))


@dataclass(frozen=True)
class DriveSpec:
    """Resonant laser drive: detuning delta_l, Rabi rate omega_l (Gamma_0
    units), and one phase per emitter."""

    delta_l: float
    omega_l: float
    phases: tuple[float, ...]


def coupling_matrix(
    emitters: list[EmitterSpec], res: ResonanceSet, gamma_ng: float = 0.0
) -> CouplingMatrix:
    """A_ij from golden-rule channels, keeping only co-aligned propagation.

    A_ij = (Gamma_ng/2) delta_ij
         + sum_mu |g u_mu|^2 e^{i K_mu r_ij} / |v_mu| * theta(v_mu r_ij),
    with K_mu the unfolded resonance wavevector and r_ij = x_j - x_i.
    Emitters must share g0 and detuning (one resonance set).
    """
    if res.spec.is_superlattice:
        raise ValueError("correlated decay is defined for the homogeneous guide")
    if res.flagged:
        raise ValueError(
            f"{len(res.flagged)} near-divergent resonance(s); Born-Markov invalid"
        )
    g0 = emitters[0].g0
    if any(abs(e.g0 - g0) > 1e-12 or abs(e.delta - emitters[0].delta) > 1e-12 for e in emitters):
        raise ValueError("emitters must share g0 and delta")
    n = len(emitters)
    if n > MAX_EMITTERS:
        raise ValueError(f"at most {MAX_EMITTERS} emitters (dense representation)")
    gamma0 = GAMMA0_UNIT * g0**2
    xs = np.array([e.x for e in emitters])
    a = np.zeros((n, n), dtype=complex)
    gamma_total = 0.0
    for r in res.entries:
        c = g0**2 * r.weight / abs(r.vg) / gamma0
        gamma_total += c
        for i in range(n):
            for j in range(n):
                rij = xs[j] - xs[i]
                if i == j:
                    a[i, j] += 0.5 * c
                elif r.vg * rij > 0.0:
                    a[i, j] += c * np.exp(1j * r.k_unfolded * rij)
    a += 0.5 * gamma_ng * np.eye(n)
    # drop residual imaginary parts on the diagonal (frequency shifts)
    a[np.diag_indices(n)] = a.diagonal().real
    return CouplingMatrix(a=a, gamma=gamma_total, gamma_ng=gamma_ng, gamma0=gamma0)


def correlation_parameter(a: CouplingMatrix) -> float:
    return a.lam(0, 1)


def _lowering_ops(n: int) -> list[np.ndarray]:
    sm = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
    eye = np.eye(2, dtype=complex)
    ops = []
    for i in range(n):
        m = np.array([[1.0 + 0.0j]])
        for j in range(n):
            m = np.kron(m, sm if j == i else eye)
        ops.append(m)
    return ops


def drive_hamiltonian(drive: DriveSpec, sms: list[np.ndarray]) -> np.ndarray:
    n = len(sms)
    dim = 2**n
    h = np.zeros((dim, dim), dtype=complex)
    for i, sm in enumerate(sms):
        ne = sm.conj().T @ sm
        h += -drive.delta_l * ne
        h += 0.5 * drive.omega_l * (np.exp(1j * drive.phases[i]) * sm
                                    + np.exp(-1j * drive.phases[i]) * sm.conj().T)
    return h


def master_rhs(rho: np.ndarray, h: np.ndarray, a: np.ndarray, sms: list[np.ndarray]) -> np.ndarray:
    """drho/dt with the hermitian conjugate written out explicitly.

    The explicit form is linear in rho (the literal "+ h.c." involves
    rho^dagger), which is what the vectorized Liouvillian needs; the two
    agree on Hermitian rho.
    """
    d = -1j * (h @ rho - rho @ h)
    n = len(sms)
    for i in range(n):
        for j in range(n):
            if a[i, j] == 0.0:
                continue
            sp_j = sms[j].conj().T
            sp_i = sms[i].conj().T
            d += a[i, j] * (sms[i] @ rho @ sp_j - sp_j @ sms[i] @ rho)
            d += np.conj(a[i, j]) * (sms[j] @ rho @ sp_i - rho @ sp_i @ sms[j])
    return d


def liouvillian(drive: DriveSpec, coupling: CouplingMatrix) -> np.ndarray:
    """Dense matrix acting on row-major vectorized rho."""
    n = coupling.n
    sms = _lowering_ops(n)
    h = drive_hamiltonian(drive, sms)
    dim = 2**n
    basis = np.zeros((dim, dim), dtype=complex)
    mat = np.zeros((dim * dim, dim * dim), dtype=complex)
    for a_ in range(dim):
        for b in range(dim):
            basis[a_, b] = 1.0
            mat[:, a_ * dim + b] = master_rhs(basis, h, coupling.a, sms).reshape(-1)
            basis[a_, b] = 0.0
    return mat


@dataclass
class MasterTrajectory:
    t: np.ndarray
    rho: np.ndarray  # (nt, dim, dim)
    purity: np.ndarray
    concurrence: np.ndarray | None

    @property
    def final(self) -> np.ndarray:
        return self.rho[-1]


class PositivityError(RuntimeError):
    """Density matrix left the positive cone beyond tolerance."""


def evolve_master(
    rho0: np.ndarray,
    drive: DriveSpec,
    coupling,
    t_final: float,
    n_record: int = 201,
    rtol: float = 1e-10,
    atol: float = 1e-13,
    positivity_tol: float = 1e-6,
) -> MasterTrajectory:
    """Integrate the master equation; `coupling` may be a CouplingMatrix or
    a callable t -> CouplingMatrix for ramped protocols.

    Trace is monitored to 1e-9 and positivity to `positivity_tol` at the
    recorded times.
    """
    rho0 = np.asarray(rho0, dtype=complex)
    dim = rho0.shape[0]
    n = int(np.log2(dim))
    if n > MAX_EMITTERS:
        raise ValueError(f"at most {MAX_EMITTERS} emitters")
    sms = _lowering_ops(n)
    h = drive_hamiltonian(drive, sms)
    time_dep = callable(coupling)

    def rhs(t, y):
        rho = y.reshape(dim, dim)
        a = coupling(t).a if time_dep else coupling.a
        return master_rhs(rho, h, a, sms).reshape(-1)

    ts = np.linspace(0.0, t_final, n_record)
    sol = solve_ivp(rhs, (0.0, t_final), rho0.reshape(-1), t_eval=ts,
                    rtol=rtol, atol=atol, method="DOP853")
    rhos = sol.y.T.reshape(-1, dim, dim)
    # hermitize recorded states (integrator roundoff)
    rhos = 0.5 * (rhos + np.conj(np.swapaxes(rhos, 1, 2)))
    traces = np.einsum("tii->t", rhos).real
    if np.max(np.abs(traces - traces[0])) > 1e-7:
        raise RuntimeError(f"trace drift {np.max(np.abs(traces - traces[0])):.2e}")
    for k in (0, len(rhos) // 2, len(rhos) - 1):
        evmin = float(np.linalg.eigvalsh(rhos[k]).min())
        if evmin < -positivity_tol:
            raise PositivityError(f"min eigenvalue {evmin:.2e} at t = {ts[k]:.3f}")
    pur = np.einsum("tij,tji->t", rhos, rhos).real
    conc = None
    if n == 2:
        conc = np.array([concurrence(r) for r in rhos])
    return MasterTrajectory(t=ts, rho=rhos, purity=pur, concurrence=conc)


class DegenerateSteadyStateError(RuntimeError):
    def __init__(self, dim_null: int, gap: float):
        super().__init__(
            f"steady state not unique: {dim_null} null directions (gap {gap:.2e})"
        )
        self.dim_null = dim_null


def steady_state(drive: DriveSpec, coupling: CouplingMatrix, gap_tol: float = 1e-8) -> np.ndarray:
    """Null vector of the vectorized generator, normalized to unit trace.

    Uniqueness requires the second-smallest singular value of the
    normalized generator to exceed `gap_tol`.
    """
    mat = liouvillian(drive, coupling)
    scale = max(float(np.abs(mat).max()), 1e-300)
    _, s, vh = np.linalg.svd(mat / scale)
    if s[-2] <= gap_tol:
        raise DegenerateSteadyStateError(int(np.sum(s < gap_tol)), float(s[-2]))
    dim = int(np.sqrt(mat.shape[0]))
    rho = vh[-1].conj().reshape(dim, dim)
    rho = rho / np.trace(rho)
    return 0.5 * (rho + rho.conj().T)


def concurrence(rho: np.ndarray) -> float:
    """Two-qubit entanglement monotone via the spin-flipped overlap spectrum."""
    if rho.shape != (4, 4):
        raise ValueError("concurrence is defined for two emitters")
    sy = np.array([[0.0, -1j], [1j, 0.0]])
    yy = np.kron(sy, sy)
    r = rho @ yy @ rho.conj() @ yy
    ev = np.linalg.eigvals(r)
    lam = np.sort(np.sqrt(np.clip(ev.real, 0.0, None)))[::-1]
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def purity(rho: np.ndarray) -> float:
    return float(np.trace(rho @ rho).real)


def ideal_cascade_state(gamma_r: float, omega_l: float) -> np.ndarray:
    """Pure steady state of a perfect one-way channel with compensated phases.

    |psi> = sqrt(G^2/(G^2 + 2 W^2)) (|gg> + i sqrt(2) W/G |S>) with the
    singlet |S> = (|ge> - |eg>)/sqrt(2) oriented so that the first letter
    is the upstream emitter (the one whose output drives the other).
    Basis order gg, ge, eg, ee.
    """
    pref = np.sqrt(gamma_r**2 / (gamma_r**2 + 2.0 * omega_l**2))
    psi = np.zeros(4, dtype=complex)
    psi[0] = pref
    amp = 1j * np.sqrt(2.0) * omega_l / gamma_r * pref
    psi[1] = amp / np.sqrt(2.0)
    psi[2] = -amp / np.sqrt(2.0)
    return psi
