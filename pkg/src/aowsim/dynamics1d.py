"""Single-excitation time-domain dynamics in the modulated waveguide.

The state is (c_e^i, phi(x)) with norm sum|c_e|^2 + sum|phi|^2 dx.  The
exact propagator splits each step into half local steps (potential and
detuning phases wrapped around an exact 2x2 emitter-field rotation at the
emitter cells) around a spectrally exact kinetic step, so every substep
is unitary and the norm is conserved to rounding.

Also provides the quasi-static Markov model driven by rate lookups, the
co-moving bound states of a short acoustic pulse, and the moving-cavity
model for photon transport between emitters.  Recoil units throughout
(k_a = 2*pi, Omega_r = 1, time in 1/Omega_r).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp
from scipy.linalg import eig_banded

from .floquet1d import GAMMA0_UNIT, RateTable

K_A = 2.0 * np.pi


class DomainError(RuntimeError):
    """Field amplitude reached the hard-wall boundary without an absorber."""


class StepSizeError(ValueError):
    """Time step too large for the strongest local energy scale."""


@dataclass(frozen=True)
class EmitterSpec:
    """Two-level emitter: position (lambda), detuning from cutoff (Omega_r),
    coupling g0 (Omega_r), and non-guided decay (Gamma_0 units)."""

    x: float
    delta: float
    g0: float
    gamma_ng: float = 0.0

    def __post_init__(self):
        if self.g0 < 0:
            raise ValueError("g0 must be >= 0")
        if self.gamma_ng < 0:
            raise ValueError("gamma_ng must be >= 0")


@dataclass(frozen=True)
class PulseSpec:
    """One traveling acoustic potential component.

    shape "constant":       V_a cos(k_a(x - v t))
    shape "ramped":         V_a env(t) cos(k_a(x - v t)), cosine ramps of
                            duration t_on / t_off around a hold of t_hold,
                            starting at t_start
    shape "gaussian":       -V_a cos(k_a(x - v t)) exp(-(x - v t)^2/(2 dx^2)),
                            a short pulse carrying bound states; the envelope
                            center starts at x_start
    direction +1/-1 sets the sign of the propagation velocity v = Omega/k_a.
    """

    va: float
    omega: float
    direction: int = 1
    shape: str = "constant"
    width: float = 0.0  # gaussian envelope width dx, in lambda
    t_start: float = 0.0
    t_on: float = 0.0
    t_hold: float = 0.0
    t_off: float = 0.0
    x_start: float = 0.0

    def __post_init__(self):
        if self.shape not in ("constant", "ramped", "gaussian"):
            raise ValueError(f"unknown envelope shape {self.shape!r}")
        if self.va < 0:
            raise ValueError("va must be >= 0")
        if self.shape == "gaussian" and self.width <= 0:
            raise ValueError("gaussian envelope needs width > 0")
        if self.direction not in (-1, 1):
            raise ValueError("direction must be +1 or -1")

    @property
    def speed(self) -> float:
        return self.direction * self.omega / K_A

    def envelope(self, t: float) -> float:
        """Slow amplitude factor for constant / ramped shapes."""
        if self.shape != "ramped":
            return 1.0
        u = t - self.t_start
        if u < 0 or u > self.t_on + self.t_hold + self.t_off:
            return 0.0
        if u < self.t_on:
            return 0.5 * (1.0 - np.cos(np.pi * u / self.t_on))
        if u < self.t_on + self.t_hold:
            return 1.0
        return 0.5 * (1.0 + np.cos(np.pi * (u - self.t_on - self.t_hold) / self.t_off))

    def potential(self, x: np.ndarray, t: float) -> np.ndarray:
        ph = K_A * self.speed * t
        carrier = np.cos(K_A * x - ph)
        if self.shape == "gaussian":
            center = self.x_start + self.speed * t
            return -self.va * carrier * np.exp(-((x - center) ** 2) / (2.0 * self.width**2))
        return self.va * self.envelope(t) * carrier


@dataclass(frozen=True)
class StaticLattice:
    """Static cosine lattice V_st cos(M k_a x) added to the moving potential."""

    v_st: float
    period_ratio: int = 1


@dataclass(frozen=True)
class SpatialGrid:
    xmin: float
    xmax: float
    n: int

    def __post_init__(self):
        if self.n < 16 or self.xmax <= self.xmin:
            raise ValueError("grid needs n >= 16 and xmax > xmin")

    @property
    def x(self) -> np.ndarray:
        return self.xmin + (self.xmax - self.xmin) * np.arange(self.n) / self.n

    @property
    def dx(self) -> float:
        return (self.xmax - self.xmin) / self.n

    @property
    def k(self) -> np.ndarray:
        return 2.0 * np.pi * np.fft.fftfreq(self.n, d=self.dx)


@dataclass
class ExcitationState:
    """Amplitudes of the single-excitation sector at one instant."""

    c_e: np.ndarray  # complex, one per emitter
    phi: np.ndarray  # complex field amplitude per cell, units 1/sqrt(lambda)
    grid: SpatialGrid
    t: float

    def norm(self) -> float:
        return float(np.sum(np.abs(self.c_e) ** 2) + np.sum(np.abs(self.phi) ** 2) * self.grid.dx)


@dataclass
class ExactTrajectory:
    """Recorded output of `evolve_exact`."""

    t: np.ndarray
    pe: np.ndarray  # (nt, n_emitters)
    norm: np.ndarray
    state: ExcitationState
    snapshot_t: np.ndarray | None = None
    snapshots: np.ndarray | None = None  # |phi|^2, (n_snap, n_cells)
    emitters: tuple = ()


def _total_potential(x, t, pulses, static):
    v = np.zeros_like(x)
    for p in pulses:
        if p.va != 0.0:
            v = v + p.potential(x, t)
    if static is not None and static.v_st != 0.0:
        v = v + static.v_st * np.cos(K_A * static.period_ratio * x)
    return v


def evolve_exact(
    emitters: list[EmitterSpec],
    pulses: list[PulseSpec],
    grid: SpatialGrid,
    dt: float,
    t_final: float,
    static: StaticLattice | None = None,
    record_stride: int = 1,
    snapshot_stride: int = 0,
    absorber: bool = False,
    absorber_width: float = 10.0,
    boundary_tol: float = 3e-3,
    initial: ExcitationState | None = None,
) -> ExactTrajectory:
    """Norm-preserving propagation of the full emitter-field Hamiltonian.

    Second-order symmetric splitting: half local step, exact FFT kinetic
    step, half local step.  The local step applies potential/detuning
    phases for a quarter step, the exact emitter-cell rotation for a half
    step, then phases again.  The field-emitter delta coupling is
    discretized as 1/dx at the nearest cell.
    """
    x = grid.x
    dx = grid.dx
    if dx > 1.0 / 16.0 + 1e-12:
        raise ValueError(f"dx = {dx:.4f} lambda too coarse; need dx <= lambda/16")
    vmax_scale = max(
        [abs(e.delta) for e in emitters]
        + [p.va for p in pulses]
        + ([static.v_st] if static else [])
        + [e.g0 / np.sqrt(dx) for e in emitters]
        + [1e-30]
    )
    if dt * vmax_scale > 0.5:
        raise StepSizeError(
            f"dt*max|H| = {dt * vmax_scale:.3f} > 0.5; reduce dt below "
            f"{0.5 / vmax_scale:.4g}"
        )

    n_step = int(round(t_final / dt))
    cells = [int(round((e.x - grid.xmin) / dx)) % grid.n for e in emitters]
    if len(set(cells)) != len(cells):
        raise ValueError("emitters must sit on distinct grid cells")

    kin = np.exp(-1j * dt * grid.k**2 / K_A**2)
    half = 0.5 * dt
    quarter = 0.25 * dt
    # exact rotation angle for the half-step coupling
    thetas = [e.g0 / np.sqrt(dx) * half for e in emitters]
    cos_t = [np.cos(th) for th in thetas]
    sin_t = [np.sin(th) for th in thetas]
    det_phase = [np.exp(-1j * e.delta * quarter) for e in emitters]

    mask = None
    if absorber:
        mask = np.ones(grid.n)
        w = absorber_width
        left = x < grid.xmin + w
        right = x > grid.xmax - w
        mask[left] = np.sin(0.5 * np.pi * (x[left] - grid.xmin) / w) ** 2
        mask[right] = np.sin(0.5 * np.pi * (grid.xmax - x[right]) / w) ** 2

    if initial is None:
        c = np.zeros(len(emitters), dtype=complex)
        c[0] = 1.0
        phi = np.zeros(grid.n, dtype=complex)
    else:
        c = initial.c_e.astype(complex).copy()
        phi = initial.phi.astype(complex).copy()

    edge = max(2, int(round(2.0 / dx)))

    def local_half(t_mid):
        nonlocal phi, c
        vpot = np.exp(-1j * quarter * _total_potential(x, t_mid, pulses, static))
        phi *= vpot
        for i in range(len(emitters)):
            c[i] *= det_phase[i]
        for i, j in enumerate(cells):
            a = c[i]
            b = phi[j] * np.sqrt(dx)
            c[i] = cos_t[i] * a - 1j * sin_t[i] * b
            phi[j] = (-1j * sin_t[i] * a + cos_t[i] * b) / np.sqrt(dx)
        phi *= vpot
        for i in range(len(emitters)):
            c[i] *= det_phase[i]

    rec_t, rec_pe, rec_norm = [], [], []
    snap_t, snaps = [], []

    def record(step, t_now):
        if step % record_stride == 0 or step == n_step:
            rec_t.append(t_now)
            rec_pe.append(np.abs(c) ** 2)
            rec_norm.append(
                float(np.sum(np.abs(c) ** 2) + np.sum(np.abs(phi) ** 2) * dx)
            )
        if snapshot_stride and (step % snapshot_stride == 0 or step == n_step):
            snap_t.append(t_now)
            snaps.append(np.abs(phi) ** 2)

    record(0, 0.0)
    t_now = 0.0
    for step in range(1, n_step + 1):
        local_half(t_now + quarter)
        phi = np.fft.ifft(kin * np.fft.fft(phi))
        local_half(t_now + dt - quarter)
        if mask is not None:
            phi *= mask
        t_now = step * dt
        record(step, t_now)
        if mask is None and step % 50 == 0:
            tail = max(np.abs(phi[:edge]).max(), np.abs(phi[-edge:]).max())
            if tail * np.sqrt(dx) > boundary_tol:
                raise DomainError(
                    f"field reached the domain boundary at t = {t_now:.1f}; "
                    "enlarge the grid or enable the absorber"
                )

    state = ExcitationState(c_e=c, phi=phi, grid=grid, t=t_now)
    return ExactTrajectory(
        t=np.asarray(rec_t),
        pe=np.asarray(rec_pe),
        norm=np.asarray(rec_norm),
        state=state,
        snapshot_t=np.asarray(snap_t) if snapshot_stride else None,
        snapshots=np.asarray(snaps) if snapshot_stride else None,
        emitters=tuple(emitters),
    )


@dataclass
class QuasiStaticResult:
    """Markov decay with rates following the instantaneous envelope."""

    t: np.ndarray
    pe: np.ndarray
    gamma_r: np.ndarray
    gamma_l: np.ndarray
    phi_r: np.ndarray  # outgoing field amplitude just right of the emitter
    phi_l: np.ndarray


def evolve_quasistatic(
    emitter: EmitterSpec,
    pulses: list[PulseSpec],
    table_right: RateTable,
    dt: float,
    t_final: float,
    table_left: RateTable | None = None,
) -> QuasiStaticResult:
    """Integrate c_e' = (-i delta - Gamma(t)/2) c_e with table lookups.

    `table_right` serves pulses moving along +x; pulses moving along -x
    use `table_left` with the roles of Gamma_R/Gamma_L mirrored (defaults
    to the same table, valid when both directions share |V_a|, Omega).
    Emitted fields follow the input-output relation with the dominant
    resonance velocity of the lookup table.
    """
    if table_left is None:
        table_left = table_right
    gamma0 = GAMMA0_UNIT * emitter.g0**2
    nt = int(round(t_final / dt)) + 1
    ts = np.arange(nt) * dt
    pe = np.empty(nt)
    gr_t = np.empty(nt)
    gl_t = np.empty(nt)
    phi_r = np.zeros(nt, dtype=complex)
    phi_l = np.zeros(nt, dtype=complex)
    c = 1.0 + 0.0j

    def rates(t):
        gr = gl = 0.0
        for p in pulses:
            v_now = p.va * p.envelope(t)
            if p.direction > 0:
                a, b = table_right.rates_at(v_now)
            else:
                b, a = table_left.rates_at(v_now)
            gr += a
            gl += b
        return gr * gamma0, gl * gamma0

    k_dom = float(np.max(np.abs(table_right.k_dominant_r)))
    v_dom = max(2.0 * k_dom / K_A**2, 1e-12)  # dominant-resonance group speed
    for i, t in enumerate(ts):
        gr, gl = rates(t)
        pe[i] = abs(c) ** 2
        gr_t[i], gl_t[i] = gr, gl
        phi_r[i] = -1j * np.sqrt(max(gr, 0.0) / v_dom) * c
        phi_l[i] = -1j * np.sqrt(max(gl, 0.0) / v_dom) * c
        if i + 1 < nt:
            # midpoint-rate exponential update of the slow envelope
            gr2, gl2 = rates(t + 0.5 * dt)
            c *= np.exp((-1j * emitter.delta - 0.5 * (gr2 + gl2)) * dt)
    return QuasiStaticResult(t=ts, pe=pe, gamma_r=gr_t, gamma_l=gl_t, phi_r=phi_r, phi_l=phi_l)


@dataclass
class BoundStateSet:
    """Bound states of the pulse potential in its co-moving frame."""

    energies: np.ndarray  # relative to the cutoff, E_r units
    wavefunctions: np.ndarray  # (n_states, n_cells), unit L2 norm
    x: np.ndarray
    dx: float
    speed: float
    continuum_edge: float

    def __len__(self):
        return len(self.energies)


def comoving_bound_states(
    pulse: PulseSpec,
    speed: float | None = None,
    span: float | None = None,
    points_per_lambda: int = 48,
    n_states: int = 8,
) -> BoundStateSet:
    """Diagonalize -(1/k_a^2) phi'' + V(x) phi + i v phi' on a finite grid.

    V is the gaussian-envelope pulse potential at t = 0 centered at the
    origin; the first-derivative boost term uses a centered difference,
    which keeps the matrix Hermitian.  States below the boosted continuum
    edge -m* v^2/2 are returned (possibly none).
    """
    if pulse.shape != "gaussian":
        raise ValueError("bound states are defined for gaussian pulses")
    v = pulse.speed if speed is None else speed
    if span is None:
        span = max(4.0 * pulse.width + 4.0, 8.0)
    n = int(round(2 * span * points_per_lambda))
    x = np.linspace(-span, span, n, endpoint=False)
    h = x[1] - x[0]
    vx = -pulse.va * np.cos(K_A * x) * np.exp(-(x**2) / (2.0 * pulse.width**2))
    c2 = 1.0 / (K_A**2 * h**2)
    bands = np.zeros((2, n), dtype=complex)
    bands[1, :] = 2.0 * c2 + vx
    bands[0, 1:] = -c2 + 1j * v / (2.0 * h)
    nmax = min(n_states, n - 1)
    w, vecs = eig_banded(bands, lower=False, select="i", select_range=(0, nmax - 1))
    edge = -(K_A**2) * v**2 / 4.0  # -m* v^2 / 2 with m* = k_a^2 / 2
    keep = w < edge - 1e-12
    vecs = vecs[:, keep]
    vecs = vecs / np.sqrt(np.sum(np.abs(vecs) ** 2, axis=0) * h)
    return BoundStateSet(
        energies=w[keep], wavefunctions=vecs.T, x=x, dx=h, speed=v, continuum_edge=edge
    )


@dataclass
class MovingCavityResult:
    t: np.ndarray
    ce: np.ndarray  # (nt, n_emitters)
    c0: np.ndarray  # photon amplitude in the carried bound state
    transfer: float  # |c_e^(last)|^2 at the final time


def rabi_area(g0: float, bound: BoundStateSet, state: int = 0) -> float:
    """Vacuum Rabi angle accumulated in one pulse passage, 2 g0 int|phi_0|/v.

    A value of pi means one complete emitter <-> photon swap.
    """
    prof = np.abs(bound.wavefunctions[state])
    return 2.0 * g0 * float(prof.sum() * bound.dx) / abs(bound.speed)


def moving_cavity_evolve(
    emitters: list[EmitterSpec],
    bound: BoundStateSet,
    t_final: float,
    pulse_x0: float,
    state: int = 0,
    rtol: float = 1e-10,
    n_record: int = 2001,
    warn_validity: bool = True,
) -> MovingCavityResult:
    """Single-mode model: emitters exchanging the photon carried by the pulse.

    Amplitude equations i c_e^i' = delta_i c_e^i + g_i(t)* c_0 and
    i c_0' = E_0 c_0 + sum_i g_i(t) c_e^i with g_i(t) = g0 phi_0(x_i -
    x0(t)); x0(t) = pulse_x0 + v t.  The pulse must clear the last emitter
    by t_final.
    """
    if len(bound) <= state:
        raise ValueError("requested bound state not present")
    e0 = float(bound.energies[state].real)
    phi0 = bound.wavefunctions[state]
    v = bound.speed
    xs = np.array([e.x for e in emitters])
    if pulse_x0 + v * t_final < xs.max() + 0.5 * bound.x.max():
        raise ValueError("t_final too short: the pulse does not clear the last emitter")
    if warn_validity and len(bound) > state + 1:
        gap = float(np.min(np.abs(bound.energies[np.arange(len(bound)) != state] - e0)))
        gmax = max(e.g0 for e in emitters) * float(np.abs(phi0).max())
        if gmax > 0.5 * gap:
            import warnings

            warnings.warn(
                f"single-mode model marginal: g_max = {gmax:.3g} vs level gap {gap:.3g}",
                stacklevel=2,
            )

    deltas = np.array([e.delta for e in emitters])
    g0s = np.array([e.g0 for e in emitters])

    def g_t(t):
        pos = xs - (pulse_x0 + v * t)
        re = np.interp(pos, bound.x, phi0.real, left=0.0, right=0.0)
        im = np.interp(pos, bound.x, phi0.imag, left=0.0, right=0.0)
        return g0s * (re + 1j * im)

    def rhs(t, y):
        ce = y[: len(emitters)]
        c0 = y[len(emitters)]
        g = g_t(t)
        dce = -1j * (deltas * ce + np.conj(g) * c0)
        dc0 = -1j * (e0 * c0 + np.sum(g * ce))
        return np.concatenate([dce, [dc0]])

    y0 = np.zeros(len(emitters) + 1, dtype=complex)
    y0[0] = 1.0
    ts = np.linspace(0.0, t_final, n_record)
    sol = solve_ivp(rhs, (0.0, t_final), y0, t_eval=ts, rtol=rtol,
                    atol=rtol * 1e-2, method="DOP853")
    ce = sol.y[: len(emitters)].T
    c0 = sol.y[len(emitters)]
    return MovingCavityResult(
        t=ts, ce=ce, c0=c0, transfer=float(np.abs(ce[-1, -1]) ** 2)
    )


def transfer_scan(
    va_grid: np.ndarray,
    width_grid: np.ndarray,
    g0: float,
    omega: float,
    separation: float,
    retune: bool = True,
    delta_fixed: float | None = None,
    margin: float = 10.0,
) -> np.ndarray:
    """Transfer probability p_e^(2) over (V_a, pulse width) cells.

    Each cell solves the cell's bound state, retunes both emitters to its
    energy (default; set `retune=False` with `delta_fixed` to keep a
    global detuning), and runs the moving-cavity transfer across
    `separation`.  Cells without a bound state report 0.
    """
    out = np.zeros((len(va_grid), len(width_grid)))
    for i, va in enumerate(va_grid):
        for j, w in enumerate(width_grid):
            pulse = PulseSpec(va=float(va), omega=omega, shape="gaussian", width=float(w))
            bound = comoving_bound_states(pulse, points_per_lambda=32)
            if len(bound) == 0:
                continue
            delta = float(bound.energies[0].real) if retune else float(delta_fixed)
            emitters = [
                EmitterSpec(x=0.0, delta=delta, g0=g0),
                EmitterSpec(x=separation, delta=delta, g0=g0),
            ]
            x0 = -(margin + 4.0 * w)
            t_f = (separation + 2.0 * (margin + 4.0 * w)) / abs(pulse.speed)
            res = moving_cavity_evolve(emitters, bound, t_f, x0, rtol=1e-8,
                                       n_record=2, warn_validity=False)
            out[i, j] = res.transfer
    return out
