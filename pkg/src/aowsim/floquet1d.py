"""Quasi-energy bands and directional emission rates for a 1D modulated guide.

The traveling index lattice V_a*cos(k_a x - Omega t) is diagonalized in a
locked space-time plane-wave basis exp(i l (k_a x - Omega t)); the combined
static + traveling lattice (period ratio M = k_st/k_a) uses independent
temporal (l) and spatial (nu) indices.  All quantities are in recoil units
(k_a = 2*pi, Omega_r = 1), energies measured from the unperturbed cutoff.

Emission bookkeeping: every raw eigenvalue branch j of the truncated
matrix is scanned.  For the homogeneous guide, branch j at quasimomentum k
resonates with an emitter detuned by `delta` whenever

    omega_j(k) + m*Omega = delta

for an integer shift m; the resonance carries the component weight
|u_j^(m)(k)|^2 and radiates at the unfolded wavevector K = k + m*k_a.
This enumerates each (band, temporal harmonic) pair exactly once and is
algebraically identical to summing raw eigenvalues with l = 0 weights over
the extended momentum axis.  For the superlattice the temporal copies
already appear as separate raw branches at fixed k, so only m = 0 is
scanned there, with couplings g * sum_nu u^(0,nu) exp(i k_a nu x) taken at
the emitter position x.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .scales import ConvergenceError

K_A = 2.0 * np.pi
GAMMA0_UNIT = 4.0 * np.pi  # Gamma_0 for g0 = 1 in recoil units

DEFAULT_NK = 2048
DEFAULT_VFLOOR = 1e-3  # |v_g| below this (lambda*Omega_r) flags a resonance
_EDGE_WEIGHT_MAX = 0.5  # eigenvectors holding more weight than this on the
                        # outer two basis indices are truncation artifacts


class TruncationError(ConvergenceError):
    """Certification between successive cutoffs failed."""


@dataclass(frozen=True)
class LatticeSpec1D:
    """Traveling lattice (V_a, Omega) plus optional static lattice V_st.

    `period_ratio` is M = k_st/k_a (integer >= 1); `emitter_x` only matters
    for V_st != 0, where couplings depend on the position inside the static
    lattice.  Units: V_a, V_st in E_r; Omega in Omega_r; x in lambda.
    """

    va: float
    omega: float
    v_st: float = 0.0
    period_ratio: int = 1
    emitter_x: float = 0.0

    def __post_init__(self):
        if self.va < 0 or self.v_st < 0:
            raise ValueError("potential depths must be >= 0")
        if int(self.period_ratio) != self.period_ratio or self.period_ratio < 1:
            raise ValueError("period_ratio must be an integer >= 1")

    @property
    def is_superlattice(self) -> bool:
        return self.v_st != 0.0


def build_floquet_matrix(k: float, spec: LatticeSpec1D, lmax: int) -> np.ndarray:
    """(2*lmax+1)-dim matrix of the traveling-wave problem at quasimomentum k.

    Diagonal (l + k/k_a)^2 - Omega*l, off-diagonal V_a/2 on |l-l'| = 1.
    """
    ell = np.arange(-lmax, lmax + 1)
    h = np.diag((ell + k / K_A) ** 2 - spec.omega * ell)
    if spec.va != 0.0:
        off = np.full(2 * lmax, 0.5 * spec.va)
        h += np.diag(off, 1) + np.diag(off, -1)
    return h


def build_superlattice_matrix(
    k: float, spec: LatticeSpec1D, lmax: int, numax: int
) -> np.ndarray:
    """Matrix of the combined static + traveling lattice, indexed by (l, nu).

    Diagonal (nu + k/k_a)^2 - Omega*l; V_st/2 couples |nu - nu'| = M at
    equal l; V_a/2 couples l - l' = nu - nu' = +-1.  Flattened with nu
    fastest: index = (l + lmax)*(2*numax + 1) + (nu + numax).
    """
    if numax < spec.period_ratio:
        raise ValueError("numax must be >= period_ratio")
    nl, nnu = 2 * lmax + 1, 2 * numax + 1
    ell = np.repeat(np.arange(-lmax, lmax + 1), nnu)
    nu = np.tile(np.arange(-numax, numax + 1), nl)
    dim = nl * nnu
    h = np.zeros((dim, dim))
    h[np.arange(dim), np.arange(dim)] = (nu + k / K_A) ** 2 - spec.omega * ell
    m = spec.period_ratio
    same_l = ell[:, None] == ell[None, :]
    dnu = nu[:, None] - nu[None, :]
    if spec.v_st != 0.0:
        h[same_l & (np.abs(dnu) == m)] = 0.5 * spec.v_st
    if spec.va != 0.0:
        dl = ell[:, None] - ell[None, :]
        h[(dl == dnu) & (np.abs(dl) == 1)] = 0.5 * spec.va
    return h


def _stacked_matrices(ks: np.ndarray, spec: LatticeSpec1D, lmax: int, numax: int | None):
    """Matrices for all k at once, shape (nk, dim, dim)."""
    if not spec.is_superlattice:
        nl = 2 * lmax + 1
        ell = np.arange(-lmax, lmax + 1)
        h = np.zeros((len(ks), nl, nl))
        idx = np.arange(nl)
        h[:, idx, idx] = (ell[None, :] + ks[:, None] / K_A) ** 2 - spec.omega * ell[None, :]
        if spec.va != 0.0:
            h[:, idx[:-1], idx[1:]] = 0.5 * spec.va
            h[:, idx[1:], idx[:-1]] = 0.5 * spec.va
        return h
    base = build_superlattice_matrix(0.0, spec, lmax, numax)
    nl, nnu = 2 * lmax + 1, 2 * numax + 1
    nu = np.tile(np.arange(-numax, numax + 1), nl)
    h = np.broadcast_to(base, (len(ks),) + base.shape).copy()
    idx = np.arange(base.shape[0])
    ell = np.repeat(np.arange(-lmax, lmax + 1), nnu)
    h[:, idx, idx] = (nu[None, :] + ks[:, None] / K_A) ** 2 - spec.omega * ell[None, :]
    return h


@dataclass
class FloquetBands:
    """Eigen-decomposition of the lattice problem on a quasimomentum grid.

    `energies[i, j]` is the j-th ascending eigenvalue at `k_grid[i]`;
    `components[i, :, j]` the matching eigenvector.  `ell_index` /
    `nu_index` give the temporal / spatial harmonic of each basis entry
    (identical for the homogeneous guide).
    """

    spec: LatticeSpec1D
    k_grid: np.ndarray
    energies: np.ndarray
    components: np.ndarray | None
    lmax: int
    numax: int | None
    ell_index: np.ndarray
    nu_index: np.ndarray
    certificate: dict = field(default_factory=dict)

    def eigenpair(self, k: float, j: int) -> tuple[float, np.ndarray]:
        """Eigenvalue and eigenvector of branch j at arbitrary k (re-diagonalized)."""
        h = _build_single(k, self.spec, self.lmax, self.numax)
        w, v = np.linalg.eigh(h)
        return w[j], v[:, j]

    def branch_energy(self, k: float, j: int) -> float:
        h = _build_single(k, self.spec, self.lmax, self.numax)
        return float(np.linalg.eigvalsh(h)[j])

    @property
    def n_branches(self) -> int:
        return self.energies.shape[1]

    def l0_weight(self, i_k: int, j: int) -> float:
        """Weight on the l = 0 Floquet components of a stored eigenvector."""
        u = self.components[i_k, :, j]
        return float(np.sum(np.abs(u[self.ell_index == 0]) ** 2))


def _build_single(k, spec, lmax, numax):
    if spec.is_superlattice:
        return build_superlattice_matrix(k, spec, lmax, numax)
    return build_floquet_matrix(k, spec, lmax)


def _component_indices(spec, lmax, numax):
    if spec.is_superlattice:
        nnu = 2 * numax + 1
        ell = np.repeat(np.arange(-lmax, lmax + 1), nnu)
        nu = np.tile(np.arange(-numax, numax + 1), 2 * lmax + 1)
    else:
        ell = np.arange(-lmax, lmax + 1)
        nu = ell
    return ell, nu


def _weighted_lowest(k, spec, lmax, numax, n_check):
    """Lowest eigenvalues carrying real emitter coupling.

    For the superlattice the raw spectrum contains temporal copies at
    -Omega*l all the way to the truncation edge, which move with the
    cutoff; only eigenvalues with weight on the l = 0 components are
    physically anchored and can be compared across cutoffs.
    """
    h = _build_single(k, spec, lmax, numax)
    if not spec.is_superlattice:
        return np.linalg.eigvalsh(h)[:n_check]
    w, v = np.linalg.eigh(h)
    ell, _ = _component_indices(spec, lmax, numax)
    w0 = np.sum(np.abs(v[ell == 0, :]) ** 2, axis=0)
    sel = np.nonzero(w0 > 0.1)[0]
    return w[sel[:n_check]]


def _certify(spec, lmax, numax, n_check: int = 5, n_sample: int = 9, tol: float = 1e-8):
    """Compare the lowest physically weighted eigenvalues between cutoffs."""
    ks = np.linspace(-0.5 * K_A, 0.5 * K_A, n_sample, endpoint=False)
    if spec.is_superlattice:
        lmax2, numax2 = lmax + 2, numax + spec.period_ratio
    else:
        lmax2, numax2 = lmax + 2, None
    worst = 0.0
    for k in ks:
        w1 = _weighted_lowest(k, spec, lmax, numax, n_check)
        w2 = _weighted_lowest(k, spec, lmax2, numax2, n_check)
        n = min(len(w1), len(w2))
        worst = max(worst, float(np.max(np.abs(w1[:n] - w2[:n])
                                        / np.maximum(np.abs(w2[:n]), 1.0))))
    return worst <= tol, worst


def quasi_energy_bands(
    spec: LatticeSpec1D,
    k_grid: np.ndarray | None = None,
    lmax: int | None = None,
    numax: int | None = None,
    nk: int = DEFAULT_NK,
    store_components: bool | None = None,
    certify: bool = True,
) -> FloquetBands:
    """Diagonalize the lattice problem over the Brillouin zone.

    If `lmax` is None the cutoff starts at 8 and doubles until the lowest
    five eigenvalues agree with the next-larger cutoff to 1e-8 relative.
    """
    if k_grid is None:
        k_grid = (np.arange(nk) / nk - 0.5) * K_A
    k_grid = np.asarray(k_grid, dtype=float)

    if spec.is_superlattice and numax is None:
        numax = max(3 * spec.period_ratio, 9)
    adaptive = lmax is None
    if adaptive:
        lmax = 8
    cert: dict = {}
    if certify:
        for _ in range(5):
            ok, worst = _certify(spec, lmax, numax)
            cert = {"lmax": lmax, "numax": numax, "max_rel_discrepancy": worst}
            if ok:
                break
            if not adaptive:
                raise TruncationError(
                    f"bands not converged at lmax={lmax}: discrepancy {worst:.3e}"
                )
            if spec.is_superlattice:
                lmax += 4
                numax += spec.period_ratio + 2
            else:
                lmax *= 2
        else:
            raise TruncationError(
                f"bands not converged up to lmax={lmax}: discrepancy {cert['max_rel_discrepancy']:.3e}"
            )
    else:
        cert = {"lmax": lmax, "numax": numax, "max_rel_discrepancy": None}

    if store_components is None:
        store_components = not spec.is_superlattice

    dim = (2 * lmax + 1) * (1 if not spec.is_superlattice else 2 * numax + 1)
    chunk = max(1, int(2.0e8 / (16 * dim * dim)))  # cap ~200 MB of transient matrices
    energies = np.empty((len(k_grid), dim))
    comps = np.empty((len(k_grid), dim, dim)) if store_components else None
    for i0 in range(0, len(k_grid), chunk):
        sl = slice(i0, min(i0 + chunk, len(k_grid)))
        hs = _stacked_matrices(k_grid[sl], spec, lmax, numax)
        if store_components:
            w, v = np.linalg.eigh(hs)
            energies[sl], comps[sl] = w, v
        else:
            energies[sl] = np.linalg.eigvalsh(hs)

    ell, nu = _component_indices(spec, lmax, numax)
    return FloquetBands(
        spec=spec,
        k_grid=k_grid,
        energies=energies,
        components=comps,
        lmax=lmax,
        numax=numax,
        ell_index=ell,
        nu_index=nu,
        certificate=cert,
    )


def _hf_velocity(u: np.ndarray, k: float, nu_index: np.ndarray) -> float:
    """Hellmann-Feynman group velocity sum_i |u_i|^2 * (2/k_a)(nu_i + k/k_a)."""
    return float(np.sum(np.abs(u) ** 2 * (2.0 / K_A) * (nu_index + k / K_A)))


def group_velocity(bands: FloquetBands, j: int, k: float) -> float:
    """d(omega_j)/dk at k, in lambda*Omega_r units."""
    _, u = bands.eigenpair(k, j)
    return _hf_velocity(u, k, bands.nu_index)


@dataclass(frozen=True)
class Resonance:
    """One resonant emission channel.

    `k` is the quasimomentum inside the zone, `ell` the temporal shift and
    `k_unfolded = k + ell*k_a` the physical wavevector carried by the
    emitted photon.  `coupling` is gbar in units of g (multiply by g0 for
    physical units); `weight = |coupling|^2`.
    """

    k: float
    ell: int
    band_index: int
    weight: float
    coupling: complex
    vg: float
    flagged: bool

    @property
    def k_unfolded(self) -> float:
        return self.k + self.ell * K_A


@dataclass
class ResonanceSet:
    """All resonances of one emitter detuning against one band structure."""

    delta: float
    entries: list[Resonance]
    spec: LatticeSpec1D
    velocity_floor: float

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    @property
    def flagged(self) -> list[Resonance]:
        return [r for r in self.entries if r.flagged]


def _edge_weight(u: np.ndarray, ell_index: np.ndarray, lmax: int) -> float:
    mask = np.abs(ell_index) >= lmax - 1
    return float(np.sum(np.abs(u[mask]) ** 2))


def _bisect_branch(bands: FloquetBands, j: int, target: float, a: float, b: float,
                   fa: float, tol: float = 1e-10) -> float:
    """Bisect omega_j(k) = target inside [a, b] to |d omega| < tol."""
    for _ in range(200):
        c = 0.5 * (a + b)
        fc = bands.branch_energy(c, j) - target
        if fc == 0.0 or (b - a) < 1e-15:
            return c
        if fa * fc < 0.0:
            b = c
        else:
            a, fa = c, fc
        if abs(fc) < tol and (b - a) < 1e-9:
            return c
    return 0.5 * (a + b)


def find_resonances(
    delta: float,
    bands: FloquetBands,
    velocity_floor: float = DEFAULT_VFLOOR,
    weight_cut: float = 1e-12,
) -> ResonanceSet:
    """Solve omega_j(k) + m*Omega = delta over all branches and shifts.

    Brackets sign changes on the band grid and refines each crossing by
    bisection to 1e-10.  Branch/shift pairs whose Floquet weight
    |u_j^(m)|^2 falls below `weight_cut` are dropped; eigenvectors
    concentrated on the truncation edge are discarded as artifacts.
    Resonances with |v_g| below `velocity_floor` are flagged, not removed.
    """
    spec = bands.spec
    ks = bands.k_grid
    evs = bands.energies
    entries: list[Resonance] = []
    shifts = [0] if spec.is_superlattice else range(-bands.lmax, bands.lmax + 1)
    lo_all, hi_all = evs.min(), evs.max()

    for m in shifts:
        target = delta - m * spec.omega
        if target < lo_all - 1e-12 or target > hi_all + 1e-12:
            continue
        for j in range(bands.n_branches):
            col = evs[:, j]
            if target < col.min() - 1e-12 or target > col.max() + 1e-12:
                continue
            y = col - target
            y = np.where(y == 0.0, -1e-300, y)
            cross = np.nonzero(y[:-1] * y[1:] < 0.0)[0]
            # closing segment between the last grid point and k_min + k_a is
            # intentionally not scanned: branch values there belong to the
            # next zone (they differ by Omega), handled by the m-shifts
            for i0 in cross:
                kr = _bisect_branch(bands, j, target, ks[i0], ks[i0 + 1], y[i0])
                _, u = bands.eigenpair(kr, j)
                if _edge_weight(u, bands.ell_index, bands.lmax) > _EDGE_WEIGHT_MAX:
                    continue
                if spec.is_superlattice:
                    sel = bands.ell_index == 0
                    amp = complex(
                        np.sum(u[sel] * np.exp(1j * K_A * bands.nu_index[sel] * spec.emitter_x))
                    )
                else:
                    amp = complex(u[bands.lmax + m]) if abs(m) <= bands.lmax else 0.0
                wt = abs(amp) ** 2
                if wt < weight_cut:
                    continue
                vg = _hf_velocity(u, kr, bands.nu_index)
                entries.append(
                    Resonance(
                        k=kr,
                        ell=m,
                        band_index=j,
                        weight=wt,
                        coupling=amp,
                        vg=vg,
                        flagged=abs(vg) < velocity_floor,
                    )
                )
    entries.sort(key=lambda r: (r.k_unfolded, r.band_index))
    return ResonanceSet(delta=delta, entries=entries, spec=spec, velocity_floor=velocity_floor)


@dataclass(frozen=True)
class EmissionRates:
    """Directional rates in Gamma_0 units and D = (Gamma_R - Gamma_L)/Gamma_0."""

    gamma_r: float
    gamma_l: float

    @property
    def directionality(self) -> float:
        return self.gamma_r - self.gamma_l

    @property
    def total(self) -> float:
        return self.gamma_r + self.gamma_l


def emission_rates(
    res: ResonanceSet, g0: float = 1.0, include_flagged: bool = False
) -> EmissionRates:
    """Golden-rule rates Gamma_{R,L} = sum_mu |g u_mu|^2/|v_mu|, in Gamma_0 units.

    An empty resonance set is a valid in-gap result (both rates zero).
    Flagged near-divergent resonances are rejected unless
    `include_flagged` (the Born-Markov rate is unreliable there).
    """
    if res.flagged and not include_flagged:
        raise ValueError(
            f"{len(res.flagged)} resonance(s) flagged near-divergent "
            f"(|v_g| < {res.velocity_floor}); Born-Markov rate invalid"
        )
    gamma0 = GAMMA0_UNIT * g0**2
    gr = gl = 0.0
    for r in res.entries:
        contrib = g0**2 * r.weight / abs(r.vg)
        if r.vg > 0.0:
            gr += contrib
        elif r.vg < 0.0:
            gl += contrib
    return EmissionRates(gamma_r=gr / gamma0, gamma_l=gl / gamma0)


def directionality_map(
    deltas: np.ndarray,
    va_grid: np.ndarray | None = None,
    omega_grid: np.ndarray | None = None,
    *,
    va: float | None = None,
    omega: float | None = None,
    d_clip: float = 10.0,
    lmax: int | None = None,
    nk: int = DEFAULT_NK,
) -> tuple[np.ndarray, np.ndarray]:
    """D on a (delta x V_a) or (delta x Omega) grid.

    Cells without any resonance give D = 0 (outside the modified band);
    |D| is clipped at `d_clip`, matching the breakdown of exponential
    decay near quasi-band edges.  Returns (D, flagged) arrays of shape
    (len(deltas), len(second axis)); `flagged` marks clipped or
    near-divergent cells.
    """
    if (va_grid is None) == (omega_grid is None):
        raise ValueError("exactly one of va_grid / omega_grid must be given")
    if va_grid is not None:
        if omega is None:
            raise ValueError("fixed omega required with va_grid")
        seconds = np.asarray(va_grid, dtype=float)
        specs = [LatticeSpec1D(va=v, omega=float(omega)) for v in seconds]
    else:
        if va is None:
            raise ValueError("fixed va required with omega_grid")
        seconds = np.asarray(omega_grid, dtype=float)
        specs = [LatticeSpec1D(va=float(va), omega=o) for o in seconds]

    deltas = np.asarray(deltas, dtype=float)
    d_out = np.zeros((len(deltas), len(seconds)))
    flags = np.zeros_like(d_out, dtype=bool)
    for col, spec in enumerate(specs):
        d_col, f_col = _dmap_column(spec, deltas, d_clip, lmax, nk)
        d_out[:, col] = d_col
        flags[:, col] = f_col
    return d_out, flags


def _dmap_column(spec, deltas, d_clip, lmax, nk):
    """One fixed-lattice column of the directionality map."""
    d_col = np.zeros(len(deltas))
    f_col = np.zeros(len(deltas), dtype=bool)
    if spec.va == 0.0:
        return d_col, f_col  # symmetric unperturbed guide
    bands = quasi_energy_bands(spec, lmax=lmax, nk=nk)
    for i, d in enumerate(deltas):
        res = find_resonances(d, bands)
        if not res.entries:
            continue
        rates = emission_rates(res, include_flagged=True)
        val = rates.directionality
        f_col[i] = bool(res.flagged) or abs(val) > d_clip
        d_col[i] = float(np.clip(val, -d_clip, d_clip))
    return d_col, f_col


@dataclass
class RateTable:
    """Gamma_{R,L}(V_a) at fixed (Omega, delta), for quasi-static lookups.

    Rates are in Gamma_0 units of the g0 supplied at build time; the
    dominant unfolded wavevectors are kept for propagation phases.
    """

    va_grid: np.ndarray
    gamma_r: np.ndarray
    gamma_l: np.ndarray
    k_dominant_r: np.ndarray
    k_dominant_l: np.ndarray
    omega: float
    delta: float
    g0: float

    def rates_at(self, va: float) -> tuple[float, float]:
        if va < self.va_grid[0] - 1e-12 or va > self.va_grid[-1] + 1e-12:
            raise ValueError(
                f"V_a = {va} outside rate table range "
                f"[{self.va_grid[0]}, {self.va_grid[-1]}]"
            )
        return (
            float(np.interp(va, self.va_grid, self.gamma_r)),
            float(np.interp(va, self.va_grid, self.gamma_l)),
        )


def build_rate_table(
    va_grid: np.ndarray,
    omega: float,
    delta: float,
    g0: float = 1.0,
    lmax: int | None = None,
    nk: int = DEFAULT_NK,
) -> RateTable:
    va_grid = np.asarray(va_grid, dtype=float)
    gr = np.zeros(len(va_grid))
    gl = np.zeros(len(va_grid))
    kr = np.zeros(len(va_grid))
    kl = np.zeros(len(va_grid))
    for i, v in enumerate(va_grid):
        if v == 0.0 and delta < 0:
            continue  # in gap, no decay
        spec = LatticeSpec1D(va=v, omega=omega)
        bands = quasi_energy_bands(spec, lmax=lmax, nk=nk)
        res = find_resonances(delta, bands)
        rates = emission_rates(res, g0=g0, include_flagged=True)
        gr[i], gl[i] = rates.gamma_r, rates.gamma_l
        right = [r for r in res.entries if r.vg > 0]
        left = [r for r in res.entries if r.vg < 0]
        if right:
            kr[i] = max(right, key=lambda r: r.weight / abs(r.vg)).k_unfolded
        if left:
            kl[i] = max(left, key=lambda r: r.weight / abs(r.vg)).k_unfolded
    return RateTable(
        va_grid=va_grid, gamma_r=gr, gamma_l=gl, k_dominant_r=kr, k_dominant_l=kl,
        omega=omega, delta=delta, g0=g0,
    )
