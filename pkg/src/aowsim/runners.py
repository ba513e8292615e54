"""Subcommand implementations: compute, then write CSV + JSON sidecar.

Each runner takes (params, outdir, name, threads) and returns the sidecar
dict it wrote.  Output layout: <outdir>/<subcommand>/<name>*.csv plus one
<outdir>/<subcommand>/<name>.json.  Everything is deterministic; grid
sweeps are data-parallel over cells with a fixed assembly order.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from . import cascade as cas
from . import dynamics1d as d1
from . import floquet1d as f1
from . import floquet2d as f2
from . import scales
from .csvio import write_csv, write_sidecar

K_A_VAL = 2.0 * np.pi


def _grid(spec) -> np.ndarray:
    """Expand {start, stop, n} to a linspace; passthrough for lists."""
    if isinstance(spec, dict):
        return np.linspace(spec["start"], spec["stop"], int(spec["n"]))
    return np.asarray(spec, dtype=float)


def _sidecar_base(subcommand: str, params: dict) -> dict:
    return {
        "subcommand": subcommand,
        "parameters": params,
        "code_version": __version__,
    }


def _finish(outdir: Path, sub: str, name: str, sidecar: dict) -> dict:
    write_sidecar(outdir / sub / f"{name}.json", sidecar)
    return sidecar


# ---------------------------------------------------------------- scales

def run_scales(params: dict, outdir: Path, name: str, threads: int = 1) -> dict:
    mode = params.get("mode", "table")
    sub = "scales"
    side = _sidecar_base(sub, params)
    mats = scales.load_materials()
    if mode == "table":
        rows = []
        for mat_name in params["materials"]:
            for lam_um in params["wavelengths_um"]:
                sp = scales.derive_scales(
                    mats[mat_name], lam_um * 1e-6, params.get("g0_ratio", 0.0)
                )
                rows.append((
                    mat_name, lam_um,
                    sp.omega_acoustic / (2e9 * np.pi),
                    sp.omega_r / (2e9 * np.pi),
                    sp.omega_ratio, sp.va_ratio, sp.gamma_0,
                ))
        write_csv(outdir / sub / f"{name}.csv",
                  ["material", "lambda_um", "omega_ghz", "omega_r_ghz",
                   "omega_over_omega_r", "va_over_er", "gamma0_rad_s"], rows)
        side["files"] = [f"{name}.csv"]
    elif mode == "miniband":
        mat = mats[params["material"]]
        m_bare = 2 * np.pi * mat.optical_frequency_hz * scales.HBAR \
            * mat.refractive_index**2 / scales.C_LIGHT**2
        lam_ac = mat.speed_of_sound / (params["acoustic_ghz"] * 1e9)
        k_a = 2 * np.pi / lam_ac
        period = params["period_um"] * 1e-6
        rows = []
        for v_thz in _grid(params["v_st_thz_grid"]):
            v_st = 2 * np.pi * scales.HBAR * v_thz * 1e12
            mb = scales.miniband_params(v_st, period, m_bare, acoustic_wavevector=k_a)
            rows.append((
                v_thz, mb.bandwidth / (2e9 * np.pi), mb.omega_r_eff / (2e9 * np.pi),
                mb.m_eff / m_bare,
            ))
        write_csv(outdir / sub / f"{name}.csv",
                  ["v_st_thz", "bandwidth_ghz", "omega_r_eff_ghz", "mass_ratio"], rows)
        side["files"] = [f"{name}.csv"]
        side["acoustic_wavelength_um"] = lam_ac * 1e6
    else:
        raise ValueError(f"unknown scales mode {mode!r}")
    return _finish(outdir, sub, name, side)


# ---------------------------------------------------------------- bands1d

def run_bands1d(params: dict, outdir: Path, name: str, threads: int = 1) -> dict:
    sub = "bands1d"
    spec = f1.LatticeSpec1D(
        va=params["va"], omega=params["omega"], v_st=params.get("v_st", 0.0),
        period_ratio=params.get("period_ratio", 1),
        emitter_x=params.get("emitter_x", 0.0),
    )
    bands = f1.quasi_energy_bands(spec, lmax=params.get("lmax"), nk=params.get("n_k", 512))
    nb = min(params.get("n_branches", 6), bands.n_branches)
    header = ["k_over_ka"]
    for j in range(nb):
        header += [f"omega_{j}", f"w0_{j}"]
    rows = []
    for i, k in enumerate(bands.k_grid):
        row = [k / f1.K_A]
        for j in range(nb):
            row += [bands.energies[i, j], bands.l0_weight(i, j)]
        rows.append(row)
    write_csv(outdir / sub / f"{name}.csv", header, rows)
    side = _sidecar_base(sub, params)
    side["files"] = [f"{name}.csv"]
    side["truncation"] = bands.certificate
    return _finish(outdir, sub, name, side)


# ---------------------------------------------------------------- rates1d

def run_rates1d(params: dict, outdir: Path, name: str, threads: int = 1) -> dict:
    sub = "rates1d"
    g0 = params.get("g0", 1.0)
    rows = []
    if "va_grid" in params:
        axis_name = "va"
        for va in _grid(params["va_grid"]):
            gr, gl = _rates_point(va, params["omega"], params["delta"], g0)
            rows.append((va, gr, gl, gr - gl))
    else:
        axis_name = "delta"
        spec = f1.LatticeSpec1D(va=params["va"], omega=params["omega"])
        bands = f1.quasi_energy_bands(spec)
        for delta in _grid(params["delta_grid"]):
            res = f1.find_resonances(delta, bands)
            r = f1.emission_rates(res, include_flagged=True)
            rows.append((delta, r.gamma_r, r.gamma_l, r.directionality))
    write_csv(outdir / sub / f"{name}.csv",
              [axis_name, "gamma_r", "gamma_l", "d"], rows)
    side = _sidecar_base(sub, params)
    side["files"] = [f"{name}.csv"]
    return _finish(outdir, sub, name, side)


def _rates_point(va: float, omega: float, delta: float, g0: float) -> tuple[float, float]:
    if va == 0.0 and delta < 0:
        return 0.0, 0.0
    spec = f1.LatticeSpec1D(va=va, omega=omega)
    bands = f1.quasi_energy_bands(spec)
    res = f1.find_resonances(delta, bands)
    r = f1.emission_rates(res, include_flagged=True)
    return r.gamma_r, r.gamma_l


# ---------------------------------------------------------------- dmap

def _dmap_column_task(args):
    va, omega, deltas, d_clip, nk = args
    spec = f1.LatticeSpec1D(va=va, omega=omega)
    return f1._dmap_column(spec, np.asarray(deltas), d_clip, None, nk)


def run_dmap(params: dict, outdir: Path, name: str, threads: int = 1) -> dict:
    sub = "dmap"
    deltas = _grid(params["delta_grid"])
    d_clip = params.get("d_clip", 10.0)
    nk = params.get("n_k", f1.DEFAULT_NK)
    if "va_grid" in params:
        second = _grid(params["va_grid"])
        second_name = "va"
        tasks = [(v, params["omega"], list(deltas), d_clip, nk) for v in second]
    else:
        second = _grid(params["omega_grid"])
        second_name = "omega"
        tasks = [(params["va"], o, list(deltas), d_clip, nk) for o in second]
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            cols = list(pool.map(_dmap_column_task, tasks, chunksize=1))
    else:
        cols = [_dmap_column_task(t) for t in tasks]
    rows = []
    for j, sv in enumerate(second):
        d_col, f_col = cols[j]
        for i, dv in enumerate(deltas):
            rows.append((dv, sv, d_col[i], bool(f_col[i])))
    write_csv(outdir / sub / f"{name}.csv",
              ["delta", second_name, "d", "flagged"], rows)
    side = _sidecar_base(sub, params)
    side["files"] = [f"{name}.csv"]
    return _finish(outdir, sub, name, side)


# ---------------------------------------------------------------- decay-sim

def _pulses_from_params(plist) -> list[d1.PulseSpec]:
    return [d1.PulseSpec(**p) for p in plist]


def run_decay_sim(params: dict, outdir: Path, name: str, threads: int = 1) -> dict:
    sub = "decay-sim"
    scenario = params.get("scenario", "pulsed")
    side = _sidecar_base(sub, params)
    files = []
    if scenario == "pulsed":
        files += _decay_pulsed(params, outdir / sub, name, side)
    elif scenario == "superlattice":
        files += _decay_superlattice(params, outdir / sub, name, side)
    else:
        raise ValueError(f"unknown decay-sim scenario {scenario!r}")
    side["files"] = files
    return _finish(outdir, sub, name, side)


def _decay_pulsed(params, folder: Path, name: str, side: dict) -> list[str]:
    em = d1.EmitterSpec(**params["emitter"])
    pulses = _pulses_from_params(params["pulses"])
    gp = params["grid"]
    grid = d1.SpatialGrid(gp["xmin"], gp["xmax"], int(gp["n"]))
    tr = d1.evolve_exact(
        [em], pulses, grid, params["dt"], params["t_final"],
        record_stride=params.get("record_stride", 10),
        snapshot_stride=params.get("snapshot_stride", 0),
        absorber=params.get("absorber", False),
    )
    files = [f"{name}_exact.csv"]
    write_csv(folder / files[-1], ["t", "pe", "norm"],
              zip(tr.t, tr.pe[:, 0], tr.norm))
    if params.get("quasistatic", True):
        va_max = max(p.va for p in pulses)
        table = f1.build_rate_table(
            np.linspace(0.0, va_max, params.get("rate_table_n", 33)),
            pulses[0].omega, em.delta, em.g0, nk=params.get("n_k", 1024),
        )
        qs = d1.evolve_quasistatic(em, pulses, table, params["dt"] * 5, params["t_final"])
        files.append(f"{name}_markov.csv")
        write_csv(folder / files[-1], ["t", "pe", "gamma_r", "gamma_l"],
                  zip(qs.t, qs.pe, qs.gamma_r, qs.gamma_l))
        side["rate_table_va"] = list(map(float, table.va_grid))
    if tr.snapshots is not None:
        stride_x = max(1, grid.n // params.get("snapshot_cells", 1024))
        files.append(f"{name}_field.csv")
        header = ["t"] + [f"x_{x:.4f}" for x in grid.x[::stride_x]]
        rows = [[t] + list(s[::stride_x]) for t, s in zip(tr.snapshot_t, tr.snapshots)]
        write_csv(folder / files[-1], header, rows)
    if params.get("rates_panel"):
        rp = params["rates_panel"]
        rows = []
        for va in _grid(rp["va_grid"]):
            gr, gl = _rates_point(va, pulses[0].omega, em.delta, em.g0)
            rows.append((va, gr, gl))
        files.append(f"{name}_rates.csv")
        write_csv(folder / files[-1], ["va", "gamma_r", "gamma_l"], rows)
    return files


def _decay_superlattice(params, folder: Path, name: str, side: dict) -> list[str]:
    """Exact decay vs Born-Markov with the full static+traveling matrix vs
    Born-Markov with the enhanced effective mass."""
    em = d1.EmitterSpec(**params["emitter"])
    mr = int(params["period_ratio"])
    v_st = params["v_st"]
    pulse = d1.PulseSpec(va=params["va"], omega=params["omega"])
    gp = params["grid"]
    grid = d1.SpatialGrid(gp["xmin"], gp["xmax"], int(gp["n"]))
    tr = d1.evolve_exact(
        [em], [pulse], grid, params["dt"], params["t_final"],
        static=d1.StaticLattice(v_st=v_st, period_ratio=mr),
        record_stride=params.get("record_stride", 20),
    )
    ts = tr.t

    # full-matrix Born-Markov rate at the emitter position
    spec_sl = f1.LatticeSpec1D(va=params["va"], omega=params["omega"], v_st=v_st,
                               period_ratio=mr, emitter_x=em.x)
    bands_sl = f1.quasi_energy_bands(spec_sl, nk=params.get("n_k_superlattice", 512),
                                     lmax=params.get("lmax_superlattice"))
    res_sl = f1.find_resonances(em.delta, bands_sl)
    g_sl = f1.emission_rates(res_sl, g0=em.g0, include_flagged=True).total \
        * f1.GAMMA0_UNIT * em.g0**2

    # effective-mass Born-Markov rate: rescale into the miniband recoil units
    eff = _effective_mass_rate(params, em)
    side["gamma_bm_full"] = g_sl
    side["gamma_bm_effmass"] = eff
    side["truncation"] = bands_sl.certificate

    files = [f"{name}_compare.csv"]
    write_csv(folder / files[0],
              ["t", "pe_exact", "pe_bm_full", "pe_bm_effmass"],
              zip(ts, tr.pe[:, 0], np.exp(-g_sl * ts), np.exp(-eff * ts)))
    return files


def _effective_mass_rate(params, em: d1.EmitterSpec) -> float:
    """Decay rate from the homogeneous theory with the miniband mass.

    The static lattice renormalizes the recoil (quadratic mass at the
    miniband bottom) and offsets the band reference; the emitter coupling
    picks up the local Bloch amplitude |u(x_1)| of the miniband at its
    position.  All ratios are rescaled accordingly and the resulting rate
    is converted back to bare recoil units.
    """
    mr = int(params["period_ratio"])
    v_st = params["v_st"]
    # static Bloch problem: period ratio M means k_st = M k_a, so the
    # static recoil is M^2 in bare acoustic-recoil units
    e_r_st = float(mr) ** 2
    s = v_st / e_r_st
    n_harm = 24
    nu = np.arange(-n_harm, n_harm + 1)
    kappas = np.linspace(-0.5, 0.5, 201)
    dim = 2 * n_harm + 1
    h = np.zeros((len(kappas), dim, dim))
    idx = np.arange(dim)
    h[:, idx, idx] = (nu[None, :] + kappas[:, None]) ** 2
    h[:, idx[:-1], idx[1:]] = 0.5 * s
    h[:, idx[1:], idx[:-1]] = 0.5 * s
    evals, evecs = np.linalg.eigh(h)
    band = evals[:, 0] * e_r_st
    e_min = float(band.min())
    i_min = int(band.argmin())
    dk = (kappas[1] - kappas[0]) * mr * K_A_VAL  # physical 1/lambda
    i0 = min(max(i_min, 1), len(band) - 2)
    curv = (band[i0 + 1] - 2.0 * band[i0] + band[i0 - 1]) / dk**2
    m_eff = 1.0 / curv
    mass_ratio = m_eff / (2.0 * np.pi**2)  # bare mass is k_a^2/2
    omega_r_eff = 1.0 / mass_ratio
    # local Bloch amplitude of the bottom state at the emitter position
    c0 = evecs[i_min, :, 0]
    u_x = np.sum(c0 * np.exp(1j * nu * mr * K_A_VAL * em.x))
    enhance = float(abs(u_x) ** 2)

    spec_eff = f1.LatticeSpec1D(va=params["va"] / omega_r_eff,
                                omega=params["omega"] / omega_r_eff)
    bands_eff = f1.quasi_energy_bands(spec_eff, nk=params.get("n_k", 1024))
    delta_eff = (em.delta - e_min) / omega_r_eff
    res = f1.find_resonances(delta_eff, bands_eff)
    g0_eff = em.g0 / omega_r_eff
    rate_eff_units = f1.emission_rates(res, g0=g0_eff, include_flagged=True).total \
        * f1.GAMMA0_UNIT * g0_eff**2
    return rate_eff_units * omega_r_eff * enhance  # back to bare recoil time


# ---------------------------------------------------------------- entangle

def run_entangle(params: dict, outdir: Path, name: str, threads: int = 1) -> dict:
    sub = "entangle"
    side = _sidecar_base(sub, params)
    if params.get("mode", "ramp") == "ramp":
        files = _entangle_ramp(params, outdir / sub, name, side)
    else:
        files = _entangle_sweep(params, outdir / sub, name, side, threads)
    side["files"] = files
    return _finish(outdir, sub, name, side)


def _coupling_vs_va(va_grid, omega, delta, g0, d_sep, gamma_ng, nk=1024):
    """CouplingMatrix entries tabulated over V_a for ramp interpolation."""
    mats, k_doms = [], []
    ems = [d1.EmitterSpec(x=0.0, delta=delta, g0=g0),
           d1.EmitterSpec(x=d_sep, delta=delta, g0=g0)]
    for va in va_grid:
        spec = f1.LatticeSpec1D(va=float(va), omega=omega)
        bands = f1.quasi_energy_bands(spec, nk=nk)
        res = f1.find_resonances(delta, bands)
        cm = cas.coupling_matrix(ems, res, gamma_ng=gamma_ng)
        mats.append(cm.a)
        right = [r for r in res.entries if r.vg > 0]
        k_doms.append(
            max(right, key=lambda r: r.weight / abs(r.vg)).k_unfolded if right else 0.0
        )
    return np.asarray(mats), np.asarray(k_doms)


def _entangle_ramp(params, folder: Path, name: str, side: dict) -> list[str]:
    delta, omega, g0 = params["delta"], params["omega"], params["g0"]
    d_sep = params["d_sep"]
    gamma_ng = params.get("gamma_ng", 0.0)
    va_final = params["va_final"]
    t1, t2 = params["ramp_t1"], params["ramp_t2"]
    t_final = params["t_final"]
    gamma0 = f1.GAMMA0_UNIT * g0**2

    va_grid = np.linspace(0.0, va_final, params.get("rate_table_n", 21))
    mats, k_doms = _coupling_vs_va(va_grid, omega, delta, g0, d_sep, gamma_ng)
    k_r = float(k_doms[-1])
    gamma_final = 2.0 * float(mats[-1][0, 0].real) - gamma_ng
    omega_l = params.get("omega_l_factor", 2.0) * gamma_final

    def va_of_t(t):
        if t <= t1:
            return 0.0
        if t >= t2:
            return va_final
        return va_final * 0.5 * (1.0 - np.cos(np.pi * (t - t1) / (t2 - t1)))

    def coupling_of_t(t):
        # master-equation time is in 1/Gamma_0 units; ramp times in 1/Omega_r
        va = va_of_t(t / gamma0)
        a = np.empty((2, 2), dtype=complex)
        for i in range(2):
            for j in range(2):
                re = np.interp(va, va_grid, mats[:, i, j].real)
                im = np.interp(va, va_grid, mats[:, i, j].imag)
                a[i, j] = re + 1j * im
        return cas.CouplingMatrix(a=a, gamma=2 * a[0, 0].real - gamma_ng,
                                  gamma_ng=gamma_ng, gamma0=gamma0)

    drive = cas.DriveSpec(delta_l=0.0, omega_l=omega_l,
                          phases=(0.0, -k_r * d_sep))
    rho0 = np.zeros((4, 4), dtype=complex)
    rho0[0, 0] = 1.0
    tr = cas.evolve_master(rho0, drive, coupling_of_t, t_final * gamma0,
                           n_record=params.get("n_record", 301))
    lam_t = np.array([coupling_of_t(t).lam() for t in tr.t])
    va_t = np.array([va_of_t(t) for t in tr.t / gamma0])
    files = [f"{name}.csv"]
    write_csv(folder / files[0],
              ["t", "purity", "concurrence", "lambda", "va"],
              zip(tr.t / gamma0, tr.purity, tr.concurrence, lam_t, va_t))
    side["omega_l"] = omega_l
    side["k_r"] = k_r
    side["gamma_final"] = gamma_final
    return files


def _sweep_cell(args):
    delta, va, omega, g0, gamma_ng, d_grid, oml_factor = args
    if va == 0.0 and delta < 0:
        return 0.0
    spec = f1.LatticeSpec1D(va=va, omega=omega)
    bands = f1.quasi_energy_bands(spec, nk=1024)
    res = f1.find_resonances(delta, bands)
    if not res.entries or res.flagged:
        return 0.0
    cs = []
    for d_sep in d_grid:
        ems = [d1.EmitterSpec(x=0.0, delta=delta, g0=g0),
               d1.EmitterSpec(x=d_sep, delta=delta, g0=g0)]
        cm = cas.coupling_matrix(ems, res, gamma_ng=gamma_ng)
        right = [r for r in res.entries if r.vg > 0]
        k_r = max(right, key=lambda r: r.weight / abs(r.vg)).k_unfolded if right else 0.0
        drive = cas.DriveSpec(0.0, oml_factor * cm.gamma, (0.0, -k_r * d_sep))
        try:
            rho = cas.steady_state(drive, cm)
        except cas.DegenerateSteadyStateError:
            cs.append(0.0)
            continue
        cs.append(cas.concurrence(rho))
    return float(np.mean(cs))


def _entangle_sweep(params, folder: Path, name: str, side: dict, threads: int) -> list[str]:
    deltas = _grid(params["delta_grid"])
    vas = _grid(params["va_grid"])
    d_grid = list(_grid(params["d_grid"]))
    tasks = [
        (float(dv), float(va), params["omega"], params["g0"],
         params.get("gamma_ng", 0.0), d_grid, params.get("omega_l_factor", 1.3))
        for va in vas for dv in deltas
    ]
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            vals = list(pool.map(_sweep_cell, tasks, chunksize=4))
    else:
        vals = [_sweep_cell(t) for t in tasks]
    rows = []
    idx = 0
    for va in vas:
        for dv in deltas:
            rows.append((dv, float(va), vals[idx]))
            idx += 1
    files = [f"{name}.csv"]
    write_csv(folder / files[0], ["delta", "va", "concurrence"], rows)
    return files


# ---------------------------------------------------------------- conveyor

def run_conveyor(params: dict, outdir: Path, name: str, threads: int = 1) -> dict:
    sub = "conveyor"
    side = _sidecar_base(sub, params)
    if params.get("mode", "transfer") == "transfer":
        files = _conveyor_transfer(params, outdir / sub, name, side)
    else:
        files = _conveyor_scan(params, outdir / sub, name, side)
    side["files"] = files
    return _finish(outdir, sub, name, side)


def _conveyor_transfer(params, folder: Path, name: str, side: dict) -> list[str]:
    pulse = d1.PulseSpec(va=params["va"], omega=params["omega"],
                         shape="gaussian", width=params["width"])
    bound = d1.comoving_bound_states(pulse)
    if len(bound) == 0:
        raise RuntimeError("no bound state at the requested pulse parameters")
    delta = params.get("delta", float(bound.energies[0].real))
    g0 = params["g0"]
    sep = params["separation"]
    margin = params.get("margin", 12.0)
    x0 = -(margin + 4.0 * params["width"])
    t_f = (sep + 2.0 * (margin + 4.0 * params["width"])) / abs(pulse.speed)
    emitters = [d1.EmitterSpec(x=0.0, delta=delta, g0=g0),
                d1.EmitterSpec(x=sep, delta=delta, g0=g0)]
    mc = d1.moving_cavity_evolve(emitters, bound, t_f, x0, warn_validity=False)

    files = [f"{name}_mc.csv"]
    write_csv(folder / files[0], ["t", "pe1", "pe2", "p_photon"],
              zip(mc.t, np.abs(mc.ce[:, 0])**2, np.abs(mc.ce[:, 1])**2,
                  np.abs(mc.c0)**2))
    side["transfer_probability"] = mc.transfer
    side["bound_energy"] = float(bound.energies[0].real)
    side["rabi_area"] = d1.rabi_area(g0, bound)
    side["delay_expected"] = sep / abs(pulse.speed)

    if params.get("full_model", True):
        gp = params["grid"]
        grid = d1.SpatialGrid(gp["xmin"], gp["xmax"], int(gp["n"]))
        pulse_full = d1.PulseSpec(va=params["va"], omega=params["omega"],
                                  shape="gaussian", width=params["width"], x_start=x0)
        tr = d1.evolve_exact(emitters, [pulse_full], grid, params["dt"], t_f,
                             record_stride=params.get("record_stride", 25),
                             absorber=params.get("absorber", False))
        files.append(f"{name}_full.csv")
        write_csv(folder / files[-1], ["t", "pe1", "pe2", "norm"],
                  zip(tr.t, tr.pe[:, 0], tr.pe[:, 1], tr.norm))
        side["transfer_probability_full"] = float(tr.pe[-1, 1])
    return files


def _conveyor_scan(params, folder: Path, name: str, side: dict) -> list[str]:
    p2 = d1.transfer_scan(
        _grid(params["va_grid"]), _grid(params["width_grid"]),
        params["g0"], params["omega"], params["separation"],
        margin=params.get("margin", 10.0),
    )
    rows = []
    for i, va in enumerate(_grid(params["va_grid"])):
        for j, w in enumerate(_grid(params["width_grid"])):
            rows.append((float(va), float(w), p2[i, j]))
    files = [f"{name}.csv"]
    write_csv(folder / files[0], ["va", "width", "p_transfer"], rows)
    return files


# ---------------------------------------------------------------- 2D runners

def _spec2d(params) -> f2.LatticeSpec2D:
    return f2.LatticeSpec2D(v1=params["v1"], v2=params["v2"],
                            omega1=params["omega1"], omega2=params["omega2"])


def run_bands2d(params: dict, outdir: Path, name: str, threads: int = 1) -> dict:
    sub = "bands2d"
    spec = _spec2d(params)
    lmax = params.get("lmax", 8)
    n_surf = params.get("n_surface", 101)
    ax = f2._Axis(spec.axis_spec(0), lmax)
    ay = f2._Axis(spec.axis_spec(1), lmax)
    ks = np.linspace(-0.5 * f2.K_A, 0.5 * f2.K_A, n_surf)
    ex, _, vx = ax.grid(ks)
    ey, _, vy = ay.grid(ks)
    rows = []
    for i, kx in enumerate(ks):
        for j, ky in enumerate(ks):
            rows.append((kx / f2.K_A, ky / f2.K_A, ex[i] + ey[j], vx[i], vy[j]))
    files = [f"{name}_surface.csv"]
    write_csv(outdir / sub / files[0],
              ["kx_over_ka", "ky_over_ka", "omega", "vg_x", "vg_y"], rows)

    contour = f2.resonance_contour(params["delta"], spec,
                                   n_grid=params.get("n_grid", 384), lmax=lmax)
    if len(contour) >= 2:
        mids, dks, wgt, vgs = contour.segment_data()
        files.append(f"{name}_contour.csv")
        write_csv(outdir / sub / files[-1],
                  ["kx_over_ka", "ky_over_ka", "weight", "vg_x", "vg_y", "dk"],
                  zip(mids[:, 0] / f2.K_A, mids[:, 1] / f2.K_A, wgt,
                      vgs[:, 0], vgs[:, 1], dks))
    side = _sidecar_base(sub, params)
    side["files"] = files
    side["contour_closed"] = contour.closed
    return _finish(outdir, sub, name, side)


def run_emission2d(params: dict, outdir: Path, name: str, threads: int = 1) -> dict:
    sub = "emission2d"
    spec = _spec2d(params)
    contour = f2.resonance_contour(params["delta"], spec,
                                   n_grid=params.get("n_grid", 384),
                                   lmax=params.get("lmax", 8))
    gamma, polar = f2.emission_2d(contour, n_bins=params.get("n_bins", 360))
    files = [f"{name}.csv"]
    write_csv(outdir / sub / files[0], ["phi", "gamma_phi"],
              zip(polar.phi, polar.density))
    side = _sidecar_base(sub, params)
    side["files"] = files
    side["gamma_total"] = gamma
    side["contour_closed"] = contour.closed
    return _finish(outdir, sub, name, side)


def run_corrmap(params: dict, outdir: Path, name: str, threads: int = 1) -> dict:
    sub = "corrmap"
    side = _sidecar_base(sub, params)
    if params.get("mode", "map") == "map":
        spec = _spec2d(params)
        r = np.linspace(-params["r_max"], params["r_max"], int(params["n_r"]))
        lam = f2.correlation_map(spec, params["delta"], r, r,
                                 gamma_ng=params.get("gamma_ng", 0.0),
                                 n_grid=params.get("n_grid", 384),
                                 lmax=params.get("lmax", 8))
        rows = []
        for i, x in enumerate(r):
            for j, y in enumerate(r):
                rows.append((x, y, lam[i, j]))
        files = [f"{name}.csv"]
        write_csv(outdir / sub / files[0], ["rx", "ry", "lambda"], rows)
    else:  # radial cuts along the diagonal for two lattice configurations
        rs = _grid(params["r_grid"])
        rows = []
        for tag in ("iso", "mod"):
            spec = _spec2d(params[tag])
            contour = f2.resonance_contour(params[tag]["delta"], spec,
                                           n_grid=params.get("n_grid", 384),
                                           lmax=params.get("lmax", 8))
            segs = contour.segment_data(max_dk=0.1 / float(np.max(rs)))
            for rmag in rs:
                rvec = rmag * np.array([1.0, 1.0]) / np.sqrt(2.0)
                _, lam = f2.coupling_2d(contour, 1.0, rvec, segments=segs,
                                        gamma_ng=params.get("gamma_ng", 0.0))
                rows.append((tag, float(rmag), lam))
        files = [f"{name}.csv"]
        write_csv(outdir / sub / files[0], ["config", "r", "lambda"], rows)
    side["files"] = files
    return _finish(outdir, sub, name, side)


RUNNERS = {
    "scales": run_scales,
    "bands1d": run_bands1d,
    "rates1d": run_rates1d,
    "dmap": run_dmap,
    "decay-sim": run_decay_sim,
    "entangle": run_entangle,
    "conveyor": run_conveyor,
    "bands2d": run_bands2d,
    "emission2d": run_emission2d,
    "corrmap": run_corrmap,
}
