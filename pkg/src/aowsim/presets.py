"""Named run configurations reproducing the package's reference artifacts.

Each preset expands to a fully explicit config (subcommand + parameter
block); values not fixed by the physics (pulse timings, drive strength,
emitter separations, grids) are pinned here so reruns are reproducible.
"""

from __future__ import annotations

import copy

PRESETS: dict[str, dict] = {
    "table1": {
        "subcommand": "scales",
        "params": {
            "mode": "table",
            "materials": ["diamond", "silica", "silicon"],
            "wavelengths_um": [10.0, 30.0, 50.0],
            "g0_ratio": 0.02,
        },
    },
    "fig1c": {
        "subcommand": "bands1d",
        "params": {"va": 0.2, "omega": 0.4, "n_k": 512, "n_branches": 7},
    },
    "fig2a": {
        "subcommand": "dmap",
        "params": {
            "delta_grid": {"start": -0.3, "stop": 0.6, "n": 91},
            "va_grid": {"start": 0.0, "stop": 1.0, "n": 51},
            "omega": 0.2,
            "n_k": 1024,
        },
    },
    "fig2b": {
        "subcommand": "dmap",
        "params": {
            "delta_grid": {"start": -0.3, "stop": 0.6, "n": 91},
            "omega_grid": {"start": 0.02, "stop": 1.0, "n": 50},
            "va": 0.2,
            "n_k": 1024,
        },
    },
    "fig3": {
        "subcommand": "decay-sim",
        "params": {
            "scenario": "pulsed",
            "emitter": {"x": 0.0, "delta": -0.2, "g0": 0.015},
            "pulses": [
                {"va": 0.8, "omega": 0.2, "direction": 1, "shape": "ramped",
                 "t_start": 20.0, "t_on": 50.0, "t_hold": 160.0, "t_off": 50.0},
                {"va": 0.8, "omega": 0.2, "direction": -1, "shape": "ramped",
                 "t_start": 400.0, "t_on": 50.0, "t_hold": 160.0, "t_off": 50.0},
            ],
            "grid": {"xmin": -90.0, "xmax": 110.0, "n": 4800},
            "dt": 0.02,
            "t_final": 700.0,
            "record_stride": 25,
            "snapshot_stride": 2500,
            "quasistatic": True,
            "rates_panel": {"va_grid": {"start": 0.0, "stop": 1.0, "n": 41}},
        },
    },
    "fig4": {
        "subcommand": "entangle",
        "params": {
            "mode": "ramp",
            "delta": 0.08, "omega": 0.2, "g0": 0.08,
            "va_final": 0.4, "ramp_t1": 50.0, "ramp_t2": 250.0,
            "t_final": 1500.0, "d_sep": 4.0,
            "omega_l_factor": 2.0, "gamma_ng": 0.001,
            "rate_table_n": 21, "n_record": 301,
        },
    },
    "fig4inset": {
        "subcommand": "entangle",
        "params": {
            "mode": "sweep",
            "delta_grid": {"start": -0.1, "stop": 0.4, "n": 21},
            "va_grid": {"start": 0.0, "stop": 0.8, "n": 17},
            "d_grid": {"start": 3.0, "stop": 6.0, "n": 16},
            "omega": 0.2, "g0": 0.08,
            "gamma_ng": 0.002, "omega_l_factor": 1.3,
        },
    },
    "fig5b": {
        "subcommand": "conveyor",
        "params": {
            "mode": "transfer",
            "va": 0.5, "omega": 0.05, "width": 2.0, "g0": 0.007,
            "separation": 6.0, "margin": 12.0,
            "full_model": True, "absorber": True,
            "grid": {"xmin": -42.0, "xmax": 50.0, "n": 2208},
            "dt": 0.02, "record_stride": 125,
        },
    },
    "fig5c": {
        "subcommand": "conveyor",
        "params": {
            "mode": "scan",
            "va_grid": {"start": 0.2, "stop": 0.8, "n": 7},
            "width_grid": {"start": 0.5, "stop": 4.0, "n": 8},
            "g0": 0.007, "omega": 0.05, "separation": 6.0, "margin": 10.0,
        },
    },
    "fig7a": {
        "subcommand": "bands2d",
        "params": {"v1": 0.0, "v2": 0.0, "omega1": 0.2, "omega2": 0.2,
                   "delta": 0.02, "n_surface": 81, "n_grid": 384},
    },
    "fig7b": {
        "subcommand": "bands2d",
        "params": {"v1": 0.0, "v2": 0.4, "omega1": 0.2, "omega2": 0.2,
                   "delta": 0.2, "n_surface": 81, "n_grid": 384},
    },
    "fig7c": {
        "subcommand": "bands2d",
        "params": {"v1": 0.4, "v2": 0.4, "omega1": 0.2, "omega2": 0.2,
                   "delta": 0.1, "n_surface": 81, "n_grid": 384},
    },
    "fig7a-polar": {
        "subcommand": "emission2d",
        "params": {"v1": 0.0, "v2": 0.0, "omega1": 0.2, "omega2": 0.2,
                   "delta": 0.02, "n_bins": 180, "n_grid": 384},
    },
    "fig7b-polar": {
        "subcommand": "emission2d",
        "params": {"v1": 0.0, "v2": 0.4, "omega1": 0.2, "omega2": 0.2,
                   "delta": 0.2, "n_bins": 180, "n_grid": 384},
    },
    "fig7c-polar": {
        "subcommand": "emission2d",
        "params": {"v1": 0.4, "v2": 0.4, "omega1": 0.2, "omega2": 0.2,
                   "delta": 0.1, "n_bins": 180, "n_grid": 384},
    },
    "fig8a": {
        "subcommand": "corrmap",
        "params": {"mode": "map", "v1": 0.0, "v2": 0.0, "omega1": 0.2,
                   "omega2": 0.2, "delta": 0.02, "r_max": 30.0, "n_r": 41,
                   "n_grid": 384},
    },
    "fig8b": {
        "subcommand": "corrmap",
        "params": {"mode": "map", "v1": 0.4, "v2": 0.4, "omega1": 0.2,
                   "omega2": 0.2, "delta": 0.1, "r_max": 30.0, "n_r": 41,
                   "n_grid": 384},
    },
    "fig8c": {
        "subcommand": "corrmap",
        "params": {
            "mode": "radial",
            "iso": {"v1": 0.0, "v2": 0.0, "omega1": 0.2, "omega2": 0.2,
                    "delta": 0.02},
            "mod": {"v1": 0.4, "v2": 0.4, "omega1": 0.2, "omega2": 0.2,
                    "delta": 0.1},
            "r_grid": {"start": 1.0, "stop": 40.0, "n": 40},
            "n_grid": 384,
        },
    },
    "fig9a": {
        "subcommand": "scales",
        "params": {
            "mode": "miniband",
            "material": "silicon",
            "period_um": 3.0,
            "acoustic_ghz": 1.0,
            "v_st_thz_grid": {"start": 0.1, "stop": 4.0, "n": 40},
        },
    },
    "fig9b": {
        "subcommand": "decay-sim",
        "params": {
            "scenario": "superlattice",
            "emitter": {"x": 0.1666666666666667, "delta": -0.25, "g0": 0.02},
            "va": 0.3, "omega": 0.4, "v_st": 2.5, "period_ratio": 3,
            "grid": {"xmin": -90.0, "xmax": 90.0, "n": 8640},
            "dt": 0.02, "t_final": 400.0, "record_stride": 20,
            "n_k_superlattice": 384,
        },
    },
}


def expand_preset(name: str) -> dict:
    if name not in PRESETS:
        raise KeyError(
            f"unknown preset {name!r}; available: {', '.join(sorted(PRESETS))}"
        )
    cfg = copy.deepcopy(PRESETS[name])
    cfg["name"] = name
    return cfg
