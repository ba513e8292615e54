"""Command-line entry point.

Usage: aowsim [--config cfg.json | --preset name] [--out DIR]
              [--threads N] [--validate]

Every run writes deterministic CSV data plus a JSON sidecar (parameters,
truncation certificates, code version) under <out>/<subcommand>/.  Wall
time goes to stderr so reruns stay byte-identical.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from importlib import resources
from pathlib import Path

import jsonschema

from .presets import expand_preset
from .runners import RUNNERS

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2

MARKOV_SUBCOMMANDS = {"rates1d", "dmap", "entangle"}
MARKOV_G0_LIMIT = 0.1


def _load_schema() -> dict:
    return json.loads(resources.files("aowsim").joinpath("config_schema.json").read_text())


def validate_config(config: dict) -> list[str]:
    """Schema check plus physical-range warnings; raises on schema errors."""
    schema = _load_schema()
    top = {k: v for k, v in schema.items() if k != "subcommand_params"}
    jsonschema.validate(config, top)
    sub = config["subcommand"]
    sub_schema = dict(schema["subcommand_params"][sub])
    sub_schema["$defs"] = schema["$defs"]
    jsonschema.validate(config["params"], sub_schema)

    warnings = []
    params = config["params"]
    g0 = params.get("g0", params.get("g0_ratio"))
    if isinstance(params.get("emitter"), dict):
        g0 = params["emitter"].get("g0", g0)
    if sub in MARKOV_SUBCOMMANDS and g0 is not None and g0 > MARKOV_G0_LIMIT:
        warnings.append(
            f"g0 = {g0} exceeds {MARKOV_G0_LIMIT} Omega_r: Born-Markov rates "
            "are marginal at this coupling"
        )
    if sub == "decay-sim" and isinstance(params.get("grid"), dict):
        gp = params["grid"]
        dx = (gp["xmax"] - gp["xmin"]) / gp["n"]
        if dx > 1.0 / 16.0:
            warnings.append(f"grid spacing {dx:.4f} lambda is coarser than lambda/16")
    return warnings


def _format_schema_error(err: jsonschema.ValidationError) -> str:
    path = "/".join(str(p) for p in err.absolute_path) or "<root>"
    return f"config error at {path}: {err.message}"


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="aowsim",
        description="Acousto-optic waveguide QED simulator",
    )
    parser.add_argument("--config", type=Path, help="JSON run configuration")
    parser.add_argument("--preset", help="named preset (e.g. table1, fig2a, fig5b)")
    parser.add_argument("--out", type=Path, default=Path("results"),
                        help="output directory (default: results)")
    parser.add_argument("--threads", type=int, default=0,
                        help="parallel workers for sweeps (0 = all cores)")
    parser.add_argument("--validate", action="store_true",
                        help="validate the configuration and exit")
    args = parser.parse_args(argv)

    if args.config is None and args.preset is None:
        parser.print_usage(sys.stderr)
        print("error: no subcommand: provide --config or --preset", file=sys.stderr)
        return EXIT_USAGE
    if args.config is not None and args.preset is not None:
        print("error: --config and --preset are mutually exclusive", file=sys.stderr)
        return EXIT_USAGE

    try:
        if args.preset is not None:
            config = expand_preset(args.preset)
        else:
            config = json.loads(args.config.read_text())
    except (KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    try:
        warnings = validate_config(config)
    except jsonschema.ValidationError as exc:
        print(_format_schema_error(exc), file=sys.stderr)
        return EXIT_USAGE
    for w in warnings:
        print(f"warning: {w}", file=sys.stderr)
    if args.validate:
        print("configuration valid" + (f" ({len(warnings)} warning(s))" if warnings else ""))
        return EXIT_OK

    threads = args.threads
    if threads <= 0:
        import os

        threads = os.cpu_count() or 1
    sub = config["subcommand"]
    name = config.get("name", sub)
    t0 = time.perf_counter()
    try:
        RUNNERS[sub](config["params"], args.out, name, threads)
    except Exception as exc:  # propagate numerical diagnostics with context
        print(f"error in {sub}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    print(f"{sub}/{name}: done in {time.perf_counter() - t0:.1f} s", file=sys.stderr)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
