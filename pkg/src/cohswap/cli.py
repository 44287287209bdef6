"""Scenario runner CLI: execute a config, emit fringe CSV / visibility JSON.

Exit codes: 0 success, 2 malformed config or failed validation, 3 numerical
non-convergence.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import json
import os
import platform
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .circuit import enclosed_flux
from .conditioning import FringeData, extract_visibility, default_phase_grid, fringe_scan
from .scenario import ScenarioConfig, ScenarioError, load_scenario, resolve_scenario
from .spectral import (
    QuadratureConvergenceError,
    SpectralProfile,
    visibility_closed_form,
    visibility_quadrature,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3

OUT_DIR_ENV = "COHSWAP_OUT_DIR"


def emit_fringe_csv(data: FringeData, path: "Path | str") -> Path:
    """Write one row per (grid point, pattern): phi_radians, pattern_id, probability."""
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["phi_radians", "pattern_id", "probability"])
        for k, phi in enumerate(data.phase_grid):
            for pid in data.pattern_ids:
                writer.writerow([f"{phi:.15g}", pid, f"{data.probabilities[pid][k]:.15g}"])
    return path


def _json_dump(payload, path: Path) -> Path:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        json.dump(payload, handle, indent=2, sort_keys=True)
        handle.write("\n")
    return path


def _spectral_records(config: ScenarioConfig, quad_tol: float | None) -> list[dict]:
    sweep = config.spectral
    assert sweep is not None
    tol = sweep.tol if quad_tol is None else quad_tol
    pump = SpectralProfile(sweep.carrier, sweep.sigma_p, kind="pump")
    records = []
    for sigma_f in sweep.sigma_f:
        filt = SpectralProfile(sweep.carrier / 2.0, sigma_f, kind="filter")
        closed = visibility_closed_form(pump, filt)
        quad = visibility_quadrature(
            pump,
            filt,
            grid_points=sweep.grid_points,
            refined_points=sweep.refined_points,
            box_sigmas=sweep.box_sigmas,
            tol=tol,
        )
        records.append(
            {
                "sigma_p": sweep.sigma_p,
                "sigma_f": sigma_f,
                "V_closed": closed.V,
                "V_quad": quad.V,
                "err": quad.estimated_error,
            }
        )
    return records


def run(
    config_path: "Path | str",
    out_dir: "Path | str | None" = None,
    grid: int | None = None,
    quad_tol: float | None = None,
    seed: int | None = None,
) -> int:
    """Execute one scenario; returns the process exit code."""
    config_path = Path(config_path)
    if out_dir is None:
        out_dir = os.environ.get(OUT_DIR_ENV, ".")
    out_dir = Path(out_dir)

    try:
        config = load_scenario(config_path)
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        return _run_loaded(config, config_path, out_dir, grid, quad_tol, seed)
    except OSError as exc:
        print(f"error: cannot write outputs: {exc}", file=sys.stderr)
        return 1


def _run_loaded(
    config: ScenarioConfig,
    config_path: Path,
    out_dir: Path,
    grid: int | None,
    quad_tol: float | None,
    seed: int | None,
) -> int:
    out_dir.mkdir(parents=True, exist_ok=True)
    written: dict[str, str] = {}
    manifest: dict = {
        "config_sha256": hashlib.sha256(config_path.read_bytes()).hexdigest(),
        "scenario": _plain(config.raw),
        "versions": {
            "cohswap": __version__,
            "numpy": np.__version__,
            "python": platform.python_version(),
        },
        "seed": seed,  # reserved: the model is deterministic
    }

    if config.flux is not None and config.flux.loops:
        manifest["enclosed_flux"] = [
            enclosed_flux(config.flux, i) for i in range(len(config.flux.loops))
        ]

    if config.circuit is not None and config.scan_mode is not None:
        n = config.grid_size if grid is None else grid
        if n < 3:
            print("error: --grid must be >= 3", file=sys.stderr)
            return EXIT_CONFIG
        data = fringe_scan(
            config.circuit,
            config.herald,
            config.scan_mode,
            default_phase_grid(n),
            [p for _, p in config.final_patterns],
            pattern_ids=[pid for pid, _ in config.final_patterns],
            pi_modes=config.pi_modes,
        )
        csv_name = config.outputs.get("fringe_csv", f"{config.name}_fringe.csv")
        emit_fringe_csv(data, out_dir / csv_name)
        written["fringe_csv"] = csv_name
        fits = {}
        for pid, _ in config.final_patterns:
            fit = extract_visibility(data, pid)
            fits[pid] = {
                "V": fit.V,
                "offset": fit.offset,
                "residual": fit.residual,
                "offset_defined": fit.offset_defined,
            }
        manifest["fringe_fits"] = fits
        manifest["herald_probability"] = data.herald_probabilities[0]

    if config.spectral is not None:
        try:
            records = _spectral_records(config, quad_tol)
        except QuadratureConvergenceError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_NUMERIC
        json_name = config.outputs.get("visibility_json", f"{config.name}_visibility.json")
        _json_dump(records, out_dir / json_name)
        written["visibility_json"] = json_name

    manifest_name = config.outputs.get("manifest", f"{config.name}_manifest.json")
    manifest["outputs"] = written
    _json_dump(manifest, out_dir / manifest_name)

    for label, name in {**written, "manifest": manifest_name}.items():
        print(f"{label}: {out_dir / name}")
    return EXIT_OK


def _plain(value):
    """Recursively convert parsed YAML to JSON-safe plain types."""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cohswap",
        description="Few-photon interferometer scenario runner",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    runp = sub.add_parser("run", help="execute a scenario file or built-in name")
    runp.add_argument("scenario", nargs="?", help="path or built-in name (fig1, fig1_flux, pdc_sweep)")
    runp.add_argument("--config", help="alternative way to pass the scenario path")
    runp.add_argument("--out-dir", help=f"output directory (default: ${OUT_DIR_ENV} or .)")
    runp.add_argument("--grid", type=int, help="override the scan grid size")
    runp.add_argument("--quad-tol", type=float, help="override the quadrature tolerance")
    runp.add_argument("--seed", type=int, help="reserved; the model is deterministic")
    return parser


def main(argv: "list[str] | None" = None) -> int:
    args = build_parser().parse_args(argv)
    ref = args.scenario or args.config
    if not ref:
        print("error: no scenario given (positional or --config)", file=sys.stderr)
        return EXIT_CONFIG
    try:
        path = resolve_scenario(ref)
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return run(
        path,
        out_dir=args.out_dir,
        grid=args.grid,
        quad_tol=args.quad_tol,
        seed=args.seed,
    )


if __name__ == "__main__":
    sys.exit(main())
