"""Scenario files: parse, validate, and resolve built-in experiment configs.

A scenario is one YAML document (see ``scenarios/`` for the shipped ones and
the README for the full grammar) holding any of: a circuit with herald/scan
settings, a flux assignment, and a spectral visibility sweep.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Mapping

import yaml

from .circuit import (
    Circuit,
    FluxAssignment,
    FluxLoop,
    validate as validate_circuit,
)
from .conditioning import DEFAULT_PI_MODES, DetectionPattern
from .elements import (
    BeamSplitterSpec,
    ElementSpec,
    FluxSegmentSpec,
    PhaseShifterSpec,
)
from .fock import ModeRegistry, N_MAX_DEFAULT

BUILTIN_SCENARIOS = ("fig1", "fig1_flux", "pdc_sweep")


class ScenarioError(ValueError):
    """Malformed scenario config; the message names the offending field."""


@dataclass(frozen=True)
class SpectralSweep:
    sigma_p: float
    sigma_f: tuple[float, ...]
    carrier: float = 0.0
    grid_points: int = 41
    refined_points: int = 61
    box_sigmas: float = 6.0
    tol: float = 1e-3


@dataclass(frozen=True)
class ScenarioConfig:
    """Validated scenario plus the raw mapping it was parsed from."""

    name: str
    raw: Mapping[str, Any]
    circuit: Circuit | None = None
    flux: FluxAssignment | None = None
    herald: DetectionPattern | None = None
    pi_modes: tuple[str, ...] = DEFAULT_PI_MODES
    scan_mode: str | None = None
    grid_size: int = 64
    final_patterns: tuple[tuple[str, DetectionPattern], ...] = ()
    spectral: SpectralSweep | None = None
    outputs: Mapping[str, str] = field(default_factory=dict)


def _need(mapping: Mapping, key: str, where: str) -> Any:
    if key not in mapping:
        raise ScenarioError(f"{where}: missing required field {key!r}")
    return mapping[key]


def _as_mapping(value: Any, where: str) -> Mapping:
    if not isinstance(value, Mapping):
        raise ScenarioError(f"{where}: expected a mapping, got {type(value).__name__}")
    return value


def _as_list(value: Any, where: str) -> list:
    if not isinstance(value, (list, tuple)):
        raise ScenarioError(f"{where}: expected a list, got {type(value).__name__}")
    return list(value)


def _as_number(value: Any, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioError(f"{where}: expected a number, got {value!r}")
    if not math.isfinite(float(value)):
        raise ScenarioError(f"{where}: expected a finite number, got {value!r}")
    return float(value)


def _as_int(value: Any, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ScenarioError(f"{where}: expected an integer, got {value!r}")
    return value


def _as_str(value: Any, where: str) -> str:
    if not isinstance(value, str) or not value:
        raise ScenarioError(f"{where}: expected a non-empty string, got {value!r}")
    return value


def _parse_pattern(value: Any, where: str) -> DetectionPattern:
    mapping = _as_mapping(value, where)
    counts = {}
    for mode, count in mapping.items():
        counts[_as_str(mode, where)] = _as_int(count, f"{where}.{mode}")
    try:
        return DetectionPattern(counts)
    except ValueError as exc:
        raise ScenarioError(f"{where}: {exc}") from exc


def _parse_element(entry: Any, where: str) -> ElementSpec:
    mapping = _as_mapping(entry, where)
    kind = _as_str(_need(mapping, "kind", where), f"{where}.kind")
    try:
        if kind == "beam_splitter":
            ins = _as_list(_need(mapping, "inputs", where), f"{where}.inputs")
            outs = _as_list(_need(mapping, "outputs", where), f"{where}.outputs")
            if len(ins) != 2 or len(outs) != 2:
                raise ScenarioError(f"{where}: beam_splitter needs 2 inputs and 2 outputs")
            return BeamSplitterSpec(
                _as_str(ins[0], where),
                _as_str(ins[1], where),
                _as_str(outs[0], where),
                _as_str(outs[1], where),
                convention=mapping.get("convention", "real-hadamard"),
                transmissivity=_as_number(
                    mapping.get("transmissivity", 0.5), f"{where}.transmissivity"
                ),
            )
        if kind == "phase":
            return PhaseShifterSpec(
                _as_str(_need(mapping, "mode", where), f"{where}.mode"),
                _as_number(_need(mapping, "phi", where), f"{where}.phi"),
            )
        if kind == "flux":
            return FluxSegmentSpec(
                _as_str(_need(mapping, "mode", where), f"{where}.mode"),
                _as_number(_need(mapping, "phase", where), f"{where}.phase"),
            )
    except ScenarioError:
        raise
    except ValueError as exc:
        raise ScenarioError(f"{where}: {exc}") from exc
    raise ScenarioError(f"{where}.kind: unknown element kind {kind!r}")


def _parse_circuit(section: Any) -> Circuit:
    mapping = _as_mapping(section, "circuit")
    modes = [_as_str(m, "circuit.modes") for m in _as_list(_need(mapping, "modes", "circuit"), "circuit.modes")]
    n_max = _as_int(mapping.get("n_max", N_MAX_DEFAULT), "circuit.n_max")
    try:
        registry = ModeRegistry(tuple(modes), n_max)
    except ValueError as exc:
        raise ScenarioError(f"circuit.modes: {exc}") from exc

    sources = []
    for i, entry in enumerate(_as_list(mapping.get("sources", []), "circuit.sources")):
        entry = _as_mapping(entry, f"circuit.sources[{i}]")
        sources.append(
            (
                _as_str(_need(entry, "mode", f"circuit.sources[{i}]"), f"circuit.sources[{i}].mode"),
                _as_int(_need(entry, "photons", f"circuit.sources[{i}]"), f"circuit.sources[{i}].photons"),
            )
        )

    elements = [
        _parse_element(entry, f"circuit.elements[{i}]")
        for i, entry in enumerate(_as_list(mapping.get("elements", []), "circuit.elements"))
    ]
    return Circuit(registry, tuple(elements), tuple(sources))


def _parse_flux(section: Any) -> FluxAssignment:
    mapping = _as_mapping(section, "flux")
    segments = {
        _as_str(m, "flux.segments"): _as_number(p, f"flux.segments.{m}")
        for m, p in _as_mapping(mapping.get("segments", {}), "flux.segments").items()
    }
    loops = []
    for i, entry in enumerate(_as_list(mapping.get("loops", []), "flux.loops")):
        entry = _as_mapping(entry, f"flux.loops[{i}]")
        tokens = [
            _as_str(t, f"flux.loops[{i}].segments")
            for t in _as_list(_need(entry, "segments", f"flux.loops[{i}]"), f"flux.loops[{i}].segments")
        ]
        winding = _as_int(entry.get("winding", 1), f"flux.loops[{i}].winding")
        try:
            loops.append(FluxLoop.from_tokens(tokens, winding))
        except ValueError as exc:
            raise ScenarioError(f"flux.loops[{i}]: {exc}") from exc
    return FluxAssignment(segments, tuple(loops))


def _parse_spectral(section: Any) -> SpectralSweep:
    mapping = _as_mapping(section, "spectral")
    sigma_p = _as_number(_need(mapping, "sigma_p", "spectral"), "spectral.sigma_p")
    raw_f = _need(mapping, "sigma_f", "spectral")
    values = raw_f if isinstance(raw_f, (list, tuple)) else [raw_f]
    sigma_f = tuple(_as_number(v, "spectral.sigma_f") for v in values)
    if sigma_p <= 0 or any(v <= 0 for v in sigma_f):
        raise ScenarioError("spectral: widths must be positive")
    sweep = SpectralSweep(
        sigma_p=sigma_p,
        sigma_f=sigma_f,
        carrier=_as_number(mapping.get("carrier", 0.0), "spectral.carrier"),
        grid_points=_as_int(mapping.get("grid_points", 41), "spectral.grid_points"),
        refined_points=_as_int(mapping.get("refined_points", 61), "spectral.refined_points"),
        box_sigmas=_as_number(mapping.get("box_sigmas", 6.0), "spectral.box_sigmas"),
        tol=_as_number(mapping.get("tol", 1e-3), "spectral.tol"),
    )
    if sweep.grid_points < 3 or sweep.refined_points <= sweep.grid_points:
        raise ScenarioError("spectral: need refined_points > grid_points >= 3")
    return sweep


def scenario_from_dict(raw: Any, name_hint: str = "scenario") -> ScenarioConfig:
    """Build and validate a :class:`ScenarioConfig` from a parsed mapping."""
    mapping = _as_mapping(raw, "scenario")
    known = {
        "name", "circuit", "flux", "herald", "scan", "final_patterns",
        "spectral", "output",
    }
    for key in mapping:
        if key not in known:
            raise ScenarioError(f"scenario: unknown section {key!r}")
    name = mapping.get("name", name_hint)

    circuit = _parse_circuit(mapping["circuit"]) if "circuit" in mapping else None
    flux = _parse_flux(mapping["flux"]) if "flux" in mapping else None
    if flux is not None and circuit is not None and flux.segment_phases:
        circuit = circuit.with_flux_segments(flux.segment_phases)

    herald_pattern = None
    pi_modes: tuple[str, ...] = DEFAULT_PI_MODES
    if "herald" in mapping:
        section = _as_mapping(mapping["herald"], "herald")
        herald_pattern = _parse_pattern(_need(section, "pattern", "herald"), "herald.pattern")
        if "pi_modes" in section:
            pi_modes = tuple(
                _as_str(m, "herald.pi_modes") for m in _as_list(section["pi_modes"], "herald.pi_modes")
            )

    scan_mode = None
    grid_size = 64
    if "scan" in mapping:
        section = _as_mapping(mapping["scan"], "scan")
        scan_mode = _as_str(_need(section, "mode", "scan"), "scan.mode")
        grid_size = _as_int(section.get("grid", 64), "scan.grid")
        if grid_size < 3:
            raise ScenarioError("scan.grid: grid size must be >= 3")
        if circuit is None:
            raise ScenarioError("scan: requires a circuit section")
        if herald_pattern is None:
            raise ScenarioError("scan: requires a herald section")

    final_patterns = []
    for i, entry in enumerate(_as_list(mapping.get("final_patterns", []), "final_patterns")):
        entry = _as_mapping(entry, f"final_patterns[{i}]")
        pattern = _parse_pattern(_need(entry, "pattern", f"final_patterns[{i}]"), f"final_patterns[{i}].pattern")
        pid = entry.get("id", pattern.key())
        final_patterns.append((_as_str(pid, f"final_patterns[{i}].id"), pattern))
    if scan_mode is not None and not final_patterns:
        raise ScenarioError("scan: requires at least one final pattern")

    spectral = _parse_spectral(mapping["spectral"]) if "spectral" in mapping else None
    if circuit is None and spectral is None:
        raise ScenarioError("scenario: needs a circuit and/or a spectral section")

    outputs = {
        _as_str(k, "output"): _as_str(v, f"output.{k}")
        for k, v in _as_mapping(mapping.get("output", {}), "output").items()
    }

    config = ScenarioConfig(
        name=_as_str(name, "name"),
        raw=mapping,
        circuit=circuit,
        flux=flux,
        herald=herald_pattern,
        pi_modes=pi_modes,
        scan_mode=scan_mode,
        grid_size=grid_size,
        final_patterns=tuple(final_patterns),
        spectral=spectral,
        outputs=outputs,
    )
    _cross_validate(config)
    return config


def _cross_validate(config: ScenarioConfig) -> None:
    if config.circuit is not None:
        diags = validate_circuit(config.circuit)
        if diags:
            raise ScenarioError("circuit: " + "; ".join(diags))
        registry = config.circuit.registry
        if config.herald is not None:
            for mode in config.herald.demands:
                if mode not in registry:
                    raise ScenarioError(f"herald.pattern: unknown mode {mode!r}")
        if config.scan_mode is not None and config.scan_mode not in registry:
            raise ScenarioError(f"scan.mode: unknown mode {config.scan_mode!r}")
        heralded = set(config.herald.demands) if config.herald else set()
        for pid, pattern in config.final_patterns:
            for mode in pattern.demands:
                if mode not in registry:
                    raise ScenarioError(f"final_patterns[{pid}]: unknown mode {mode!r}")
                if mode in heralded:
                    raise ScenarioError(
                        f"final_patterns[{pid}]: mode {mode!r} is already heralded"
                    )
        if config.flux is not None:
            for mode in config.flux.segment_phases:
                if mode not in registry:
                    raise ScenarioError(f"flux.segments: unknown mode {mode!r}")


def load_scenario(path: "Path | str") -> ScenarioConfig:
    """Parse a scenario file (YAML) into a validated config."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ScenarioError(f"cannot read config {path}: {exc}") from exc
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ScenarioError(f"config {path} is not valid YAML: {exc}") from exc
    return scenario_from_dict(raw, name_hint=path.stem)


def builtin_scenario_path(name: str) -> Path:
    """Filesystem path of a scenario shipped with the package."""
    if name not in BUILTIN_SCENARIOS:
        raise ScenarioError(
            f"unknown built-in scenario {name!r}; available: {', '.join(BUILTIN_SCENARIOS)}"
        )
    return Path(str(resources.files("cohswap") / "scenarios" / f"{name}.scenario"))


def resolve_scenario(ref: str) -> Path:
    """Interpret ``ref`` as a file path or a built-in scenario name."""
    path = Path(ref)
    if path.exists():
        return path
    if path.suffix == ".scenario" and path.stem in BUILTIN_SCENARIOS and len(path.parts) == 1:
        return builtin_scenario_path(path.stem)
    if ref in BUILTIN_SCENARIOS:
        return builtin_scenario_path(ref)
    raise ScenarioError(f"no such scenario file or built-in name: {ref!r}")
