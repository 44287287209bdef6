"""Declarative interferometer circuits: validation, simulation, flux loops."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .elements import (
    BeamSplitterSpec,
    ElementSpec,
    FluxSegmentSpec,
    PhaseShifterSpec,
    apply_element,
    element_modes,
)
from .fock import FockState, ModeRegistry


class CircuitValidationError(ValueError):
    """Raised when simulating a circuit whose validation produced diagnostics."""

    def __init__(self, diagnostics: Sequence[str]):
        super().__init__("; ".join(diagnostics))
        self.diagnostics = list(diagnostics)


@dataclass(frozen=True)
class Circuit:
    """Mode registry, ordered element list, and initial photon placement.

    Circuits are immutable values; the ``with_*`` helpers return modified
    copies, so independent simulations can run fully in parallel.
    """

    registry: ModeRegistry
    elements: tuple[ElementSpec, ...] = ()
    sources: tuple[tuple[str, int], ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "elements", tuple(self.elements))
        object.__setattr__(
            self, "sources", tuple((str(m), int(n)) for m, n in self.sources)
        )

    def index_before_last_consumer(self, mode: str) -> int:
        """Insertion point just before the last beam splitter fed by ``mode``.

        This is where a phase picked up along the beam belongs: after any
        splitter that emits the beam and before the one that recombines it.
        Returns ``len(elements)`` when nothing consumes the mode.
        """
        idx = len(self.elements)
        for i, el in enumerate(self.elements):
            if isinstance(el, BeamSplitterSpec) and mode in el.inputs:
                idx = i
        return idx

    def with_element_at(self, index: int, spec: ElementSpec) -> "Circuit":
        els = self.elements[:index] + (spec,) + self.elements[index:]
        return Circuit(self.registry, els, self.sources)

    def with_phase_injected(self, mode: str, phi: float) -> "Circuit":
        """Insert a phase shifter on ``mode`` just before its recombiner."""
        return self.with_element_at(
            self.index_before_last_consumer(mode), PhaseShifterSpec(mode, phi)
        )

    def with_flux_segments(self, segments: Mapping[str, float]) -> "Circuit":
        """Insert a flux-phase element per beam, each before its recombiner."""
        circuit = self
        for mode, phase in segments.items():
            circuit = circuit.with_element_at(
                circuit.index_before_last_consumer(mode), FluxSegmentSpec(mode, phase)
            )
        return circuit


@dataclass(frozen=True)
class FluxLoop:
    """Closed loop as an ordered list of (mode, orientation) segments.

    ``orientation`` is +1 when the loop traverses the segment along the beam
    propagation direction and -1 against it; ``winding`` flips the overall
    circulation sense.  A bare mode list would under-determine the loop
    integral, so orientations are explicit.
    """

    segments: tuple[tuple[str, int], ...]
    winding: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "segments", tuple((str(m), int(s)) for m, s in self.segments)
        )
        for mode, sign in self.segments:
            if sign not in (1, -1):
                raise ValueError(f"segment orientation must be +1 or -1, got {sign} for {mode!r}")
        if self.winding not in (1, -1):
            raise ValueError(f"winding must be +1 or -1, got {self.winding}")

    @classmethod
    def from_tokens(cls, tokens: Iterable[str], winding: int = 1) -> "FluxLoop":
        """Parse tokens like ``["a", "-d", "c", "-b"]``."""
        segs = []
        for tok in tokens:
            tok = str(tok).strip()
            if tok.startswith("-"):
                segs.append((tok[1:], -1))
            else:
                segs.append((tok.lstrip("+"), 1))
        return cls(tuple(segs), winding)


@dataclass(frozen=True)
class FluxAssignment:
    """Per-beam flux phases plus the declared loops they may circulate."""

    segment_phases: Mapping[str, float]
    loops: tuple[FluxLoop, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(
            self,
            "segment_phases",
            {str(m): float(p) for m, p in self.segment_phases.items()},
        )
        object.__setattr__(self, "loops", tuple(self.loops))


def wrap_angle(x: float) -> float:
    """Reduce an angle to the canonical interval (-pi, pi]."""
    y = math.fmod(x, 2.0 * math.pi)
    if y <= -math.pi:
        y += 2.0 * math.pi
    elif y > math.pi:
        y -= 2.0 * math.pi
    return y


def enclosed_flux(assignment: FluxAssignment, loop_index: int) -> float:
    """Signed sum of segment phases around a declared loop, in (-pi, pi]."""
    if not 0 <= loop_index < len(assignment.loops):
        raise IndexError(
            f"loop index {loop_index} out of range for {len(assignment.loops)} loop(s)"
        )
    loop = assignment.loops[loop_index]
    total = sum(
        sign * assignment.segment_phases.get(mode, 0.0) for mode, sign in loop.segments
    )
    return wrap_angle(loop.winding * total)


def validate(circuit: Circuit) -> list[str]:
    """Structural diagnostics; an empty list means the circuit is well-formed."""
    diags: list[str] = []
    reg = circuit.registry

    total_photons = 0
    occupied: set[str] = set()
    for mode, count in circuit.sources:
        if mode not in reg:
            diags.append(f"source references unregistered mode {mode!r}")
            continue
        if count < 0:
            diags.append(f"source on {mode!r} has negative photon count {count}")
        total_photons += max(count, 0)
        if count > 0:
            occupied.add(mode)
    if total_photons > reg.n_max:
        diags.append(
            f"sources place {total_photons} photons but n_max={reg.n_max}"
        )

    consumed: set[str] = set()
    for i, el in enumerate(circuit.elements):
        unknown = [m for m in element_modes(el) if m not in reg]
        for m in unknown:
            diags.append(f"element {i} references unregistered mode {m!r}")
        if unknown:
            continue
        if isinstance(el, BeamSplitterSpec):
            ins, outs = set(el.inputs), set(el.outputs)
            for m in el.inputs:
                if m in consumed:
                    diags.append(
                        f"element {i} uses mode {m!r} after it was renamed away"
                    )
            for m in el.outputs:
                if m not in ins and m in occupied:
                    diags.append(
                        f"element {i} renames onto mode {m!r} which may hold photons"
                    )
            feeds = bool(occupied & ins)
            consumed |= ins - outs
            consumed -= outs
            occupied -= ins
            if feeds:
                occupied |= outs
        else:
            if el.mode in consumed:
                diags.append(
                    f"element {i} phases mode {el.mode!r} after it was renamed away"
                )
    return diags


def simulate(circuit: Circuit) -> FockState:
    """Start from the source occupation ket and apply elements in order."""
    diags = validate(circuit)
    if diags:
        raise CircuitValidationError(diags)
    occ = list(circuit.registry.zero_occupation())
    for mode, count in circuit.sources:
        occ[circuit.registry.index(mode)] += count
    state = FockState(circuit.registry, {tuple(occ): 1.0 + 0j})
    for el in circuit.elements:
        state = apply_element(state, el)
    return state


# --- Canonical two-source swap interferometer -------------------------------
#
# Two single-photon sources feed primary splitters whose inner outputs meet
# at a mixing splitter (heralding side) while the outer outputs recombine at
# an analysis splitter behind a scannable phase.

FIG1_MODES = ("a", "b", "c", "d", "b_out", "c_out", "a_out", "d_out")

FIG1_HERALD_B_CLICK = {"b_out": 1, "c_out": 0}
FIG1_HERALD_C_CLICK = {"b_out": 0, "c_out": 1}

#: (pattern_id, demands) pairs for the analysis detectors.
FIG1_FINAL_PATTERNS = (
    ("a_out", {"a_out": 1, "d_out": 0}),
    ("d_out", {"a_out": 0, "d_out": 1}),
)


def fig1_circuit(
    flux: Mapping[str, float] | None = None,
    mirror_phase: float = 0.0,
    convention: str = "real-hadamard",
) -> Circuit:
    """The canonical fixture: two sources, mixing splitter, analysis splitter.

    ``flux`` maps internal beams (a, b, c, d) to flux-segment phases; the
    steering mirrors on b and c are modeled as configurable phases
    (0 by default).
    """
    elements: tuple[ElementSpec, ...] = (
        BeamSplitterSpec("a", "b", "a", "b", convention),
        BeamSplitterSpec("c", "d", "c", "d", convention),
        PhaseShifterSpec("b", mirror_phase),  # mirror M1
        PhaseShifterSpec("c", mirror_phase),  # mirror M2
        BeamSplitterSpec("b", "c", "b_out", "c_out", convention),
        PhaseShifterSpec("d", 0.0),  # analysis phase slot
        BeamSplitterSpec("a", "d", "a_out", "d_out", convention),
    )
    circuit = Circuit(ModeRegistry(FIG1_MODES), elements, (("a", 1), ("c", 1)))
    if flux:
        circuit = circuit.with_flux_segments(flux)
    return circuit


def fig1_loop() -> FluxLoop:
    """The internal loop bounded by beams a, d, c, b (in traversal order)."""
    return FluxLoop((("a", 1), ("d", -1), ("c", 1), ("b", -1)), winding=1)
