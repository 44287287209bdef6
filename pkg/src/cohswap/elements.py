"""Linear-optical elements: beam splitters, phase shifters, flux segments.

Each element acts on a :class:`~cohswap.fock.FockState` as a linear
substitution on creation operators.  Beam splitters may reuse their input
mode names as outputs (beams keep their labels through the element) or
rename to fresh modes; renaming requires the target modes to be empty.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .fock import FockState

REAL_HADAMARD = "real-hadamard"
SYMMETRIC_I = "symmetric-i"
CONVENTIONS = (REAL_HADAMARD, SYMMETRIC_I)


class ModeCollisionError(ValueError):
    """A beam splitter renamed onto a mode that already holds photons."""


@dataclass(frozen=True)
class BeamSplitterSpec:
    """Two-mode mixer; ``transmissivity`` is the intensity fraction kept."""

    mode_in_1: str
    mode_in_2: str
    mode_out_1: str
    mode_out_2: str
    convention: str = REAL_HADAMARD
    transmissivity: float = 0.5

    def __post_init__(self) -> None:
        if self.mode_in_1 == self.mode_in_2:
            raise ValueError("beam splitter input modes must be distinct")
        if self.mode_out_1 == self.mode_out_2:
            raise ValueError("beam splitter output modes must be distinct")
        if self.convention not in CONVENTIONS:
            raise ValueError(f"unknown convention {self.convention!r}; choose from {CONVENTIONS}")
        t = self.transmissivity
        if not (isinstance(t, (int, float)) and math.isfinite(t) and 0.0 <= t <= 1.0):
            raise ValueError(f"transmissivity must lie in [0, 1], got {t!r}")

    @property
    def inputs(self) -> tuple[str, str]:
        return (self.mode_in_1, self.mode_in_2)

    @property
    def outputs(self) -> tuple[str, str]:
        return (self.mode_out_1, self.mode_out_2)


@dataclass(frozen=True)
class PhaseShifterSpec:
    mode: str
    phi: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.phi):
            raise ValueError(f"phase must be finite, got {self.phi!r}")


@dataclass(frozen=True)
class FluxSegmentSpec:
    """Path phase from a vector potential along one beam segment.

    Dynamically identical to a phase shifter; kept as a separate element so
    circuits can account for the enclosed flux of declared loops.
    """

    mode: str
    segment_phase: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.segment_phase):
            raise ValueError(f"segment phase must be finite, got {self.segment_phase!r}")


ElementSpec = Union[BeamSplitterSpec, PhaseShifterSpec, FluxSegmentSpec]


def transfer_matrix(spec: BeamSplitterSpec) -> np.ndarray:
    """2x2 unitary mapping input beam amplitudes to output amplitudes.

    ``real-hadamard`` at transmissivity t: [[rt, rr], [rr, -rt]];
    ``symmetric-i``: [[rt, i*rr], [i*rr, rt]], with rt=sqrt(t), rr=sqrt(1-t).
    """
    rt = math.sqrt(spec.transmissivity)
    rr = math.sqrt(1.0 - spec.transmissivity)
    if spec.convention == REAL_HADAMARD:
        return np.array([[rt, rr], [rr, -rt]], dtype=complex)
    return np.array([[rt, 1j * rr], [1j * rr, rt]], dtype=complex)


def apply_two_mode_matrix(
    state: FockState,
    matrix: np.ndarray,
    ins: Sequence[str],
    outs: Sequence[str],
) -> FockState:
    """Substitute the input creation operators by matrix-weighted output ones.

    With outputs expressed as ``out_i = sum_j U[i, j] in_j`` (beam
    amplitudes), creation operators transform columnwise:
    ``in_j+ -> sum_i U[i, j] out_i+``.  Each occupation ket is expanded as an
    operator monomial, the two input factors are expanded binomially, and the
    result is re-expressed in the normalized occupation basis.
    """
    reg = state.registry
    i1, i2 = reg.index(ins[0]), reg.index(ins[1])
    o1, o2 = reg.index(outs[0]), reg.index(outs[1])
    fresh = [o for o in (o1, o2) if o not in (i1, i2)]
    u = np.asarray(matrix, dtype=complex)
    if u.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {u.shape}")

    out_terms: dict[tuple[int, ...], complex] = {}
    for occ, amp in state.items():
        n1, n2 = occ[i1], occ[i2]
        base = list(occ)
        base[i1] = 0
        base[i2] = 0
        for o in fresh:
            if base[o]:
                raise ModeCollisionError(
                    f"output mode {reg.modes[o]!r} is already occupied in {occ}"
                )
        scale = amp / math.sqrt(math.factorial(n1) * math.factorial(n2))
        for k in range(n1 + 1):
            c1 = math.comb(n1, k) * u[0, 0] ** k * u[1, 0] ** (n1 - k)
            for l in range(n2 + 1):
                c2 = math.comb(n2, l) * u[0, 1] ** l * u[1, 1] ** (n2 - l)
                p = k + l
                q = n1 + n2 - p
                new = list(base)
                new[o1] = p
                new[o2] = q
                key = tuple(new)
                weight = scale * c1 * c2 * math.sqrt(math.factorial(p) * math.factorial(q))
                out_terms[key] = out_terms.get(key, 0j) + weight
    return FockState(reg, out_terms)


def apply_beam_splitter(state: FockState, spec: BeamSplitterSpec) -> FockState:
    return apply_two_mode_matrix(state, transfer_matrix(spec), spec.inputs, spec.outputs)


def apply_phase(state: FockState, spec: PhaseShifterSpec) -> FockState:
    """Multiply each ket by ``exp(i*phi*n)`` for n photons in the mode."""
    k = state.registry.index(spec.mode)
    out = {
        occ: amp * cmath.exp(1j * spec.phi * occ[k]) if occ[k] else amp
        for occ, amp in state.items()
    }
    return FockState(state.registry, out)


def apply_flux_segment(state: FockState, spec: FluxSegmentSpec) -> FockState:
    return apply_phase(state, PhaseShifterSpec(spec.mode, spec.segment_phase))


def apply_element(state: FockState, spec: ElementSpec) -> FockState:
    if isinstance(spec, BeamSplitterSpec):
        return apply_beam_splitter(state, spec)
    if isinstance(spec, PhaseShifterSpec):
        return apply_phase(state, spec)
    if isinstance(spec, FluxSegmentSpec):
        return apply_flux_segment(state, spec)
    raise TypeError(f"not an optical element spec: {spec!r}")


def element_modes(spec: ElementSpec) -> tuple[str, ...]:
    """All mode names an element references."""
    if isinstance(spec, BeamSplitterSpec):
        return tuple(dict.fromkeys(spec.inputs + spec.outputs))
    if isinstance(spec, (PhaseShifterSpec, FluxSegmentSpec)):
        return (spec.mode,)
    raise TypeError(f"not an optical element spec: {spec!r}")


__all__ = [
    "BeamSplitterSpec",
    "PhaseShifterSpec",
    "FluxSegmentSpec",
    "ElementSpec",
    "ModeCollisionError",
    "CONVENTIONS",
    "REAL_HADAMARD",
    "SYMMETRIC_I",
    "transfer_matrix",
    "apply_two_mode_matrix",
    "apply_beam_splitter",
    "apply_phase",
    "apply_flux_segment",
    "apply_element",
    "element_modes",
]
