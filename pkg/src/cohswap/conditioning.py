"""Heralded-state extraction, conditional fringe scans, and visibility fits."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Collection, Mapping, Sequence

import numpy as np

from .circuit import Circuit, simulate
from .fock import FockState, project

#: Heralding patterns demanding an odd photon count on one of these modes get
#: the pi classical-communication correction by default.
DEFAULT_PI_MODES = ("c_out",)


@dataclass(frozen=True)
class DetectionPattern:
    """Exact photon counts demanded on a subset of modes."""

    demands: Mapping[str, int]

    def __post_init__(self) -> None:
        clean = {}
        for mode, count in dict(self.demands).items():
            count = int(count)
            if count < 0:
                raise ValueError(f"demanded count for {mode!r} must be non-negative")
            clean[str(mode)] = count
        object.__setattr__(self, "demands", clean)

    def key(self) -> str:
        """Canonical id string, e.g. ``"b_out=1,c_out=0"``."""
        return ",".join(f"{m}={n}" for m, n in sorted(self.demands.items()))


@dataclass(frozen=True)
class HeraldOutcome:
    """Result of conditioning on a detection pattern."""

    probability: float
    conditional_state: FockState
    correction_phase: float

    @property
    def is_empty(self) -> bool:
        return self.probability == 0.0


def herald(
    state: FockState,
    pattern: DetectionPattern,
    pi_modes: Collection[str] = DEFAULT_PI_MODES,
) -> HeraldOutcome:
    """Project onto a detection pattern and report the correction phase.

    The correction phase is the classical-communication part of the swap:
    pi when the pattern demands an odd photon count summed over ``pi_modes``
    (by default a click on the second mixing-splitter output), else 0.
    Applying it as a phase shift on either recombining beam maps the two
    heralded branches onto the same superposition.
    """
    probability, conditional = project(state, pattern.demands)
    odd = sum(pattern.demands.get(m, 0) for m in pi_modes) % 2
    return HeraldOutcome(probability, conditional, math.pi if odd else 0.0)


@dataclass(frozen=True)
class FringeData:
    """Conditional detection probabilities sampled over a phase grid.

    ``probabilities[pattern_id][k]`` is the probability of the pattern at
    phase ``phase_grid[k]`` conditioned on the herald.  Grid points where the
    herald itself had zero probability are flagged and carry NaN entries.
    """

    phase_grid: tuple[float, ...]
    pattern_ids: tuple[str, ...]
    patterns: tuple[DetectionPattern, ...]
    probabilities: Mapping[str, tuple[float, ...]]
    herald_probabilities: tuple[float, ...]

    def __post_init__(self) -> None:
        grid = tuple(float(x) for x in self.phase_grid)
        object.__setattr__(self, "phase_grid", grid)
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValueError("phase grid must be strictly increasing")
        object.__setattr__(self, "pattern_ids", tuple(self.pattern_ids))
        object.__setattr__(self, "patterns", tuple(self.patterns))
        probs = {k: tuple(float(p) for p in v) for k, v in dict(self.probabilities).items()}
        object.__setattr__(self, "probabilities", probs)
        object.__setattr__(
            self, "herald_probabilities", tuple(float(p) for p in self.herald_probabilities)
        )
        for pid in self.pattern_ids:
            if pid not in probs:
                raise ValueError(f"missing probability column for pattern {pid!r}")
            if len(probs[pid]) != len(grid):
                raise ValueError(f"probability column {pid!r} does not match the grid")
            for p in probs[pid]:
                if not math.isnan(p) and not -1e-12 <= p <= 1.0 + 1e-12:
                    raise ValueError(f"probability {p} for {pid!r} outside [0, 1]")

    @property
    def flagged_points(self) -> tuple[int, ...]:
        """Grid indices where the herald pattern had zero probability."""
        return tuple(i for i, p in enumerate(self.herald_probabilities) if p == 0.0)

    def column(self, pattern: "DetectionPattern | str") -> tuple[float, ...]:
        return self.probabilities[self._resolve(pattern)]

    def _resolve(self, pattern: "DetectionPattern | str") -> str:
        if isinstance(pattern, str):
            if pattern not in self.probabilities:
                raise KeyError(f"no pattern with id {pattern!r}")
            return pattern
        for pid, known in zip(self.pattern_ids, self.patterns):
            if known == pattern:
                return pid
        raise KeyError(f"pattern {pattern.demands!r} was not scanned")


def default_phase_grid(n: int = 64) -> tuple[float, ...]:
    """n uniform phases on [0, 2*pi)."""
    return tuple(np.linspace(0.0, 2.0 * math.pi, n, endpoint=False))


def fringe_scan(
    circuit: Circuit,
    herald_pattern: DetectionPattern,
    scan_phase_mode: str,
    grid: Sequence[float],
    final_patterns: Sequence[DetectionPattern],
    pattern_ids: Sequence[str] | None = None,
    pi_modes: Collection[str] = DEFAULT_PI_MODES,
) -> FringeData:
    """Scan a phase on one beam and record herald-conditioned probabilities.

    For each grid phase, a phase shifter is injected on ``scan_phase_mode``
    just before the splitter that recombines it, the circuit is simulated,
    the state is conditioned on ``herald_pattern``, and each final pattern's
    conditional probability is recorded.
    """
    if len(grid) == 0:
        raise ValueError("phase grid must be non-empty")
    if pattern_ids is None:
        pattern_ids = [p.key() for p in final_patterns]
    if len(pattern_ids) != len(final_patterns):
        raise ValueError("pattern_ids and final_patterns lengths differ")

    columns: dict[str, list[float]] = {pid: [] for pid in pattern_ids}
    herald_probs: list[float] = []
    for phi in grid:
        state = simulate(circuit.with_phase_injected(scan_phase_mode, float(phi)))
        outcome = herald(state, herald_pattern, pi_modes)
        herald_probs.append(outcome.probability)
        for pid, pattern in zip(pattern_ids, final_patterns):
            if outcome.is_empty:
                columns[pid].append(math.nan)
            else:
                p, _ = project(outcome.conditional_state, pattern.demands)
                columns[pid].append(p)

    return FringeData(
        phase_grid=tuple(float(x) for x in grid),
        pattern_ids=tuple(pattern_ids),
        patterns=tuple(final_patterns),
        probabilities={pid: tuple(v) for pid, v in columns.items()},
        herald_probabilities=tuple(herald_probs),
    )


@dataclass(frozen=True)
class VisibilityFit:
    """Fit of ``p(phi) = A * (1 - V * cos(phi - offset))``."""

    V: float
    offset: float
    residual: float
    offset_defined: bool = True


def fit_fringe(phases: Sequence[float], probabilities: Sequence[float]) -> VisibilityFit:
    """Closed-form least squares on the {1, cos, sin} basis.

    Sinusoidal data needs no iterative optimizer: the model is linear in
    (A, A*V*cos(offset), A*V*sin(offset)) and the amplitude/phase are
    recovered from the coefficients.  Constant data fits V=0 with the offset
    flagged undefined.
    """
    phi = np.asarray(phases, dtype=float)
    p = np.asarray(probabilities, dtype=float)
    keep = ~np.isnan(p)
    phi, p = phi[keep], p[keep]
    if len(np.unique(phi)) < 3:
        raise ValueError("visibility fit needs at least 3 distinct phase points")

    design = np.column_stack([np.ones_like(phi), np.cos(phi), np.sin(phi)])
    coeffs, *_ = np.linalg.lstsq(design, p, rcond=None)
    c0, c1, c2 = coeffs
    residual = float(np.sqrt(np.mean((design @ coeffs - p) ** 2)))

    amplitude = math.hypot(c1, c2)
    scale = max(abs(c0), amplitude, 1e-30)
    if amplitude / scale < 1e-12 or c0 <= 0.0:
        return VisibilityFit(V=0.0, offset=0.0, residual=residual, offset_defined=False)
    return VisibilityFit(
        V=float(amplitude / c0),
        offset=float(math.atan2(-c2, -c1)),
        residual=residual,
    )


def extract_visibility(data: FringeData, pattern: "DetectionPattern | str") -> VisibilityFit:
    """Fit one scanned pattern's fringe; see :func:`fit_fringe`."""
    return fit_fringe(data.phase_grid, data.column(pattern))
