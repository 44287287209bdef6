"""Sparse Fock-basis algebra over a fixed registry of named bosonic modes.

A state is a map from photon-occupation vectors to complex amplitudes.  The
registry caps the total photon number (``n_max``), so every operation is an
exact finite-dimensional computation; there is no floating-point truncation
of the Hilbert space itself, only pruning of numerically-zero amplitudes.

Convention: creation acts as ``|n> -> sqrt(n+1) |n+1>``.  Equivalently an
operator monomial ``(x+)^n |0>`` equals ``sqrt(n!) |n>``, so a state written
as ``c * x+^2 |0>`` is stored with amplitude ``c*sqrt(2)`` on the occupation
ket ``|2>``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, Sequence

#: Default cap on the total photon number across all modes.
N_MAX_DEFAULT = 4

#: Amplitudes with magnitude below this are dropped after each operation.
PRUNE_THRESHOLD = 1e-14


class UnknownModeError(ValueError):
    """A mode name is not present in the registry."""


class TruncationError(ValueError):
    """An operation would push the total photon number past ``n_max``."""


class RegistryMismatchError(ValueError):
    """States that must share one mode registry do not."""


@dataclass(frozen=True)
class ModeRegistry:
    """Ordered, immutable set of mode names plus the photon-number cap."""

    modes: tuple[str, ...]
    n_max: int = N_MAX_DEFAULT

    def __post_init__(self) -> None:
        # an empty registry is a legal degenerate value (it appears when a
        # projection consumes every mode); vacuum() rejects it instead
        object.__setattr__(self, "modes", tuple(self.modes))
        if len(set(self.modes)) != len(self.modes):
            raise ValueError(f"duplicate mode names in {self.modes}")
        for name in self.modes:
            if not isinstance(name, str) or not name:
                raise ValueError(f"mode names must be non-empty strings, got {name!r}")
        if self.n_max < 0:
            raise ValueError("n_max must be non-negative")
        object.__setattr__(self, "_index", {m: i for i, m in enumerate(self.modes)})

    def __len__(self) -> int:
        return len(self.modes)

    def __contains__(self, mode: str) -> bool:
        return mode in self._index  # type: ignore[attr-defined]

    def index(self, mode: str) -> int:
        try:
            return self._index[mode]  # type: ignore[attr-defined]
        except KeyError:
            raise UnknownModeError(f"unknown mode {mode!r}") from None

    def without(self, drop: Iterable[str]) -> "ModeRegistry":
        """Registry with the given modes removed (same ``n_max``)."""
        gone = set(drop)
        for mode in gone:
            self.index(mode)
        kept = tuple(m for m in self.modes if m not in gone)
        return ModeRegistry(kept, self.n_max)

    def zero_occupation(self) -> tuple[int, ...]:
        return (0,) * len(self.modes)


class FockState:
    """Immutable sparse superposition of occupation kets.

    Instances are value-like: operations return new states and never mutate
    their inputs, so states are safe to share between concurrent workers.
    """

    __slots__ = ("registry", "_terms")

    def __init__(self, registry: ModeRegistry, terms: Mapping[Sequence[int], complex] | None = None):
        n_modes = len(registry)
        cleaned: dict[tuple[int, ...], complex] = {}
        for occ, amp in (terms or {}).items():
            occ = tuple(int(n) for n in occ)
            if len(occ) != n_modes:
                raise ValueError(f"occupation {occ} does not match registry size {n_modes}")
            if any(n < 0 for n in occ):
                raise ValueError(f"negative photon count in {occ}")
            if sum(occ) > registry.n_max:
                raise TruncationError(f"occupation {occ} exceeds n_max={registry.n_max}")
            a = complex(amp)
            if abs(a) >= PRUNE_THRESHOLD:
                cleaned[occ] = a
        self.registry = registry
        self._terms = cleaned

    @property
    def terms(self) -> Mapping[tuple[int, ...], complex]:
        """Read-only view of the occupation -> amplitude map."""
        return MappingProxyType(self._terms)

    def items(self) -> Iterator[tuple[tuple[int, ...], complex]]:
        return iter(self._terms.items())

    def __len__(self) -> int:
        return len(self._terms)

    @property
    def is_empty(self) -> bool:
        return not self._terms

    def amplitude(self, occ: Sequence[int]) -> complex:
        return self._terms.get(tuple(occ), 0j)

    def norm(self) -> float:
        return math.sqrt(sum(abs(a) ** 2 for a in self._terms.values()))

    def normalized(self) -> "FockState":
        n = self.norm()
        if n == 0.0:
            return self
        return FockState(self.registry, {occ: a / n for occ, a in self._terms.items()})

    def __repr__(self) -> str:
        inner = ", ".join(f"{occ}: {amp:.6g}" for occ, amp in sorted(self._terms.items()))
        return f"FockState({{{inner}}})"


def vacuum(registry: ModeRegistry) -> FockState:
    """All-modes-empty state with unit amplitude."""
    if not registry.modes:
        raise ValueError("vacuum needs a non-empty registry")
    return FockState(registry, {registry.zero_occupation(): 1.0 + 0j})


def apply_creation(state: FockState, mode: str) -> FockState:
    """Add one photon to ``mode``: each ket ``|..n..>`` gains ``sqrt(n+1)``."""
    k = state.registry.index(mode)
    n_max = state.registry.n_max
    out: dict[tuple[int, ...], complex] = {}
    for occ, amp in state.items():
        if sum(occ) + 1 > n_max:
            raise TruncationError(
                f"creation on {mode!r} would exceed n_max={n_max} (occupation {occ})"
            )
        raised = occ[:k] + (occ[k] + 1,) + occ[k + 1 :]
        out[raised] = out.get(raised, 0j) + amp * math.sqrt(occ[k] + 1)
    return FockState(state.registry, out)


def superpose(parts: Iterable[tuple[complex, FockState]]) -> FockState:
    """Term-wise linear combination ``sum_i c_i |s_i>`` over one registry."""
    parts = list(parts)
    if not parts:
        raise ValueError("superpose needs at least one (coefficient, state) pair")
    registry = parts[0][1].registry
    acc: dict[tuple[int, ...], complex] = {}
    for coeff, state in parts:
        if state.registry != registry:
            raise RegistryMismatchError("superpose requires a shared registry")
        for occ, amp in state.items():
            acc[occ] = acc.get(occ, 0j) + complex(coeff) * amp
    return FockState(registry, acc)


def inner_product(lhs: FockState, rhs: FockState) -> complex:
    """`<lhs|rhs>` in the occupation basis."""
    if lhs.registry != rhs.registry:
        raise RegistryMismatchError("inner_product requires a shared registry")
    small, big = (lhs, rhs) if len(lhs) <= len(rhs) else (rhs, lhs)
    total = 0j
    for occ, amp in small.items():
        other = big.amplitude(occ)
        if other:
            if small is lhs:
                total += amp.conjugate() * other
            else:
                total += other.conjugate() * amp
    return total


def project(state: FockState, pattern: Mapping[str, int]) -> tuple[float, FockState]:
    """Condition on exact photon counts over a subset of modes.

    Keeps the terms whose counts on the pattern modes match exactly.  Returns
    the squared norm of the kept part (the detection probability for a
    normalized input) and the kept part restricted to the remaining modes,
    renormalized.  A zero-probability pattern yields an empty remainder.
    """
    registry = state.registry
    demands: dict[int, int] = {}
    for mode, count in pattern.items():
        count = int(count)
        if count < 0:
            raise ValueError(f"pattern count for {mode!r} must be non-negative")
        demands[registry.index(mode)] = count

    kept = {
        occ: amp
        for occ, amp in state.items()
        if all(occ[i] == c for i, c in demands.items())
    }
    probability = sum(abs(a) ** 2 for a in kept.values())
    reduced = registry.without(pattern.keys()) if pattern else registry
    if probability == 0.0:
        return 0.0, FockState(reduced, {})

    drop = set(demands)
    scale = 1.0 / math.sqrt(probability)
    remainder = {
        tuple(n for i, n in enumerate(occ) if i not in drop): amp * scale
        for occ, amp in kept.items()
    }
    return probability, FockState(reduced, remainder)
