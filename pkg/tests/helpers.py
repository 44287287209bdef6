"""Shared test utilities: random states and an independent monomial oracle.

The polynomial oracle expands products of linear forms in creation operators
without touching the package's beam-splitter machinery, so simulator results
can be checked against a genuinely independent computation.
"""
from __future__ import annotations

import math

import numpy as np

from cohswap import FockState, ModeRegistry, inner_product


def random_state(
    registry: ModeRegistry,
    rng: np.random.Generator,
    n_terms: int = 6,
    max_total: int | None = None,
) -> FockState:
    """Normalized state with random occupations up to ``max_total`` photons."""
    n_modes = len(registry)
    cap = registry.n_max if max_total is None else max_total
    terms = {}
    while len(terms) < n_terms:
        budget = int(rng.integers(0, cap + 1))
        occ = [0] * n_modes
        for _ in range(budget):
            occ[int(rng.integers(0, n_modes))] += 1
        amp = complex(rng.normal(), rng.normal())
        terms[tuple(occ)] = amp
    return FockState(registry, terms).normalized()


def fidelity(x: FockState, y: FockState) -> float:
    """|<x|y>| for normalized states: 1 iff equal up to a global phase."""
    return abs(inner_product(x, y))


def assert_states_close(actual: FockState, expected: dict, tol: float = 1e-12) -> None:
    """Compare term maps exactly (including phases), entry by entry."""
    keys = set(actual.terms) | set(expected)
    for occ in sorted(keys):
        got = actual.amplitude(occ)
        want = complex(expected.get(occ, 0j))
        assert abs(got - want) <= tol, f"amplitude at {occ}: {got} != {want}"


# --- Independent monomial-expansion oracle ---------------------------------

Poly = dict  # exponent tuple -> complex coefficient


def poly_linear(coeffs: dict[int, complex], n_modes: int) -> Poly:
    """A linear form sum_i c_i * x_i as a monomial map."""
    poly: Poly = {}
    for idx, c in coeffs.items():
        exp = [0] * n_modes
        exp[idx] = 1
        poly[tuple(exp)] = poly.get(tuple(exp), 0j) + complex(c)
    return poly


def poly_mul(p1: Poly, p2: Poly) -> Poly:
    out: Poly = {}
    for e1, c1 in p1.items():
        for e2, c2 in p2.items():
            key = tuple(a + b for a, b in zip(e1, e2))
            out[key] = out.get(key, 0j) + c1 * c2
    return out


def poly_scale(p: Poly, s: complex) -> Poly:
    return {e: c * s for e, c in p.items()}


def poly_to_basis_amplitudes(p: Poly) -> dict:
    """Monomial coefficients -> normalized-ket amplitudes (factor sqrt(n!))."""
    return {
        exp: coeff * math.sqrt(math.prod(math.factorial(n) for n in exp))
        for exp, coeff in p.items()
        if abs(coeff) > 0
    }


def two_source_mixed_state_oracle() -> dict:
    """Hand expansion of the two-source state behind the mixing splitter.

    Modes ordered (a, b, c, d, b_out, c_out): the product
    (1/2) * (x_a + (x_bo + x_co)/sqrt2) * ((x_bo - x_co)/sqrt2 + x_d)
    expanded and converted to normalized-ket amplitudes.
    """
    r = 1.0 / math.sqrt(2.0)
    n = 6
    a, d, bo, co = 0, 3, 4, 5
    f1 = poly_linear({a: 1.0, bo: r, co: r}, n)
    f2 = poly_linear({bo: r, co: -r, d: 1.0}, n)
    return poly_to_basis_amplitudes(poly_scale(poly_mul(f1, f2), 0.5))
