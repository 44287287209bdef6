"""cohswap: exact few-photon simulation of heralded two-source interference.

The package covers three layers:

* ``fock``/``elements``/``circuit`` -- sparse Fock-state algebra and
  linear-optical circuit simulation at a bounded photon number;
* ``conditioning`` -- heralded-state extraction, conditional fringe scans,
  and sinusoidal visibility fits, including flux-loop bookkeeping;
* ``spectral`` -- the pulsed-pair temporal model giving the four-fold
  coincidence visibility, in closed form and by direct quadrature.
"""

from .fock import (
    FockState,
    ModeRegistry,
    N_MAX_DEFAULT,
    PRUNE_THRESHOLD,
    RegistryMismatchError,
    TruncationError,
    UnknownModeError,
    apply_creation,
    inner_product,
    project,
    superpose,
    vacuum,
)
from .elements import (
    BeamSplitterSpec,
    FluxSegmentSpec,
    ModeCollisionError,
    PhaseShifterSpec,
    apply_beam_splitter,
    apply_element,
    apply_flux_segment,
    apply_phase,
    apply_two_mode_matrix,
    transfer_matrix,
)
from .circuit import (
    Circuit,
    CircuitValidationError,
    FIG1_FINAL_PATTERNS,
    FIG1_HERALD_B_CLICK,
    FIG1_HERALD_C_CLICK,
    FIG1_MODES,
    FluxAssignment,
    FluxLoop,
    enclosed_flux,
    fig1_circuit,
    fig1_loop,
    simulate,
    validate,
    wrap_angle,
)
from .conditioning import (
    DetectionPattern,
    FringeData,
    HeraldOutcome,
    VisibilityFit,
    default_phase_grid,
    extract_visibility,
    fit_fringe,
    fringe_scan,
    herald,
)
from .spectral import (
    JointAmplitude,
    QuadratureConvergenceError,
    SpectralProfile,
    VisibilityResult,
    joint_amplitude,
    visibility_closed_form,
    visibility_quadrature,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # fock
    "FockState",
    "ModeRegistry",
    "N_MAX_DEFAULT",
    "PRUNE_THRESHOLD",
    "RegistryMismatchError",
    "TruncationError",
    "UnknownModeError",
    "apply_creation",
    "inner_product",
    "project",
    "superpose",
    "vacuum",
    # elements
    "BeamSplitterSpec",
    "FluxSegmentSpec",
    "ModeCollisionError",
    "PhaseShifterSpec",
    "apply_beam_splitter",
    "apply_element",
    "apply_flux_segment",
    "apply_phase",
    "apply_two_mode_matrix",
    "transfer_matrix",
    # circuit
    "Circuit",
    "CircuitValidationError",
    "FIG1_FINAL_PATTERNS",
    "FIG1_HERALD_B_CLICK",
    "FIG1_HERALD_C_CLICK",
    "FIG1_MODES",
    "FluxAssignment",
    "FluxLoop",
    "enclosed_flux",
    "fig1_circuit",
    "fig1_loop",
    "simulate",
    "validate",
    "wrap_angle",
    # conditioning
    "DetectionPattern",
    "FringeData",
    "HeraldOutcome",
    "VisibilityFit",
    "default_phase_grid",
    "extract_visibility",
    "fit_fringe",
    "fringe_scan",
    "herald",
    # spectral
    "JointAmplitude",
    "QuadratureConvergenceError",
    "SpectralProfile",
    "VisibilityResult",
    "joint_amplitude",
    "visibility_closed_form",
    "visibility_quadrature",
]
