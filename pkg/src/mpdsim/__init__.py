"""Multiplane-diffraction quantum-path simulator.

Path wave functions through cascaded Gaussian slit planes, history-state
probabilities, the ambiguous-measurement Leggett-Garg analysis with
signaling accounting, temporal path interference, and source-coherence
feasibility checks.
"""

from .coherence import (
    CoherenceReport,
    check_lgi_coherence,
    check_qpi_coherence,
    coherence_diameter,
    temporal_coherence_length,
)
from .geometry import (
    InvalidSetupError,
    PathIndex,
    PhysicalSetup,
    PlaneSpec,
    SlitOverlapWarning,
    all_paths,
)
from .histories import (
    EventKind,
    EventSpec,
    HistorySpec,
    HistoryWeight,
    QuadratureGrid,
    auto_grid,
    history_weight,
    measure_gain_sq,
    measurement,
    prob_measure,
    prob_slit_set,
    slit_gain,
    slit_projection,
    slit_superposition,
)
from .lgi import (
    ConversionMatrix,
    LgiReport,
    LgiScenario,
    OracleMismatchError,
    SignAssignment,
    all_sign_assignments,
    ambiguous_joint_probs,
    conversion_matrix,
    lgi_closed_form,
    lgi_quantities,
    optimize_signs,
    sweep,
)
from .propagation import (
    PathCoefficients,
    coeffs_for_plane,
    kernel,
    path_wavefunction,
    source_amplitude,
    superposed_wavefunction,
    three_plane_coeffs,
    two_plane_coeffs,
)
from .qpi import QpiReport, best_candidate, find_destructive, qpi_probabilities
from .units import Constants, DEFAULT_CONSTANTS, virtual_mass

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
