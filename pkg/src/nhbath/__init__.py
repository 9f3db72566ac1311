"""Spontaneous emission of a two-level emitter coupled to the edge of a
semi-infinite uniformly lossy lattice.

Exact spectral decomposition (poles and branch-cut integrals on two Riemann
sheets) cross-validated against direct lattice, momentum-space, and master
equation integration; detection of physical and virtual pole coalescences;
and the optimal dissipation rate for fastest relaxation.
"""

from ._backend import backend_name
from .errors import (
    BranchCutEvaluation,
    DetunedCriticality,
    DetuningSingularity,
    DimensionTooLarge,
    NearDegenerate,
    NHBathError,
    PoleEvaluation,
    PoleOnPath,
    ReflectionRisk,
    TimeTooSmall,
    ToleranceNotMet,
)
from .inversion import (
    AsymptoticModel,
    Channel,
    ConfluentTerm,
    CutEdge,
    DecayDecomposition,
    HankelPair,
    asymptotic_model,
    cut_discontinuity,
    double_pole_moments,
    hankel_contributions,
    survival_amplitude_spectral,
)
from .lattice import (
    Boundary,
    LatticeConfig,
    LindbladResult,
    TimeSeries,
    default_n_sites,
    evolve_lattice,
    evolve_lindblad,
    evolve_momentum,
    siegert_profile,
    siegert_residual,
)
from .spectral import (
    CriticalRates,
    EpKind,
    EpRecord,
    ModelParams,
    Pole,
    Regime,
    SheetLabel,
    StateKind,
    bloch_wavenumber,
    classify_state,
    closed_form_poles,
    contour_residue,
    coupling_regime,
    critical_gammas,
    detect_ep,
    find_poles,
    laplace_amplitude,
    laplace_denominator,
    resolvent_ee,
    residue,
    self_energy,
)
from .sweep import (
    EventKind,
    OptimalDissipation,
    PhaseCell,
    PhaseDiagram,
    PoleTrajectory,
    RegimeReport,
    SweepEvent,
    optimal_dissipation,
    phase_diagram,
    regime_report,
    sweep_gamma,
)

__version__ = "0.1.0"
