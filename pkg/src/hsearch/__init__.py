"""Continuous-time quantum search on a two-level reduction.

The package models the Hamiltonian family
``H = E(a|w><w| + b|w><s| + c|s><w| + d|s><s|)`` with Hermiticity forcing
``b = conj(c) = r e^{i phi}``: construction and validation
(:mod:`~hsearch.core`, :mod:`~hsearch.hamiltonian`), exact spectral
evolution next to an independent full-space integrator
(:mod:`~hsearch.evolution`), closed-form probabilities and read-out times
(:mod:`~hsearch.closedform`), reproducible experiments
(:mod:`~hsearch.experiments`), and the acceptance suite
(:mod:`~hsearch.verification`).  The ``hsearch`` console script fronts it
all.
"""

from .core import (
    DEFAULT_TOLERANCES,
    DimensionTooLarge,
    EmptyTargets,
    GParams,
    HsearchError,
    IntegratorDriftExceeded,
    NegativeCoupling,
    NegativeDiscriminant,
    NoOscillation,
    NonFiniteInput,
    NonPositiveEnergy,
    NumericalError,
    OverlapOutOfRange,
    SearchProblem,
    SingularDenominator,
    TargetsCoverAll,
    Tolerances,
    UnnormalizedInput,
    ValidationError,
    ZeroOverlap,
    draw_unit_vector,
    make_overlap_problem,
    make_params,
    make_problem,
    seeded_rng,
    uniform_state,
)
from .hamiltonian import (
    DIM_CAP,
    ReducedHamiltonian,
    farhi_params,
    fenner_params,
    full_matrix,
    is_perfect,
    new_params,
    perfect_params,
    reduced_matrix,
)
from .evolution import (
    Trace,
    evolve_full,
    evolve_full_times,
    evolve_reduced,
    probability_trace,
    project_reduced,
    propagator_2x2,
    success_probability,
    target_subspace_probability,
)
from .closedform import (
    ClosedForm,
    C_paper,
    M_value,
    PgBoundReport,
    closed_form,
    coefficients_eq3,
    cross_term,
    near_perfect_deficit,
    pg_bound_check,
    probability_eq1,
    probability_eq2,
    qD_values,
    readout_time,
)
from .experiments import (
    FAMILIES,
    Channel,
    DiscrepancyReport,
    ScalingReport,
    SweepReport,
    TrialsReport,
    discrepancy_scan,
    family_params,
    phase_sweep,
    random_init_trials,
    scaling_study,
)

__version__ = "0.1.0"

__all__ = [
    # errors
    "HsearchError", "ValidationError", "NumericalError",
    "NonPositiveEnergy", "NegativeCoupling", "NonFiniteInput",
    "EmptyTargets", "TargetsCoverAll", "ZeroOverlap", "UnnormalizedInput",
    "OverlapOutOfRange", "DimensionTooLarge", "IntegratorDriftExceeded",
    "SingularDenominator", "NoOscillation", "NegativeDiscriminant",
    # core types and constructors
    "GParams", "SearchProblem", "Tolerances", "DEFAULT_TOLERANCES",
    "make_params", "make_problem", "make_overlap_problem", "uniform_state",
    "seeded_rng", "draw_unit_vector",
    # hamiltonians
    "ReducedHamiltonian", "reduced_matrix", "full_matrix", "DIM_CAP",
    "farhi_params", "fenner_params", "new_params", "perfect_params",
    "is_perfect",
    # evolution
    "Trace", "propagator_2x2", "evolve_reduced", "success_probability",
    "probability_trace", "evolve_full", "evolve_full_times",
    "target_subspace_probability", "project_reduced",
    # closed forms
    "ClosedForm", "closed_form", "qD_values", "M_value", "C_paper",
    "probability_eq1", "cross_term", "coefficients_eq3", "probability_eq2",
    "readout_time", "near_perfect_deficit", "pg_bound_check", "PgBoundReport",
    # experiments
    "SweepReport", "ScalingReport", "TrialsReport", "DiscrepancyReport",
    "Channel", "FAMILIES", "family_params",
    "phase_sweep", "scaling_study", "random_init_trials", "discrepancy_scan",
]
