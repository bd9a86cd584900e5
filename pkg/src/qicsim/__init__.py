"""Information capsules in correlation space.

Three settings share one idea: information injected by a weak unitary write
lands in a virtual subsystem that can be located exactly, tracked, and read
back out.  ``qudit_algebra``/``qudit_info`` cover finite registers,
``gaussian_cv`` covers bosonic Gaussian states, and ``lattice_field`` runs
the harmonic-chain experiment.  ``checks`` bundles the invariant suites the
``qic verify`` command runs.
"""

from .errors import (
    BrokenVirtualQuditError,
    ContractViolationError,
    DegenerateVarianceError,
    IllConditionedError,
    ImpureStateError,
    InternalConsistencyError,
    InvalidDimensionError,
    InvalidUnitaryError,
    NoEnvironmentError,
    NumericalFailureError,
    PreconditionError,
    QicError,
    StateFileError,
    UnphysicalModeError,
    UnphysicalStateError,
)
from .gaussian_cv import (
    GaussianState,
    ModeCovariance,
    ModePair,
    MultiparamReport,
    SwapCoupling,
    apply_shift_write,
    conjugate_qic_vector,
    cv_swap_generator,
    mode_covariance,
    mode_entropy,
    multiparam_conditions,
    qic_invariance_under_other_writes,
    random_pure_state,
    read_pair_file,
    read_state_file,
    require_pure,
    shift_fisher_matrix,
    single_mode_squeezed,
    symplectic_form,
    two_mode_squeezed,
    vacuum_state,
    write_pair_file,
    write_state_file,
)
from .lattice_field import (
    EvolvedPair,
    LatticeConfig,
    ModeMatrix,
    SiteProfiles,
    dispersion,
    evolve_pair,
    evolve_vector,
    figure_experiment,
    mode_matrix,
    vacuum_covariance,
)
from .qudit_algebra import (
    HermitianOp,
    PureState,
    SchmidtDecomposition,
    SuBasis,
    apply_structured_unitary,
    basis_state,
    build_su_basis,
    map_vector_unitary,
    product_state,
    random_state,
    schmidt,
    swap_operator,
)
from .qudit_info import (
    CorrelationState,
    FeasibilityReport,
    PartnerPair,
    QicConstruction,
    SwapRetrieval,
    VirtualQudit,
    WriteOperation,
    commuting_generators,
    construct_partner,
    construct_qic,
    correlation_state,
    fisher_information,
    max_entangled_partner_feasible,
    partner_write_action,
    qic_family,
    random_su_generator,
    random_write_operation,
    retrieve_by_swap,
    sld_fisher_matrix,
)

__version__ = "0.1.0"

__all__ = [
    "BrokenVirtualQuditError",
    "ContractViolationError",
    "CorrelationState",
    "DegenerateVarianceError",
    "EvolvedPair",
    "FeasibilityReport",
    "GaussianState",
    "HermitianOp",
    "IllConditionedError",
    "ImpureStateError",
    "InternalConsistencyError",
    "InvalidDimensionError",
    "InvalidUnitaryError",
    "LatticeConfig",
    "ModeCovariance",
    "ModeMatrix",
    "ModePair",
    "MultiparamReport",
    "NoEnvironmentError",
    "NumericalFailureError",
    "PartnerPair",
    "PreconditionError",
    "PureState",
    "QicConstruction",
    "QicError",
    "SchmidtDecomposition",
    "SiteProfiles",
    "StateFileError",
    "SuBasis",
    "SwapCoupling",
    "SwapRetrieval",
    "UnphysicalModeError",
    "UnphysicalStateError",
    "VirtualQudit",
    "WriteOperation",
    "apply_shift_write",
    "apply_structured_unitary",
    "basis_state",
    "build_su_basis",
    "commuting_generators",
    "conjugate_qic_vector",
    "construct_partner",
    "construct_qic",
    "correlation_state",
    "cv_swap_generator",
    "dispersion",
    "evolve_pair",
    "evolve_vector",
    "figure_experiment",
    "fisher_information",
    "map_vector_unitary",
    "max_entangled_partner_feasible",
    "mode_covariance",
    "mode_entropy",
    "mode_matrix",
    "multiparam_conditions",
    "partner_write_action",
    "product_state",
    "qic_family",
    "qic_invariance_under_other_writes",
    "random_pure_state",
    "random_state",
    "random_su_generator",
    "random_write_operation",
    "read_pair_file",
    "read_state_file",
    "require_pure",
    "retrieve_by_swap",
    "schmidt",
    "shift_fisher_matrix",
    "single_mode_squeezed",
    "sld_fisher_matrix",
    "swap_operator",
    "symplectic_form",
    "two_mode_squeezed",
    "vacuum_covariance",
    "vacuum_state",
    "write_pair_file",
    "write_state_file",
    "__version__",
]
