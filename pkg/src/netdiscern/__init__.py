"""netdiscern: decide whether a topology variation in a network of
identical linear subsystems is detectable from the network's natural
response, by computing the subspace of indiscernible initial states."""

from .discernibility import (
    AnalyzeOptions,
    CorrectedConditionResult,
    DiscernibilityReport,
    VERDICT_DETECTABLE,
    VERDICT_EXTRA_STATES,
    VERDICT_NO_VARIATION,
    analyze,
    corrected_condition,
    indiscernible_subspace,
    indiscernible_subspace_wong,
    shared_modal_subspace,
)
from .graphs import (
    Graph,
    LinkVariation,
    enumerate_single_link_variations,
    laplacian,
    laplacian_spectrum,
    validate_laplacian,
)
from .linalg import (
    Eigenpair,
    Spectrum,
    Subspace,
    eig,
    expm,
    kernel,
    max_principal_angle,
    subspace_contains,
    subspace_intersect,
    subspace_sum,
    subspaces_equal,
)
from .network import (
    ModalBlock,
    ModalEigenstructure,
    NetworkInvariantMode,
    NetworkSystem,
    NodeDynamics,
    assemble_transition,
    modal_eigenstructure,
    modal_matrix,
    network_invariant_modes,
    sync_manifold,
)
from .oracle import OracleConfig, ValidationSummary, trajectory_gap, validate_subspace

__version__ = "0.1.0"

__all__ = [
    "AnalyzeOptions",
    "CorrectedConditionResult",
    "DiscernibilityReport",
    "Eigenpair",
    "Graph",
    "LinkVariation",
    "ModalBlock",
    "ModalEigenstructure",
    "NetworkInvariantMode",
    "NetworkSystem",
    "NodeDynamics",
    "OracleConfig",
    "Spectrum",
    "Subspace",
    "ValidationSummary",
    "VERDICT_DETECTABLE",
    "VERDICT_EXTRA_STATES",
    "VERDICT_NO_VARIATION",
    "analyze",
    "assemble_transition",
    "corrected_condition",
    "eig",
    "enumerate_single_link_variations",
    "expm",
    "indiscernible_subspace",
    "indiscernible_subspace_wong",
    "kernel",
    "laplacian",
    "laplacian_spectrum",
    "max_principal_angle",
    "modal_eigenstructure",
    "modal_matrix",
    "network_invariant_modes",
    "shared_modal_subspace",
    "subspace_contains",
    "subspace_intersect",
    "subspace_sum",
    "subspaces_equal",
    "sync_manifold",
    "trajectory_gap",
    "validate_laplacian",
    "validate_subspace",
]
