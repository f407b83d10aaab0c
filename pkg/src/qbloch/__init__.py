"""Generalized Bloch representation of qudit states, quantum channels as
affine maps of Bloch space, and covariant-cloning analysis."""

from .linalg import (
    DEFAULT_SEED,
    DimensionCapExceeded,
    dim_cap,
    eig_hermitian,
    haar_unitaries,
    haar_unitary,
    hs_distance,
    hs_inner,
    partial_trace,
    random_density_matrices,
    random_density_matrix,
    random_pure_state,
    random_pure_states,
    tensor,
    tensor_all,
)
from .gbr import (
    bloch_radius,
    check_density,
    from_bloch,
    gellmann_basis,
    is_physical_bloch,
    max_angle,
    to_bloch,
)
from .channels import (
    AffineRep,
    Channel,
    ChoiMatrix,
    CompletePositivityError,
    affine_rep,
    apply,
    choi_to_kraus,
    conjugate_action,
    depolarizing,
    identity_channel,
    is_cptp,
    kraus_to_choi,
    mix_channels,
    random_channel,
    unitary_rotation,
)
from .merit import (
    MeritReport,
    f1,
    f1_mn,
    idempotency_deficit,
    min_f1,
    min_f1_mn,
    pure_fidelity,
)
from .cloners import (
    Cloner,
    CoefficientTable,
    QubitOptimum,
    ShrinkResult,
    compose,
    coproduct,
    multi_gbr,
    optimal_qubit_12,
    permutation_operator,
    reduced_map,
    shrink_factor,
    symmetric_input,
    symmetric_projector,
    werner_cloner,
)
from .symmetry import (
    CovarianceResidual,
    NonlinearCovariantMap,
    TwirlReport,
    affinity_witness,
    backmap_operators,
    covariance_defect,
    covariance_residual,
    dual_map,
    nonlinear_covariant,
    symmetrize_sm,
    twirl_su,
    twirl_su_channel,
)

__version__ = "0.1.0"

__all__ = [
    "AffineRep",
    "Channel",
    "ChoiMatrix",
    "Cloner",
    "CoefficientTable",
    "CompletePositivityError",
    "CovarianceResidual",
    "DEFAULT_SEED",
    "DimensionCapExceeded",
    "MeritReport",
    "NonlinearCovariantMap",
    "QubitOptimum",
    "ShrinkResult",
    "TwirlReport",
    "affine_rep",
    "affinity_witness",
    "apply",
    "backmap_operators",
    "bloch_radius",
    "check_density",
    "choi_to_kraus",
    "compose",
    "conjugate_action",
    "coproduct",
    "covariance_defect",
    "covariance_residual",
    "depolarizing",
    "dim_cap",
    "dual_map",
    "eig_hermitian",
    "f1",
    "f1_mn",
    "from_bloch",
    "gellmann_basis",
    "haar_unitaries",
    "haar_unitary",
    "hs_distance",
    "hs_inner",
    "identity_channel",
    "idempotency_deficit",
    "is_cptp",
    "is_physical_bloch",
    "kraus_to_choi",
    "max_angle",
    "min_f1",
    "min_f1_mn",
    "mix_channels",
    "multi_gbr",
    "nonlinear_covariant",
    "optimal_qubit_12",
    "partial_trace",
    "permutation_operator",
    "pure_fidelity",
    "random_channel",
    "random_density_matrices",
    "random_density_matrix",
    "random_pure_state",
    "random_pure_states",
    "reduced_map",
    "shrink_factor",
    "symmetric_input",
    "symmetric_projector",
    "symmetrize_sm",
    "tensor",
    "tensor_all",
    "to_bloch",
    "twirl_su",
    "twirl_su_channel",
    "unitary_rotation",
    "werner_cloner",
]
