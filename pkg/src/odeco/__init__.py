"""Decomposition of (nearly) symmetric orthogonally decomposable tensors.

The package builds a full orthogonal decomposition one component at a
time: each step extracts a best (possibly constrained) rank-one
approximation, then either deflates the residual or re-solves the
original tensor under overlap constraints against the components found
so far.  Checkers verify the recovery guarantees of each variant on
generated instances.

Hot kernels run on a compiled backend when available; set
``ODECO_BACKEND=python`` (or ``cython``) to pick one explicitly.
"""

from .bounds import (
    AdmissibleParams,
    BoundReport,
    ComponentCheck,
    SpectralSummary,
    admissible_params,
    check_ada_invariants,
    check_cd_bounds,
    check_rank_one_bounds,
    check_rd_bounds,
    check_with_alignment,
    rank_one_perturbation_bound,
)
from .decompose import (
    Decomposition,
    MatchReport,
    ada_sroa_cd,
    match_components,
    match_components_exhaustive,
    residual_metric,
    sroa_cd,
    sroa_rd,
)
from .errors import (
    AdaptiveSearchError,
    ConvergenceWarning,
    DataError,
    DecompositionError,
    FeasibilityError,
    OdecoError,
    ShapeError,
    UnsupportedSizeError,
)
from .experiments import (
    E1_EIGENVALUES,
    E3_EIGENVALUES,
    ExperimentReport,
    InstanceSpec,
    gen_perturbation,
    gen_sod,
    run_experiment,
    run_sweep,
)
from .kernels import BACKEND, available_backends
from .schemas import dump_json, load_json, validate_document
from .rank_one import (
    ConstraintSet,
    StationarityCertificate,
    best_rank_one,
    brute_force_rank_one,
    constrained_rank_one,
    derive_seed,
    stationarity_residual,
)
from .tensor import (
    EigenPair,
    SolverConfig,
    SymmetricTensor,
    apply_full,
    apply_partial,
    frobenius_norm,
    inner,
    operator_norm,
    rank_one_tensor,
    symmetrize,
    symmetrize_array,
)

__version__ = "0.1.0"

__all__ = [
    "AdaptiveSearchError",
    "AdmissibleParams",
    "BACKEND",
    "BoundReport",
    "ComponentCheck",
    "ConstraintSet",
    "ConvergenceWarning",
    "DataError",
    "Decomposition",
    "DecompositionError",
    "E1_EIGENVALUES",
    "E3_EIGENVALUES",
    "EigenPair",
    "ExperimentReport",
    "FeasibilityError",
    "InstanceSpec",
    "MatchReport",
    "OdecoError",
    "ShapeError",
    "SolverConfig",
    "SpectralSummary",
    "StationarityCertificate",
    "SymmetricTensor",
    "UnsupportedSizeError",
    "ada_sroa_cd",
    "admissible_params",
    "apply_full",
    "apply_partial",
    "available_backends",
    "best_rank_one",
    "brute_force_rank_one",
    "check_ada_invariants",
    "check_cd_bounds",
    "check_rank_one_bounds",
    "check_rd_bounds",
    "check_with_alignment",
    "constrained_rank_one",
    "derive_seed",
    "dump_json",
    "frobenius_norm",
    "gen_perturbation",
    "gen_sod",
    "inner",
    "load_json",
    "match_components",
    "match_components_exhaustive",
    "operator_norm",
    "rank_one_perturbation_bound",
    "rank_one_tensor",
    "residual_metric",
    "run_experiment",
    "run_sweep",
    "sroa_cd",
    "sroa_rd",
    "stationarity_residual",
    "symmetrize",
    "symmetrize_array",
    "validate_document",
    "__version__",
]
