"""Entanglement detection and pure-state factorization from the ranks of
reduced density matrices, with a partial-transpose baseline for comparison."""

from .catalog import (
    RandomSpec,
    WernerSpec,
    bell,
    ghz,
    haar_pure,
    mixed_of_rank,
    product_pure,
    random_state,
    random_unitary,
    separable_mixture,
    six_qubit_benchmark,
    w,
    werner,
)
from .criteria import (
    ENTANGLED,
    INCONCLUSIVE,
    SEPARABLE_PURE_PRODUCT,
    RankLattice,
    Verdict,
    Violation,
    check_partition,
    check_partition_pair,
    check_rank_monotonicity,
    entanglement_verdict,
    overall_verdict,
    pure_entangled,
    pure_fully_entangled,
    rank_lattice,
)
from .errors import (
    EntrankError,
    EnumerationLimitError,
    InputError,
    InternalInconsistencyError,
    NormalizationError,
    PartitionError,
    ShapeError,
    SizeLimitError,
    StateFileError,
    SymmetryError,
)
from .factorize import FactorizationResult, StepRecord, factorize_pure, verify_factorization
from .linalg import (
    DEFAULT_MAX_DIM,
    DEFAULT_TOLERANCE,
    RankTolerance,
    frobenius_distance,
    hermitian_eigenvalues,
    kron,
    numerical_rank,
    singular_values,
)
from .statefile import load_state, parse_state, write_state_file
from .states import (
    DensityMatrix,
    PureState,
    SchmidtData,
    apply_local_unitaries,
    density_from_pure,
    density_matrix,
    mix,
    partial_trace,
    partial_transpose,
    pure_state,
    purity_check,
    schmidt_rank,
    subset_rank,
    tensor_product,
    tensor_pure,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_MAX_DIM",
    "DEFAULT_TOLERANCE",
    "ENTANGLED",
    "INCONCLUSIVE",
    "SEPARABLE_PURE_PRODUCT",
    "DensityMatrix",
    "EntrankError",
    "EnumerationLimitError",
    "FactorizationResult",
    "InputError",
    "InternalInconsistencyError",
    "NormalizationError",
    "PartitionError",
    "PureState",
    "RandomSpec",
    "RankLattice",
    "RankTolerance",
    "SchmidtData",
    "ShapeError",
    "SizeLimitError",
    "StateFileError",
    "StepRecord",
    "SymmetryError",
    "Verdict",
    "Violation",
    "WernerSpec",
    "apply_local_unitaries",
    "bell",
    "check_partition",
    "check_partition_pair",
    "check_rank_monotonicity",
    "density_from_pure",
    "density_matrix",
    "entanglement_verdict",
    "factorize_pure",
    "frobenius_distance",
    "ghz",
    "haar_pure",
    "hermitian_eigenvalues",
    "kron",
    "load_state",
    "mix",
    "mixed_of_rank",
    "numerical_rank",
    "overall_verdict",
    "parse_state",
    "partial_trace",
    "partial_transpose",
    "product_pure",
    "pure_entangled",
    "pure_fully_entangled",
    "pure_state",
    "purity_check",
    "random_state",
    "random_unitary",
    "rank_lattice",
    "schmidt_rank",
    "separable_mixture",
    "singular_values",
    "six_qubit_benchmark",
    "subset_rank",
    "tensor_product",
    "tensor_pure",
    "verify_factorization",
    "w",
    "werner",
    "write_state_file",
]
