"""Quantum states over arbitrary local dimensions.

Conventions
-----------
Particles are indexed 0-based internally (the CLI layer translates to the
1-based labels used in files and reports). The joint basis index of the
multi-index (i_1, ..., i_N) is sum_k i_k * prod_{l>k} d_l, so particle 0 is
the most significant digit and a ket string like |011⟩ reads left to right.

A PureState stores the amplitude vector, a DensityMatrix the full matrix;
both carry the tuple of local dimensions. All operations are pure functions
and safe for concurrent use.
"""

from __future__ import annotations

import string
from dataclasses import dataclass
from math import prod
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import (
    NormalizationError,
    PartitionError,
    ShapeError,
    SizeLimitError,
)
from .linalg import (
    DEFAULT_MAX_DIM,
    DEFAULT_TOLERANCE,
    RankTolerance,
    as_matrix,
    rank_from_values,
)

NORM_ATOL = 1e-9
PSD_ATOL = 1e-9

SubsetLike = Iterable[int]


def validate_dims(dims: Sequence[int], max_dim: int = DEFAULT_MAX_DIM) -> tuple[int, ...]:
    """Check a vector of local dimensions: each >= 2, product within the limit."""
    dims = tuple(int(d) for d in dims)
    if len(dims) < 1:
        raise ShapeError("at least one particle is required")
    if any(d < 2 for d in dims):
        raise ShapeError(f"every local dimension must be >= 2, got {dims}")
    total = prod(dims)
    if total > max_dim:
        raise SizeLimitError(f"joint dimension {total} exceeds the maximum {max_dim}")
    return dims


def normalize_subset(indices: SubsetLike, n: int) -> tuple[int, ...]:
    """Sorted tuple of distinct 0-based particle indices within range."""
    subset = tuple(sorted(int(i) for i in indices))
    if len(set(subset)) != len(subset):
        raise PartitionError(f"duplicate particle indices in {subset}")
    if subset and (subset[0] < 0 or subset[-1] >= n):
        raise PartitionError(f"particle index out of range 0..{n - 1}: {subset}")
    return subset


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized amplitude vector over the joint basis of ``dims``."""

    dims: tuple[int, ...]
    amplitudes: np.ndarray

    @property
    def n(self) -> int:
        return len(self.dims)

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, PSD, unit-trace matrix over the joint basis of ``dims``."""

    dims: tuple[int, ...]
    matrix: np.ndarray

    @property
    def n(self) -> int:
        return len(self.dims)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


State = Union[PureState, DensityMatrix]


def pure_state(
    dims: Sequence[int],
    amplitudes: np.ndarray,
    max_dim: int = DEFAULT_MAX_DIM,
    norm_atol: float = NORM_ATOL,
) -> PureState:
    """Validated PureState constructor; the amplitudes are used as given."""
    dims = validate_dims(dims, max_dim)
    amps = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
    if amps.shape[0] != prod(dims):
        raise ShapeError(
            f"amplitude vector length {amps.shape[0]} does not match dims {dims}"
        )
    if not np.all(np.isfinite(amps.real)) or not np.all(np.isfinite(amps.imag)):
        raise ShapeError("amplitudes contain NaN or Inf")
    norm = float(np.linalg.norm(amps))
    if abs(norm - 1.0) > norm_atol:
        raise NormalizationError(f"state vector norm {norm!r} is not 1")
    return PureState(dims=dims, amplitudes=amps)


def density_matrix(
    dims: Sequence[int],
    matrix: np.ndarray,
    max_dim: int = DEFAULT_MAX_DIM,
    herm_atol: float = 1e-9,
    trace_atol: float = 1e-9,
    psd_atol: float = PSD_ATOL,
    check_psd: bool = True,
) -> DensityMatrix:
    """Validated DensityMatrix constructor.

    Hermiticity is relative in Frobenius norm, the trace must be 1, and with
    ``check_psd`` the minimum eigenvalue must be >= -psd_atol. Operations that
    preserve these invariants by construction build instances directly.
    """
    dims = validate_dims(dims, max_dim)
    mat = as_matrix(matrix)
    d = prod(dims)
    if mat.shape != (d, d):
        raise ShapeError(f"matrix shape {mat.shape} does not match dims {dims}")
    norm = np.linalg.norm(mat)
    if np.linalg.norm(mat - mat.conj().T) > herm_atol * max(norm, 1e-300):
        raise NormalizationError("density matrix is not Hermitian within tolerance")
    tr = complex(np.trace(mat))
    if abs(tr - 1.0) > trace_atol:
        raise NormalizationError(f"density matrix trace {tr!r} is not 1")
    if check_psd:
        low = float(np.linalg.eigvalsh((mat + mat.conj().T) / 2)[0])
        if low < -psd_atol:
            raise NormalizationError(
                f"density matrix has negative eigenvalue {low:.3e}"
            )
    return DensityMatrix(dims=dims, matrix=mat)


def density_from_pure(psi: PureState) -> DensityMatrix:
    """Projector |psi><psi| as a DensityMatrix (rank 1 by construction)."""
    amps = psi.amplitudes
    return DensityMatrix(dims=psi.dims, matrix=np.outer(amps, amps.conj()))


def mix(terms: Sequence[tuple[float, PureState]], weight_atol: float = 1e-9) -> DensityMatrix:
    """Convex mixture sum_j w_j |psi_j><psi_j| of pure states on shared dims."""
    if not terms:
        raise ShapeError("mixture requires at least one term")
    dims = terms[0][1].dims
    total = 0.0
    for weight, psi in terms:
        if weight <= 0:
            raise NormalizationError(f"mixture weight {weight!r} is not positive")
        if psi.dims != dims:
            raise ShapeError(f"mixture terms disagree on dims: {psi.dims} vs {dims}")
        total += float(weight)
    if abs(total - 1.0) > weight_atol:
        raise NormalizationError(f"mixture weights sum to {total!r}, expected 1")
    d = prod(dims)
    out = np.zeros((d, d), dtype=np.complex128)
    for weight, psi in terms:
        out += weight * np.outer(psi.amplitudes, psi.amplitudes.conj())
    return DensityMatrix(dims=dims, matrix=out)


def tensor_product(
    a: DensityMatrix, b: DensityMatrix, max_dim: int = DEFAULT_MAX_DIM
) -> DensityMatrix:
    """Joint state a ⊗ b; dims concatenate and the matrices Kronecker-multiply."""
    dims = a.dims + b.dims
    d = prod(dims)
    if d > max_dim:
        raise SizeLimitError(f"joint dimension {d} exceeds the maximum {max_dim}")
    return DensityMatrix(dims=dims, matrix=np.kron(a.matrix, b.matrix))


def tensor_pure(a: PureState, b: PureState, max_dim: int = DEFAULT_MAX_DIM) -> PureState:
    """Joint pure state a ⊗ b on concatenated dims."""
    dims = a.dims + b.dims
    if prod(dims) > max_dim:
        raise SizeLimitError(f"joint dimension {prod(dims)} exceeds the maximum {max_dim}")
    return PureState(dims=dims, amplitudes=np.kron(a.amplitudes, b.amplitudes))


def _complement(subset: tuple[int, ...], n: int) -> tuple[int, ...]:
    chosen = set(subset)
    return tuple(i for i in range(n) if i not in chosen)


def partial_trace(rho: DensityMatrix, traced: SubsetLike) -> DensityMatrix:
    """Trace out the particles in ``traced``; survivors keep their order."""
    n = rho.n
    traced = normalize_subset(traced, n)
    if not traced:
        raise PartitionError("nothing to trace out")
    if len(traced) == n:
        raise PartitionError("tracing out every particle leaves no state")
    keep = _complement(traced, n)

    letters = string.ascii_letters
    row = list(letters[:n])
    col = [letters[i] if i in set(traced) else letters[n + i] for i in range(n)]
    out_sub = "".join(row[i] for i in keep) + "".join(col[i] for i in keep)
    subscripts = "".join(row) + "".join(col) + "->" + out_sub

    tensor = rho.matrix.reshape(rho.dims + rho.dims)
    reduced = np.einsum(subscripts, tensor)
    d_keep = prod(rho.dims[i] for i in keep)
    return DensityMatrix(
        dims=tuple(rho.dims[i] for i in keep),
        matrix=reduced.reshape(d_keep, d_keep),
    )


def partial_transpose(rho: DensityMatrix, part: SubsetLike) -> np.ndarray:
    """Transpose the indices of ``part`` only; Hermitian but not necessarily PSD."""
    n = rho.n
    part = normalize_subset(part, n)
    if not part:
        raise PartitionError("partial transpose needs a nonempty particle set")
    if len(part) == n:
        raise PartitionError("partial transpose needs a proper subset of particles")
    tensor = rho.matrix.reshape(rho.dims + rho.dims)
    perm = list(range(2 * n))
    for i in part:
        perm[i], perm[n + i] = perm[n + i], perm[i]
    d = rho.dim
    return tensor.transpose(perm).reshape(d, d)


def purity_check(rho: DensityMatrix, tol: RankTolerance = DEFAULT_TOLERANCE) -> bool:
    """True when the state is pure, i.e. its matrix has numerical rank 1."""
    from .linalg import numerical_rank

    return numerical_rank(rho.matrix, tol) == 1


def bipartition_matrix(psi: PureState, subset: SubsetLike) -> np.ndarray:
    """Amplitudes reshaped to a (d_subset, d_rest) matrix for the cut subset|rest."""
    n = psi.n
    subset = normalize_subset(subset, n)
    if not subset or len(subset) == n:
        raise PartitionError("bipartition needs a nonempty proper subset")
    rest = _complement(subset, n)
    d_s = prod(psi.dims[i] for i in subset)
    tensor = psi.amplitudes.reshape(psi.dims)
    return tensor.transpose(subset + rest).reshape(d_s, -1)


def bipartition_spectrum(psi: PureState, subset: SubsetLike) -> np.ndarray:
    """Descending eigenvalues of the reduced state of ``subset`` (or its
    complement: the two sides share a spectrum up to padding zeros)."""
    m = bipartition_matrix(psi, subset)
    s = np.linalg.svd(m, compute_uv=False)
    return s * s


@dataclass(frozen=True)
class SchmidtData:
    """Significant Schmidt coefficients (descending) and their count."""

    coefficients: np.ndarray
    schmidt_rank: int


def schmidt_rank(
    psi: PureState, part: SubsetLike, tol: RankTolerance = DEFAULT_TOLERANCE
) -> SchmidtData:
    """Schmidt coefficients across the cut part|rest and the count above tolerance.

    The coefficients are the eigenvalues of either side's reduced density
    matrix, so the result is identical when called with the complement.
    """
    lam = bipartition_spectrum(psi, part)
    k = rank_from_values(lam, tol)
    return SchmidtData(coefficients=lam[:k].copy(), schmidt_rank=k)


def subset_rank(
    state: State, subset: SubsetLike, tol: RankTolerance = DEFAULT_TOLERANCE
) -> int:
    """Rank of the reduced density matrix of ``subset``.

    Pure states go through the bipartition spectrum (cheap); density matrices
    through an explicit partial trace of the complement.
    """
    from .linalg import numerical_rank

    n = state.n
    subset = normalize_subset(subset, n)
    if not subset:
        raise PartitionError("subset must be nonempty")
    if len(subset) == n:
        if isinstance(state, PureState):
            return 1
        return numerical_rank(state.matrix, tol)
    if isinstance(state, PureState):
        return rank_from_values(bipartition_spectrum(state, subset), tol)
    reduced = partial_trace(state, _complement(subset, n))
    return numerical_rank(reduced.matrix, tol)


def apply_local_unitaries(psi: PureState, unitaries: Sequence[np.ndarray]) -> PureState:
    """Rotate each particle by its own unitary; the norm is preserved."""
    if len(unitaries) != psi.n:
        raise ShapeError(f"need {psi.n} unitaries, got {len(unitaries)}")
    tensor = psi.amplitudes.reshape(psi.dims)
    for axis, u in enumerate(unitaries):
        u = as_matrix(u)
        d = psi.dims[axis]
        if u.shape != (d, d):
            raise ShapeError(f"unitary for particle {axis} has shape {u.shape}, need {(d, d)}")
        tensor = np.moveaxis(np.tensordot(u, tensor, axes=([1], [axis])), 0, axis)
    return PureState(dims=psi.dims, amplitudes=tensor.reshape(-1))
