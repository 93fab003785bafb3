"""Dense complex matrix primitives: Kronecker products, Hermitian spectra,
singular values, toleranced numerical rank, and the Frobenius metric.

All functions are pure and operate on immutable inputs; they are safe to call
concurrently. Matrices are plain complex128 ndarrays in row-major order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ShapeError, SizeLimitError, SymmetryError

DEFAULT_RTOL = 1e-10
DEFAULT_ATOL = 1e-12
DEFAULT_MAX_DIM = 4096
HERMITICITY_RTOL = 1e-9


@dataclass(frozen=True)
class RankTolerance:
    """Threshold for deciding which singular values count toward the rank.

    A singular value s is significant when s > max(atol, rtol * s_max).
    States are built from order-1 amplitudes, so the relative threshold
    dominates in practice; atol is a floor for genuinely zero matrices.
    """

    rtol: float = DEFAULT_RTOL
    atol: float = DEFAULT_ATOL

    def __post_init__(self) -> None:
        for name, value in (("rtol", self.rtol), ("atol", self.atol)):
            if not np.isfinite(value) or value < 0:
                raise ValueError(f"{name} must be finite and nonnegative, got {value!r}")

    def cutoff(self, largest: float) -> float:
        return max(self.atol, self.rtol * largest)


DEFAULT_TOLERANCE = RankTolerance()


def as_matrix(a: np.ndarray) -> np.ndarray:
    """Validate and return a 2-D complex128 array with finite entries."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise ShapeError(f"expected a 2-D matrix, got ndim={m.ndim}")
    if not (np.all(np.isfinite(m.real)) and np.all(np.isfinite(m.imag))):
        raise ShapeError("matrix contains NaN or Inf entries")
    return m


def kron(a: np.ndarray, b: np.ndarray, max_dim: int = DEFAULT_MAX_DIM) -> np.ndarray:
    """Kronecker product with a guard on the joint dimension."""
    a = as_matrix(a)
    b = as_matrix(b)
    rows = a.shape[0] * b.shape[0]
    cols = a.shape[1] * b.shape[1]
    if max(rows, cols) > max_dim:
        raise SizeLimitError(
            f"kron result {rows}x{cols} exceeds the maximum dimension {max_dim}"
        )
    return np.kron(a, b)


def hermitian_eigenvalues(a: np.ndarray) -> np.ndarray:
    """Real eigenvalues of a Hermitian matrix, in descending order.

    The input must be square and Hermitian within a relative Frobenius
    tolerance of 1e-9; it is symmetrized before the solve so that
    accumulated rounding noise does not leak into the spectrum.
    """
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise ShapeError(f"eigenvalues require a square matrix, got {a.shape}")
    norm = np.linalg.norm(a)
    defect = np.linalg.norm(a - a.conj().T)
    if defect > HERMITICITY_RTOL * max(norm, 1e-300):
        raise SymmetryError(
            f"matrix is not Hermitian: relative defect {defect / max(norm, 1e-300):.3e}"
        )
    sym = (a + a.conj().T) / 2
    return np.linalg.eigvalsh(sym)[::-1]


def singular_values(a: np.ndarray) -> np.ndarray:
    """Singular values in descending order; min(rows, cols) of them."""
    a = as_matrix(a)
    return np.linalg.svd(a, compute_uv=False)


def rank_from_values(values: np.ndarray, tol: RankTolerance = DEFAULT_TOLERANCE) -> int:
    """Count of values above the tolerance cutoff; values must be descending."""
    values = np.asarray(values, dtype=np.float64)
    if values.size == 0:
        return 0
    return int(np.count_nonzero(values > tol.cutoff(float(values[0]))))


def numerical_rank(a: np.ndarray, tol: RankTolerance = DEFAULT_TOLERANCE) -> int:
    """Rank from singular values above max(atol, rtol * s_max); 0 for the zero matrix."""
    return rank_from_values(singular_values(a), tol)


def frobenius_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Entrywise 2-norm distance between two same-shaped matrices."""
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != b.shape:
        raise ShapeError(f"shape mismatch: {a.shape} vs {b.shape}")
    return float(np.linalg.norm(a - b))
