"""Finest tensor-product factorization of a pure state.

The search sweeps subsets of growing size k. A subset whose reduced state is
pure (rank 1) splits off as a tensor factor; everything it leaves behind is
still pure, so the sweep continues on the remainder. A size-k sweep is only
worthwhile while the remainder keeps at least 2k particles: any larger
separable subset is the complement of a smaller one that an earlier sweep
already covered. After the loop a verification sweep re-tests the final
remainder at every size up to half its width; by the complement argument it
can never find anything new, but it is cheap (ranks are cached) and guards
the implementation.

Accepted subsets of one sweep are provably disjoint: an overlap would imply
a smaller separable subset that an earlier sweep would have accepted. This
is asserted at runtime rather than assumed.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb

import numpy as np

from .errors import EnumerationLimitError, InternalInconsistencyError, PartitionError
from .linalg import DEFAULT_TOLERANCE, RankTolerance, frobenius_distance, rank_from_values
from .states import PureState, bipartition_matrix, bipartition_spectrum, density_from_pure

DEFAULT_MAX_SUBSETS = 100_000
DEFAULT_RESIDUAL_THRESHOLD = 1e-8


@dataclass(frozen=True)
class StepRecord:
    """One sweep of the search: subsets of size ``step`` over ``remainder``.

    ``tested`` holds (subset, reduced rank) pairs in enumeration order;
    ``accepted`` the subsets split off as factors. ``verify`` marks the
    post-loop sweep over the final remainder.
    """

    step: int
    remainder: tuple[int, ...]
    tested: tuple[tuple[tuple[int, ...], int], ...]
    accepted: tuple[tuple[int, ...], ...]
    verify: bool = False


@dataclass(frozen=True)
class FactorizationResult:
    """Finest product partition of a pure state.

    Parts are disjoint, cover all particles, and are ordered by smallest
    member; ``factors`` holds one normalized pure state per part. Parts of
    two or more particles cannot be split further and are listed in
    ``fully_entangled_parts``. ``residual`` is the Frobenius distance between
    the input projector and the reconstructed tensor product.
    """

    partition: tuple[tuple[int, ...], ...]
    factors: tuple[PureState, ...]
    fully_entangled_parts: tuple[tuple[int, ...], ...]
    residual: float
    trace_log: tuple[StepRecord, ...]


def _extract_factor(psi: PureState, part: tuple[int, ...], tol: RankTolerance) -> PureState:
    """Pure state of a factor part, with the global phase canonicalized.

    The factor is the dominant left singular vector of the part-vs-rest
    amplitude matrix; for a genuine factor the second singular value is
    negligible. Rank above 1 here means an earlier acceptance was wrong.
    """
    n = psi.n
    if len(part) == n:
        vec = psi.amplitudes.copy()
    else:
        m = bipartition_matrix(psi, part)
        u, s, _ = np.linalg.svd(m, full_matrices=False)
        if rank_from_values(s * s, tol) != 1:
            raise InternalInconsistencyError(
                f"part {part} accepted as a factor but its reduced state is mixed"
            )
        vec = u[:, 0]
    k = int(np.argmax(np.abs(vec)))
    phase = vec[k] / abs(vec[k])
    vec = vec * np.conj(phase)
    vec = vec / np.linalg.norm(vec)
    return PureState(dims=tuple(psi.dims[i] for i in part), amplitudes=vec)


def _sweep(
    psi: PureState,
    remainder: list[int],
    size: int,
    tol: RankTolerance,
    cache: dict[tuple[int, ...], int],
) -> StepRecord:
    tested: list[tuple[tuple[int, ...], int]] = []
    accepted: list[tuple[int, ...]] = []
    taken: set[int] = set()
    for subset in combinations(remainder, size):
        rank = cache.get(subset)
        if rank is None:
            rank = rank_from_values(bipartition_spectrum(psi, subset), tol)
            cache[subset] = rank
        tested.append((subset, rank))
        if rank == 1:
            if taken & set(subset):
                raise InternalInconsistencyError(
                    f"rank-1 subsets overlap at size {size}: {subset} vs {sorted(taken)}"
                )
            accepted.append(subset)
            taken |= set(subset)
    return StepRecord(
        step=size,
        remainder=tuple(remainder),
        tested=tuple(tested),
        accepted=tuple(accepted),
    )


def factorize_pure(
    psi: PureState,
    tol: RankTolerance = DEFAULT_TOLERANCE,
    max_subsets: int = DEFAULT_MAX_SUBSETS,
    residual_threshold: float = DEFAULT_RESIDUAL_THRESHOLD,
) -> FactorizationResult:
    """Split a pure state into its finest tensor-product partition.

    Every part of size one is a disentangled particle; every larger part is
    fully entangled (no subset of it has a pure reduced state). The result
    carries the sweep-by-sweep trace and the reconstruction residual; a
    residual above ``residual_threshold`` means the rank tolerance accepted
    a cut that is not actually a product and is reported as an internal
    inconsistency.
    """
    n = psi.n
    budget = sum(comb(n, k) for k in range(1, n // 2 + 1))
    if budget > max_subsets:
        raise EnumerationLimitError(
            f"{budget} candidate subsets exceed the cap {max_subsets}"
        )

    cache: dict[tuple[int, ...], int] = {}
    log: list[StepRecord] = []
    parts: list[tuple[int, ...]] = []
    remainder = list(range(n))

    size = 1
    while 2 * size <= len(remainder):
        record = _sweep(psi, remainder, size, tol, cache)
        log.append(record)
        for subset in record.accepted:
            parts.append(subset)
            remainder = [i for i in remainder if i not in set(subset)]
        size += 1

    # Verification sweep over the final remainder. The complement argument
    # says nothing new can appear; if something does, accept it anyway and
    # keep shrinking until the sweep comes back empty.
    changed = True
    while changed and len(remainder) >= 2:
        changed = False
        for k in range(1, len(remainder) // 2 + 1):
            record = _sweep(psi, remainder, k, tol, cache)
            log.append(
                StepRecord(
                    step=record.step,
                    remainder=record.remainder,
                    tested=record.tested,
                    accepted=record.accepted,
                    verify=True,
                )
            )
            if record.accepted:
                for subset in record.accepted:
                    parts.append(subset)
                    remainder = [i for i in remainder if i not in set(subset)]
                changed = True
                break

    if remainder:
        parts.append(tuple(remainder))
    parts.sort(key=lambda p: p[0])

    factors = tuple(_extract_factor(psi, part, tol) for part in parts)
    fully_entangled = tuple(p for p in parts if len(p) >= 2)
    residual = _reconstruction_residual(psi, tuple(parts), factors)
    if residual > residual_threshold:
        raise InternalInconsistencyError(
            f"reconstruction residual {residual:.3e} exceeds {residual_threshold:.1e};"
            " the rank tolerance accepted a non-product cut"
        )

    return FactorizationResult(
        partition=tuple(parts),
        factors=factors,
        fully_entangled_parts=fully_entangled,
        residual=residual,
        trace_log=tuple(log),
    )


def _reconstruction_residual(
    psi: PureState,
    partition: tuple[tuple[int, ...], ...],
    factors: tuple[PureState, ...],
) -> float:
    n = psi.n
    flat = [i for part in partition for i in part]
    if sorted(flat) != list(range(n)) or len(factors) != len(partition):
        raise PartitionError("partition does not cover the state's particles exactly")

    rebuilt = np.array([1.0 + 0.0j])
    for factor in factors:
        rebuilt = np.kron(rebuilt, factor.amplitudes)

    perm_dims = tuple(psi.dims[i] for i in flat)
    inverse = np.argsort(flat)
    rebuilt = rebuilt.reshape(perm_dims).transpose(inverse).reshape(-1)

    target = density_from_pure(psi).matrix
    candidate = np.outer(rebuilt, rebuilt.conj())
    return frobenius_distance(target, candidate)


def verify_factorization(psi: PureState, result: FactorizationResult) -> float:
    """Frobenius distance between the input projector and the rebuilt product.

    The factor states are tensored in partition order, the particles are
    permuted back to their original positions, and the two projectors are
    compared. Small residuals certify the partition; a wrong partition shows
    up as a distance of order one.
    """
    return _reconstruction_residual(psi, result.partition, result.factors)
