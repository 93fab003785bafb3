"""State files: UTF-8 JSON with explicit re/im fields and per-particle indices.

Schema (format_version "1"):

    {"format_version": "1", "kind": "pure", "dims": [2, 2],
     "amplitudes": [{"index": [0, 0], "re": 0.7071067811865476, "im": 0.0}, ...]}

``kind`` is one of pure, mixture, dense. A mixture carries ``terms``, each a
weight plus an amplitude list; dense carries ``matrix`` as nested rows of
re/im objects. Amplitudes are keyed by per-particle index vectors, unlisted
basis states are zero, and no complex literals appear, so files stay
dimension-explicit and portable. An optional ``metadata`` object records
provenance such as generator names and seeds.

Loaded pure and mixture payloads must be normalized within ``load_tol``
(default 1e-6); they are rescaled only when the norm is off by more than
1e-12, so writing and re-reading a normalized state is bit-identical.
"""

from __future__ import annotations

import json
from math import prod
from pathlib import Path
from typing import Any, Optional, Sequence, Union

import numpy as np

from .errors import StateFileError
from .linalg import DEFAULT_MAX_DIM
from .states import (
    DensityMatrix,
    PureState,
    State,
    density_matrix,
    mix,
    pure_state,
    validate_dims,
)

FORMAT_VERSION = "1"
DEFAULT_LOAD_TOL = 1e-6
_RESCALE_GUARD = 1e-12


def _require(payload: dict, key: str, context: str) -> Any:
    if key not in payload:
        raise StateFileError(f"{context}: missing required field {key!r}")
    return payload[key]


def _parse_float(value: Any, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise StateFileError(f"{where}: expected a number, got {value!r}")
    return float(value)


def _parse_amplitudes(
    entries: Any, dims: tuple[int, ...], where: str
) -> np.ndarray:
    if not isinstance(entries, list):
        raise StateFileError(f"{where}: amplitude list expected")
    amps = np.zeros(prod(dims), dtype=np.complex128)
    seen: set[int] = set()
    for pos, entry in enumerate(entries):
        ctx = f"{where}, amplitude {pos}"
        if not isinstance(entry, dict):
            raise StateFileError(f"{ctx}: expected an object")
        index = _require(entry, "index", ctx)
        if (
            not isinstance(index, list)
            or len(index) != len(dims)
            or not all(isinstance(i, int) and not isinstance(i, bool) for i in index)
        ):
            raise StateFileError(f"{ctx}: index must list one integer per particle")
        if any(i < 0 or i >= d for i, d in zip(index, dims)):
            raise StateFileError(f"{ctx}: index {index} out of range for dims {list(dims)}")
        flat = int(np.ravel_multi_index(tuple(index), dims))
        if flat in seen:
            raise StateFileError(f"{ctx}: duplicate basis index {index}")
        seen.add(flat)
        re = _parse_float(_require(entry, "re", ctx), ctx)
        im = _parse_float(_require(entry, "im", ctx), ctx)
        amps[flat] = complex(re, im)
    return amps


def _normalized(amps: np.ndarray, load_tol: float, where: str) -> np.ndarray:
    norm = float(np.linalg.norm(amps))
    if abs(norm - 1.0) > load_tol:
        raise StateFileError(f"{where}: amplitude norm {norm!r} is not 1 within {load_tol}")
    if abs(norm - 1.0) > _RESCALE_GUARD:
        amps = amps / norm
    return amps


def _parse_matrix(rows: Any, d: int, where: str) -> np.ndarray:
    if not isinstance(rows, list) or len(rows) != d:
        raise StateFileError(f"{where}: matrix must have {d} rows")
    out = np.zeros((d, d), dtype=np.complex128)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != d:
            raise StateFileError(f"{where}, row {i}: expected {d} entries")
        for j, cell in enumerate(row):
            ctx = f"{where}, row {i}, column {j}"
            if not isinstance(cell, dict):
                raise StateFileError(f"{ctx}: expected an object with re/im")
            re = _parse_float(_require(cell, "re", ctx), ctx)
            im = _parse_float(_require(cell, "im", ctx), ctx)
            out[i, j] = complex(re, im)
    return out


def parse_state(
    payload: dict,
    load_tol: float = DEFAULT_LOAD_TOL,
    max_dim: int = DEFAULT_MAX_DIM,
    context: str = "state file",
) -> State:
    """Validate a decoded state-file object and build the state it describes."""
    if not isinstance(payload, dict):
        raise StateFileError(f"{context}: top level must be an object")
    version = _require(payload, "format_version", context)
    if version != FORMAT_VERSION:
        raise StateFileError(f"{context}: unsupported format_version {version!r}")
    kind = _require(payload, "kind", context)
    dims_raw = _require(payload, "dims", context)
    if not isinstance(dims_raw, list) or not all(
        isinstance(d, int) and not isinstance(d, bool) for d in dims_raw
    ):
        raise StateFileError(f"{context}: dims must be a list of integers")
    try:
        dims = validate_dims(dims_raw, max_dim)
    except StateFileError:
        raise
    except Exception as exc:
        raise type(exc)(f"{context}: {exc}") from exc

    if kind == "pure":
        amps = _parse_amplitudes(_require(payload, "amplitudes", context), dims, context)
        amps = _normalized(amps, load_tol, context)
        return pure_state(dims, amps, max_dim=max_dim)

    if kind == "mixture":
        terms_raw = _require(payload, "terms", context)
        if not isinstance(terms_raw, list) or not terms_raw:
            raise StateFileError(f"{context}: mixture needs a nonempty terms list")
        terms = []
        for pos, term in enumerate(terms_raw):
            ctx = f"{context}, term {pos}"
            if not isinstance(term, dict):
                raise StateFileError(f"{ctx}: expected an object")
            weight = _parse_float(_require(term, "weight", ctx), ctx)
            amps = _parse_amplitudes(_require(term, "amplitudes", ctx), dims, ctx)
            amps = _normalized(amps, load_tol, ctx)
            terms.append((weight, pure_state(dims, amps, max_dim=max_dim)))
        return mix(terms, weight_atol=load_tol)

    if kind == "dense":
        d = prod(dims)
        matrix = _parse_matrix(_require(payload, "matrix", context), d, context)
        rho = density_matrix(
            dims,
            matrix,
            max_dim=max_dim,
            herm_atol=load_tol,
            trace_atol=load_tol,
            psd_atol=load_tol,
        )
        mat = (rho.matrix + rho.matrix.conj().T) / 2
        tr = float(np.trace(mat).real)
        if abs(tr - 1.0) > _RESCALE_GUARD:
            mat = mat / tr
        return DensityMatrix(dims=dims, matrix=mat)

    raise StateFileError(f"{context}: unknown kind {kind!r}")


def load_state(
    path: Union[str, Path],
    load_tol: float = DEFAULT_LOAD_TOL,
    max_dim: int = DEFAULT_MAX_DIM,
) -> State:
    """Read and validate a state file; errors carry file and position context."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise StateFileError(f"cannot read {path}: {exc}") from exc
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StateFileError(
            f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    return parse_state(payload, load_tol=load_tol, max_dim=max_dim, context=str(path))


def _amplitude_entries(dims: tuple[int, ...], amps: np.ndarray) -> list[dict]:
    entries = []
    for flat in range(amps.shape[0]):
        value = amps[flat]
        if value.real == 0.0 and value.imag == 0.0:
            continue
        index = [int(i) for i in np.unravel_index(flat, dims)]
        entries.append({"index": index, "re": float(value.real), "im": float(value.imag)})
    return entries


def pure_payload(psi: PureState, metadata: Optional[dict] = None) -> dict:
    payload: dict[str, Any] = {
        "format_version": FORMAT_VERSION,
        "kind": "pure",
        "dims": list(psi.dims),
        "amplitudes": _amplitude_entries(psi.dims, psi.amplitudes),
    }
    if metadata:
        payload["metadata"] = metadata
    return payload


def mixture_payload(
    terms: Sequence[tuple[float, PureState]], metadata: Optional[dict] = None
) -> dict:
    dims = terms[0][1].dims
    payload: dict[str, Any] = {
        "format_version": FORMAT_VERSION,
        "kind": "mixture",
        "dims": list(dims),
        "terms": [
            {
                "weight": float(weight),
                "amplitudes": _amplitude_entries(psi.dims, psi.amplitudes),
            }
            for weight, psi in terms
        ],
    }
    if metadata:
        payload["metadata"] = metadata
    return payload


def density_payload(rho: DensityMatrix, metadata: Optional[dict] = None) -> dict:
    matrix = [
        [{"re": float(cell.real), "im": float(cell.imag)} for cell in row]
        for row in rho.matrix
    ]
    payload: dict[str, Any] = {
        "format_version": FORMAT_VERSION,
        "kind": "dense",
        "dims": list(rho.dims),
        "matrix": matrix,
    }
    if metadata:
        payload["metadata"] = metadata
    return payload


def write_state_file(path: Union[str, Path], payload: dict) -> None:
    """Serialize a payload deterministically (sorted keys, two-space indent)."""
    text = json.dumps(payload, indent=2, sort_keys=True)
    Path(path).write_text(text + "\n", encoding="utf-8")
