import json

import numpy as np
import pytest

from entrank.catalog import bell, haar_pure, werner
from entrank.errors import StateFileError
from entrank.statefile import (
    density_payload,
    load_state,
    mixture_payload,
    parse_state,
    pure_payload,
    write_state_file,
)
from entrank.states import DensityMatrix, PureState


def write(tmp_path, payload, name="state.json"):
    path = tmp_path / name
    write_state_file(path, payload)
    return path


def test_pure_bell_round_trip(tmp_path):
    path = write(tmp_path, pure_payload(bell()))
    state = load_state(path)
    assert isinstance(state, PureState)
    assert state.dims == (2, 2)
    assert np.count_nonzero(state.amplitudes) == 2


def test_mixture_of_basis_states(tmp_path):
    payload = {
        "format_version": "1",
        "kind": "mixture",
        "dims": [2, 2],
        "terms": [
            {"weight": 0.5, "amplitudes": [{"index": [0, 0], "re": 1.0, "im": 0.0}]},
            {"weight": 0.5, "amplitudes": [{"index": [1, 1], "re": 1.0, "im": 0.0}]},
        ],
    }
    state = load_state(write(tmp_path, payload))
    assert isinstance(state, DensityMatrix)
    assert np.array_equal(state.matrix, np.diag([0.5, 0.0, 0.0, 0.5]))


def test_dense_round_trip(tmp_path):
    rho = werner(0.6)
    path = write(tmp_path, density_payload(rho))
    state = load_state(path)
    assert isinstance(state, DensityMatrix)
    np.testing.assert_array_equal(state.matrix, rho.matrix)


def test_round_trip_is_bit_identical(tmp_path):
    """Writing, reading, and re-writing a random state reproduces the bytes."""
    psi = haar_pure((2, 3), seed=77)
    first = write(tmp_path, pure_payload(psi), "a.json")
    loaded = load_state(first)
    assert np.array_equal(loaded.amplitudes, psi.amplitudes)
    second = write(tmp_path, pure_payload(loaded), "b.json")
    assert first.read_bytes() == second.read_bytes()


def test_metadata_preserved_in_payload():
    payload = pure_payload(bell(), metadata={"name": "bell", "seed": 3})
    assert payload["metadata"] == {"name": "bell", "seed": 3}


def test_unlisted_amplitudes_are_zero(tmp_path):
    payload = {
        "format_version": "1",
        "kind": "pure",
        "dims": [2, 2],
        "amplitudes": [{"index": [0, 1], "re": 1.0, "im": 0.0}],
    }
    state = load_state(write(tmp_path, payload))
    assert state.amplitudes[1] == 1.0
    assert state.amplitudes[0] == state.amplitudes[2] == state.amplitudes[3] == 0.0


def test_mild_normalization_is_repaired(tmp_path):
    payload = {
        "format_version": "1",
        "kind": "pure",
        "dims": [2],
        "amplitudes": [{"index": [0], "re": 1.0000001, "im": 0.0}],
    }
    state = load_state(write(tmp_path, payload))
    assert np.linalg.norm(state.amplitudes) == pytest.approx(1.0, abs=1e-12)


# ------------------------------------------------------------------- errors


def test_invalid_json_reports_position(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"format_version": "1",\n  "kind": }')
    with pytest.raises(StateFileError, match="line 2"):
        load_state(path)


def test_missing_file(tmp_path):
    with pytest.raises(StateFileError, match="cannot read"):
        load_state(tmp_path / "nope.json")


def test_unknown_kind():
    with pytest.raises(StateFileError, match="unknown kind"):
        parse_state({"format_version": "1", "kind": "frob", "dims": [2]})


def test_unsupported_version():
    with pytest.raises(StateFileError, match="format_version"):
        parse_state({"format_version": "2", "kind": "pure", "dims": [2], "amplitudes": []})


def test_index_length_mismatch():
    payload = {
        "format_version": "1",
        "kind": "pure",
        "dims": [2, 2],
        "amplitudes": [{"index": [0], "re": 1.0, "im": 0.0}],
    }
    with pytest.raises(StateFileError, match="one integer per particle"):
        parse_state(payload)


def test_index_out_of_range():
    payload = {
        "format_version": "1",
        "kind": "pure",
        "dims": [2, 2],
        "amplitudes": [{"index": [0, 2], "re": 1.0, "im": 0.0}],
    }
    with pytest.raises(StateFileError, match="out of range"):
        parse_state(payload)


def test_duplicate_index():
    payload = {
        "format_version": "1",
        "kind": "pure",
        "dims": [2],
        "amplitudes": [
            {"index": [0], "re": 0.8, "im": 0.0},
            {"index": [0], "re": 0.6, "im": 0.0},
        ],
    }
    with pytest.raises(StateFileError, match="duplicate"):
        parse_state(payload)


def test_norm_failure():
    payload = {
        "format_version": "1",
        "kind": "pure",
        "dims": [2],
        "amplitudes": [{"index": [0], "re": 0.5, "im": 0.0}],
    }
    with pytest.raises(StateFileError, match="norm"):
        parse_state(payload)


def test_dense_psd_failure():
    bad = np.diag([1.5, -0.5])
    payload = {
        "format_version": "1",
        "kind": "dense",
        "dims": [2],
        "matrix": [
            [{"re": float(bad[i, j].real), "im": 0.0} for j in range(2)] for i in range(2)
        ],
    }
    with pytest.raises(Exception, match="negative eigenvalue"):
        parse_state(payload)


def test_dense_wrong_shape():
    payload = {
        "format_version": "1",
        "kind": "dense",
        "dims": [2],
        "matrix": [[{"re": 1.0, "im": 0.0}]],
    }
    with pytest.raises(StateFileError, match="rows"):
        parse_state(payload)


def test_complex_literal_rejected():
    payload = {
        "format_version": "1",
        "kind": "pure",
        "dims": [2],
        "amplitudes": [{"index": [0], "re": "1+0j", "im": 0.0}],
    }
    with pytest.raises(StateFileError, match="expected a number"):
        parse_state(payload)
