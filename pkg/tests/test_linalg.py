import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lrc7.fields import field_create
from lrc7.linalg import (
    AmbiguousSystemError,
    InconsistentSystemError,
    MatrixF,
    VectorF,
    columns_dependent,
    kernel_basis,
    load_matrix_csv,
    load_matrix_json,
    matmul,
    matrix_from_json_dict,
    matrix_to_json_dict,
    rank,
    save_matrix_csv,
    save_matrix_json,
    small_rank,
    solve_columns,
)

FIELDS = [field_create(2), field_create(3), field_create(2, 2), field_create(5), field_create(7), field_create(3, 2)]


@st.composite
def field_and_matrix(draw, max_dim=6):
    field = draw(st.sampled_from(FIELDS))
    m = draw(st.integers(1, max_dim))
    n = draw(st.integers(1, max_dim))
    entries = draw(
        st.lists(st.lists(st.integers(0, field.q - 1), min_size=n, max_size=n), min_size=m, max_size=m)
    )
    return field, MatrixF(field, entries)


# ---------------------------------------------------------------------------
# rank
# ---------------------------------------------------------------------------


def test_rank_identity():
    f = field_create(7)
    assert rank(MatrixF.identity(f, 4)) == 4


def test_rank_zero_matrix():
    f = field_create(5)
    assert rank(MatrixF.zeros(f, 3, 5)) == 0


def test_rank_known_singular():
    f = field_create(5)
    # row3 = row1 + row2, row4 = row1 + 2*row2 (mod 5)
    M = MatrixF(f, [[1, 2, 3], [0, 1, 1], [1, 3, 4], [1, 4, 0]])
    assert rank(M) == 2


@settings(max_examples=150, deadline=None)
@given(field_and_matrix())
def test_rank_equals_rank_of_transpose(fm):
    field, M = fm
    assert rank(M) == rank(M.transpose())


@settings(max_examples=100, deadline=None)
@given(field_and_matrix())
def test_rank_matches_small_rank(fm):
    field, M = fm
    rows = [tuple(int(x) for x in row) for row in M.array]
    assert small_rank(field, rows) == rank(M)


# ---------------------------------------------------------------------------
# kernel
# ---------------------------------------------------------------------------


def test_kernel_of_identity_is_empty():
    f = field_create(4 // 2, 2)
    assert kernel_basis(MatrixF.identity(f, 5)) == []


@settings(max_examples=150, deadline=None)
@given(field_and_matrix())
def test_kernel_vectors_annihilate_and_span(fm):
    field, M = fm
    basis = kernel_basis(M)
    assert len(basis) == M.cols - rank(M)
    for v in basis:
        prod = matmul(M, MatrixF(field, np.array(v.codes, dtype=np.int32)[:, None]))
        assert not prod.array.any()
    if basis:
        stacked = MatrixF(field, [v.codes for v in basis])
        assert rank(stacked) == len(basis)


# ---------------------------------------------------------------------------
# columns_dependent
# ---------------------------------------------------------------------------


def test_zero_column_is_dependent():
    f = field_create(3)
    M = MatrixF(f, [[1, 0], [2, 0]])
    assert columns_dependent(M, [1])
    assert not columns_dependent(M, [0])


def test_duplicate_or_bad_indices_rejected():
    f = field_create(3)
    M = MatrixF(f, [[1, 0], [2, 0]])
    with pytest.raises(ValueError):
        columns_dependent(M, [0, 0])
    with pytest.raises(ValueError):
        columns_dependent(M, [2])
    with pytest.raises(ValueError):
        columns_dependent(M, [])


@settings(max_examples=100, deadline=None)
@given(field_and_matrix(), st.data())
def test_columns_dependent_cross_checked_by_second_elimination_order(fm, data):
    """Agreement with a rank computed after reversing rows and columns,
    which drives the elimination through different pivots."""
    field, M = fm
    size = data.draw(st.integers(1, M.cols))
    subset = data.draw(
        st.lists(st.integers(0, M.cols - 1), min_size=size, max_size=size, unique=True)
    )
    got = columns_dependent(M, subset)
    sub = M.array[:, subset][::-1, ::-1]
    assert got == (rank(MatrixF(field, sub.copy())) < len(subset))


# ---------------------------------------------------------------------------
# solve
# ---------------------------------------------------------------------------


def test_solve_unique_roundtrip():
    f = field_create(7)
    A = np.array([[1, 2], [3, 4], [5, 6]], dtype=np.int32)
    x = np.array([3, 5], dtype=np.int32)
    rhs = np.zeros(3, dtype=np.int32)
    for j in range(2):
        rhs = f.arr_add(rhs, f.arr_mul(int(x[j]), A[:, j]))
    got = solve_columns(f, A, rhs)
    assert (got == x).all()


def test_solve_detects_ambiguity_and_inconsistency():
    f = field_create(5)
    A = np.array([[1, 2], [2, 4]], dtype=np.int32)  # second column = 2x first
    with pytest.raises(AmbiguousSystemError):
        solve_columns(f, A, np.array([1, 2], dtype=np.int32))
    with pytest.raises(InconsistentSystemError):
        solve_columns(f, A, np.array([1, 3], dtype=np.int32))


# ---------------------------------------------------------------------------
# vectors
# ---------------------------------------------------------------------------


def test_vector_ops():
    f = field_create(7)
    v = VectorF(f, [1, 2, 3])
    w = VectorF(f, [6, 5, 4])
    assert (v + w).codes == (0, 0, 0)
    assert (v - v).is_zero()
    assert v.scale(2).codes == (2, 4, 6)
    assert v[1].code == 2 and len(v) == 3
    with pytest.raises(ValueError):
        v + VectorF(f, [1, 2])
    with pytest.raises(ValueError):
        v + VectorF(field_create(5), [1, 2, 3])


def test_matrix_validation():
    f = field_create(3)
    with pytest.raises(ValueError):
        MatrixF(f, [[3]])
    with pytest.raises(ValueError):
        MatrixF(f, [])


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def test_matrix_json_roundtrip(tmp_path):
    f = field_create(2, 2)
    M = MatrixF(f, [[0, 1, 2], [3, 2, 1]])
    path = tmp_path / "m.json"
    save_matrix_json(path, M, extra={"params": {"n": 3}})
    M2, extras = load_matrix_json(path)
    assert M2 == M
    assert extras == {"params": {"n": 3}}


def test_matrix_json_schema():
    f = field_create(2, 2)
    M = MatrixF(f, [[0, 1], [2, 3]])
    d = matrix_to_json_dict(M)
    assert set(d) == {"p", "e", "modulus", "rows", "cols", "entries"}
    assert d["modulus"] == [1, 1, 1]
    assert d["entries"] == [[0, 1], [2, 3]]
    M2, extras = matrix_from_json_dict(json.loads(json.dumps(d)))
    assert M2 == M and extras == {}


def test_matrix_json_rejects_bad_shape():
    with pytest.raises(ValueError):
        matrix_from_json_dict(
            {"p": 2, "e": 1, "modulus": [0, 1], "rows": 3, "cols": 2, "entries": [[0, 1], [1, 0]]}
        )
    with pytest.raises(ValueError):
        matrix_from_json_dict({"p": 2, "e": 1})


def test_matrix_csv_roundtrip(tmp_path):
    f = field_create(7)
    M = MatrixF(f, [[0, 1, 2], [3, 4, 5]])
    path = tmp_path / "m.csv"
    save_matrix_csv(path, M)
    assert load_matrix_csv(path, f) == M
