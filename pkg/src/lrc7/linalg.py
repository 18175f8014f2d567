"""Dense vectors and matrices over a FieldSpec.

Entries are stored as integer codes in a numpy array; all eliminations are
exact field arithmetic.  Includes the JSON and CSV matrix formats shared by
the CLI tools and the bundled fixtures.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .fields import FieldElement, FieldSpec


class AmbiguousSystemError(ValueError):
    """Linear system has more than one solution."""


class InconsistentSystemError(ValueError):
    """Linear system has no solution."""


def _coerce_code(field: FieldSpec, x) -> int:
    if isinstance(x, FieldElement):
        if x.field != field:
            raise ValueError("entry belongs to a different field")
        return x.code
    code = int(x)
    if not 0 <= code < field.q:
        raise ValueError(f"code {code} out of range for {field!r}")
    return code


class VectorF:
    """Immutable vector over a field, stored as a tuple of codes."""

    __slots__ = ("field", "codes")

    def __init__(self, field: FieldSpec, entries):
        self.field = field
        self.codes = tuple(_coerce_code(field, x) for x in entries)

    def __len__(self) -> int:
        return len(self.codes)

    def __iter__(self):
        return (FieldElement(self.field, c) for c in self.codes)

    def __getitem__(self, i: int) -> FieldElement:
        return FieldElement(self.field, self.codes[i])

    def __eq__(self, other) -> bool:
        if not isinstance(other, VectorF):
            return NotImplemented
        return self.field == other.field and self.codes == other.codes

    def __hash__(self) -> int:
        return hash((self.field, self.codes))

    def _check(self, other):
        if self.field != other.field:
            raise ValueError("operands belong to different fields")
        if len(self.codes) != len(other.codes):
            raise ValueError("vector lengths differ")

    def __add__(self, other: "VectorF") -> "VectorF":
        self._check(other)
        f = self.field
        return VectorF(f, (f.add(a, b) for a, b in zip(self.codes, other.codes)))

    def __sub__(self, other: "VectorF") -> "VectorF":
        self._check(other)
        f = self.field
        return VectorF(f, (f.sub(a, b) for a, b in zip(self.codes, other.codes)))

    def scale(self, c) -> "VectorF":
        code = _coerce_code(self.field, c)
        f = self.field
        return VectorF(f, (f.mul(code, x) for x in self.codes))

    def is_zero(self) -> bool:
        return not any(self.codes)

    def __repr__(self) -> str:
        return f"VectorF({self.field!r}, {list(self.codes)})"


class MatrixF:
    """Immutable dense matrix over a field (row-major integer codes)."""

    __slots__ = ("field", "array")

    def __init__(self, field: FieldSpec, entries):
        if isinstance(entries, np.ndarray) and entries.dtype.kind in "iu":
            arr = entries.astype(np.int32)
        else:
            arr = np.array(
                [[_coerce_code(field, x) for x in row] for row in entries],
                dtype=np.int32,
            )
        if arr.ndim != 2 or arr.size == 0:
            raise ValueError("matrix must be two-dimensional and non-empty")
        if arr.min() < 0 or arr.max() >= field.q:
            raise ValueError("matrix entry out of range for the field")
        arr.setflags(write=False)
        self.field = field
        self.array = arr

    @property
    def rows(self) -> int:
        return self.array.shape[0]

    @property
    def cols(self) -> int:
        return self.array.shape[1]

    def entry(self, i: int, j: int) -> FieldElement:
        return FieldElement(self.field, int(self.array[i, j]))

    def row(self, i: int) -> VectorF:
        return VectorF(self.field, self.array[i])

    def col(self, j: int) -> VectorF:
        return VectorF(self.field, self.array[:, j])

    def transpose(self) -> "MatrixF":
        return MatrixF(self.field, self.array.T.copy())

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "MatrixF":
        return cls(field, np.eye(n, dtype=np.int32))

    @classmethod
    def zeros(cls, field: FieldSpec, m: int, n: int) -> "MatrixF":
        return cls(field, np.zeros((m, n), dtype=np.int32))

    def __eq__(self, other) -> bool:
        if not isinstance(other, MatrixF):
            return NotImplemented
        return self.field == other.field and np.array_equal(self.array, other.array)

    def __repr__(self) -> str:
        return f"MatrixF({self.field!r}, shape={self.array.shape})"


def _rref(field: FieldSpec, arr: np.ndarray):
    """Reduced row echelon form; returns (R, pivot column list)."""
    R = arr.astype(np.int32).copy()
    m, n = R.shape
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.nonzero(R[r:, c])[0]
        if nz.size == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            R[[r, pr]] = R[[pr, r]]
        v = int(R[r, c])
        if v != 1:
            R[r] = field.arr_mul(R[r], field.inv(v))
        f = R[:, c].copy()
        f[r] = 0
        other = np.nonzero(f)[0]
        if other.size:
            R[other] = field.arr_sub(R[other], field.arr_mul(f[other][:, None], R[r][None, :]))
        pivots.append(c)
        r += 1
    return R, pivots


def rank(M: MatrixF) -> int:
    """Rank via exact row reduction."""
    return len(_rref(M.field, M.array)[1])


def kernel_basis(M: MatrixF) -> list[VectorF]:
    """Basis of the right null space; empty when M has full column rank."""
    field = M.field
    R, pivots = _rref(field, M.array)
    n = M.cols
    pivot_set = set(pivots)
    basis = []
    for j in range(n):
        if j in pivot_set:
            continue
        v = [0] * n
        v[j] = 1
        for i, c in enumerate(pivots):
            v[c] = field.neg(int(R[i, j]))
        basis.append(VectorF(field, v))
    return basis


def columns_dependent(M: MatrixF, subset: Sequence[int]) -> bool:
    """True iff the selected columns (0-based indices) are linearly dependent."""
    idx = [int(j) for j in subset]
    if not idx:
        raise ValueError("subset must be non-empty")
    if len(set(idx)) != len(idx):
        raise ValueError("subset contains a duplicate column index")
    if min(idx) < 0 or max(idx) >= M.cols:
        raise ValueError("column index out of range")
    sub = M.array[:, idx]
    return len(_rref(M.field, sub)[1]) < len(idx)


def solve_columns(field: FieldSpec, arr: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Solve arr @ x = rhs for the unique x (codes).

    Raises InconsistentSystemError when no solution exists and
    AmbiguousSystemError when the solution is not unique.
    """
    arr = np.asarray(arr, dtype=np.int32)
    rhs = np.asarray(rhs, dtype=np.int32)
    ncols = arr.shape[1]
    aug = np.concatenate([arr, rhs[:, None]], axis=1)
    R, pivots = _rref(field, aug)
    if ncols in pivots:
        raise InconsistentSystemError("no solution")
    if len(pivots) < ncols:
        raise AmbiguousSystemError("solution is not unique")
    x = np.zeros(ncols, dtype=np.int32)
    for i, c in enumerate(pivots):
        x[c] = R[i, ncols]
    return x


def matmul(A: MatrixF, B: MatrixF) -> MatrixF:
    """Exact matrix product over the shared field."""
    if A.field != B.field:
        raise ValueError("operands belong to different fields")
    if A.cols != B.rows:
        raise ValueError("inner dimensions do not match")
    field = A.field
    out = np.zeros((A.rows, B.cols), dtype=np.int32)
    for t in range(A.cols):
        out = field.arr_add(out, field.arr_mul(A.array[:, t][:, None], B.array[t][None, :]))
    return MatrixF(field, out)


# -- small pure-Python eliminations (hot paths on short tuples) -----------


def reduce_against(field: FieldSpec, vec: list[int], echelon) -> list[int]:
    """Subtract multiples of normalized echelon rows to clear their pivots."""
    sub = field.sub
    mul = field.mul
    for piv, row in echelon:
        f = vec[piv]
        if f:
            vec = [sub(x, mul(f, y)) for x, y in zip(vec, row)]
    return vec


def small_rank(field: FieldSpec, rows) -> int:
    """Rank of a short list of code tuples (pure-Python elimination)."""
    ech: list[tuple[int, list[int]]] = []
    for vec in rows:
        vec = reduce_against(field, list(vec), ech)
        piv = next((i for i, x in enumerate(vec) if x), None)
        if piv is None:
            continue
        iv = field.inv(vec[piv])
        if iv != 1:
            mul = field.mul
            vec = [mul(iv, x) for x in vec]
        ech.append((piv, vec))
    return len(ech)


# -- serialization ---------------------------------------------------------


def matrix_to_json_dict(M: MatrixF, extra: Optional[dict] = None) -> dict:
    d = {
        "p": M.field.p,
        "e": M.field.e,
        "modulus": list(M.field.modulus),
        "rows": M.rows,
        "cols": M.cols,
        "entries": [[int(x) for x in row] for row in M.array],
    }
    if extra:
        for key, val in extra.items():
            if key in d:
                raise ValueError(f"extra key {key!r} collides with the matrix format")
            d[key] = val
    return d


def matrix_from_json_dict(d: dict) -> tuple[MatrixF, dict]:
    """Parse the matrix format; returns the matrix and any extra keys."""
    try:
        field = FieldSpec(int(d["p"]), int(d["e"]), d["modulus"])
        entries = d["entries"]
        rows, cols = int(d["rows"]), int(d["cols"])
    except KeyError as exc:
        raise ValueError(f"matrix JSON is missing key {exc}") from exc
    M = MatrixF(field, entries)
    if (M.rows, M.cols) != (rows, cols):
        raise ValueError("declared rows/cols do not match the entries")
    extras = {k: v for k, v in d.items() if k not in ("p", "e", "modulus", "rows", "cols", "entries")}
    return M, extras


def save_matrix_json(path, M: MatrixF, extra: Optional[dict] = None) -> None:
    Path(path).write_text(json.dumps(matrix_to_json_dict(M, extra), indent=2, sort_keys=True) + "\n")


def load_matrix_json(path) -> tuple[MatrixF, dict]:
    return matrix_from_json_dict(json.loads(Path(path).read_text()))


def save_matrix_csv(path, M: MatrixF) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        for row in M.array:
            writer.writerow(int(x) for x in row)


def load_matrix_csv(path, field: FieldSpec) -> MatrixF:
    with open(path, newline="") as fh:
        rows = [[int(x) for x in row] for row in csv.reader(fh) if row]
    return MatrixF(field, rows)
