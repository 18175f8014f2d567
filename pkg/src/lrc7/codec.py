"""Turn a parity-check matrix into a working erasure code.

An LrcCode bundles the parity-check matrix H, a kernel-derived generator G,
the detected repair-group structure (disjoint triples, each backed by a
weight-3 dual check), and the parameters.  On top of it sit exact minimum
distance (subset enumeration with early exit), an independent minimum-weight
oracle (full codeword enumeration), local and global erasure repair, and a
seeded repair simulator.
"""

from __future__ import annotations

import importlib.resources
import json
import math
import os
from dataclasses import dataclass, field as dc_field
from typing import Optional, Sequence, Union

import numpy as np

from .bounds import CodeParams
from .fields import FieldElement, FieldSpec
from .linalg import (
    AmbiguousSystemError,
    MatrixF,
    VectorF,
    kernel_basis,
    matmul,
    matrix_from_json_dict,
    rank,
    solve_columns,
)

#: Environment variable overriding the codeword-enumeration budget.
ENUM_BUDGET_ENV = "LRC7_ENUM_BUDGET"
_DEFAULT_ENUM_BUDGET = 10**6


class GroupDetectionError(ValueError):
    """H has no leading block of disjoint weight-3 indicator rows."""


class LocalRepairError(ValueError):
    """A group partner is also erased; fall back to global repair."""


class UnrecoverableErasureError(ValueError):
    """The erasure pattern does not determine the codeword uniquely."""


class EnumerationBudgetError(ValueError):
    """q^k exceeds the codeword-enumeration budget."""


@dataclass(frozen=True)
class ErasurePattern:
    """A set of erased coordinate indices (0-based)."""

    erased: tuple[int, ...]

    def __post_init__(self):
        idx = tuple(int(i) for i in self.erased)
        if len(set(idx)) != len(idx):
            raise ValueError("erasure pattern contains a duplicate index")
        if any(i < 0 for i in idx):
            raise ValueError("erasure indices must be non-negative")
        object.__setattr__(self, "erased", tuple(sorted(idx)))

    def validate(self, n: int) -> None:
        if self.erased and self.erased[-1] >= n:
            raise ValueError(f"erasure index {self.erased[-1]} out of range for length {n}")

    def __len__(self) -> int:
        return len(self.erased)


class LrcCode:
    """A linear code with locality-2 repair groups of size 3."""

    __slots__ = ("H", "G", "params", "groups", "_group_checks", "_group_of")

    def __init__(self, H: MatrixF, G: MatrixF, params: CodeParams, groups, group_checks):
        self.H = H
        self.G = G
        self.params = params
        self.groups = tuple(tuple(g) for g in groups)
        self._group_checks = tuple(tuple(tuple(c) for c in checks) for checks in group_checks)
        lookup = {}
        for gi, g in enumerate(self.groups):
            for pos in g:
                lookup[pos] = gi
        self._group_of = lookup

    @property
    def field(self) -> FieldSpec:
        return self.H.field

    @property
    def n(self) -> int:
        return self.params.n

    @property
    def k(self) -> int:
        return self.params.k

    def group_index_of(self, pos: int) -> int:
        return self._group_of[pos]

    def __repr__(self) -> str:
        return f"LrcCode(n={self.n}, k={self.k}, groups={len(self.groups)}, q={self.field.q})"


def _detect_groups(H: MatrixF):
    """Read the leading disjoint weight-3 indicator rows as repair groups."""
    A = H.array
    n = H.cols
    if n % 3 != 0:
        raise GroupDetectionError(f"length {n} is not a multiple of 3")
    L = n // 3
    if H.rows < L:
        raise GroupDetectionError(f"expected at least {L} indicator rows, matrix has {H.rows}")
    groups = []
    seen: set[int] = set()
    for t in range(L):
        nz = np.nonzero(A[t])[0]
        if nz.size != 3 or not (A[t][nz] == 1).all():
            raise GroupDetectionError(f"row {t} is not a 0/1 indicator of weight 3")
        g = tuple(int(j) for j in nz)
        if seen & set(g):
            raise GroupDetectionError(f"row {t} overlaps an earlier group")
        seen.update(g)
        groups.append(g)
    checks = [((1, 1, 1),) for _ in groups]
    return groups, checks


def _checks_from_spec(field: FieldSpec, G: MatrixF, groups):
    """Derive in-group dual checks for caller-specified groups.

    For each group g, the dual codewords supported inside g are the kernel
    of G restricted to g's columns; every position must be covered by a
    check that is nonzero there.
    """
    n = G.cols
    flat = [pos for g in groups for pos in g]
    if sorted(flat) != list(range(n)) or any(len(g) != 3 for g in groups):
        raise GroupDetectionError("groups must partition the coordinates into triples")
    checks = []
    for g in groups:
        sub = MatrixF(field, G.array[:, list(g)])
        basis = [tuple(v.codes) for v in kernel_basis(sub)]
        for slot in range(3):
            if not any(vec[slot] for vec in basis):
                raise GroupDetectionError(
                    f"position {g[slot]} has no local check inside its group"
                )
        checks.append(tuple(basis))
    return [tuple(g) for g in groups], checks


def code_from_parity_check(H: MatrixF, group_spec: Optional[Sequence[Sequence[int]]] = None) -> LrcCode:
    """Build the code: generator from the kernel, groups detected from the
    leading indicator rows (or taken from group_spec)."""
    field = H.field
    n = H.cols
    k = n - rank(H)
    if k == 0:
        raise ValueError("parity-check matrix has full column rank: the code is {0}")
    basis = kernel_basis(H)
    G = MatrixF(field, [v.codes for v in basis])
    if matmul(G, H.transpose()).array.any():
        raise AssertionError("generator is not orthogonal to the parity checks")
    if group_spec is None:
        groups, checks = _detect_groups(H)
    else:
        groups, checks = _checks_from_spec(field, G, [tuple(g) for g in group_spec])
    params = CodeParams(n=n, k=k, d=None, r=2, q=field.q)
    return LrcCode(H, G, params, groups, checks)


# -- minimum distance ----------------------------------------------------------


def _matrix_of(code_or_matrix: Union[LrcCode, MatrixF]) -> MatrixF:
    return code_or_matrix.H if isinstance(code_or_matrix, LrcCode) else code_or_matrix


def _dependent_at_most(field: FieldSpec, cols, w: int) -> bool:
    """True iff some subset of at most w columns is linearly dependent.

    Depth-first enumeration in index order; the echelon form of the growing
    prefix is carried down the recursion, so each candidate column costs one
    reduction.
    """
    n = len(cols)
    sub = field.sub
    mul = field.mul
    inv = field.inv

    def rec(start: int, ech, depth: int) -> bool:
        last = depth == w - 1
        for c in range(start, n - (w - 1 - depth)):
            vec = list(cols[c])
            for piv, row in ech:
                f = vec[piv]
                if f:
                    vec = [sub(x, mul(f, y)) for x, y in zip(vec, row)]
            piv = next((i for i, x in enumerate(vec) if x), None)
            if piv is None:
                return True
            if not last:
                iv = inv(vec[piv])
                if iv != 1:
                    vec = [mul(iv, x) for x in vec]
                if rec(c + 1, ech + [(piv, vec)], depth + 1):
                    return True
        return False

    return rec(0, [], 0)


def min_distance(code: Union[LrcCode, MatrixF], cap: int = 8) -> Optional[int]:
    """Exact minimum distance, i.e. the smallest number of linearly
    dependent parity-check columns, searched up to ``cap``.

    Returns None when every subset of at most ``cap`` columns is
    independent (distance >= cap + 1).
    """
    if cap < 1:
        raise ValueError("cap must be at least 1")
    H = _matrix_of(code)
    field = H.field
    cols = [tuple(int(x) for x in H.array[:, j]) for j in range(H.cols)]
    for w in range(1, min(cap, H.cols) + 1):
        if _dependent_at_most(field, cols, w):
            return w
    return None


def _default_budget() -> int:
    raw = os.environ.get(ENUM_BUDGET_ENV)
    return int(raw) if raw else _DEFAULT_ENUM_BUDGET


def min_weight_oracle(code: Union[LrcCode, MatrixF], budget: Optional[int] = None) -> int:
    """Minimum Hamming weight over all q^k - 1 nonzero codewords.

    Independent of min_distance: this enumerates messages through the
    generator instead of testing column subsets.  Refuses to run when
    q^k exceeds the budget (default 10^6, env LRC7_ENUM_BUDGET).
    """
    if isinstance(code, LrcCode):
        G = code.G
    else:
        basis = kernel_basis(code)
        if not basis:
            raise ValueError("the code is {0}: no nonzero codewords")
        G = MatrixF(code.field, [v.codes for v in basis])
    field = G.field
    q, k, n = field.q, G.rows, G.cols
    total = q**k
    limit = budget if budget is not None else _default_budget()
    if total > limit:
        raise EnumerationBudgetError(f"q^k = {total} exceeds the enumeration budget {limit}")
    best = n + 1
    chunk = 1 << 15
    Garr = G.array
    for lo in range(1, total, chunk):
        ms = np.arange(lo, min(lo + chunk, total), dtype=np.int64)
        acc = np.zeros((ms.size, n), dtype=np.int32)
        t = ms.copy()
        for row in range(k):
            digit = (t % q).astype(np.int32)
            t //= q
            acc = field.arr_add(acc, field.arr_mul(digit[:, None], Garr[row][None, :]))
        best = min(best, int(np.count_nonzero(acc, axis=1).min()))
    return best


# -- encoding and repair ---------------------------------------------------------


def encode(code: LrcCode, msg) -> VectorF:
    """msg @ G; the result satisfies every parity check."""
    field = code.field
    codes = msg.codes if isinstance(msg, VectorF) else tuple(field.element(x).code for x in msg)
    if len(codes) != code.k:
        raise ValueError(f"message length {len(codes)} != k = {code.k}")
    acc = np.zeros(code.n, dtype=np.int32)
    for t, c in enumerate(codes):
        if c:
            acc = field.arr_add(acc, field.arr_mul(c, code.G.array[t]))
    return VectorF(field, acc)


Received = Sequence[Union[FieldElement, int, None]]


def _received_codes(field: FieldSpec, word: Received) -> list[Optional[int]]:
    out: list[Optional[int]] = []
    for x in word:
        out.append(None if x is None else field.element(x).code)
    return out


def _repair_local_info(code: LrcCode, word: Received, pos: int) -> tuple[int, int]:
    """(repaired code, helpers read); raises LocalRepairError on partner loss."""
    field = code.field
    codes = _received_codes(field, word)
    if len(codes) != code.n:
        raise ValueError(f"word length {len(codes)} != n = {code.n}")
    if codes[pos] is not None:
        raise ValueError(f"position {pos} is not erased")
    gi = code.group_index_of(pos)
    group = code.groups[gi]
    slot = group.index(pos)
    for check in code._group_checks[gi]:
        if check[slot] == 0:
            continue
        helpers = [(j, check[s]) for s, j in enumerate(group) if s != slot and check[s]]
        if any(codes[j] is None for j, _ in helpers):
            continue
        acc = 0
        for j, coeff in helpers:
            acc = field.add(acc, field.mul(coeff, codes[j]))
        value = field.div(field.neg(acc), check[slot])
        return value, len(helpers)
    raise LocalRepairError(
        f"position {pos}: a group partner is also erased; use repair_global"
    )


def repair_local(code: LrcCode, word: Received, pos: int) -> FieldElement:
    """Repair one erased position from its group check alone.

    Reads exactly the surviving group partners (two symbols for weight-3
    checks).  Raises LocalRepairError when a needed partner is erased too.
    """
    value, _ = _repair_local_info(code, word, pos)
    return FieldElement(code.field, value)


def repair_global(code: LrcCode, word: Received) -> VectorF:
    """Solve the parity checks over the erased coordinates.

    Any pattern of fewer than d erasures restricts H to full column rank and
    is repaired exactly; rank-deficient restrictions raise
    UnrecoverableErasureError.
    """
    field = code.field
    codes = _received_codes(field, word)
    if len(codes) != code.n:
        raise ValueError(f"word length {len(codes)} != n = {code.n}")
    erased = [i for i, c in enumerate(codes) if c is None]
    if not erased:
        return VectorF(field, codes)
    H = code.H.array
    syndrome = np.zeros(code.H.rows, dtype=np.int32)
    for j, c in enumerate(codes):
        if c:
            syndrome = field.arr_add(syndrome, field.arr_mul(c, H[:, j]))
    rhs = field.arr_neg(syndrome)
    try:
        x = solve_columns(field, H[:, erased], rhs)
    except AmbiguousSystemError as exc:
        raise UnrecoverableErasureError(
            f"{len(erased)} erasures do not determine the codeword uniquely"
        ) from exc
    for idx, j in enumerate(erased):
        codes[j] = int(x[idx])
    return VectorF(field, codes)


# -- repair simulation -------------------------------------------------------------


@dataclass(frozen=True)
class TrialRecord:
    trial: int
    erased: tuple[int, ...]
    mode: str  # "local" or "global"
    success: bool
    helpers: int


@dataclass(frozen=True)
class RepairStats:
    """Aggregated simulator output plus the per-trial records."""

    trials: int
    successes: int
    local_trials: int
    erased_symbols: int
    locally_repaired_symbols: int
    helpers_total: int
    records: tuple[TrialRecord, ...] = dc_field(repr=False)

    @property
    def success_rate(self) -> float:
        return self.successes / self.trials

    @property
    def local_symbol_fraction(self) -> float:
        return self.locally_repaired_symbols / self.erased_symbols

    @property
    def mean_helpers_per_trial(self) -> float:
        return self.helpers_total / self.trials

    @property
    def mean_helpers_per_symbol(self) -> float:
        return self.helpers_total / self.erased_symbols

    def wilson_ci_95(self) -> tuple[float, float]:
        return wilson_interval(self.successes, self.trials)

    def summary_dict(self) -> dict:
        lo, hi = self.wilson_ci_95()
        return {
            "trials": self.trials,
            "successes": self.successes,
            "success_rate": self.success_rate,
            "success_wilson_ci_95": [lo, hi],
            "local_trials": self.local_trials,
            "erased_symbols": self.erased_symbols,
            "locally_repaired_symbols": self.locally_repaired_symbols,
            "local_symbol_fraction": self.local_symbol_fraction,
            "mean_helpers_per_trial": self.mean_helpers_per_trial,
            "mean_helpers_per_symbol": self.mean_helpers_per_symbol,
        }


def wilson_interval(successes: int, trials: int, z: float = 1.959963984540054) -> tuple[float, float]:
    """95% Wilson score interval for a binomial proportion."""
    if trials == 0:
        return 0.0, 1.0
    phat = successes / trials
    denom = 1 + z * z / trials
    center = (phat + z * z / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1 - phat) / trials + z * z / (4 * trials * trials)) / denom
    return max(0.0, center - half), min(1.0, center + half)


def parse_failure_model(spec: str) -> tuple[str, Optional[int]]:
    """Parse 'single-uniform', 'multi-uniform(f)' / 'multi-uniform:f',
    or 'group-burst'."""
    s = spec.strip()
    if s == "single-uniform":
        return "single-uniform", None
    if s == "group-burst":
        return "group-burst", None
    for opener, closer in (("(", ")"), (":", "")):
        if s.startswith("multi-uniform" + opener):
            body = s[len("multi-uniform" + opener):]
            if closer:
                if not body.endswith(closer):
                    break
                body = body[: -len(closer)]
            f = int(body)
            if f < 1:
                raise ValueError("multi-uniform needs at least one erasure")
            return "multi-uniform", f
    raise ValueError(
        f"unknown failure model {spec!r}; expected single-uniform, "
        "multi-uniform(f) or group-burst"
    )


def simulate_repairs(code: LrcCode, trials: int, failure_model: str, seed: int = 0) -> RepairStats:
    """Encode random messages, erase per the failure model, repair local-first.

    A trial is repaired locally when every touched group has exactly one
    erasure; otherwise one global repair covers the whole pattern.  All
    randomness derives from the seed, one child stream per trial.
    """
    kind, f = parse_failure_model(failure_model)
    field = code.field
    n, k, q = code.n, code.k, field.q
    if kind == "multi-uniform" and f > n:
        raise ValueError(f"cannot erase {f} of {n} symbols")
    root = np.random.SeedSequence(seed)
    records = []
    successes = local_trials = erased_symbols = local_symbols = helpers_total = 0
    for t, child in enumerate(root.spawn(trials)):
        rng = np.random.default_rng(child)
        msg = rng.integers(0, q, size=k)
        codeword = encode(code, [int(x) for x in msg])
        if kind == "single-uniform":
            erased = [int(rng.integers(0, n))]
        elif kind == "multi-uniform":
            erased = sorted(int(x) for x in rng.choice(n, size=f, replace=False))
        else:
            g = int(rng.integers(0, len(code.groups)))
            erased = list(code.groups[g])
        word: list[Optional[int]] = list(codeword.codes)
        for j in erased:
            word[j] = None
        per_group: dict[int, int] = {}
        for j in erased:
            gi = code.group_index_of(j)
            per_group[gi] = per_group.get(gi, 0) + 1
        all_single = all(c == 1 for c in per_group.values())
        if all_single:
            mode = "local"
            helpers = 0
            ok = True
            for j in erased:
                value, h = _repair_local_info(code, word, j)
                helpers += h
                if value != codeword.codes[j]:
                    ok = False
            local_trials += 1
            local_symbols += len(erased)
        else:
            mode = "global"
            helpers = n - len(erased)
            try:
                repaired = repair_global(code, word)
                ok = repaired == codeword
            except UnrecoverableErasureError:
                ok = False
        successes += ok
        erased_symbols += len(erased)
        helpers_total += helpers
        records.append(TrialRecord(t, tuple(erased), mode, bool(ok), helpers))
    return RepairStats(
        trials=trials,
        successes=successes,
        local_trials=local_trials,
        erased_symbols=erased_symbols,
        locally_repaired_symbols=local_symbols,
        helpers_total=helpers_total,
        records=tuple(records),
    )


# -- bundled example matrices -----------------------------------------------------


def fixture_names() -> tuple[str, ...]:
    return ("h1", "h2")


def fixture_path(name: str):
    if name not in fixture_names():
        raise KeyError(f"unknown fixture {name!r}; available: {fixture_names()}")
    return importlib.resources.files("lrc7") / "fixtures" / f"{name}.json"


def load_fixture(name: str) -> tuple[MatrixF, dict]:
    """Load a bundled parity-check matrix plus its declared parameters."""
    data = json.loads(fixture_path(name).read_text())
    return matrix_from_json_dict(data)
