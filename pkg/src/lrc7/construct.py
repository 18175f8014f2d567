"""Greedy construction of vector-pair sequences over a 2-spread.

The constructor maintains the family of candidate point sets (one set of
q + 1 projective points per spread plane).  Each round picks a surviving
set, picks three of its points, scales representatives u1, u2, u0 with
u0 = u1 - u2, and then trims from every surviving set all points lying in
any plane spanned by one current and one earlier representative.  Sets
left with fewer than three points are discarded; the loop ends when the
family is empty.

The resulting pairs (u1, u2) satisfy three conditions that make the
assembled block parity-check matrix a distance >= 7, locality 2 code:
each pair is independent, distinct pairs span complementary planes, and
every cross-pair triple of representatives has rank 3.
"""

from __future__ import annotations

import json
import random
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from .fields import FieldSpec
from .linalg import MatrixF, VectorF, reduce_against, small_rank, solve_columns
from .spread import ProjectivePoint, Spread, build_2_spread, canonical_rep, projective_points

POLICIES = ("lex", "seeded")


class ReplayError(ValueError):
    """A recorded trace does not match the recomputed construction."""


def guaranteed_min_rounds(q: int) -> int:
    """Exact lower bound on the number of rounds for q >= 4.

    Computed as max(m, 3) for the smallest integer m with 9*m^2 >= 2*q^2,
    avoiding floating-point square roots.
    """
    m = 1
    while 9 * m * m < 2 * q * q:
        m += 1
    return max(m, 3)


class VectorSequence:
    """Ordered pairs (u1, u2) of length-4 vectors; u0(i) = u1(i) - u2(i)."""

    __slots__ = ("field", "pairs")

    def __init__(self, field: FieldSpec, pairs):
        norm = []
        for u1, u2 in pairs:
            c1 = u1.codes if isinstance(u1, VectorF) else tuple(int(x) for x in u1)
            c2 = u2.codes if isinstance(u2, VectorF) else tuple(int(x) for x in u2)
            if len(c1) != 4 or len(c2) != 4:
                raise ValueError("pair vectors must have length 4")
            norm.append((c1, c2))
        self.field = field
        self.pairs = tuple(norm)

    @property
    def L(self) -> int:
        return len(self.pairs)

    def u1(self, i: int) -> tuple[int, ...]:
        return self.pairs[i][0]

    def u2(self, i: int) -> tuple[int, ...]:
        return self.pairs[i][1]

    def u0(self, i: int) -> tuple[int, ...]:
        sub = self.field.sub
        return tuple(sub(a, b) for a, b in zip(*self.pairs[i]))

    def triple(self, i: int) -> tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]:
        """(u0, u1, u2) of pair i (0-based)."""
        return (self.u0(i), self.u1(i), self.u2(i))

    def pair_vectors(self, i: int) -> tuple[VectorF, VectorF]:
        return VectorF(self.field, self.pairs[i][0]), VectorF(self.field, self.pairs[i][1])

    def __eq__(self, other) -> bool:
        if not isinstance(other, VectorSequence):
            return NotImplemented
        return self.field == other.field and self.pairs == other.pairs

    def __repr__(self) -> str:
        return f"VectorSequence(q={self.field.q}, L={self.L})"

    def to_json_dict(self) -> dict:
        return {
            "p": self.field.p,
            "e": self.field.e,
            "modulus": list(self.field.modulus),
            "q": self.field.q,
            "pairs": [[list(u1), list(u2)] for u1, u2 in self.pairs],
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "VectorSequence":
        field = FieldSpec(int(d["p"]), int(d["e"]), d["modulus"])
        return cls(field, [(u1, u2) for u1, u2 in d["pairs"]])

    def save_json(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_json_dict(), indent=2, sort_keys=True) + "\n")

    @classmethod
    def load_json(cls, path) -> "VectorSequence":
        return cls.from_json_dict(json.loads(Path(path).read_text()))


@dataclass(frozen=True)
class CandidateFamily:
    """Surviving point sets, one per not-yet-ruled-out plane.

    Sets with fewer than three points are never present.
    """

    field: FieldSpec
    sets: tuple[tuple[int, frozenset[tuple[int, ...]]], ...]
    initial_size: int

    @classmethod
    def from_spread(cls, s: Spread) -> "CandidateFamily":
        sets = tuple(
            (pl.id, frozenset(pt.codes for pt in projective_points(pl))) for pl in s.planes
        )
        return cls(s.field, sets, len(s.planes))

    def plane_ids(self) -> list[int]:
        return [pid for pid, _ in self.sets]

    def points_of(self, plane_id: int) -> frozenset[tuple[int, ...]]:
        for pid, pts in self.sets:
            if pid == plane_id:
                return pts
        raise KeyError(f"plane {plane_id} is not in the family")

    def without(self, plane_id: int) -> "CandidateFamily":
        kept = tuple((pid, pts) for pid, pts in self.sets if pid != plane_id)
        if len(kept) == len(self.sets):
            raise KeyError(f"plane {plane_id} is not in the family")
        return CandidateFamily(self.field, kept, self.initial_size)

    def __len__(self) -> int:
        return len(self.sets)


@dataclass(frozen=True)
class TraceRound:
    plane_id: int
    points: tuple[tuple[int, ...], ...]  # the three chosen points, ascending
    removals: tuple[tuple[int, tuple[tuple[int, ...], ...]], ...]  # per surviving plane
    discarded: tuple[int, ...]  # planes dropped below three survivors


@dataclass(frozen=True)
class ConstructionTrace:
    """Everything needed to reproduce a run bit-exactly."""

    p: int
    e: int
    modulus: tuple[int, ...]
    q: int
    policy: str
    seed: Optional[int]
    rounds: tuple[TraceRound, ...]

    @property
    def L(self) -> int:
        return len(self.rounds)

    def to_json_dict(self) -> dict:
        return {
            "p": self.p,
            "e": self.e,
            "modulus": list(self.modulus),
            "q": self.q,
            "policy": self.policy,
            "seed": self.seed,
            "rounds": [
                {
                    "plane_id": rd.plane_id,
                    "points": [list(pt) for pt in rd.points],
                    "removals": {str(pid): [list(pt) for pt in pts] for pid, pts in rd.removals},
                    "discarded": list(rd.discarded),
                }
                for rd in self.rounds
            ],
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "ConstructionTrace":
        rounds = tuple(
            TraceRound(
                plane_id=int(rd["plane_id"]),
                points=tuple(tuple(int(x) for x in pt) for pt in rd["points"]),
                removals=tuple(
                    sorted(
                        (int(pid), tuple(tuple(int(x) for x in pt) for pt in pts))
                        for pid, pts in rd["removals"].items()
                    )
                ),
                discarded=tuple(int(x) for x in rd["discarded"]),
            )
            for rd in d["rounds"]
        )
        return cls(
            p=int(d["p"]),
            e=int(d["e"]),
            modulus=tuple(int(c) for c in d["modulus"]),
            q=int(d["q"]),
            policy=d["policy"],
            seed=d["seed"],
            rounds=rounds,
        )

    def save_json(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_json_dict(), indent=2, sort_keys=True) + "\n")

    @classmethod
    def load_json(cls, path) -> "ConstructionTrace":
        return cls.from_json_dict(json.loads(Path(path).read_text()))


# -- choosing a triple -------------------------------------------------------


def choose_triple(points, policy: str = "lex", rng: Optional[random.Random] = None):
    """Pick three points of one plane and scale representatives.

    The selected points keep their input order as <v1>, <v2>, <v3>; then
    v3 = alpha*v1 + beta*v2 with alpha, beta nonzero, and the returned
    vectors are u1 = alpha*v1, u2 = -beta*v2, u0 = u1 - u2 (a representative
    of <v3>).  Returns (u0, u1, u2) as VectorF.

    Policy 'lex' selects the three canonically smallest points, 'seeded'
    samples three with the supplied rng.
    """
    pts = []
    field = None
    for p in points:
        if isinstance(p, ProjectivePoint):
            field = p.field
            pts.append(p.codes)
        else:
            pts.append(tuple(int(x) for x in p))
    if field is None:
        raise TypeError("choose_triple needs ProjectivePoint inputs to carry the field")
    pts = list(dict.fromkeys(pts))
    if len(pts) < 3:
        raise ValueError(f"need at least 3 points, got {len(pts)}")
    if policy == "lex":
        chosen = set(sorted(range(len(pts)), key=lambda i: pts[i])[:3])
    elif policy == "seeded":
        if rng is None:
            raise ValueError("policy 'seeded' requires an rng")
        chosen = set(rng.sample(range(len(pts)), 3))
    else:
        raise ValueError(f"unknown policy {policy!r}")
    v1, v2, v3 = [pts[i] for i in sorted(chosen)]
    A = np.array([v1, v2], dtype=np.int32).T
    coeffs = solve_columns(field, A, np.array(v3, dtype=np.int32))
    alpha, beta = int(coeffs[0]), int(coeffs[1])
    if alpha == 0 or beta == 0:
        raise ValueError("chosen points are not in general position in the plane")
    mul = field.mul
    u1 = tuple(mul(alpha, x) for x in v1)
    u2 = tuple(mul(field.neg(beta), x) for x in v2)
    u0 = tuple(field.sub(a, b) for a, b in zip(u1, u2))
    return VectorF(field, u0), VectorF(field, u1), VectorF(field, u2)


# -- trimming ----------------------------------------------------------------


def _span_reducer(field: FieldSpec, u, v):
    """Normalized echelon rows of span{u, v}; requires u, v independent."""
    u = list(u)
    c1 = next(i for i, x in enumerate(u) if x)
    iv = field.inv(u[c1])
    if iv != 1:
        u = [field.mul(iv, x) for x in u]
    v = reduce_against(field, list(v), [(c1, u)])
    c2 = next((i for i, x in enumerate(v) if x), None)
    if c2 is None:
        raise ValueError("span vectors are linearly dependent")
    iv = field.inv(v[c2])
    if iv != 1:
        v = [field.mul(iv, x) for x in v]
    return (c1, np.asarray(u, dtype=np.int32)), (c2, np.asarray(v, dtype=np.int32))


def _in_span_mask(field: FieldSpec, pts: np.ndarray, reducer) -> np.ndarray:
    """Boolean mask of the rows of pts lying in the reducer's span.

    Membership is a rank test: the point reduces to zero against the span's
    echelon rows exactly when the 3-row stack has rank 2.
    """
    (c1, r1), (c2, r2) = reducer
    f = pts[:, c1]
    red = field.arr_sub(pts, field.arr_mul(f[:, None], r1[None, :]))
    f = red[:, c2]
    red = field.arr_sub(red, field.arr_mul(f[:, None], r2[None, :]))
    return ~red.any(axis=1)


def _trim_round(family: CandidateFamily, seq: VectorSequence, i: int):
    """Apply round i's removals; returns (family, removals, discarded)."""
    if i < 2 or not family.sets:
        return family, (), ()
    field = family.field
    ids = []
    rows = []
    for pid, pts in family.sets:
        for pt in sorted(pts):
            ids.append(pid)
            rows.append(pt)
    P = np.array(rows, dtype=np.int32)
    I = np.array(ids, dtype=np.int64)
    alive = np.ones(len(rows), dtype=bool)
    cur = seq.triple(i - 1)
    for j in range(i - 1):
        old = seq.triple(j)
        for a in range(3):
            for b in range(3):
                live = np.nonzero(alive)[0]
                if live.size == 0:
                    break
                reducer = _span_reducer(field, cur[a], old[b])
                mask = _in_span_mask(field, P[live], reducer)
                alive[live[mask]] = False
    removed_by_plane: dict[int, list[tuple[int, ...]]] = {}
    for idx in np.nonzero(~alive)[0]:
        removed_by_plane.setdefault(int(I[idx]), []).append(tuple(int(x) for x in P[idx]))
    removals = tuple(
        sorted((pid, tuple(sorted(pts))) for pid, pts in removed_by_plane.items())
    )
    new_sets = []
    discarded = []
    for pid, pts in family.sets:
        gone = set(removed_by_plane.get(pid, ()))
        kept = frozenset(pts - gone) if gone else pts
        if len(kept) < 3:
            discarded.append(pid)
        else:
            new_sets.append((pid, kept))
    return (
        CandidateFamily(field, tuple(new_sets), family.initial_size),
        removals,
        tuple(sorted(discarded)),
    )


def trim(m: CandidateFamily, seq: VectorSequence, i: int) -> CandidateFamily:
    """Remove from every surviving set all points in the planes spanned by
    one round-i representative and one earlier representative, then discard
    sets left with fewer than three points.  Rounds are 1-based; round 1
    never removes anything."""
    if i < 1:
        raise ValueError("round index is 1-based")
    if seq.L < i:
        raise ValueError("sequence has fewer pairs than the round index")
    return _trim_round(m, seq, i)[0]


# -- verification -------------------------------------------------------------


@dataclass(frozen=True)
class ConditionReport:
    """Brute-force verdict on the three sequence conditions.

    c1: each pair (u1, u2) is linearly independent.
    c2: distinct pairs span planes meeting only in 0 (stacked rank 4).
    c3: every cross-pair triple u_a(i), u_b(j), u_c(t) has rank 3.
    Witnesses are 0-based indices of the first counterexample found.
    """

    c1_ok: bool
    c2_ok: bool
    c3_ok: bool
    c1_witness: Optional[int] = None
    c2_witness: Optional[tuple[int, int]] = None
    c3_witness: Optional[tuple[int, int, int, int, int, int]] = None

    @property
    def ok(self) -> bool:
        return self.c1_ok and self.c2_ok and self.c3_ok


def verify_conditions(seq: VectorSequence) -> ConditionReport:
    """Exhaustively check the three conditions on a sequence."""
    if seq.L < 1:
        raise ValueError("sequence is empty")
    field = seq.field
    L = seq.L
    c1_ok, c1_w = True, None
    for i in range(L):
        if small_rank(field, [seq.u1(i), seq.u2(i)]) != 2:
            c1_ok, c1_w = False, i
            break
    c2_ok, c2_w = True, None
    for i in range(L):
        for j in range(i + 1, L):
            stacked = [seq.u1(i), seq.u2(i), seq.u1(j), seq.u2(j)]
            if small_rank(field, stacked) != 4:
                c2_ok, c2_w = False, (i, j)
                break
        if not c2_ok:
            break
    c3_ok, c3_w = True, None
    triples = [seq.triple(i) for i in range(L)]
    for i in range(L):
        for j in range(i + 1, L):
            for t in range(j + 1, L):
                for a in range(3):
                    for b in range(3):
                        for c in range(3):
                            rows = [triples[i][a], triples[j][b], triples[t][c]]
                            if small_rank(field, rows) != 3:
                                c3_ok, c3_w = False, (i, j, t, a, b, c)
                                break
                        if not c3_ok:
                            break
                    if not c3_ok:
                        break
                if not c3_ok:
                    break
            if not c3_ok:
                break
        if not c3_ok:
            break
    return ConditionReport(c1_ok, c2_ok, c3_ok, c1_w, c2_w, c3_w)


# -- the full greedy run -------------------------------------------------------


def run_algorithm1(field: FieldSpec, policy: str = "lex", seed: Optional[int] = None):
    """Run the greedy choose/trim loop to exhaustion.

    Returns (VectorSequence, ConstructionTrace).  For q >= 4 the output
    length L is at least guaranteed_min_rounds(q) and satisfies the three
    sequence conditions whenever L >= 3; smaller q runs to completion but
    only after emitting a warning.
    """
    if policy not in POLICIES:
        raise ValueError(f"unknown policy {policy!r}; expected one of {POLICIES}")
    if field.q < 4:
        warnings.warn(
            f"the output-length guarantee requires q >= 4 (got q = {field.q})",
            UserWarning,
            stacklevel=2,
        )
    if policy == "seeded":
        seed = 0 if seed is None else seed
        rng = random.Random(seed)
    else:
        seed = None
        rng = None
    spread = build_2_spread(field)
    family = CandidateFamily.from_spread(spread)
    pairs: list[tuple[tuple[int, ...], tuple[int, ...]]] = []
    rounds: list[TraceRound] = []
    i = 0
    while family.sets:
        i += 1
        if policy == "lex":
            pid = min(family.plane_ids())
        else:
            pid = rng.choice(sorted(family.plane_ids()))
        pts = [ProjectivePoint(field, t) for t in sorted(family.points_of(pid))]
        u0, u1, u2 = choose_triple(pts, policy, rng)
        chosen = tuple(
            sorted(canonical_rep(field, v.codes) for v in (u0, u1, u2))
        )
        pairs.append((u1.codes, u2.codes))
        family = family.without(pid)
        family, removals, discarded = _trim_round(family, VectorSequence(field, pairs), i)
        rounds.append(TraceRound(pid, chosen, removals, discarded))
    seq = VectorSequence(field, pairs)
    trace = ConstructionTrace(
        p=field.p,
        e=field.e,
        modulus=field.modulus,
        q=field.q,
        policy=policy,
        seed=seed,
        rounds=tuple(rounds),
    )
    return seq, trace


def replay_trace(trace: ConstructionTrace) -> VectorSequence:
    """Re-execute a recorded run and validate it step by step.

    Raises ReplayError when any recorded choice or removal disagrees with
    the recomputation; otherwise returns the identical VectorSequence.
    """
    field = FieldSpec(trace.p, trace.e, trace.modulus)
    spread = build_2_spread(field)
    family = CandidateFamily.from_spread(spread)
    pairs: list[tuple[tuple[int, ...], tuple[int, ...]]] = []
    for i, rd in enumerate(trace.rounds, start=1):
        try:
            available = family.points_of(rd.plane_id)
        except KeyError as exc:
            raise ReplayError(f"round {i}: plane {rd.plane_id} is not available") from exc
        if not set(rd.points) <= available:
            raise ReplayError(f"round {i}: recorded points are not all available")
        u0, u1, u2 = choose_triple([ProjectivePoint(field, t) for t in rd.points], "lex")
        pairs.append((u1.codes, u2.codes))
        family = family.without(rd.plane_id)
        family, removals, discarded = _trim_round(family, VectorSequence(field, pairs), i)
        if removals != rd.removals:
            raise ReplayError(f"round {i}: removals differ from the recording")
        if discarded != rd.discarded:
            raise ReplayError(f"round {i}: discards differ from the recording")
    if family.sets:
        raise ReplayError("recorded rounds end before the family is empty")
    return VectorSequence(field, pairs)


# -- parity-check assembly ------------------------------------------------------


def assemble_parity_check(seq: VectorSequence, check: bool = True) -> MatrixF:
    """Assemble the (L+4) x 3L block parity-check matrix.

    Row t < L is the 0/1 indicator of group t (columns 3t, 3t+1, 3t+2); the
    bottom four rows of group t hold u1(t), u2(t) and a zero column.
    """
    L = seq.L
    if L < 3:
        raise ValueError(f"need at least 3 pairs, got {L}")
    if check:
        report = verify_conditions(seq)
        if not report.ok:
            raise ValueError(f"sequence fails the pair conditions: {report}")
    field = seq.field
    H = np.zeros((L + 4, 3 * L), dtype=np.int32)
    for t in range(L):
        H[t, 3 * t : 3 * t + 3] = 1
        H[L:, 3 * t] = seq.u1(t)
        H[L:, 3 * t + 1] = seq.u2(t)
    return MatrixF(field, H)
