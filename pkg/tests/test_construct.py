import random

import pytest

from lrc7.codec import min_distance
from lrc7.construct import (
    CandidateFamily,
    ConstructionTrace,
    ReplayError,
    VectorSequence,
    assemble_parity_check,
    choose_triple,
    guaranteed_min_rounds,
    replay_trace,
    run_algorithm1,
    trim,
    verify_conditions,
)
from lrc7.fields import field_create
from lrc7.linalg import MatrixF, columns_dependent, small_rank
from lrc7.spread import ProjectivePoint, build_2_spread

GF4 = field_create(2, 2)
GF5 = field_create(5)
GF7 = field_create(7)


# ---------------------------------------------------------------------------
# choose_triple
# ---------------------------------------------------------------------------


def test_choose_triple_char2():
    pts = [ProjectivePoint(GF4, c) for c in [(1, 0, 0, 0), (0, 1, 0, 0), (1, 1, 0, 0)]]
    u0, u1, u2 = choose_triple(pts, "lex")
    assert u1.codes == (1, 0, 0, 0)
    assert u2.codes == (0, 1, 0, 0)
    assert u0.codes == (1, 1, 0, 0)


def test_choose_triple_gf7_scaling():
    # <v3> = <(1,3)>: v3 = 1*v1 + 3*v2, so u2 = -3*v2 = 4*v2
    pts = [ProjectivePoint(GF7, c) for c in [(1, 0, 0, 0), (0, 1, 0, 0), (1, 3, 0, 0)]]
    u0, u1, u2 = choose_triple(pts, "lex")
    assert u1.codes == (1, 0, 0, 0)
    assert u2.codes == (0, 4, 0, 0)
    assert u0.codes == (1, 3, 0, 0)
    assert (u1 - u2).codes == u0.codes


def test_choose_triple_difference_identity_everywhere():
    spread = build_2_spread(GF7)
    from lrc7.spread import projective_points

    for pl in spread.planes[:6]:
        u0, u1, u2 = choose_triple(projective_points(pl), "lex")
        assert (u1 - u2).codes == u0.codes
        assert small_rank(GF7, [u1.codes, u2.codes]) == 2
        assert pl.contains(u0.codes) and pl.contains(u1.codes)


def test_choose_triple_needs_three_points():
    pts = [ProjectivePoint(GF4, (1, 0, 0, 0)), ProjectivePoint(GF4, (0, 1, 0, 0))]
    with pytest.raises(ValueError, match="3 points"):
        choose_triple(pts, "lex")


def test_choose_triple_seeded_is_reproducible():
    from lrc7.spread import projective_points

    pl = build_2_spread(GF7).planes[3]
    pts = projective_points(pl)
    a = choose_triple(pts, "seeded", random.Random(42))
    b = choose_triple(pts, "seeded", random.Random(42))
    assert [v.codes for v in a] == [v.codes for v in b]
    with pytest.raises(ValueError, match="rng"):
        choose_triple(pts, "seeded")


# ---------------------------------------------------------------------------
# trim
# ---------------------------------------------------------------------------


def test_trim_round_one_is_identity():
    spread = build_2_spread(GF4)
    family = CandidateFamily.from_spread(spread).without(0)
    seq, _ = run_algorithm1(GF4, "lex")
    one_pair = VectorSequence(GF4, [seq.pairs[0]])
    assert trim(family, one_pair, 1) is family or trim(family, one_pair, 1).sets == family.sets


def test_trim_discards_sets_below_three_points():
    seq, trace = run_algorithm1(GF4, "lex")
    # replay the family evolution and confirm discards happen exactly when
    # a surviving set would drop below 3 points
    family = CandidateFamily.from_spread(build_2_spread(GF4))
    for i, rd in enumerate(trace.rounds, start=1):
        before = {pid: set(pts) for pid, pts in family.without(rd.plane_id).sets}
        family = trim(
            family.without(rd.plane_id), VectorSequence(GF4, seq.pairs[:i]), i
        )
        after_ids = set(family.plane_ids())
        for pid, pts in before.items():
            removed = dict(rd.removals).get(pid, ())
            expect_kept = len(pts) - len(removed)
            if expect_kept < 3:
                assert pid not in after_ids
                assert pid in rd.discarded
            else:
                assert len(family.points_of(pid)) == expect_kept
    assert len(family) == 0


def test_span_removals_capped_at_q_minus_one():
    """Each 2-space spanned by one current and one earlier representative
    meets the surviving sets in at most q - 1 points.  Membership is
    recomputed here with an independent rank test."""
    q = 4
    seq, trace = run_algorithm1(GF4, "lex")
    family = CandidateFamily.from_spread(build_2_spread(GF4))
    for i, rd in enumerate(trace.rounds, start=1):
        family = family.without(rd.plane_id)
        if i >= 2:
            survivors = [pt for _, pts in family.sets for pt in pts]
            cur = seq.triple(i - 1)
            for j in range(i - 1):
                old = seq.triple(j)
                for a in range(3):
                    for b in range(3):
                        members = [
                            pt
                            for pt in survivors
                            if small_rank(GF4, [cur[a], old[b], pt]) == 2
                        ]
                        assert len(members) <= q - 1
        family = trim(family, VectorSequence(GF4, seq.pairs[:i]), i)


def test_trim_validates_round_index():
    family = CandidateFamily.from_spread(build_2_spread(GF4))
    seq, _ = run_algorithm1(GF4, "lex")
    with pytest.raises(ValueError):
        trim(family, seq, 0)
    with pytest.raises(ValueError):
        trim(family, seq, seq.L + 1)


# ---------------------------------------------------------------------------
# the full run
# ---------------------------------------------------------------------------


def test_guaranteed_min_rounds_values():
    assert [guaranteed_min_rounds(q) for q in (4, 5, 7, 8, 9)] == [3, 3, 4, 4, 5]


@pytest.mark.parametrize("field", [GF4, GF5, GF7])
def test_lex_run_meets_guarantee_and_conditions(field):
    seq, trace = run_algorithm1(field, "lex")
    assert seq.L >= guaranteed_min_rounds(field.q)
    assert seq.L <= field.q**2 + 1
    assert verify_conditions(seq).ok
    assert trace.L == seq.L


def test_determinism():
    for policy, seed in (("lex", None), ("seeded", 7)):
        s1, t1 = run_algorithm1(GF7, policy, seed)
        s2, t2 = run_algorithm1(GF7, policy, seed)
        assert s1 == s2
        assert t1 == t2


def test_seeds_differ():
    a, _ = run_algorithm1(GF7, "seeded", 1)
    b, _ = run_algorithm1(GF7, "seeded", 2)
    assert a != b  # astronomically unlikely to collide


def test_small_q_warns_and_terminates():
    f2 = field_create(2)
    with pytest.warns(UserWarning, match="q >= 4"):
        seq, _ = run_algorithm1(f2, "lex")
    assert 1 <= seq.L <= 5
    f3 = field_create(3)
    with pytest.warns(UserWarning):
        seq3, _ = run_algorithm1(f3, "lex")
    assert seq3.L <= 10


def test_unknown_policy_rejected():
    with pytest.raises(ValueError, match="policy"):
        run_algorithm1(GF4, "random")


# ---------------------------------------------------------------------------
# verify_conditions on mutated sequences
# ---------------------------------------------------------------------------


def test_repeated_plane_breaks_c2():
    seq, _ = run_algorithm1(GF4, "lex")
    mutated = VectorSequence(GF4, list(seq.pairs) + [seq.pairs[0]])
    rep = verify_conditions(mutated)
    assert not rep.c2_ok
    assert rep.c2_witness == (0, seq.L)


def test_engineered_dependence_breaks_c3():
    seq, _ = run_algorithm1(GF4, "lex")
    assert seq.L >= 3
    pairs = list(seq.pairs)
    u1_sum = tuple(GF4.add(a, b) for a, b in zip(pairs[0][0], pairs[1][0]))
    pairs[2] = (u1_sum, pairs[2][1])
    rep = verify_conditions(VectorSequence(GF4, pairs))
    assert not rep.c3_ok
    assert rep.c3_witness == (0, 1, 2, 1, 1, 1)


def test_dependent_pair_breaks_c1():
    pairs = [((1, 0, 0, 0), (2, 0, 0, 0)), ((0, 1, 0, 0), (0, 0, 1, 0))]
    rep = verify_conditions(VectorSequence(GF7, pairs))
    assert not rep.c1_ok
    assert rep.c1_witness == 0


def test_verify_conditions_rejects_empty():
    with pytest.raises(ValueError):
        verify_conditions(VectorSequence(GF4, []))


# ---------------------------------------------------------------------------
# parity-check assembly and the 6-column equivalence
# ---------------------------------------------------------------------------


def test_assembled_shape_and_blocks():
    seq, _ = run_algorithm1(GF7, "lex")
    H = assemble_parity_check(seq)
    L = seq.L
    assert (H.rows, H.cols) == (L + 4, 3 * L)
    for t in range(L):
        row = H.array[t]
        assert list(row[3 * t : 3 * t + 3]) == [1, 1, 1]
        assert row.sum() == 3  # weight exactly 3
        assert not H.array[L:, 3 * t + 2].any()  # zero bottom block
        assert tuple(H.array[L:, 3 * t]) == seq.u1(t)
        assert tuple(H.array[L:, 3 * t + 1]) == seq.u2(t)


def test_assemble_requires_three_pairs():
    seq, _ = run_algorithm1(GF4, "lex")
    with pytest.raises(ValueError, match="3 pairs"):
        assemble_parity_check(VectorSequence(GF4, seq.pairs[:2]))


def test_assemble_rejects_bad_sequence():
    seq, _ = run_algorithm1(GF4, "lex")
    pairs = list(seq.pairs) + [seq.pairs[0]]
    with pytest.raises(ValueError, match="conditions"):
        assemble_parity_check(VectorSequence(GF4, pairs))


def test_six_column_independence_iff_conditions_hold():
    """Both directions: a valid sequence yields a matrix with every
    6-column subset independent; breaking a condition creates a dependent
    6-subset or smaller."""
    import itertools

    seq, _ = run_algorithm1(GF4, "lex")
    short = VectorSequence(GF4, seq.pairs[:3])
    assert verify_conditions(short).ok
    H = assemble_parity_check(short)
    for subset in itertools.combinations(range(9), 6):
        assert not columns_dependent(H, subset)

    pairs = list(short.pairs)
    u1_sum = tuple(GF4.add(a, b) for a, b in zip(pairs[0][0], pairs[1][0]))
    pairs[2] = (u1_sum, pairs[2][1])
    bad_seq = VectorSequence(GF4, pairs)
    assert not verify_conditions(bad_seq).ok
    H_bad = assemble_parity_check(bad_seq, check=False)
    assert any(
        columns_dependent(H_bad, subset) for subset in itertools.combinations(range(9), 6)
    )
    assert min_distance(H_bad) <= 6
    assert min_distance(H) == 7


# ---------------------------------------------------------------------------
# traces and serialization
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("policy,seed", [("lex", None), ("seeded", 3), ("seeded", 11)])
def test_replay_reproduces_sequence(policy, seed):
    seq, trace = run_algorithm1(GF7, policy, seed)
    assert replay_trace(trace) == seq


def test_replay_detects_tampering():
    seq, trace = run_algorithm1(GF4, "lex")
    rounds = list(trace.rounds)
    bad = rounds[1]
    rounds[1] = type(bad)(bad.plane_id, bad.points, (), bad.discarded)
    tampered = ConstructionTrace(
        trace.p, trace.e, trace.modulus, trace.q, trace.policy, trace.seed, tuple(rounds)
    )
    with pytest.raises(ReplayError):
        replay_trace(tampered)


def test_trace_json_roundtrip(tmp_path):
    seq, trace = run_algorithm1(GF7, "seeded", 5)
    path = tmp_path / "trace.json"
    trace.save_json(path)
    loaded = ConstructionTrace.load_json(path)
    assert loaded == trace
    assert replay_trace(loaded) == seq


def test_sequence_json_roundtrip(tmp_path):
    seq, _ = run_algorithm1(GF4, "lex")
    path = tmp_path / "seq.json"
    seq.save_json(path)
    assert VectorSequence.load_json(path) == seq


# ---------------------------------------------------------------------------
# derived codes
# ---------------------------------------------------------------------------


def test_prefixes_of_valid_sequences_stay_valid():
    """The three conditions only quantify over pairs/triples of indices, so
    any prefix of a valid sequence is valid."""
    for field in (GF5, GF7):
        seq, _ = run_algorithm1(field, "seeded", 13)
        for cut in range(1, seq.L + 1):
            assert verify_conditions(VectorSequence(field, seq.pairs[:cut])).ok


def test_boundary_length_codes_at_n_equals_q_plus_4():
    """Truncating q = 5 runs to three pairs gives (9, 2, d)_5 codes at the
    n = q + 4 boundary, where both allowed distances may occur; the two
    independent distance computations must agree there."""
    from lrc7.codec import code_from_parity_check, min_weight_oracle

    for seed in range(10):
        seq, _ = run_algorithm1(GF5, "seeded", seed)
        sub = VectorSequence(GF5, seq.pairs[:3])
        code = code_from_parity_check(assemble_parity_check(sub))
        assert (code.n, code.k) == (9, 2)
        d = min_distance(code, cap=8)
        assert d in (7, 8)
        assert d == min_weight_oracle(code)


def test_q16_run_attains_bound():
    """Larger binary extension field: guarantee, conditions and dimension
    cap all hold at q = 16 too."""
    from lrc7.bounds import dim_bound_eq3, length_bound_eq5

    f16 = field_create(2, 4)
    seq, _ = run_algorithm1(f16, "lex")
    assert seq.L >= guaranteed_min_rounds(16) == 8
    assert verify_conditions(seq).ok
    assert 3 * seq.L <= length_bound_eq5(16)
    assert 2 * seq.L - 4 == dim_bound_eq3(3 * seq.L, 2, 16)


def test_constructed_codeword_satisfies_every_parity_check():
    import numpy as np

    from lrc7.codec import code_from_parity_check, encode

    seq, _ = run_algorithm1(GF7, "seeded", 21)
    code = code_from_parity_check(assemble_parity_check(seq))
    rng = np.random.default_rng(0)
    for _ in range(20):
        msg = [int(x) for x in rng.integers(0, 7, size=code.k)]
        cw = np.array(encode(code, msg).codes, dtype=np.int32)
        syndrome = np.zeros(code.H.rows, dtype=np.int32)
        for j, c in enumerate(cw):
            syndrome = GF7.arr_add(syndrome, GF7.arr_mul(int(c), code.H.array[:, j]))
        assert not syndrome.any()
