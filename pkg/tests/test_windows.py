import itertools
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tseq.constructions import make_sequence
from tseq.errors import BudgetExceeded, NotIncreasing
from tseq.group_core import DirectSumContext, PruferGroup, ds_make, prufer_make
from tseq.windows import (
    EvidenceUpToHorizon,
    Proven,
    Refuted,
    SequenceHandle,
    Window,
    cond_i_values,
    cond_ii_inf,
    cond_ii_tuples,
    cond_iii_inf,
    cond_iii_tuples,
    cond_iv_check,
    cor24_check,
    count_combinations,
    enum_Alm,
    gap_verdict,
    growth_flag,
    member_Alm,
    zp_scan,
)

E3 = make_sequence("e:p=3")
EX3 = make_sequence("ex12:p=3")


def P(num, exp, p=3):
    return prufer_make(p, num, exp)


def brute_Alm(seq, l, w):
    """Independent enumeration straight from the definition."""
    out = set()
    idx = list(w.indices())
    for h in range(1, l + 1):
        for ks in itertools.combinations(idx, h):
            for ms in itertools.product([m for m in range(-l, l + 1) if m], repeat=h):
                if sum(map(abs, ms)) <= l:
                    total = seq.ctx.zero()
                    for k, m in zip(ks, ms):
                        total = total + seq(k) * m
                    out.add(total)
    return out


# --- enumeration ----------------------------------------------------------


def test_enum_examples():
    assert set(enum_Alm(E3, 1, Window(2, 3))) == {P(1, 2), P(8, 2), P(1, 3), P(26, 3)}
    assert set(enum_Alm(E3, 3, Window(1, 1))) == {P(1, 1), P(2, 1), P(0, 0)}
    assert set(enum_Alm(EX3, 2, Window(2, 2))) == {P(7, 2), P(2, 2), P(5, 2), P(4, 2)}


@pytest.mark.parametrize("l,w", [(1, Window(2, 3)), (3, Window(1, 1)), (2, Window(1, 4)), (3, Window(2, 5))])
def test_enum_matches_definition(l, w):
    for seq in (E3, EX3):
        assert set(enum_Alm(seq, l, w)) == brute_Alm(seq, l, w)


def test_budget():
    assert count_combinations(2, 1) == 4
    with pytest.raises(BudgetExceeded):
        enum_Alm(E3, 6, Window(1, 30), budget=1000)


# --- membership -----------------------------------------------------------


def test_member_examples():
    res = member_Alm(P(1, 1), EX3, 4, Window(3, 4))
    assert res.found
    assert res.witness.indices == (3, 4) and res.witness.coeffs == (-1, 3)
    assert res.witness.is_sound(EX3, 4, Window(3, 4))
    assert not member_Alm(P(1, 1), E3, 1, Window(2, 5)).found
    zero = member_Alm(P(0, 0), E3, 3, Window(1, 1))
    assert zero.found and zero.witness.indices == (1,) and abs(zero.witness.coeffs[0]) == 3


def test_zp_scan_examples():
    v = zp_scan(P(1, 1), EX3, 4, range(1, 11), window_width=2)
    assert isinstance(v, Refuted)
    assert [m for m, _ in v.witness] == list(range(1, 11))
    assert all(w.is_sound(EX3, 4, Window(m, m + 1)) for m, w in v.witness)
    for g in (P(1, 1), P(2, 1)):
        v = zp_scan(g, E3, 1, range(2, 7), window_width=4)
        assert isinstance(v, EvidenceUpToHorizon) and v.flag == "escaped"
    with pytest.raises(ValueError):
        zp_scan(P(0, 0), E3, 1, range(1, 3), 2)


@pytest.mark.parametrize("p", [3, 5])
def test_zp_scan_on_e_escapes_past_exponent(p):
    # l < p: every combination with indices above exp(g) has larger order
    e = make_sequence({"kind": "e", "p": p})
    for exp in (1, 2):
        for num in range(1, p**exp):
            g = P(num, exp, p)
            if g.exp != exp:
                continue
            for l in range(1, p):
                v = zp_scan(g, e, l, range(exp + 1, exp + 4), window_width=3)
                assert v.flag == "escaped"


def test_zp_scan_on_e_at_l_equal_p():
    # p * e_{E+1} = e_E, so at l = p the window must start above exp(g) + 1
    g = P(1, 1)
    assert member_Alm(g, E3, 3, Window(2, 4)).found
    assert zp_scan(g, E3, 3, range(3, 6), window_width=3).flag == "escaped"


# --- order conditions -----------------------------------------------------


def test_cond_i_examples():
    assert cond_i_values([3, 9, 27, 81]) == [3, 3, 3, 3]
    assert cond_i_values([2, 3, 5, 7, 11]) == [2, 3, 5, 7, 11]
    assert cond_i_values([3, 3**4, 3**9, 3**16]) == [3, 27, 243, 2187]


def test_cond_ii_examples():
    assert cond_ii_inf([2, 3, 5, 7], 2, Window(1, 4)) == 3
    rows = dict(cond_ii_tuples([2, 3, 5, 7], 2, Window(1, 4)))
    assert len(rows) == 6 and max(rows[(1, 2)]) == 3
    assert cond_ii_inf([3, 9, 27], 1, Window(2, 3)) == 9
    assert cond_ii_inf([3, 3, 3, 3], 2, Window(1, 4)) == 1


def test_cond_iii_examples():
    assert cond_iii_inf(E3, 2, Window(2, 3)) == 3
    assert dict(cond_iii_tuples(E3, 2, Window(2, 3)))[(2, 3)] == [1, 3]
    assert cond_iii_inf(E3, 1, Window(2, 4)) == 9
    ctx = DirectSumContext("const:3")
    g = SequenceHandle(ctx, ctx.g, name="g")
    assert cond_iii_inf(g, 2, Window(1, 3)) == 3


def test_cond_iv_examples():
    assert cond_iv_check(E3, 2, 3, Window(3, 6)).holds
    v = cond_iv_check(EX3, 4, 3, Window(3, 6))
    assert not v.holds and v.element == P(1, 1)
    assert v.witness.indices == (3, 4) and v.witness.coeffs == (-1, 3)
    assert cond_iv_check(EX3, 4, 1, Window(3, 6)).holds


def test_torsion_condition_holds_where_quotient_condition_stays_bounded():
    # on e_n the quotient orders stay at p while torsion stays out of A(l, m)
    for m in range(2, 7):
        w = Window(m, m + 4)
        assert cond_iii_inf(E3, 2, w) == 3
        assert cond_iv_check(E3, 2, 3, Window(m + 1, m + 4)).holds


def test_cor24_examples():
    r = cor24_check([2, 3, 5, 7])
    assert isinstance(r["coprime"], Proven)
    assert r["coprime"].certificate["gcd_table"][0] == (1, 2, 1)
    r = cor24_check([3, 9, 81, 3**7])
    assert isinstance(r["coprime"], Refuted)
    assert r["divisibility_ratio"].envelope == (3, 9, 27)
    r = cor24_check([3, 9, 27, 81, 243, 729, 2187, 6561])
    assert set(r["divisibility_ratio"].envelope) == {3}
    assert r["divisibility_ratio"].flag == "bounded"
    assert isinstance(cor24_check([4, 6])["divisibility_ratio"], Refuted)


def test_gap_verdict_examples():
    v = gap_verdict([k * k for k in range(1, 21)])
    assert v.flag == "divergent" and v.envelope[:3] == (3, 5, 7)
    assert gap_verdict([2 * k for k in range(1, 21)]).flag == "BoundedGapPersists(2)"
    fib = [1, 2]
    while len(fib) < 15:
        fib.append(fib[-1] + fib[-2])
    assert gap_verdict(fib).flag == "divergent"
    with pytest.raises(NotIncreasing):
        gap_verdict([1, 3, 3])


def test_growth_flag():
    assert growth_flag([1]) == "insufficient"
    assert growth_flag([1, 2, 3, 4, 5, 6, 7, 8]) == "divergent"
    assert growth_flag([2] * 8) == "bounded"


def test_verdict_json():
    v = zp_scan(P(1, 1), EX3, 4, range(1, 3), window_width=2)
    data = json.loads(json.dumps(v.to_json()))
    assert data["verdict"] == "Refuted" and data["condition"] == "zp_escape"
    assert data["witness"][0][1]["element"] == {"prufer": {"p": 3, "num": 1, "exp": 1}}


# --- properties -----------------------------------------------------------


@st.composite
def small_sequences(draw):
    if draw(st.booleans()):
        p = draw(st.sampled_from([2, 3, 5]))
        elems = [P(draw(st.integers(0, p**4)), draw(st.integers(0, 4)), p) for _ in range(6)]
        return SequenceHandle.from_list(PruferGroup(p), elems)
    orders = draw(st.lists(st.sampled_from([2, 3, 4, 6]), min_size=1, max_size=3))
    ctx = DirectSumContext("list:" + ",".join(map(str, orders)))
    elems = [ds_make(ctx, {i + 1: draw(st.integers(0, n - 1)) for i, n in enumerate(orders)}) for _ in range(6)]
    return SequenceHandle.from_list(ctx, elems)


@settings(max_examples=150)
@given(small_sequences(), st.integers(1, 3), st.integers(1, 6), st.integers(0, 3), st.integers(0, 3))
def test_window_monotone_and_witnesses_sound(seq, l, m, width, shift):
    K = min(6, m + width)
    w = Window(m, K)
    big = enum_Alm(seq, l, w)
    inner = enum_Alm(seq, l, Window(min(K, m + shift), K))
    assert set(inner) <= set(big)
    assert set(big) <= set(enum_Alm(seq, l + 1, w))
    for elem, wit in big.items():
        assert wit.element == elem and wit.is_sound(seq, l, w)


@settings(max_examples=80)
@given(small_sequences(), st.integers(1, 3))
def test_ratio_divides_quotient_order(seq, l):
    w = Window(1, 6)
    orders = [seq(k).order() for k in range(1, 7)]
    ratios = dict(cond_ii_tuples(orders, l, w))
    for idx, quots in cond_iii_tuples(seq, l, w):
        for r, q in zip(ratios[idx], quots):
            assert q % r == 0
    assert cond_iii_inf(seq, l, w) >= cond_ii_inf(orders, l, w)


@settings(max_examples=80)
@given(small_sequences(), st.integers(1, 3), st.sampled_from([1, 2, 3, 4, 6, 12]))
def test_torsion_check_is_monotone(seq, l, n):
    w = Window(2, 6)
    if cond_iv_check(seq, l, n, w).holds:
        for l2 in range(1, l + 1):
            for n2 in (d for d in range(1, n + 1) if n % d == 0):
                assert cond_iv_check(seq, l2, n2, w).holds


def test_quotient_bound_over_all_term_counts_forces_trivial_torsion():
    # hypothesis taken over every tuple length h <= l
    import random

    rng = random.Random(3)
    checked = 0
    for _ in range(150):
        orders = [rng.choice((2, 3, 4, 6, 8, 9)) for _ in range(rng.randint(2, 4))]
        ctx = DirectSumContext("list:" + ",".join(map(str, orders)))
        seq = SequenceHandle.from_list(
            ctx, [ds_make(ctx, {i + 1: rng.randrange(n) for i, n in enumerate(orders)}) for _ in range(5)]
        )
        l = rng.randint(1, 3)
        w = Window(rng.randint(1, 5 - l + 1), 5)
        low = min(cond_iii_inf(seq, h, w) for h in range(1, l + 1))
        for n in (1, 2, 3, 4):
            if low > n * l:
                checked += 1
                assert cond_iv_check(seq, l, n, w).holds
    assert checked > 0


def test_single_term_combination_escapes_tuple_only_hypothesis():
    # two-term tuples all have quotient order 6 > 2*2, yet -2*a_3 = 6g_3 has order 2
    ctx = DirectSumContext("list:2,2,12,2")
    elems = [ds_make(ctx, {3: 6}), ds_make(ctx, {2: 1, 3: 8, 4: 1}),
             ds_make(ctx, {1: 1, 2: 1, 3: 9}), ds_make(ctx, {1: 1, 3: 5})]
    seq = SequenceHandle.from_list(ctx, elems)
    w = Window(3, 4)
    assert cond_iii_inf(seq, 2, w) == 6
    v = cond_iv_check(seq, 2, 2, w)
    assert not v.holds and v.element == ds_make(ctx, {3: 6})
    assert cond_iii_inf(seq, 1, w) <= 2 * 2
