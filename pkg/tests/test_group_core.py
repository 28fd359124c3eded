import json
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tseq.errors import CapExceeded, ContextMismatch, NotPrime
from tseq.group_core import (
    CircleRational,
    DirectSumContext,
    DirectSumElement,
    Factored,
    Prime,
    PruferElement,
    PruferGroup,
    add,
    circle,
    ds_make,
    ds_support,
    generated_subgroup,
    neg,
    order,
    order_mod_subgroup,
    p_valuation,
    prufer_make,
    scalar_mul,
    torsion_elements,
)

G3 = PruferGroup(3)


def P(num, exp, p=3):
    return prufer_make(p, num, exp)


def brute_order(a):
    t, x = 1, a
    while not x.is_zero:
        x = x + a
        t += 1
    return t


# --- construction and normalization ---------------------------------------


@pytest.mark.parametrize(
    "p,num,exp,want",
    [(3, 8, 2, (8, 2)), (3, 9, 2, (0, 0)), (5, 7, 1, (2, 1)), (3, 3, 2, (1, 1)), (3, -1, 1, (2, 1))],
)
def test_prufer_make_normalizes(p, num, exp, want):
    y = prufer_make(p, num, exp)
    assert (y.num, y.exp) == want


def test_prufer_element_rejects_unnormalized():
    with pytest.raises(ValueError):
        PruferElement(3, 3, 2)
    with pytest.raises(ValueError):
        PruferElement(3, 0, 1)


def test_prime_is_checked():
    assert Prime(7) == 7
    with pytest.raises(NotPrime):
        Prime(9)
    with pytest.raises(NotPrime):
        prufer_make(4, 1, 1)


# --- arithmetic -----------------------------------------------------------


def test_add_examples():
    assert add(P(1, 1), P(2, 1)).is_zero
    assert add(P(1, 1), P(1, 2)) == P(4, 2)
    assert str(add(P(1, 1), P(1, 2))) == "4/9"


def test_shifted_identity_on_example_sequence():
    a = lambda n: -G3.e(1) + G3.e(n)
    assert scalar_mul(3, a(4)) - a(3) == G3.e(1)


def test_scalar_mul_examples():
    assert scalar_mul(3, P(1, 2)) == P(1, 1)
    assert scalar_mul(-1, P(1, 1)) == P(2, 1)
    assert scalar_mul(-2, P(1, 1)) == P(1, 1)
    assert scalar_mul(0, P(5, 3)).is_zero
    assert neg(P(1, 1)) == P(2, 1)


def test_context_mismatch():
    with pytest.raises(ContextMismatch):
        P(1, 1, 3) + P(1, 1, 5)
    c3, c2 = DirectSumContext("const:3"), DirectSumContext("const:2")
    with pytest.raises(ContextMismatch):
        c3.g(1) + c2.g(1)
    with pytest.raises(ContextMismatch):
        add(P(1, 1), c3.g(1))


def test_order_examples():
    assert order(P(8, 2)) == 9
    assert order(G3.zero()) == 1
    x = P(1, 1)
    assert order(-x + G3.e(4)) == 81


def test_direct_sum_arithmetic():
    ctx = DirectSumContext("list:2,3")
    a = ds_make(ctx, {1: 1, 2: 1})
    assert a.order() == 6
    assert (a * 2).as_dict() == {2: 2}
    assert (a * 6).is_zero
    assert (a - a).is_zero
    assert str(ds_make(ctx, {2: 2})) == "2g_2"


def test_direct_sum_rejects_bad_coords():
    ctx = DirectSumContext("const:3")
    with pytest.raises(ValueError):
        DirectSumElement(ctx, ((1, 3),))
    with pytest.raises(ValueError):
        DirectSumElement(ctx, ((1, 0),))
    with pytest.raises(ValueError):
        DirectSumContext("const:1")


def test_direct_sum_cases():
    assert DirectSumContext("const:3").case == "a"
    assert DirectSumContext("pow:3").case == "b"
    assert DirectSumContext("list:2,3,5").case == "b"
    assert DirectSumContext("list:3,2").case is None


# --- subgroups ------------------------------------------------------------


def test_torsion_elements_prufer():
    A9 = torsion_elements(G3, 9)
    assert A9 == {P(k, 2) for k in range(9)}
    assert len(A9) == 9
    assert torsion_elements(G3, 2) == {G3.zero()}


def test_torsion_elements_direct_sum():
    ctx = DirectSumContext("list:2,3")
    assert torsion_elements(ctx, 2, depth=2) == {ctx.zero(), ctx.g(1)}
    with pytest.raises(ValueError):
        torsion_elements(DirectSumContext("const:3"), 3)


def test_generated_subgroup_examples():
    assert len(generated_subgroup([P(1, 2)])) == 9
    assert len(generated_subgroup([P(1, 1), P(1, 2)])) == 9
    ctx = DirectSumContext("list:2,3")
    H = generated_subgroup([ds_make(ctx, {1: 1, 2: 1})])
    assert len(H) == 6
    assert H.is_subgroup()


def test_generated_subgroup_cap():
    with pytest.raises(CapExceeded):
        generated_subgroup([P(1, 10)], cap=1000)
    ctx = DirectSumContext("const:7")
    with pytest.raises(CapExceeded):
        generated_subgroup([ctx.g(i) for i in range(1, 5)], cap=100)


def test_order_mod_subgroup_examples():
    H = generated_subgroup([P(1, 2)])
    assert order_mod_subgroup(P(1, 3), H) == 3
    assert order_mod_subgroup(P(1, 2), H) == 1
    ctx = DirectSumContext("list:4,2")
    assert order_mod_subgroup(ctx.g(1), generated_subgroup([ctx.g(2)])) == 4


def test_ds_support_examples():
    ctx = DirectSumContext("const:3")
    assert ds_support(ctx.g(1)) == (frozenset({1}), 1)
    assert ds_support(ctx.zero()) == (frozenset(), 0)
    assert ds_support(ds_make(ctx, {2: 1, 5: 2})) == (frozenset({2, 5}), 2)


# --- factored integers and the circle -----------------------------------


def test_factored_arithmetic():
    a, b = Factored.of(12), Factored.of(18)
    assert a.gcd(b) == 6
    assert a.lcm(b) == 36
    assert (b / Factored.of(6)) == 3
    assert Factored.of(3).divides(Factored.of(9))
    assert Factored.of(4).coprime(Factored.of(9))
    big = Factored({3: 1728})
    assert (big / Factored({3: 1000})).exps == {3: 728}


def test_circle_rational():
    q = circle(Fraction(5, 4))
    assert q.value == Fraction(1, 4)
    assert circle(Fraction(2, 3)).norm() == Fraction(1, 3)
    assert (circle(Fraction(2, 3)) * 3).is_zero
    assert str(circle(Fraction(-1, 9))) == "8/9"
    with pytest.raises(ValueError):
        CircleRational(Fraction(1))


# --- serialization --------------------------------------------------------


def test_json_round_trip():
    from tseq.constructions import parse_ds_element, parse_prufer

    y = P(8, 2)
    data = json.loads(json.dumps(y.to_json()))
    assert data == {"prufer": {"p": 3, "num": 8, "exp": 2}}
    assert parse_prufer(data, 3) == y
    ctx = DirectSumContext("const:3")
    x = ds_make(ctx, {2: 1})
    data = json.loads(json.dumps(x.to_json()))
    assert data == {"dsum": {"orders": "const:3", "coords": {"2": 1}}}
    assert parse_ds_element(data, ctx) == x


# --- properties -----------------------------------------------------------

primes = st.sampled_from([2, 3, 5, 7])


@st.composite
def prufer_triples(draw):
    p = draw(primes)
    mk = lambda: prufer_make(p, draw(st.integers(0, p**6)), draw(st.integers(0, 6)))
    return mk(), mk(), mk()


@st.composite
def ds_triples(draw):
    orders = draw(st.lists(st.integers(2, 9), min_size=1, max_size=4))
    ctx = DirectSumContext("list:" + ",".join(map(str, orders)))
    mk = lambda: ds_make(ctx, {i + 1: draw(st.integers(0, n - 1)) for i, n in enumerate(orders)})
    return mk(), mk(), mk()


@settings(max_examples=200)
@given(st.one_of(prufer_triples(), ds_triples()))
def test_group_axioms(triple):
    a, b, c = triple
    zero = a * 0
    assert (a + b) + c == a + (b + c)
    assert a + b == b + a
    assert a + zero == a
    assert (a + neg(a)).is_zero


@settings(max_examples=200)
@given(prufer_triples())
def test_normalization_is_canonical(triple):
    a, b, _ = triple
    assert (a == b) == ((a.num, a.exp) == (b.num, b.exp))
    assert (a == b) == (a.value == b.value)


@settings(max_examples=300)
@given(prufer_triples())
def test_order_of_sum_is_max_when_orders_differ(triple):
    a, b, _ = triple
    if a.order() != b.order():
        assert (a + b).order() == max(a.order(), b.order())


@settings(max_examples=200)
@given(st.one_of(prufer_triples(), ds_triples()), st.integers(-50, 50))
def test_order_of_multiple(triple, m):
    a = triple[0]
    assert order(scalar_mul(m, a)) == order(a) // math.gcd(m, order(a))
    if order(a) <= 5000:
        assert order(a) == brute_order(a)


@settings(max_examples=100)
@given(primes, st.integers(1, 500))
def test_torsion_size(p, n):
    assert len(torsion_elements(PruferGroup(p), n)) == p ** p_valuation(n, p)


@settings(max_examples=100)
@given(ds_triples())
def test_order_mod_subgroup_divides_order(triple):
    a, b, c = triple
    H = generated_subgroup([b, c])
    t = order_mod_subgroup(a, H)
    assert order(a) % t == 0
    assert a * t in H
