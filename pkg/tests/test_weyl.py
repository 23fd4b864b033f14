import json

import pytest
from hypothesis import given, strategies as st

from qairy.scalar import rational
from qairy.weyl import (
    GradedOperator,
    Mode,
    Ring,
    Window,
    WindowOverflow,
    apply,
    commutator_basic,
    grading_degree,
    normal_order_product,
    operator_commutator,
)

R = Ring(1, 2)


def K(j, m, c=1):
    return GradedOperator.mode(j, m, R, coeff=c)


def one(x=1):
    return rational(x, 1, 2)


def test_mode_kind():
    assert Mode(1, 3).kind == "annihilator"
    assert Mode(1, -3).kind == "creator"
    assert Mode(2, 0).kind == "zero"


def test_grading_degree_examples():
    assert grading_degree((0, ((1, -3),), ())) == 1
    assert grading_degree((2, (), ())) == 2
    assert grading_degree((2, ((1, -1), (1, -1)), ((1, 2),))) == 3
    assert GradedOperator.mode(1, 0, R).max_degree() == 1


def test_commutator_basic_examples():
    assert commutator_basic((1, 2), (1, -2), R) == GradedOperator.constant(2, R, hbar_half=2)
    assert commutator_basic((1, 2), (2, -2), R).is_zero()
    assert commutator_basic((1, 0), (1, 5), R).is_zero()


def test_product_examples():
    hbar = GradedOperator.hbar(R)
    assert K(1, 1) * K(1, -1) == GradedOperator.word([(1, -1), (1, 1)], ring=R) + hbar
    assert K(1, 1) * K(1, 1) == GradedOperator.word([(1, 1), (1, 1)], ring=R)
    lhs = (K(1, 1) + K(1, -1)) * K(1, -1)
    rhs = GradedOperator.word([(1, -1), (1, 1)], ring=R) + hbar + GradedOperator.word([(1, -1), (1, -1)], ring=R)
    assert lhs == rhs


def test_commutator_examples():
    assert operator_commutator(K(1, 1), K(1, -1)) == GradedOperator.hbar(R)
    A = K(1, 2) + K(2, -1, 3)
    assert operator_commutator(A, A).is_zero()
    assert operator_commutator(K(1, 1) * K(1, 1), K(1, -1)) == (GradedOperator.hbar(R) * K(1, 1)).scale(one(2))


def test_apply_examples():
    x12 = {(0, ((1, 2),)): one()}
    assert apply(K(1, 2), x12) == {(2, ()): one()}
    assert apply(K(1, -2), {(0, ()): one()}) == {(0, ((1, 2),)): one(2)}
    f = {(0, ((1, 1), (1, 2))): one()}
    assert apply(GradedOperator.word([(1, -1), (1, 1)], ring=R), f) == {(2, ((1, 1), (1, 2))): one()}
    # zero mode multiplies by hbar^(1/2) C_j
    assert apply(K(1, 0), {(0, ()): one()}) == {(1, ()): R.symbol(1)}


def test_window_overflow():
    small = Window(W=3, D=2)
    a = GradedOperator.word([(1, -1), (1, -1)], ring=R, window=small)
    with pytest.raises(WindowOverflow):
        normal_order_product(a, a)
    assert normal_order_product(a, a, truncate=True).is_zero()


def test_json_roundtrip():
    A = K(1, 2) * K(2, -3) + K(1, 0, 5) + GradedOperator.hbar(R)
    data = json.loads(json.dumps(A.to_json()))
    assert GradedOperator.from_json(data) == A
    keys = [(t["hbar_half"], t["creators"], t["annihilators"]) for t in data["terms"]]
    assert keys == sorted(keys)


# -- properties ------------------------------------------------------------

modes = st.tuples(st.integers(1, 2), st.integers(-3, 3))


@st.composite
def operators(draw, max_terms=3, max_len=2):
    out = GradedOperator.zero(R)
    for _ in range(draw(st.integers(1, max_terms))):
        word = draw(st.lists(modes, min_size=0, max_size=max_len))
        c = draw(st.integers(-3, 3))
        out = out + GradedOperator.word(word, c, draw(st.sampled_from([0, 2])), ring=R)
    return out


@given(operators(), operators(), operators())
def test_jacobi(a, b, c):
    def br(x, y):
        return operator_commutator(x, y)

    total = br(a, br(b, c)) + br(b, br(c, a)) + br(c, br(a, b))
    assert total.is_zero()


@given(operators(), operators(), st.lists(st.tuples(st.integers(1, 2), st.integers(1, 3)), max_size=3))
def test_apply_is_an_action(a, b, vs):
    f = {(0, tuple(sorted(vs))): one()}
    assert apply(a, apply(b, f)) == apply(normal_order_product(a, b), f)


@given(operators(), operators())
def test_degree_additive(a, b):
    prod = normal_order_product(a, b)
    if a and b and prod:
        assert prod.max_degree() <= a.max_degree() + b.max_degree()
        # contractions trade two modes for one hbar, so degrees are preserved termwise
        degs = {x + y for x in {grading_degree(k) for k in a.terms} for y in {grading_degree(k) for k in b.terms}}
        assert {grading_degree(k) for k in prod.terms} <= degs


@given(operators(max_terms=5), st.randoms())
def test_canonical_serialization(a, rnd):
    items = list(a.terms.items())
    rnd.shuffle(items)
    b = GradedOperator.zero(R)
    for k, v in items:
        b = b + GradedOperator({k: v}, ring=R)
    assert json.dumps(b.to_json()) == json.dumps(a.to_json())
