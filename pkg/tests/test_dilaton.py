from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from qairy.classify import structure_bounds
from qairy.dilaton import (
    NonCoprime,
    NotAiryForm,
    ShiftedModes,
    Singular,
    ZeroShift,
    determinant,
    invert_matrix,
    normalize_to_airy_form,
    root_of_unity_shifts,
    shift_matrix,
    shift_operator,
    shifted_composite_leading,
    shifted_cycle_leading,
    vieta_subset_identity,
)
from qairy.scalar import make_root_power, rational
from qairy.weyl import GradedOperator, Ring, Window
from qairy.wmodes import TwistSpec, composite_mode, reindex

R = Ring(1, 1)
I4 = make_root_power(4, 1)


def test_shift_operator_examples():
    q = rational(3)
    A = GradedOperator.mode(1, -2, R)
    assert shift_operator(A, 2, [q]) == A - GradedOperator.constant(3, R)
    B = GradedOperator.word([(1, -2), (1, -2)], ring=R)
    assert shift_operator(B, 2, [q]) == B - A.scale(6) + GradedOperator.constant(9, R)
    C = GradedOperator.mode(1, 2, R)
    assert shift_operator(C, 2, [q]) == C
    # other creators are untouched
    assert shift_operator(GradedOperator.mode(1, -1, R), 2, [q]) == GradedOperator.mode(1, -1, R)


def test_shift_operator_per_cycle():
    ring = Ring(1, 2)
    A = GradedOperator.word([(1, -1), (2, -2)], ring=ring)
    got = shift_operator(A, {1: 1, 2: 2}, {1: 2, 2: 5})
    expected = (GradedOperator.mode(1, -1, ring) - GradedOperator.constant(2, ring)) * (
        GradedOperator.mode(2, -2, ring) - GradedOperator.constant(5, ring))
    assert got == expected


@given(st.integers(-4, 4), st.integers(-4, 4), st.integers(1, 3))
def test_shift_is_conjugation(q1, q2, s):
    # shifting commutes with products (it is an algebra automorphism)
    ring = Ring(1, 1)
    a = GradedOperator.mode(1, -s, ring) + GradedOperator.mode(1, s, ring, coeff=q2)
    b = GradedOperator.word([(1, -s), (1, 1)], ring=ring) + GradedOperator.mode(1, 2 * s, ring)
    lhs = shift_operator(a * b, s, [q1])
    rhs = shift_operator(a, s, [q1]) * shift_operator(b, s, [q1])
    assert lhs == rhs


def test_cycle_leading_examples():
    lp = shifted_cycle_leading(2, 1, I4, 1, 3)
    assert lp.linear == {(1, 6): 1} and not lp.constant
    # -Q^rho/rho at i = rho, m = rho - s - 1
    for j in (1, 2):
        q = I4 ** j
        lp = shifted_cycle_leading(2, 1, q, 2, 0, j)
        assert lp.constant == Fraction(-1, 2) * q ** 2
        assert lp.constant == Fraction((-1) ** (j + 1), 2)
    lp = shifted_cycle_leading(3, 2, rational(5), 2, 1)
    assert lp.linear == {(1, 2): 5}
    with pytest.raises(NonCoprime):
        shifted_cycle_leading(4, 2, rational(1), 1, 0)


def test_composite_leading_examples():
    spec = TwistSpec(2, 2, 1, (I4, -1))
    for m in (-2, 1, 4):
        lp = shifted_composite_leading(spec, 1, 0, m)
        assert lp.linear == {(1, 2 * m): 1, (2, 2 * m): 1}
    lp = shifted_composite_leading(spec, 2, 0, 3)
    assert lp.linear == {(1, 5): I4 / 2, (2, 5): Fraction(-1, 2)}
    lp = shifted_composite_leading(spec, 2, 1, 3)
    assert lp.linear == {(1, 3): -I4 / 8, (2, 3): Fraction(-1, 8)}
    with pytest.raises(ValueError):
        shifted_composite_leading(spec, 3, 0, 0)


def test_shift_matrix_examples():
    assert shift_matrix(2, [I4 * 7]).rows == ((1,),)
    assert shift_matrix(2, [I4, -1]).rows == ((1, -1), (1, 1))
    q = rational(Fraction(2, 3))
    assert shift_matrix(1, [q, q]).rows == ((1, -q), (1, -q))
    assert isinstance(invert_matrix(shift_matrix(1, [q, q])), Singular)


def test_root_of_unity_shifts_examples():
    Q, M = root_of_unity_shifts(2, 2)
    assert Q == (I4, -1)
    assert M.rows == ((1, -1), (1, 1))
    Q, M = root_of_unity_shifts(1, 3)
    th = make_root_power(3, 1)
    assert M.rows == tuple(tuple(th ** (mu * l) for l in range(3)) for mu in (1, 2, 3))


@pytest.mark.parametrize("rho", [1, 2, 3])
@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_root_of_unity_matrix(rho, n):
    Q, M = root_of_unity_shifts(rho, n)
    assert M == shift_matrix(rho, Q)
    assert all(c == 1 for c in M.rows[-1])
    assert all(row[0] == 1 for row in M.rows)
    inv = invert_matrix(M)
    assert not isinstance(inv, Singular)
    for a in range(n):
        for b in range(n):
            dot = sum((M.rows[a][t] * inv[t][b] for t in range(n)), rational(0, rho * n))
            assert dot == (1 if a == b else 0)


def test_vieta_examples():
    lhs, rhs = vieta_subset_identity(rational(-1), 2, 1, 2)
    assert lhs == rhs == -1
    lhs, rhs = vieta_subset_identity(make_root_power(5, 1), 5, 3, 1)
    assert lhs == rhs == 1
    th = make_root_power(3, 1)
    lhs, rhs = vieta_subset_identity(th, 3, 2, 3)
    assert lhs == rhs == th


def test_invert_examples():
    inv = invert_matrix([[rational(1), rational(-1)], [rational(1), rational(1)]])
    assert inv == [[Fraction(1, 2), Fraction(1, 2)], [Fraction(-1, 2), Fraction(1, 2)]]
    assert invert_matrix([[rational(1)]]) == [[1]]
    sing = invert_matrix([[rational(1), rational(2)], [rational(2), rational(4)]])
    assert isinstance(sing, Singular) and not sing and sing.rank == 1


def test_determinant():
    assert determinant([[rational(1), rational(-1)], [rational(1), rational(1)]]) == 2
    assert determinant([[rational(1), rational(2)], [rational(2), rational(4)]]) == 0


# full pipeline versus closed form on a small window; the window keeps every
# degree so shifting loses nothing to truncation
ORACLE_CASES = [(1, 2, 1), (1, 3, 1), (1, 2, 2), (1, 3, 2), (2, 2, 1)]


@pytest.mark.parametrize("rho,n,s", ORACLE_CASES)
def test_shift_of_composite_matches_shifted_cycles(rho, n, s):
    Q, _ = root_of_unity_shifts(rho, n)
    spec = TwistSpec(rho, n, s, Q)
    win = Window(3, spec.r)
    built = ShiftedModes(spec, win)
    for i in range(1, spec.r + 1):
        k, l = reindex(spec, i)
        for m in range(-3, 4):
            direct = shift_operator(composite_mode(spec, i, m, win), s, Q)
            assert direct == composite_mode(spec, i, m, win, cycle=built.cycle)
            lead = shifted_composite_leading(spec, k, l, m).to_operator(spec.ring, win).with_window(win)
            assert direct.truncate(1) == lead


def _assert_airy_shape(ops, spec, W):
    assert sorted(ops) == [(j, q) for j in range(1, spec.n + 1) for q in range(1, W + 1)]
    for (j, q), op in ops.items():
        assert not op.degree_part(0)
        assert op.degree_part(1).terms == {(2, (), ((j, q),)): 1}
        assert op.max_degree() <= spec.r


def test_normalize_gl4():
    Q, M = root_of_unity_shifts(2, 2)
    spec = TwistSpec(2, 2, 1, Q)
    win = Window(6, 4)
    ops = normalize_to_airy_form(spec, structure_bounds(2, 2, 1), win)
    _assert_airy_shape(ops, spec, 6)


@pytest.mark.parametrize("n", [2, 3])
def test_normalize_untwisted(n):
    Q, M = root_of_unity_shifts(1, n)
    spec = TwistSpec(1, n, 1, Q)
    ops = normalize_to_airy_form(spec, structure_bounds(1, n, 1), Window(5, n))
    _assert_airy_shape(ops, spec, 5)


def test_normalize_errors():
    q = rational(1)
    with pytest.raises(NotAiryForm):
        normalize_to_airy_form(TwistSpec(1, 2, 1, (q, q)), structure_bounds(1, 2, 1), Window(4, 2))
    with pytest.raises(ZeroShift):
        normalize_to_airy_form(TwistSpec(2, 2, 1, (q, 0)), structure_bounds(2, 2, 1), Window(4, 4))
    with pytest.raises(NonCoprime):
        normalize_to_airy_form(TwistSpec(2, 2, 2, (q, q)), {1: 1}, Window(4, 4))
