from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pigeonroots.errors import IdenticalSelections, InvalidParameter, LengthMismatch
from pigeonroots.polycore import (
    ProblemInstance,
    RationalPolynomial as R,
    SelectionVector,
    SignVector,
    affine_pullback,
    assemble,
    difference,
    evaluate,
    fmt_fraction,
    frame_holds,
    parse_fraction,
    selection_polynomial,
)

from conftest import rand_fraction

fractions = st.fractions(min_value=-10, max_value=10, max_denominator=12)
polys = st.lists(fractions, max_size=10).map(R)
windows = st.sampled_from([F(1, 3), F(1, 4), F(1, 6), F(3, 17)])


def test_assemble_examples():
    inst = ProblemInstance(2, 3, (1, 2, 3), F(1, 3))
    assert assemble(inst, SignVector((1, -1, 1))) == R([1, -2, 3])
    assert assemble(inst, SignVector((1, 0, 0))) == R([1])
    assert assemble(inst, SignVector((0, 0, 0))).is_zero


def test_assemble_length_mismatch():
    inst = ProblemInstance.unit(2, F(1, 3))
    with pytest.raises(LengthMismatch):
        assemble(inst, SignVector((1, 0)))


def test_pullback_examples():
    assert affine_pullback(R([0, 1]), F(1, 3)) == R([F(2, 3), F(-1, 3)])
    assert affine_pullback(R([1]), F(1, 5)) == R([1])
    assert affine_pullback(R([0, 0, 1]), F(1, 4)) == R([F(9, 16), F(-3, 8), F(1, 16)])


def test_evaluate_examples():
    assert evaluate(R([-1, 0, 1]), 2) == 3
    assert evaluate(R(), F(7, 3)) == 0
    a = F(1, 3)
    assert evaluate(R([F(2, 3), F(-1, 3)]), 1) == F(1, 3) == evaluate(R([0, 1]), 1 - 2 * a)


def test_difference_examples():
    inst2 = ProblemInstance.unit(1, F(1, 3))
    b, P = difference(SelectionVector((1, 1)), SelectionVector((0, 1)), inst2)
    assert b.b == (1, 0) and b.k == 0 and P == R([1])
    inst3 = ProblemInstance.unit(2, F(1, 3))
    b, P = difference(SelectionVector((0, 1, 0)), SelectionVector((0, 0, 0)), inst3)
    assert b.k == 1 and P == R([0, 1])
    with pytest.raises(IdenticalSelections):
        difference(SelectionVector((0, 1, 0)), SelectionVector((0, 1, 0)), inst3)


def test_instance_validation():
    with pytest.raises(InvalidParameter):
        ProblemInstance(2, 2, (1, 3, 1), F(1, 3))
    with pytest.raises(InvalidParameter):
        ProblemInstance.unit(2, F(1, 2))
    with pytest.raises(InvalidParameter):
        ProblemInstance.unit(2, 0)
    with pytest.raises(LengthMismatch):
        ProblemInstance(2, 1, (1, 1), F(1, 3))


def test_frame():
    assert not frame_holds(9, 1)
    assert not frame_holds(12, 1)
    assert frame_holds(13, 1)
    assert not ProblemInstance.unit(12, F(1, 3)).in_frame


def test_selection_vector_int_roundtrip():
    d = SelectionVector.from_int(0b1011, 5)
    assert d.d == (1, 1, 0, 1, 0)
    assert d.to_int() == 0b1011
    with pytest.raises(InvalidParameter):
        SelectionVector((0, 2))


def test_fraction_format_roundtrip():
    for x in (F(0), F(-7, 3), F(5)):
        assert parse_fraction(fmt_fraction(x)) == x


@given(polys, windows, st.lists(st.fractions(min_value=0, max_value=1, max_denominator=50), min_size=1, max_size=5))
def test_pullback_consistency(P, a, xs):
    Pt = affine_pullback(P, a)
    for x in xs:
        assert evaluate(Pt, x) == evaluate(P, 1 - a - a * x)


@given(polys, windows)
def test_boundary_transport(P, a):
    Pt = affine_pullback(P, a)
    assert Pt(0) == P(1 - a)
    assert Pt(1) == P(1 - 2 * a)


def test_pullback_consistency_degree_20(rng):
    for _ in range(100):
        P = R([rand_fraction(rng) for _ in range(rng.randint(1, 21))])
        a = F(rng.randint(1, 30), 90)
        x = F(rng.randint(0, 997), 997)
        assert evaluate(affine_pullback(P, a), x) == evaluate(P, 1 - a - a * x)


def test_range_bound_on_grid(rng):
    grid = [F(i, 999) for i in range(1000)]
    for _ in range(5):
        n = rng.randint(1, 12)
        M = F(rng.choice([1, 2, 4]))
        w = tuple(1 + (M - 1) * F(rng.randint(0, 8), 8) for _ in range(n + 1))
        inst = ProblemInstance(n, M, w, F(1, rng.choice([3, 4, 6])))
        d = SelectionVector(tuple(rng.randint(0, 1) for _ in range(n + 1)))
        Pt = affine_pullback(selection_polynomial(inst, d), inst.a)
        for x in grid[::7]:
            assert 0 <= Pt(x) <= (n + 1) * M


@given(polys, polys)
def test_ring_laws(P, Q):
    assert P * Q == Q * P
    assert (P + Q) - Q == P
    assert (P * Q).degree == (-1 if P.is_zero or Q.is_zero else P.degree + Q.degree)


@given(polys)
def test_antiderivative_inverts_derivative(P):
    assert P.antiderivative().derivative() == P


def test_from_roots():
    Q = R.from_roots([F(1, 2), F(1, 3)])
    assert Q == R([F(1, 6), F(-5, 6), 1])
    assert R.from_roots([]) == R([1])
