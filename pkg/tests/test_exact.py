import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from congruence_lab.exact import ExtMat2, IntMat2, QuadExt, RadicandMismatch, as_rational, mat_det, mat_mul, mat_trace

rationals = st.fractions(max_denominator=50).filter(lambda q: abs(q.numerator) < 10**6)
quad = st.builds(lambda u, v: QuadExt(u, v, 7), rationals, rationals)


def ext(a, b, c, d, r=7):
    return ExtMat2(*(QuadExt(*e, r) for e in (a, b, c, d)))


def test_identity_product():
    m = IntMat2(2, 3, 1, 2)
    assert mat_mul(IntMat2.identity(), m) == m
    assert mat_mul(m, IntMat2.identity()) == m


def test_hand_product():
    m = IntMat2(0, -1, 1, 3)
    assert mat_mul(m, m) == IntMat2(-1, -3, 3, 8)


def test_det_and_trace():
    assert mat_det(IntMat2.identity()) == 1
    assert mat_trace(IntMat2(0, -1, 1, 3)) == 3
    assert mat_det(IntMat2(2, 3, 1, 2)) == 1


def test_det_multiplicative_random():
    rng = random.Random(1)
    for _ in range(100):
        x = IntMat2(*(rng.randint(-10**6, 10**6) for _ in range(4)))
        y = IntMat2(*(rng.randint(-10**6, 10**6) for _ in range(4)))
        assert mat_det(mat_mul(x, y)) == mat_det(x) * mat_det(y)


def test_power_and_inverse():
    m = IntMat2(2, 1, 1, 1)
    assert m**2 == IntMat2(5, 3, 3, 2)
    assert m @ m.inverse() == IntMat2.identity()
    assert m**-2 @ m**2 == IntMat2.identity()
    with pytest.raises(ValueError):
        IntMat2(2, 0, 0, 2).inverse()


def test_rational_parsing():
    assert as_rational("-3/6") == Fraction(-1, 2)
    assert as_rational(4) == 4
    with pytest.raises(ValueError):
        as_rational("3/x")
    with pytest.raises(TypeError):
        as_rational(0.5)


@given(rationals, rationals, rationals)
def test_rational_add_sub_roundtrip(p, r, s):
    assert (p + r) - r == p
    q = p * s
    assert q.denominator > 0 and Fraction(q.numerator, q.denominator) == q


@given(quad, quad, quad)
def test_quadext_ring_laws(x, y, z):
    assert x * y == y * x
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z


@given(quad)
def test_quadext_norm_is_rational(x):
    prod = x * x.conjugate()
    assert prod.v == 0
    assert prod.u == x.u**2 - 7 * x.v**2 == x.norm()


def test_quadext_radicand_mismatch():
    with pytest.raises(RadicandMismatch):
        QuadExt(1, 1, 2) * QuadExt(1, 1, 3)
    with pytest.raises(RadicandMismatch):
        ext((1, 0), (0, 0), (0, 0), (1, 0), 2) @ ext((1, 0), (0, 0), (0, 0), (1, 0), 3)


def test_quadext_mul_formula():
    assert QuadExt(1, 2, 3) * QuadExt(4, 5, 3) == QuadExt(1 * 4 + 3 * 2 * 5, 1 * 5 + 4 * 2, 3)


@given(st.lists(quad, min_size=12, max_size=12))
def test_extmat_associative_and_det_multiplicative(es):
    x, y, z = (ExtMat2(*es[i : i + 4]) for i in (0, 4, 8))
    assert (x @ y) @ z == x @ (y @ z)
    assert (x @ y).det() == x.det() * y.det()
    assert (x @ y).trace() == mat_trace(mat_mul(x, y))


def test_mixed_kinds_rejected():
    with pytest.raises(TypeError):
        mat_mul(IntMat2.identity(), ExtMat2.identity(2))
