import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from congruence_lab.exact import ExtMat2, QuadExt
from congruence_lab.quaternion import (
    INFINITY,
    AlgebraMismatch,
    QuaternionAlgebra,
    SearchExhausted,
    embed,
    hilbert_symbol,
    is_division,
    quat_mul,
    ramified_places,
    reduced_norm,
    reduced_trace,
    relevant_places,
    squarefree_decomposition,
)
from oracles import local_solvable

def fractions(lo, hi, den):
    return st.builds(Fraction, st.integers(lo, hi), st.integers(1, den))


small_q = fractions(-50, 50, 9).filter(lambda q: q != 0)
coords = st.tuples(*[fractions(-20, 20, 6)] * 4)


def random_pair(rng, alg, bound=20):
    def one():
        return alg.element(*(Fraction(rng.randint(-bound, bound), rng.randint(1, 5)) for _ in range(4)))

    return one(), one()


def test_basis_relations():
    alg = QuaternionAlgebra(5, -2)
    one, i, j, k = alg.basis()
    assert quat_mul(i, j) == k
    assert quat_mul(j, i) == -k
    assert quat_mul(i, i) == one * 5
    assert quat_mul(j, j) == one * -2
    assert quat_mul(k, k) == one * 10  # -ab


def test_one_plus_i_times_one_minus_i():
    alg = QuaternionAlgebra(3, -1)
    one, i, _, _ = alg.basis()
    assert (one + i) * (one - i) == one * (1 - 3)


def test_norm_and_trace_examples():
    alg = QuaternionAlgebra(3, -1)
    assert reduced_norm(alg.one()) == 1 and reduced_trace(alg.one()) == 2
    assert reduced_norm(alg.element(2, 0, 0, 1)) == 1


def test_norm_multiplicative_and_embedding_homomorphism_random():
    rng = random.Random(7)
    for a, b in [(3, -1), (7, -1), (2, 5), (Fraction(3, 2), Fraction(-5, 7))]:
        alg = QuaternionAlgebra(a, b)
        for _ in range(25):
            x, y = random_pair(rng, alg)
            assert reduced_norm(x * y) == reduced_norm(x) * reduced_norm(y)
            assert embed(x * y) == embed(x) @ embed(y)
            assert embed(x + y) == embed(x) + embed(y)


@given(small_q.filter(lambda q: q > 0), small_q, coords)
def test_embedding_det_trace_discriminant(a, b, c):
    alg = QuaternionAlgebra(a, b)
    x = alg.element(*c)
    m = embed(x)
    assert m.det() == reduced_norm(x)
    assert m.trace() == reduced_trace(x)
    disc = m.trace() * m.trace() - 4 * m.det()
    assert disc == reduced_trace(x) ** 2 - 4 * reduced_norm(x)


def test_embed_identity_and_matrix_algebra_basis():
    alg = QuaternionAlgebra(1, 1)
    assert embed(alg.one()) == ExtMat2.identity(1)
    m = embed(alg.element(0, 0, 1, 0))
    assert m == ExtMat2(*(QuadExt(e, 0, 1) for e in (0, 1, 1, 0)))


def test_embed_requires_positive_a():
    with pytest.raises(ValueError):
        embed(QuaternionAlgebra(-3, 2).one())


def test_algebra_mismatch():
    with pytest.raises(AlgebraMismatch):
        QuaternionAlgebra(3, -1).one() * QuaternionAlgebra(7, -1).one()
    with pytest.raises(ValueError):
        QuaternionAlgebra(0, 1)


def test_hilbert_trivial_cases():
    for v in [2, 3, 5, 7, INFINITY]:
        assert hilbert_symbol(1, -7, v) == 1
        assert hilbert_symbol(Fraction(4, 9), 13, v) == 1


def test_hilbert_3_minus1_at_3_matches_oracle():
    assert hilbert_symbol(3, -1, 3) == -1
    assert local_solvable(3, -1, 3) is False


@pytest.mark.parametrize(
    "a,b",
    [(3, -1), (-1, -1), (2, 3), (-2, 5), (6, -3), (7, -1), (5, 10), (-3, -6), (2, -1), (-5, 3)],
)
@pytest.mark.parametrize("p", [2, 3])
def test_hilbert_matches_local_solvability(a, b, p):
    assert (hilbert_symbol(a, b, p) == 1) == local_solvable(a, b, p)


def test_hilbert_infinity():
    assert hilbert_symbol(-1, -1, INFINITY) == -1
    assert hilbert_symbol(-1, 1, INFINITY) == 1


def test_hilbert_reciprocity_random():
    rng = random.Random(2024)
    for _ in range(50):
        a = Fraction(rng.choice([-1, 1]) * rng.randint(1, 500), rng.randint(1, 60))
        b = Fraction(rng.choice([-1, 1]) * rng.randint(1, 500), rng.randint(1, 60))
        prod = 1
        for v in relevant_places(a, b):
            prod *= hilbert_symbol(a, b, v)
        assert prod == 1
        assert len(ramified_places(a, b)) % 2 == 0


def test_symbol_is_trivial_off_relevant_places():
    for p in [11, 13, 17, 19]:
        assert hilbert_symbol(6, -35, p) == 1


def test_squarefree_decomposition():
    s, r = squarefree_decomposition(Fraction(-12, 25))
    assert s == -3 and s * r * r == Fraction(-12, 25)
    s, r = squarefree_decomposition(Fraction(3, 2))
    assert s == 6 and s * r * r == Fraction(3, 2)


def test_split_witness_for_matrix_algebra():
    cert = is_division(QuaternionAlgebra(1, 1))
    assert cert.verdict == "split"
    assert cert.witness == (1, 1, 0, 0)
    assert cert.check()


@pytest.mark.parametrize("a,b", [(2, -1), (5, 4), (Fraction(2, 3), Fraction(1, 3)), (-1, 2), (13, 3), (Fraction(-7, 4), 2)])
def test_split_algebras_carry_isotropic_vectors(a, b):
    alg = QuaternionAlgebra(a, b)
    cert = is_division(alg)
    assert cert.verdict == "split"
    assert any(x != 0 for x in cert.witness)
    assert alg.norm_form(cert.witness) == 0


def test_example_division_algebras():
    assert is_division(QuaternionAlgebra(3, -1)).verdict == "division"
    cert = is_division(QuaternionAlgebra(7, -1))
    assert cert.verdict == "division"
    assert 7 in cert.ramified
    assert cert.check()


def test_7_minus1_has_no_small_rational_zero():
    # z^2 = 7 x^2 - y^2 with (x, y) != 0: a norm-form zero gives one and conversely
    found = []
    for x in range(0, 301):
        for y in range(0, 301):
            if x == y == 0:
                continue
            q = 7 * x * x - y * y
            if q >= 0 and int(q**0.5 + 0.5) ** 2 == q:
                found.append((x, y))
    assert found == []


def test_p_3_mod_4_family_is_division():
    from sympy import primerange

    for p in primerange(3, 101):
        if p % 4 == 3:
            assert is_division(QuaternionAlgebra(p, -1)).verdict == "division", p


def test_search_exhaustion_reports_height():
    # (2, 31) splits, but its smallest conic point lies above height 2
    alg = QuaternionAlgebra(2, 31)
    assert ramified_places(2, 31) == []
    with pytest.raises(SearchExhausted) as exc:
        is_division(alg, height=2)
    assert exc.value.height == 2
    assert is_division(alg).check()
