import random
from itertools import product

import pytest

from congruence_lab.exact import IntMat2
from congruence_lab.modular import (
    BinaryQuadraticForm,
    ElementKind,
    classify,
    find_root,
    form_cycles,
    form_to_matrix,
    forms_equivalent,
    hyperbolic_classes,
    is_primitive,
    is_reduced,
    matrix_to_form,
    mu0,
    mu0_count,
    reduce_cycle,
    reduced_forms,
    rho,
)
from oracles import brute_mu0, imprimitive_powers

S = IntMat2(0, -1, 1, 0)
T = IntMat2(1, 1, 0, 1)


def random_sl2(rng, length=8):
    g = IntMat2.identity()
    for _ in range(length):
        g = g @ rng.choice([S, T, T.inverse()])
    return g


def random_hyperbolic(rng):
    while True:
        m = random_sl2(rng, rng.randint(2, 10))
        if abs(m.trace()) > 2:
            return m


def test_classify_examples():
    assert classify(IntMat2(1, 1, 0, 1)) is ElementKind.PARABOLIC
    assert classify(IntMat2(0, -1, 1, 0)) is ElementKind.ELLIPTIC
    assert classify(IntMat2(0, -1, 1, 3)) is ElementKind.HYPERBOLIC
    with pytest.raises(ValueError):
        classify(IntMat2(2, 0, 0, 1))


def test_classify_conjugation_and_sign_invariant():
    rng = random.Random(3)
    for _ in range(200):
        m, g = random_sl2(rng), random_sl2(rng)
        k = classify(m)
        assert classify(g @ m @ g.inverse()) is k
        assert classify(-m) is k


def test_matrix_to_form_examples():
    f = matrix_to_form(IntMat2(0, -1, 1, 3))
    assert f == BinaryQuadraticForm(1, 3, 1) and f.discriminant == 5
    f = matrix_to_form(IntMat2(2, 1, 1, 1))
    assert f == BinaryQuadraticForm(1, -1, -1) and f.discriminant == 5
    with pytest.raises(ValueError):
        matrix_to_form(IntMat2(1, 1, 0, 1))


def test_form_matrix_roundtrip():
    rng = random.Random(5)
    for _ in range(100):
        m = random_hyperbolic(rng)
        assert form_to_matrix(matrix_to_form(m), m.trace()) == m


def test_conjugate_matrices_give_equal_cycles():
    rng = random.Random(11)
    for _ in range(100):
        m, g = random_hyperbolic(rng), random_sl2(rng, 12)
        assert reduce_cycle(matrix_to_form(m)) == reduce_cycle(matrix_to_form(g @ m @ g.inverse()))


def test_cycle_of_1_3_1():
    cyc = reduce_cycle(BinaryQuadraticForm(1, 3, 1))
    assert cyc and all(f.discriminant == 5 and is_reduced(f) for f in cyc)


def test_reduced_input_lies_in_its_cycle():
    for D in [5, 12, 21, 45, 60, 96, 221]:
        for f in reduced_forms(D):
            assert f in reduce_cycle(f)


def test_rho_is_proper_equivalence_step():
    # rho(A,B,C) = f o [[0,-1],[1,s]] for the s with B' = -B + 2Cs
    f = BinaryQuadraticForm(7, 13, -5)
    g = rho(f)
    s = (g.B + f.B) // (2 * f.C)
    assert f.act(IntMat2(0, -1, 1, s)) == g


def _equivalent_by_search(f, g, bound=6):
    """Oracle: look for an explicit unimodular substitution with small entries."""
    for a, b, c in product(range(-bound, bound + 1), repeat=3):
        if a == 0:
            continue
        # d from ad - bc = 1
        if (1 + b * c) % a:
            continue
        m = IntMat2(a, b, c, (1 + b * c) // a)
        if f.act(m) == g:
            return True
    return False


def test_equivalence_agrees_with_substitution_search():
    D = 60
    forms = reduced_forms(D)
    rng = random.Random(9)
    for _ in range(50):
        f, g, h = (rng.choice(forms) for _ in range(3))
        fg, gh, fh = forms_equivalent(f, g), forms_equivalent(g, h), forms_equivalent(f, h)
        assert fg == forms_equivalent(g, f)
        if fg and gh:
            assert fh
        if fg:
            assert _equivalent_by_search(f, g, 8)


def test_inequivalent_cycles_have_no_small_substitution():
    for D in [12, 21, 60]:
        cycles = form_cycles(D)
        for i, c1 in enumerate(cycles):
            for c2 in cycles[i + 1 :]:
                assert not _equivalent_by_search(c1[0], c2[0], 5)


def test_discriminant_constant_along_cycles():
    for t in range(3, 40):
        D = t * t - 4
        for cyc in form_cycles(D):
            assert {f.discriminant for f in cyc} == {D}


def test_bad_discriminants_rejected():
    with pytest.raises(ValueError):
        reduce_cycle(BinaryQuadraticForm(1, 0, -4))  # D = 16
    with pytest.raises(ValueError):
        reduce_cycle(BinaryQuadraticForm(1, 1, 1))


def test_primitivity_examples():
    assert is_primitive(IntMat2(0, -1, 1, 3))
    assert not is_primitive(IntMat2(5, 3, 3, 2))
    beta, k = find_root(IntMat2(5, 3, 3, 2))
    assert k == 2 and beta**2 in (IntMat2(5, 3, 3, 2), -IntMat2(5, 3, 3, 2))
    assert not is_primitive(-IntMat2(5, 3, 3, 2))


def test_powers_are_imprimitive():
    rng = random.Random(17)
    for _ in range(60):
        m = random_hyperbolic(rng)
        for k in (2, 3):
            assert not is_primitive(m**k)
            assert not is_primitive(-(m**k))


def test_primitivity_matches_brute_power_table():
    imp = imprimitive_powers(60, 40)
    for t in range(3, 61):
        for cls in hyperbolic_classes(t):
            m = cls.representative
            if m.height() <= 40:
                assert (m.entries() in imp) == (not cls.primitive), m


def test_mu0_small_values():
    assert mu0(3) == 1
    c = mu0_count(7)
    assert c.mu0 == 2 and c.n_cycles == 3 and c.mu0_sl2 == 4
    with pytest.raises(ValueError):
        mu0(2)


def test_mu0_positive_up_to_50():
    for t in range(3, 51):
        assert mu0(t) >= 1


def test_classes_have_right_trace_and_are_distinct():
    for t in range(3, 60):
        classes = hyperbolic_classes(t)
        for c in classes:
            assert c.representative.det() == 1 and c.representative.trace() == t
            assert reduce_cycle(matrix_to_form(c.representative)) == c.canonical_cycle
        assert len(set(c.canonical_cycle for c in classes)) == len(classes)


def test_mu0_matches_bruteforce_small():
    imp = imprimitive_powers(12, 50)
    for t in range(3, 13):
        assert (mu0(t), mu0_count(t).n_cycles) == brute_mu0(t, 50, imp)
