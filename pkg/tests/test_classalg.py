from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import group
from tqftcount.classalg import ClassFunction, algebra, frobenius_axiom_suite
from tqftcount.errors import GroupMismatch

fractions = st.fractions(min_value=-20, max_value=20, max_denominator=6)


def class_functions(G):
    return st.lists(fractions, min_size=G.classes.count, max_size=G.classes.count).map(
        lambda vals: ClassFunction(G, vals))


def brute_convolution(a, b):
    """mu(a (x) b)(g) = sum_h a(h) b(h^-1 g), summed over elements."""
    G = a.group
    t, inv = G.mul_table, G.inverse_table
    out = []
    for rep in G.classes.class_reps:
        out.append(sum((a.at(h) * b.at(int(t[inv[h], rep])) for h in range(G.order)), Fraction(0)))
    return out


def brute_commutator_counts(G):
    t, inv = G.mul_table, G.inverse_table
    counts = np.zeros(G.order, dtype=np.int64)
    for a in range(G.order):
        for b in range(G.order):
            counts[t[t[a, b], t[inv[a], inv[b]]]] += 1
    return counts


Z2 = ("Gm", 3)


def test_z2_values():
    G = group(*Z2)
    A = algebra(G)
    s = ClassFunction.indicator(G, [1])
    assert A.convolve(s, s) == A.unit()
    assert A.pair(s, s) == Fraction(1, 2)
    assert A.counit(A.unit() * 4) == 2
    assert A.gamma(1, 1) == 2
    assert A.genus_operator(A.unit()) == A.unit() * 4
    assert np.array_equal(A.genus_matrix, np.array([[4, 0], [0, 4]], dtype=object))
    # mu(delta(1_1)) = 4 * 1_1
    D = A.comultiply(A.unit())
    total = ClassFunction.zero(G)
    for i in range(2):
        for j in range(2):
            if D[i, j]:
                total = total + A.convolve(ClassFunction.indicator(G, [i]), ClassFunction.indicator(G, [j])) * D[i, j]
    assert total == A.unit() * 4


def test_unit_counit_basics(small_group):
    A = algebra(small_group)
    one = ClassFunction.constant(small_group)
    assert A.unit().values[0] == 1 and not any(A.unit().values[1:])
    assert A.counit(A.unit()) == Fraction(1, small_group.order)
    assert A.counit(one) == Fraction(1, small_group.order)
    assert A.pair(one, one) == 1


def test_gamma_on_agl1():
    G = group("AGL1", 3)
    A = algebra(G)
    big = G.classes.class_sizes.index(3)
    assert A.gamma(big, big) == 2
    assert A.gamma(0, big) == 0


def test_structure_constant_identity(small_group):
    A = algebra(small_group)
    N = A.structure_constants
    sizes = A.class_sizes
    lhs = np.einsum("abc,c->ab", N, sizes)
    assert (lhs == np.outer(sizes, sizes)).all()


def test_commutator_counts_three_ways(small_group):
    A = algebra(small_group)
    brute = brute_commutator_counts(small_group)
    reps = list(small_group.classes.class_reps)
    assert list(A.commutator_counts) == list(brute[reps])
    assert list(A.commutator_counts_by_centralizers()) == list(brute[reps])
    assert list(A.genus_operator(A.unit()).values) == list(brute[reps])


def test_agl1_commutator_counts():
    A = algebra(group("AGL1", 3))
    sizes = list(A.class_sizes)
    f = dict(zip(sizes, A.commutator_counts))
    assert f == {1: 18, 2: 9, 3: 0}


def test_agl1_genus_eigenvalues():
    A = algebra(group("AGL1", 3))
    import sympy
    H = sympy.Matrix(A.genus_matrix.tolist())
    assert set(H.eigenvals()) == {36, 9}


@pytest.mark.parametrize("case", [("AGL1", 3), ("U3", 2), ("GmZ2", 5), ("AGL1", 5)])
def test_convolution_matches_brute_force(case):
    G = group(*case)
    A = algebra(G)
    rng = np.random.default_rng(1)
    for _ in range(4):
        a = ClassFunction(G, [Fraction(int(x), 3) for x in rng.integers(-5, 6, G.classes.count)])
        b = ClassFunction(G, [Fraction(int(x), 2) for x in rng.integers(-5, 6, G.classes.count)])
        assert list(A.convolve(a, b).values) == brute_convolution(a, b)


def test_pair_is_counit_of_product(small_group):
    A = algebra(small_group)
    k = A.k
    for i in range(k):
        for j in range(k):
            a, b = ClassFunction.indicator(small_group, [i]), ClassFunction.indicator(small_group, [j])
            assert A.pair(a, b) == A.counit(A.convolve(a, b))


def test_genus_matrix_routes_agree(small_group):
    A = algebra(small_group)
    assert (A.genus_matrix == A.genus_matrix_via_comultiplication).all()


def test_spectral_property(small_group):
    """The minimal polynomial of h divides prod over d | |G|, d^2 <= |G| of (X - (|G|/d)^2)."""
    import sympy
    n = small_group.order
    H = sympy.Matrix(algebra(small_group).genus_matrix.tolist())
    P = sympy.eye(H.shape[0])
    for d in sympy.divisors(n):
        if d * d <= n:
            P = P * (H - (n // d) ** 2 * sympy.eye(H.shape[0]))
    assert P.is_zero_matrix


def test_group_mismatch():
    a = ClassFunction.constant(group("AGL1", 3))
    b = ClassFunction.constant(group("Gm", 7))
    with pytest.raises(GroupMismatch):
        algebra(a.group).convolve(a, b)
    with pytest.raises(GroupMismatch):
        a + b


def test_json_round_trip():
    G = group("U3", 2)
    f = ClassFunction(G, [Fraction(1, 3), 2, 0, -5, Fraction(7, 2)])
    data = f.to_json()
    assert data["values"][0] == "1/3"
    assert ClassFunction.from_json(G, data) == f
    with pytest.raises(GroupMismatch):
        ClassFunction.from_json(group("AGL1", 5), data)


@pytest.mark.parametrize("case", [("Gm", 3), ("AGL1", 3), ("U3", 2), ("U3", 3), ("GmZ2", 5), ("U4", 2)])
def test_axiom_suite(case):
    report = frobenius_axiom_suite(group(*case))
    assert report.passed, report.to_json()


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_commutative_and_associative(data):
    G = group("AGL1", 5)
    A = algebra(G)
    a, b, c = (data.draw(class_functions(G)) for _ in range(3))
    assert A.convolve(a, b) == A.convolve(b, a)
    assert A.convolve(a, A.convolve(b, c)) == A.convolve(A.convolve(a, b), c)
    assert A.convolve(A.unit(), a) == a
    assert A.pair(A.convolve(a, b), c) == A.pair(a, A.convolve(b, c))


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_counit_law_and_lemma(data):
    G = group("U3", 3)
    A = algebra(G)
    a = data.draw(class_functions(G))
    D = A.comultiply(a)
    # (epsilon (x) id) delta(a) = a
    left = [sum((D[i, j] * A.counit(ClassFunction.indicator(G, [i])) for i in range(A.k)), Fraction(0))
            for j in range(A.k)]
    assert left == list(a.values)
    f = A.genus_operator(A.unit())
    assert A.genus_operator(a) == A.convolve(a, f)


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_snake_identity(data):
    """(beta (x) id)(a (x) gamma(1)) = a."""
    G = group("U3", 3)
    A = algebra(G)
    a = data.draw(class_functions(G))
    out = [Fraction(0)] * A.k
    for i in range(A.k):
        for j in range(A.k):
            g = A.gamma(i, j)
            if g:
                out[j] += A.pair(a, ClassFunction.indicator(G, [i])) * g
    assert out == list(a.values)
