from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import group
from tqftcount.bordism import brute_force_hom_count, surface_invariant
from tqftcount.classalg import ClassFunction, algebra
from tqftcount.correspondence import (GenusMatrix, census_count, eigen_census, family_genus_matrix,
                                      genus_matrix_at_prime, interpolate, interpolate_entry, verify_lift)
from tqftcount.errors import DependentGenerators, InsufficientPrimes, ValidationFailed
from tqftcount.polyq import PolyQ
from tqftcount.schemes import Lift, builtin_catalog, integrate_named


def test_interpolate_underdetermined():
    pts = [(3, 18), (5, 100), (7, 294), (11, 1210)]
    assert interpolate_entry(pts, 6) == PolyQ.parse("q^3-q^2")
    assert interpolate_entry(pts, 3) == PolyQ.parse("q^3-q^2")


def test_interpolate_exact_lagrange():
    f = PolyQ.parse("q^4-3*q^3+2*q^2")
    pts = [(p, f(p)) for p in (2, 3, 5, 7, 11)]
    assert interpolate_entry(pts, 4) == f


def test_interpolate_rejects_non_integral():
    with pytest.raises(ValidationFailed):
        interpolate_entry([(3, 0), (5, 1)], 1)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=1, max_size=4))
def test_interpolate_recovers_small_polys(coeffs):
    f = PolyQ(coeffs)
    pts = [(p, f(p)) for p in (3, 5, 7, 11)]
    assert interpolate_entry(pts, 6) == f


def test_matrix_interpolation_and_validation():
    f = PolyQ.parse("q^3-q^2")
    per = [(p, [[f(p)]]) for p in (3, 5, 7, 11, 13)]
    gm = interpolate(per, 6, validate=13)
    assert gm.entries == [[f]] and gm.validated_at == 13
    bad = per[:-1] + [(13, [[f(13) + 1]])]
    with pytest.raises(ValidationFailed) as info:
        interpolate(bad, 6, validate=13)
    assert info.value.entry == (0, 0)


def test_insufficient_primes():
    with pytest.raises(InsufficientPrimes):
        interpolate([(3, [[1]])], 2)
    with pytest.raises(InsufficientPrimes):
        interpolate([(3, [[1]]), (5, [[1]])], 2, validate=7)


def test_genus_matrix_json_round_trip():
    gm = family_genus_matrix("AGL1", [3, 5, 7, 11], validate=13)
    again = GenusMatrix.from_json(gm.to_json())
    assert again.entries == gm.entries
    assert (again.specialize(17) == gm.specialize(17)).all()


def test_genus_matrix_at_prime_matches_operator():
    G = group("AGL1", 5)
    gens = integrate_named("AGL1", ["I", "J"], G)
    M = genus_matrix_at_prime(G, gens)
    h = algebra(G).genus_operator
    for j, g in enumerate(gens):
        image = sum((gens[i] * M[i, j] for i in range(2)), ClassFunction.zero(G))
        assert image == h(g)


def test_dependent_generators():
    G = group("U3", 3)
    gens = integrate_named("U3", ["Z", "Zstar", "One"], G)
    with pytest.raises(DependentGenerators):
        genus_matrix_at_prime(G, gens)


def test_agl1_census():
    for p in (3, 5, 7):
        census, report = eigen_census(group("AGL1", p))
        assert census.entries == [(1, p - 1), (p - 1, 1)]
        assert sorted(report.eigenvalues) == sorted([Fraction(p * p), Fraction(p * p * (p - 1) ** 2)])


def test_census_invariants(small_group):
    census, report = eigen_census(small_group)
    assert census.burnside_holds() and census.class_count_holds()
    h = algebra(small_group).genus_operator
    for lam, v in zip(report.eigenvalues, report.projections):
        assert h(v) == v * lam


def test_character_sum_at_identity(small_group):
    census, report = eigen_census(small_group)
    mult = dict(census.entries)
    for d, csum in zip(report.dimensions, report.character_sums()):
        assert csum.at(0) == d * mult[d]


@pytest.mark.parametrize("family,p", [("Gm", 3), ("AGL1", 3), ("U3", 2), ("GmZ2", 5)])
@pytest.mark.parametrize("g", [0, 1, 2])
def test_census_count_matches_brute_force(family, p, g):
    G = group(family, p)
    census, _ = eigen_census(G)
    value = census_count(census, g)
    assert value == surface_invariant(G, g) * G.order
    if g:
        assert value == brute_force_hom_count(G, g)


def test_genus_zero_and_fractional_census():
    census, _ = eigen_census(group("AGL1", 3))
    assert census_count(census, 0) == 1
    census.entries = [(1, 1), (2, 1)]
    assert census_count(census, 0) == Fraction(5, 6)


def test_verify_lift_agl1():
    G = group("AGL1", 7)
    v1 = builtin_catalog().lift("AGL1", "v1")
    r = verify_lift(G, v1)
    assert r.passed and r.eigenvalue == 49 * 36 and r.dimension == 1


def test_verify_lift_wrong_eigenvalue():
    G = group("AGL1", 5)
    r = verify_lift(G, builtin_catalog().lift("AGL1", "v2"), expected_eigenvalue=PolyQ.parse("q^3"))
    assert r.eigenvalue_matches is False and not r.passed


def test_verify_lift_not_eigenvector():
    from tqftcount.errors import NotEigenvector
    G = group("AGL1", 5)
    lift = Lift("AGL1", "bad", ((PolyQ([1]), "I"),))
    with pytest.raises(NotEigenvector):
        verify_lift(G, lift)
