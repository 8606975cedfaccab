import json

import numpy as np
import pytest

from conftest import element_products, group
from tqftcount.errors import NotAGroup, TooLarge, UsageError
from tqftcount.groups import (FamilySpec, FiniteGroup, FpElement, commutator, conjugacy_classes,
                              instantiate_family, is_prime, primitive_root)
from tqftcount.schemes import builtin_catalog


def test_fp_arithmetic():
    a = FpElement(3, 7)
    assert int(a * a.inverse()) == 1
    assert int(a + 5) == 1
    assert int(a - 4) == 6
    assert int(a**6) == 1
    with pytest.raises(ZeroDivisionError):
        FpElement(0, 7).inverse()


def test_primitive_root_generates():
    for p in (3, 5, 7, 11, 13, 101):
        g = primitive_root(p)
        assert len({pow(g, k, p) for k in range(p - 1)}) == p - 1


@pytest.mark.parametrize("p", [2, 3, 5, 7, 11, 13])
def test_family_orders(p):
    assert group("AGL1", p).order == p * (p - 1)
    assert group("U3", p).order == p**3
    if p <= 5:
        assert group("U4", p).order == p**6
    if p > 2:
        assert group("GmZ2", p).order == 2 * (p - 1)


def test_identity_is_first(small_group):
    assert (small_group.matrices[0] == np.eye(small_group.dim, dtype=np.int64)).all()


def test_table_matches_matrix_products(small_group):
    assert (element_products(small_group) == small_group.mul_table).all()


def test_class_sizes(small_group):
    cls = small_group.classes
    assert sum(cls.class_sizes) == small_group.order
    for size, cent in zip(cls.class_sizes, cls.centralizer_orders):
        assert size * cent == small_group.order


def _exhaustive_classes(G):
    """Orbits under conjugation by every element, straight from matrix products."""
    table = element_products(G)
    inv = [int(np.flatnonzero(table[a] == 0)[0]) for a in range(G.order)]
    seen = {}
    label = 0
    for x in range(G.order):
        if x in seen:
            continue
        for g in range(G.order):
            seen[int(table[table[g, x], inv[g]])] = label
        label += 1
    return seen


@pytest.mark.parametrize("case", [("AGL1", 3), ("AGL1", 7), ("U3", 2), ("U3", 3), ("GmZ2", 7), ("U4", 2)])
def test_generator_orbits_equal_exhaustive_classes(case):
    G = group(*case)
    want = _exhaustive_classes(G)
    got = G.classes.class_of
    pairs = {(want[x], int(got[x])) for x in range(G.order)}
    assert len(pairs) == len(set(want.values())) == G.classes.count
    assert (conjugacy_classes(G, exhaustive=True).class_of == got).all()


def test_known_class_counts():
    assert sorted(group("AGL1", 3).classes.class_sizes) == [1, 2, 3]
    assert group("U3", 2).classes.count == 5
    assert group("AGL1", 5).classes.count == 5
    assert group("U4", 2).classes.count == 16


def test_trivial_group():
    G = FiniteGroup(np.eye(2, dtype=np.int64)[None], 5, name="trivial")
    assert G.order == 1 and G.classes.count == 1 and G.classes.class_sizes == (1,)


def test_commutator():
    G = group("AGL1", 3)
    for b in range(G.order):
        assert commutator(G, 0, b) == 0
    a = G.index_of(np.array([[2, 0], [0, 1]]))
    b = G.index_of(np.array([[1, 1], [0, 1]]))
    c = G.element(commutator(G, a, b))
    # x -> 2x and x -> x + 1 have commutator x -> x + 1 over F_3
    assert c == ((1, 1), (0, 1))


def test_commutators_trivial_in_abelian_group():
    G = group("Gm", 7)
    assert G.is_abelian()
    assert all(commutator(G, a, b) == 0 for a in range(G.order) for b in range(G.order))


def test_large_group_without_table():
    G = instantiate_family(builtin_catalog().family("U3"), 17)
    assert G.mul_table is None
    assert G.classes.count == 17**2 + 17 - 1
    x, y = 5, 100
    prod = G.element(G.mul(x, y))
    want = (np.array(G.element(x)) @ np.array(G.element(y))) % 17
    assert np.array_equal(np.array(prod), want)


def test_not_prime_and_bounds():
    spec = builtin_catalog().family("AGL1")
    with pytest.raises(UsageError):
        instantiate_family(spec, 9)
    with pytest.raises(UsageError):
        instantiate_family(spec, 103)
    with pytest.raises(UsageError):
        instantiate_family(builtin_catalog().family("GmZ2"), 2)
    with pytest.raises(TooLarge):
        instantiate_family(builtin_catalog().family("U4"), 5, order_cap=1000)


def test_not_a_group_detected():
    spec = FamilySpec.from_json({"name": "upper", "dim": 2, "pattern": [["a", "b"], [0, 1]]})
    with pytest.raises(NotAGroup):
        instantiate_family(spec, 3)


def test_spec_json_round_trip(tmp_path):
    spec = builtin_catalog().family("GmZ2")
    path = tmp_path / "gm.json"
    path.write_text(json.dumps(spec.to_json()))
    again = FamilySpec.from_json(path)
    assert again.to_json() == spec.to_json()
    assert instantiate_family(again, 5).order == 8


def test_malformed_spec():
    with pytest.raises(UsageError):
        FamilySpec.from_json({"name": "x", "dim": 2, "pattern": [["a"]]})
    with pytest.raises(UsageError):
        FamilySpec.from_json({"name": "x", "dim": 1, "pattern": [["a"]],
                              "constraints": [{"poly": "a +* 1", "rel": "eq"}]})


def test_is_prime():
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
