import random
from fractions import Fraction

import numpy as np
import pytest

from conftest import group
from tqftcount import groupoid as gp
from tqftcount.errors import NotAFunctor, NotAnAction, NotIsoInvariant, SizeCap
from tqftcount.verify import check_beck_chevalley, check_composition, frobenius_span_matrices


def test_conjugation_groupoid(small_group):
    gpd = gp.conjugation_groupoid(small_group)
    gpd.check_axioms()
    assert gpd.n_iso_classes == small_group.classes.count
    assert gpd.cardinality() == 1


def test_trivial_and_classifying():
    pt = gp.point_groupoid()
    assert pt.n_objects == 1 and pt.n_morphisms == 1 and pt.cardinality() == 1
    BG = gp.classifying_groupoid(group("AGL1", 3))
    assert BG.cardinality() == Fraction(1, 6)


def test_swap_action():
    Z2 = gp.TableGroup.cyclic(2)
    gpd = gp.action_groupoid(Z2, 2, np.array([[0, 1], [1, 0]]))
    gpd.check_axioms()
    assert gpd.n_iso_classes == 1
    assert list(gpd.aut_orders) == [1, 1]
    assert gpd.cardinality() == 1


def test_bad_action():
    Z3 = gp.TableGroup.cyclic(3)
    with pytest.raises(NotAnAction):
        gp.action_groupoid(Z3, 2, np.array([[0, 1], [1, 0], [0, 1]]))
    with pytest.raises(NotAnAction):
        gp.action_groupoid(Z3, 2, np.array([[1, 0], [1, 0], [0, 1]]))


def test_character_groupoid_torus_z2():
    gpd = gp.character_groupoid(gp.TableGroup.cyclic(2), 1)
    assert gpd.n_objects == 4
    assert gpd.cardinality() == 2


@pytest.mark.parametrize("case", [("Gm", 3), ("AGL1", 3), ("U3", 2)])
def test_character_groupoid_cardinality(case):
    G = group(*case)
    for g in (1, 2):
        from tqftcount.bordism import character_groupoid_cardinality
        assert gp.character_groupoid(G, g).cardinality() == character_groupoid_cardinality(G, g)


def test_pullback_basics():
    G = group("AGL1", 3)
    gpd = gp.conjugation_groupoid(G)
    phi = gp.IsoInvariantFunction.from_classes(gpd, [1, 2, 3])
    ident = gp.identity_functor(gpd)
    assert gp.pullback(ident, phi) == phi
    term = gp.terminal_functor(gpd)
    c = gp.IsoInvariantFunction.constant(term.target, 7)
    assert all(v == 7 for v in gp.pullback(term, c).values)


def test_pushforward_to_point_is_cardinality():
    rng = random.Random(3)
    for _ in range(10):
        gpd = gp.random_groupoid(rng)
        term = gp.terminal_functor(gpd)
        out = gp.pushforward(term, gp.IsoInvariantFunction.constant(gpd, 1))
        assert out.values[0] == gpd.cardinality()


def test_unit_span_normalization():
    G = group("U3", 2)
    spans = gp.FrobeniusSpans(G)
    eta = gp.quantize_span(spans.unit()).reshape(-1)
    assert list(eta) == [1] + [0] * (G.classes.count - 1)


def test_fiber_product_examples():
    Z2 = gp.TableGroup.cyclic(2)
    B = gp.classifying_groupoid(Z2)
    pt = gp.point_groupoid()
    fib = gp.fiber_product(gp.terminal_functor(B, pt), gp.terminal_functor(B, pt))
    fib.groupoid.check_axioms()
    assert fib.groupoid.cardinality() == Fraction(1, 4)
    assert fib.groupoid.cardinality() == gp.product(B, B).cardinality()
    # one leg an identity: equivalent to the other leg's source
    rng = random.Random(5)
    S, T = gp.random_groupoid(rng), gp.random_groupoid(rng)
    f = gp.random_functor(rng, S, T)
    fib = gp.fiber_product(f, gp.identity_functor(T))
    assert fib.groupoid.cardinality() == S.cardinality()
    fib.to_b.validate()
    fib.to_c.validate()


def test_fiber_product_cap():
    A = gp.conjugation_groupoid(gp.TableGroup.cyclic(8))
    ident = gp.identity_functor(A)
    with pytest.raises(SizeCap):
        gp.fiber_product(ident, ident, cap=10)


def test_functor_validation():
    rng = random.Random(0)
    S, T = gp.random_groupoid(rng), gp.random_groupoid(rng)
    F = gp.random_functor(rng, S, T)
    bad = F.mor_map.copy()
    bad[S.identity[0]] = (bad[S.identity[0]] + 1) % T.n_morphisms
    with pytest.raises(NotAFunctor):
        gp.GroupoidFunctor.build(S, T, F.obj_map, bad)


def test_iso_invariance_checked():
    gpd = gp.conjugation_groupoid(group("AGL1", 3))
    vals = [0] * gpd.n_objects
    vals[gpd.iso_reps[1]] = 1  # one member of a class of size 2
    with pytest.raises(NotIsoInvariant):
        gp.IsoInvariantFunction(gpd, vals)


def test_identity_span():
    rng = random.Random(2)
    gpd = gp.random_groupoid(rng)
    M = gp.quantize_span(gp.identity_span(gpd))
    assert (M == np.eye(gpd.n_iso_classes, dtype=object)).all()


def test_equivalence_invariance():
    rng = random.Random(11)
    for _ in range(15):
        S, T = gp.random_groupoid(rng), gp.random_groupoid(rng)
        f = gp.random_functor(rng, S, T)
        skel, incl = gp.skeletonize(S)
        skel.check_axioms()
        incl.validate()
        assert skel.cardinality() == S.cardinality()
        vals = [Fraction(rng.randint(-3, 3)) for _ in range(S.n_iso_classes)]
        phi = gp.IsoInvariantFunction.from_classes(S, vals)
        direct = gp.pushforward(f, phi)
        via = gp.pushforward(incl.then(f), gp.pullback(incl, phi))
        assert (direct.values == via.values).all()


def test_composition_lemma_randomized():
    ok, detail = check_composition(trials=50, seed=7)
    assert ok, detail


def test_beck_chevalley_randomized():
    ok, detail = check_beck_chevalley(trials=50, seed=8)
    assert ok, detail


@pytest.mark.parametrize("case", [("Gm", 3), ("AGL1", 3), ("U3", 2), ("GmZ2", 5)])
def test_frobenius_spans(case):
    for name, (quantized, algebraic) in frobenius_span_matrices(group(*case)).items():
        assert (quantized == algebraic).all(), name


def test_composite_genus_span():
    G = group("AGL1", 3)
    spans = gp.FrobeniusSpans(G)
    composite = spans.comultiplication().then(spans.multiplication())
    assert (gp.quantize_span(composite) == gp.quantize_span(spans.genus())).all()
