import json

import numpy as np
import pytest

from conftest import group
from tqftcount.errors import MapNotInGroup, NotClassInvariant, TooLarge, UsageError
from tqftcount.schemes import (Catalog, GeneratorSpec, builtin_catalog, fiber_counts, integrate_generator,
                               integrate_lift, list_builtins, load_catalog)


def gen(**kw):
    data = {"family": "AGL1", "name": "t", "coords": ["a", "b"], "map": [["a", "b"], ["0", "1"]]}
    data.update(kw)
    return GeneratorSpec.from_json(data)


def test_builtins_listed():
    info = list_builtins()
    assert {"AGL1", "U3", "U4", "GmZ2", "Gm"} <= set(info)
    assert info["AGL1"]["basis"] == ["I", "J"]
    assert info["U3"]["lifts"] == ["v1", "v2"]


@pytest.mark.parametrize("p", [3, 5, 7])
def test_agl1_generators(p):
    G = group("AGL1", p)
    I = integrate_generator(builtin_catalog().generator("AGL1", "I"), G)
    J = integrate_generator(builtin_catalog().generator("AGL1", "J"), G)
    # I is the identity indicator, J the indicator of nontrivial translations
    assert I.at(0) == 1 and sum(I.values) == 1
    sizes = G.classes.class_sizes
    assert sum(v * s for v, s in zip(J.values, sizes)) == p - 1


def test_whole_group_counts():
    G = group("AGL1", 5)
    spec = gen(constraints=[{"poly": "a", "rel": "neq"}])
    counts = fiber_counts(spec, G)
    assert (counts == 1).all()


def test_coefficient_scales():
    G = group("AGL1", 5)
    base = integrate_generator(builtin_catalog().generator("AGL1", "I"), G)
    scaled = gen(constraints=[{"poly": "a - 1", "rel": "eq"}, {"poly": "b", "rel": "eq"}], coefficient="q-1")
    assert integrate_generator(scaled, G) == base * 4


def test_not_class_invariant():
    # a single nontrivial translation is not a union of classes
    spec = gen(constraints=[{"poly": "a - 1", "rel": "eq"}, {"poly": "b - 1", "rel": "eq"}])
    with pytest.raises(NotClassInvariant):
        integrate_generator(spec, group("AGL1", 5))


def test_map_outside_group():
    spec = gen(constraints=[], map=[["a", "b"], ["0", "1"]])
    with pytest.raises(MapNotInGroup):
        fiber_counts(spec, group("AGL1", 3))
    wrong_dim = GeneratorSpec.from_json({"family": "AGL1", "name": "s", "coords": [], "map": [["1"]]})
    with pytest.raises(MapNotInGroup):
        fiber_counts(wrong_dim, group("AGL1", 3))


def test_domain_cap():
    spec = GeneratorSpec.from_json({"family": "AGL1", "name": "big", "coords": 8,
                                    "map": [["1", "0"], ["0", "1"]]})
    with pytest.raises(TooLarge):
        spec.domain_points(13, cap=10**6)


def test_generator_json_round_trip():
    spec = builtin_catalog().generator("U3", "Zstar")
    again = GeneratorSpec.from_json(spec.to_json())
    G = group("U3", 3)
    assert integrate_generator(again, G) == integrate_generator(spec, G)


def test_missing_field():
    with pytest.raises(UsageError):
        GeneratorSpec.from_json({"family": "AGL1", "name": "x"})


def test_unknown_names():
    cat = builtin_catalog()
    with pytest.raises(UsageError):
        cat.family("SL7")
    with pytest.raises(UsageError):
        cat.generator("AGL1", "K")
    with pytest.raises(UsageError):
        cat.lift("AGL1", "v9")


def test_user_catalog_extends(tmp_path):
    path = tmp_path / "cat.json"
    path.write_text(json.dumps({
        "generators": [{"family": "AGL1", "name": "All", "coords": ["a", "b"],
                        "constraints": [{"poly": "a", "rel": "neq"}], "map": [["a", "b"], ["0", "1"]]}],
        "bases": {"AGL1": ["I", "All"]},
    }))
    cat = load_catalog(path)
    assert cat.basis("AGL1") == ["I", "All"]
    assert builtin_catalog().basis("AGL1") == ["I", "J"]
    G = group("AGL1", 3)
    v = integrate_generator(cat.generator("AGL1", "All"), G)
    assert all(x == 1 for x in v.values)


def test_bad_catalog_path(tmp_path):
    with pytest.raises(UsageError):
        load_catalog(tmp_path / "missing.json")


@pytest.mark.parametrize("p", [5, 7])
def test_gmz2_lift_values(p):
    G = group("GmZ2", p)
    v1 = integrate_lift(builtin_catalog().lift("GmZ2", "v1"), G)
    assert v1.at(0) == 4


def test_catalog_accepts_single_family():
    fam = {"name": "Triv", "dim": 1, "pattern": [["1"]], "generators": []}
    cat = Catalog.from_json(fam)
    assert "Triv" in cat.families
