import numpy as np
import pytest

from conftest import group
from tqftcount import kernels

BACKENDS = ["python"] + (["cython"] if kernels.compiled_available() else [])


@pytest.fixture(params=BACKENDS)
def backend(request):
    return kernels.get_backend(request.param)


def naive_hom_count(G, genus):
    t, inv = G.mul_table, G.inverse_table
    comm = t[t[np.arange(G.order)[:, None], np.arange(G.order)[None, :]], t[inv[:, None], inv[None, :]]]
    acc = np.zeros(1, dtype=np.int64)
    for _ in range(genus):
        acc = t[acc[:, None], comm.reshape(-1)[None, :]].reshape(-1)
    return int((acc == 0).sum())


@pytest.mark.parametrize("case", [("Gm", 3), ("AGL1", 3), ("U3", 2), ("GmZ2", 5)])
def test_hom_count(backend, case):
    G = group(*case)
    for g in (0, 1, 2):
        assert backend.hom_count_naive(G.mul_table, G.inverse_table, g, 0) == naive_hom_count(G, g)


def test_commutator_kernels(backend, small_group):
    G = small_group
    t, inv = G.mul_table, G.inverse_table
    table = backend.commutator_table(t, inv)
    a, b = 1 % G.order, (G.order - 1)
    assert table[a, b] == t[t[a, b], t[inv[a], inv[b]]]
    counts = backend.commutator_counts(t, inv)
    assert (np.asarray(counts) == np.bincount(np.asarray(table).reshape(-1), minlength=G.order)).all()


def test_orbits_agree(backend, small_group):
    G = small_group
    labels = backend.conjugation_orbits(G.mul_table, G.inverse_table, np.arange(G.order, dtype=np.int32))
    ref = G.classes.class_of
    pairs = set(zip(np.asarray(labels).tolist(), ref.tolist()))
    assert len(pairs) == G.classes.count


def test_backend_selection():
    assert kernels.BACKEND in ("python", "cython")
    with pytest.raises(ValueError):
        kernels.get_backend("fortran")
