from functools import lru_cache

import numpy as np
import pytest

from tqftcount.groups import instantiate_family
from tqftcount.schemes import builtin_catalog


@lru_cache(maxsize=None)
def group(family, p):
    return instantiate_family(builtin_catalog().family(family), p)


def element_products(G):
    """Full multiplication by explicit matrix products, independent of the stored table."""
    mats = G.matrices
    n = G.order
    out = np.empty((n, n), dtype=np.int64)
    for a in range(n):
        prod = np.einsum("ij,njk->nik", mats[a], mats) % G.p
        out[a] = G.lookup(prod)
    return out


SMALL_GROUPS = [("Gm", 3), ("AGL1", 3), ("U3", 2), ("GmZ2", 5), ("AGL1", 5), ("U3", 3)]


@pytest.fixture(params=SMALL_GROUPS, ids=lambda c: f"{c[0]}-{c[1]}")
def small_group(request):
    return group(*request.param)
