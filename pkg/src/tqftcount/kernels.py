"""Backend selection for the hot enumeration loops.

The compiled Cython module is used when it was built and importable;
otherwise (or with ``TQFTCOUNT_PURE=1`` in the environment) the numpy
implementation is used. Both expose the same four functions.
"""

import logging
import os

from . import _kernels_py

log = logging.getLogger(__name__)

_compiled = None
if os.environ.get("TQFTCOUNT_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled
    except ImportError:  # extension not built
        log.debug("compiled kernels unavailable, using numpy fallback")

_backend = _compiled if _compiled is not None else _kernels_py
BACKEND = "cython" if _compiled is not None else "python"


def compiled_available() -> bool:
    return _compiled is not None


def get_backend(name=None):
    """Return the kernel module for ``name`` ("cython", "python" or None for default)."""
    if name is None:
        return _backend
    if name == "python":
        return _kernels_py
    if name == "cython":
        if _compiled is None:
            raise ImportError("compiled kernels are not built")
        return _compiled
    raise ValueError(f"unknown backend {name!r}")


def commutator_counts(mul, inv):
    return _backend.commutator_counts(mul, inv)


def commutator_table(mul, inv):
    return _backend.commutator_table(mul, inv)


def hom_count_naive(mul, inv, genus, identity=0):
    return _backend.hom_count_naive(mul, inv, genus, identity)


def conjugation_orbits(mul, inv, gens):
    return _backend.conjugation_orbits(mul, inv, gens)
