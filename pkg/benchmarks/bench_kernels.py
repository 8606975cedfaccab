"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import timeit

import numpy as np

from tqftcount import kernels
from tqftcount.groups import instantiate_family
from tqftcount.schemes import builtin_catalog

CASES = [
    ("commutator_counts", "U4", 3, lambda k, G: k.commutator_counts(G.mul_table, G.inverse_table)),
    ("conjugation_orbits", "U4", 3,
     lambda k, G: k.conjugation_orbits(G.mul_table, G.inverse_table, np.arange(G.order, dtype=np.int32))),
    ("hom_count_naive g=2", "AGL1", 5, lambda k, G: k.hom_count_naive(G.mul_table, G.inverse_table, 2, 0)),
    ("hom_count_naive g=2", "U3", 3, lambda k, G: k.hom_count_naive(G.mul_table, G.inverse_table, 2, 0)),
]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = ["python"] + (["cython"] if kernels.compiled_available() else [])
    cat = builtin_catalog()
    print(f"{'kernel':<22}{'group':<12}" + "".join(f"{b:>12}" for b in backends) + f"{'speedup':>10}")
    for label, family, p, fn in CASES:
        G = instantiate_family(cat.family(family), p)
        times = {}
        results = {}
        for b in backends:
            mod = kernels.get_backend(b)
            results[b] = fn(mod, G)
            times[b] = min(timeit.repeat(lambda: fn(mod, G), number=1, repeat=args.repeat))
        if len(backends) == 2:
            same = np.array_equal(np.asarray(results["python"]), np.asarray(results["cython"]))
            assert same, f"backends disagree on {label}"
            speed = f"{times['python'] / times['cython']:>9.1f}x"
        else:
            speed = f"{'n/a':>10}"
        print(f"{label:<22}{G.name:<12}" + "".join(f"{times[b]:>11.4f}s" for b in backends) + speed)


if __name__ == "__main__":
    main()
