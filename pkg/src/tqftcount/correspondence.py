"""Genus-operator matrices on generator spans, their interpolation in q,
and the character-dimension census read off the genus operator.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import sympy

from .classalg import ClassFunction, algebra
from .errors import (DependentGenerators, InsufficientPrimes, NonIntegerMultiplicity, NotDiagonalizable,
                     NotEigenvector, NotInvariant, ValidationFailed)
from .groups import FiniteGroup, instantiate_family
from .linalg import fraction_str, qarray, rank, solve
from .polyq import PolyQ
from .schemes import Catalog, Lift, builtin_catalog, integrate_lift, integrate_named

log = logging.getLogger(__name__)

SEARCH_CAP = 5 * 10**6


# per-prime matrices ------------------------------------------------------------

def genus_matrix_at_prime(G: FiniteGroup, generators: list[ClassFunction]) -> np.ndarray:
    """Matrix A with h(x_i) = sum_j A[j, i] x_j, solved exactly."""
    if not generators:
        raise DependentGenerators("no generators given")
    X = qarray([list(g.values) for g in generators]).T  # k x n
    n = X.shape[1]
    if rank(X) < n:
        raise DependentGenerators(f"the {n} generators span a space of dimension {rank(X)}")
    alg = algebra(G)
    HX = qarray([list(alg.genus_operator(g).values) for g in generators]).T
    A = solve(X, HX)
    if A is None:
        # report the first generator whose image leaves the span
        for i in range(n):
            if solve(X, HX[:, i]) is None:
                raise NotInvariant(f"h(x_{i}) is not in the span of the generators",
                                   residual=[fraction_str(v) for v in HX[:, i]])
    return A


def _family_matrix(args):
    family, names, p, catalog = args
    cat = catalog or builtin_catalog()
    G = instantiate_family(cat.family(family), p)
    gens = integrate_named(family, names, G, cat)
    return p, genus_matrix_at_prime(G, gens)


def family_matrices(family: str, names, primes, catalog: Catalog | None = None,
                    jobs: int = 1) -> list[tuple[int, np.ndarray]]:
    """Per-prime genus matrices; primes are independent and may run in worker processes."""
    tasks = [(family, list(names), p, catalog) for p in primes]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_family_matrix, tasks))
    else:
        results = [_family_matrix(t) for t in tasks]
    return sorted(results, key=lambda r: primes.index(r[0]))


# interpolation ---------------------------------------------------------------

def _lagrange(points) -> list[Fraction]:
    """Coefficients (low to high) of the unique polynomial of degree < len(points) through them."""
    q = sympy.Symbol("q")
    poly = sympy.interpolate([(sympy.Integer(int(x)), sympy.Rational(Fraction(y).numerator, Fraction(y).denominator)) for x, y in points], q)
    coeffs = sympy.Poly(poly, q).all_coeffs()[::-1] if poly != 0 else []
    return [Fraction(int(c.p), int(c.q)) for c in coeffs]


def _poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def interpolate_entry(points, degree_bound: int, max_candidates: int = SEARCH_CAP) -> PolyQ:
    """Integer polynomial of degree <= degree_bound through ``points``.

    With at least degree_bound + 1 points this is plain Lagrange
    interpolation. With fewer, every integer solution has the form L + W Q
    with L the Lagrange interpolant, W = prod (q - p_i) and Q integral of
    degree <= degree_bound - n, so L must itself be integral. The solution
    of least coefficient height is returned (ties broken lexicographically
    on the coefficients, highest degree first). The search fixes the top
    coefficients of P, which determine Q by a unimodular triangular
    system, and widens their range one step at a time.
    """
    n = len(points)
    if n == 0:
        raise InsufficientPrimes("no interpolation points")
    L = _lagrange(points)
    if any(c.denominator != 1 for c in L):
        raise ValidationFailed(f"no integer polynomial takes the values {points}")
    L = [int(c) for c in L] + [0] * (n - len(L))
    e = degree_bound - n + 1
    if e <= 0:
        if len(PolyQ(L).coeffs) > degree_bound + 1:
            raise ValidationFailed(f"interpolant through {points} exceeds degree {degree_bound}")
        return PolyQ(L)
    W = [1]
    for x, _ in points:
        W = _poly_mul(W, [-x, 1])
    D = degree_bound
    # rows: P coefficients contributed by q^j W
    shifts = np.array([[0] * j + W + [0] * (D - n - j) for j in range(e)], dtype=np.int64)
    base = np.array(L + [0] * (D + 1 - n), dtype=np.int64)
    # top coefficients (degrees n..D) as a function of Q: T = Q @ shifts[:, n:]
    top = shifts[:, n:]
    inv_top = np.array(sympy.Matrix(top.tolist()).inv().tolist(), dtype=np.int64)
    spent = 0
    h = 0
    while True:
        box = np.arange(-h, h + 1, dtype=np.int64)
        count = len(box) ** e
        spent += count
        if spent > max_candidates:
            raise ValidationFailed(
                f"no integer polynomial of height <= {h - 1} and degree <= {D} through {points}")
        T = np.stack(np.meshgrid(*([box] * e), indexing="ij"), axis=-1).reshape(-1, e)
        Q = T @ inv_top
        P = base[None, :] + Q @ shifts
        ok = np.abs(P).max(axis=1) <= h
        if ok.any():
            cands = sorted(tuple(int(v) for v in row[::-1]) for row in P[ok])
            return PolyQ(list(cands[0][::-1]))
        h += 1


@dataclass
class GenusMatrix:
    labels: list[str]
    entries: list[list[PolyQ]]
    degree_bound: int
    primes: list[int]
    validated_at: int | None

    def specialize(self, p: int) -> np.ndarray:
        return qarray([[e(p) for e in row] for row in self.entries])

    def to_json(self) -> dict:
        return {
            "labels": list(self.labels),
            "entries": [[str(e) for e in row] for row in self.entries],
            "degree_bound": self.degree_bound,
            "primes": list(self.primes),
            "validated_at": self.validated_at,
        }

    @classmethod
    def from_json(cls, data: dict) -> "GenusMatrix":
        return cls(list(data["labels"]), [[PolyQ.parse(e) for e in row] for row in data["entries"]],
                   int(data["degree_bound"]), list(data["primes"]), data.get("validated_at"))


def default_degree_bound(free_coordinates: int) -> int:
    return 2 * free_coordinates + 2


def interpolate(per_prime, degree_bound: int, validate: int | None = None,
                labels=None) -> GenusMatrix:
    """Entrywise interpolation through all primes except the validation prime.

    ``validate`` names the held-out prime; by default the last prime listed.
    """
    per_prime = [(int(p), qarray(m)) for p, m in per_prime]
    if validate is None:
        if len(per_prime) < 2:
            raise InsufficientPrimes("need at least one interpolation prime and one validation prime")
        validate = per_prime[-1][0]
    held = [m for p, m in per_prime if p == validate]
    if not held:
        raise InsufficientPrimes(f"validation prime {validate} has no matrix")
    fit = [(p, m) for p, m in per_prime if p != validate]
    if not fit:
        raise InsufficientPrimes("no interpolation primes left after holding one out")
    shape = fit[0][1].shape
    if any(m.shape != shape for _, m in per_prime):
        raise ValueError("per-prime matrices have different shapes")
    if len(fit) < degree_bound + 1:
        log.info("%d primes for degree bound %d: taking the least-height integer fit",
                 len(fit), degree_bound)
    entries = []
    for i in range(shape[0]):
        row = []
        for j in range(shape[1]):
            pts = [(p, m[i, j]) for p, m in fit]
            try:
                poly = interpolate_entry(pts, degree_bound)
            except ValidationFailed as exc:
                raise ValidationFailed(f"entry ({i}, {j}): {exc}", entry=(i, j)) from None
            row.append(poly)
        entries.append(row)
    check = held[0]
    for i in range(shape[0]):
        for j in range(shape[1]):
            got = entries[i][j](validate)
            if got != check[i, j]:
                raise ValidationFailed(
                    f"entry ({i}, {j}) = {entries[i][j]} gives {got} at q={validate}, expected {check[i, j]}",
                    entry=(i, j))
    labels = list(labels) if labels is not None else [f"x{i}" for i in range(shape[0])]
    return GenusMatrix(labels, entries, degree_bound, [p for p, _ in fit], validate)


def family_genus_matrix(family: str, primes, validate: int | None = None, names=None,
                        degree_bound: int | None = None, catalog: Catalog | None = None,
                        jobs: int = 1) -> GenusMatrix:
    cat = catalog or builtin_catalog()
    spec = cat.family(family)
    names = list(names) if names else cat.basis(family)
    primes = list(primes)
    if validate is not None and validate not in primes:
        primes.append(validate)
    if degree_bound is None:
        degree_bound = default_degree_bound(spec.free_coordinates())
    per_prime = family_matrices(family, names, primes, cat, jobs)
    return interpolate(per_prime, degree_bound, validate, labels=names)


# census ------------------------------------------------------------------------

@dataclass
class DimensionCensus:
    entries: list[tuple[int, int]]  # (d, N_d), ascending d
    group_order: int
    class_count: int

    def burnside_holds(self) -> bool:
        return sum(n * d * d for d, n in self.entries) == self.group_order

    def class_count_holds(self) -> bool:
        return sum(n for _, n in self.entries) == self.class_count

    def dims(self) -> list[int]:
        return [d for d, _ in self.entries]

    def to_json(self) -> list[dict]:
        return [{"dim": d, "count": n} for d, n in self.entries]


@dataclass
class EigenReport:
    eigenvalues: list[int]
    dimensions: list[int]
    projections: list[ClassFunction]  # v_i = (d_i/|G|) sum of the characters of degree d_i
    residuals: list[bool] = field(default_factory=list)

    def character_sums(self) -> list[ClassFunction]:
        """sum of the irreducible characters of each degree: (|G|/d) v_i."""
        G = self.projections[0].group if self.projections else None
        return [v * Fraction(G.order, d) for v, d in zip(self.projections, self.dimensions)]

    def to_json(self) -> dict:
        return {
            "eigenvalues": [str(x) for x in self.eigenvalues],
            "dimensions": self.dimensions,
            "projections": [[fraction_str(x) for x in v.values] for v in self.projections],
            "character_sums": [[fraction_str(x) for x in v.values] for v in self.character_sums()],
            "exact_eigenvectors": self.residuals,
        }


def _divisors(n: int) -> list[int]:
    return sorted(int(d) for d in sympy.divisors(n))


def _apply(H, v):
    return [sum((H[i, j] * v[j] for j in range(len(v)) if v[j]), Fraction(0)) for i in range(len(v))]


def cyclic_minimal_polynomial(H, v0) -> list[Fraction]:
    """Monic minimal polynomial (low to high) of H restricted to the cyclic span of v0."""
    krylov = [list(v0)]
    while True:
        nxt = _apply(H, krylov[-1])
        K = qarray(krylov).T
        c = solve(K, qarray(nxt))
        if c is not None:
            return [-x for x in c] + [Fraction(1)]
        krylov.append(nxt)


def eigen_census(G: FiniteGroup) -> tuple[DimensionCensus, EigenReport]:
    alg = algebra(G)
    H = alg.genus_matrix
    eta = [Fraction(v) for v in alg.unit().values]
    minpoly = cyclic_minimal_polynomial(H, eta)
    m = len(minpoly) - 1
    order = G.order
    roots = []
    for d in _divisors(order):
        if d * d > order:
            break
        lam = (order // d) ** 2
        if sum(c * lam**i for i, c in enumerate(minpoly)) == 0:
            roots.append((lam, d))
    if len(roots) != m:
        raise NotDiagonalizable(
            f"h on the cyclic span of the unit has degree {m} but {len(roots)} roots of the form (|G|/d)^2")
    roots.sort(key=lambda r: r[1])
    projections = []
    residuals = []
    entries = []
    for lam, d in roots:
        v = eta
        for mu, _ in roots:
            if mu == lam:
                continue
            hv = _apply(H, v)
            v = [(a - mu * b) / (lam - mu) for a, b in zip(hv, v)]
        hv = _apply(H, v)
        residuals.append(all(a == lam * b for a, b in zip(hv, v)))
        count = v[0] * order / (d * d)
        if count.denominator != 1:
            raise NonIntegerMultiplicity(f"dimension {d} would occur {count} times")
        entries.append((d, int(count)))
        projections.append(ClassFunction(G, v))
    census = DimensionCensus(entries, order, alg.k)
    report = EigenReport([lam for lam, _ in roots], [d for _, d in roots], projections, residuals)
    return census, report


def census_count(census: DimensionCensus, genus: int):
    """|Hom(pi_1 Sigma_g, G)| = |G|^(2g-1) sum_d N_d d^(2-2g); a Fraction when g = 0."""
    total = sum((Fraction(n) * Fraction(d) ** (2 - 2 * genus) for d, n in census.entries), Fraction(0))
    value = Fraction(census.group_order) ** (2 * genus - 1) * total
    return int(value) if value.denominator == 1 else value


# lifts -------------------------------------------------------------------------

@dataclass
class LiftReport:
    name: str
    prime: int
    eigenvalue: Fraction
    expected_eigenvalue: Fraction | None
    eigenvalue_matches: bool | None
    dimension: int | None
    projection_scalar: Fraction | None  # lift = scalar * v_i
    character_sum_scalar: Fraction | None  # lift = scalar * sum of the degree-d characters
    values: list[Fraction]

    @property
    def passed(self) -> bool:
        return self.eigenvalue_matches is not False and self.projection_scalar is not None

    def to_json(self) -> dict:
        opt = lambda x: None if x is None else fraction_str(x)  # noqa: E731
        return {
            "lift": self.name,
            "prime": self.prime,
            "eigenvalue": fraction_str(self.eigenvalue),
            "expected_eigenvalue": opt(self.expected_eigenvalue),
            "eigenvalue_matches": self.eigenvalue_matches,
            "dimension": self.dimension,
            "scalar_vs_projection": opt(self.projection_scalar),
            "scalar_vs_character_sum": opt(self.character_sum_scalar),
            "values": [fraction_str(v) for v in self.values],
        }


def _collinear_scalar(v, w):
    """s with v = s w, or None."""
    s = None
    for a, b in zip(v, w):
        if b == 0:
            if a != 0:
                return None
            continue
        r = Fraction(a) / b
        if s is None:
            s = r
        elif r != s:
            return None
    return s


def verify_lift(G: FiniteGroup, lift: Lift, expected_eigenvalue: PolyQ | None = None,
                catalog: Catalog | None = None, report: EigenReport | None = None) -> LiftReport:
    """Check that the integrated lift is an h-eigenvector and locate it among the census projections."""
    v = integrate_lift(lift, G, catalog)
    if v.is_zero():
        raise NotEigenvector(f"lift {lift.name} integrates to zero at p={G.p}")
    hv = algebra(G).genus_operator(v)
    lam = _collinear_scalar(hv.values, v.values)
    if lam is None:
        nz = next(i for i, x in enumerate(v.values) if x)
        guess = hv.values[nz] / v.values[nz]
        residual = [a - guess * b for a, b in zip(hv.values, v.values)]
        raise NotEigenvector(f"lift {lift.name} is not an eigenvector of h at p={G.p}",
                             residual=[fraction_str(r) for r in residual])
    expected_poly = expected_eigenvalue if expected_eigenvalue is not None else lift.eigenvalue
    expected = Fraction(expected_poly(G.p)) if expected_poly is not None else None
    if report is None:
        _, report = eigen_census(G)
    dim = proj_scalar = char_scalar = None
    for lam_i, d, proj, csum in zip(report.eigenvalues, report.dimensions, report.projections,
                                    report.character_sums()):
        if lam_i == lam:
            dim = d
            proj_scalar = _collinear_scalar(v.values, proj.values)
            char_scalar = _collinear_scalar(v.values, csum.values)
    return LiftReport(lift.name, G.p, lam, expected, None if expected is None else lam == expected,
                      dim, proj_scalar, char_scalar, list(v.values))
