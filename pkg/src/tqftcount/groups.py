"""Finite matrix groups over prime fields, built from declarative family specs."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from pathlib import Path

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from . import kernels
from .errors import NotAGroup, TooLarge, UsageError
from .polynomials import IntPoly

log = logging.getLogger(__name__)

MAX_PRIME = 101
ORDER_CAP = 10**6
ENUMERATION_CAP = 5 * 10**7
TABLE_LIMIT = 4096
EXHAUSTIVE_AXIOMS_BELOW = 512
SAMPLED_TRIPLES = 10_000


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


@lru_cache(maxsize=None)
def primitive_root(p: int) -> int:
    if p == 2:
        return 1
    phi = p - 1
    factors = [d for d in range(2, phi + 1) if phi % d == 0 and is_prime(d)]
    for g in range(2, p):
        if all(pow(g, phi // d, p) != 1 for d in factors):
            return g
    raise ValueError(f"no primitive root mod {p}")


@dataclass(frozen=True)
class FpElement:
    """An element of the prime field F_p."""

    value: int
    p: int

    def __post_init__(self):
        object.__setattr__(self, "value", self.value % self.p)

    def _coerce(self, other):
        if isinstance(other, FpElement):
            if other.p != self.p:
                raise ValueError("elements of different fields")
            return other.value
        return int(other)

    def __add__(self, other):
        return FpElement(self.value + self._coerce(other), self.p)

    __radd__ = __add__

    def __sub__(self, other):
        return FpElement(self.value - self._coerce(other), self.p)

    def __rsub__(self, other):
        return FpElement(self._coerce(other) - self.value, self.p)

    def __mul__(self, other):
        return FpElement(self.value * self._coerce(other), self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return FpElement(-self.value, self.p)

    def inverse(self) -> "FpElement":
        if self.value == 0:
            raise ZeroDivisionError("0 has no inverse in F_p")
        return FpElement(pow(self.value, -1, self.p), self.p)

    def __truediv__(self, other):
        return self * FpElement(self._coerce(other), self.p).inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return FpElement(pow(self.value, k, self.p), self.p)

    def __int__(self):
        return self.value


@dataclass(frozen=True)
class Constraint:
    poly: IntPoly
    rel: str  # "eq" or "neq"

    @property
    def text(self) -> str:
        return str(self.poly)

    def mask(self, values, p):
        residues = self.poly.evaluate_mod(values, p)
        return residues == 0 if self.rel == "eq" else residues != 0


def parse_constraints(items, variables):
    out = []
    for item in items:
        rel = item.get("rel", "eq")
        if rel not in ("eq", "neq"):
            raise UsageError(f"constraint relation must be 'eq' or 'neq', got {rel!r}")
        out.append(Constraint(IntPoly.parse(item["poly"], variables), rel))
    return tuple(out)


@dataclass(frozen=True)
class FamilySpec:
    """A matrix pattern whose cells are constants or variables, cut out by constraints."""

    name: str
    dim: int
    pattern: tuple
    constraints: tuple = ()
    generators: tuple = ()
    odd_only: bool = False
    description: str = ""

    @cached_property
    def variables(self) -> tuple[str, ...]:
        seen = []
        for row in self.pattern:
            for cell in row:
                if isinstance(cell, str) and cell not in seen:
                    seen.append(cell)
        return tuple(seen)

    @classmethod
    def from_json(cls, data) -> "FamilySpec":
        if isinstance(data, (str, Path)):
            data = json.loads(Path(data).read_text())
        try:
            dim = int(data["dim"])
            pattern = []
            for row in data["pattern"]:
                cells = []
                for cell in row:
                    if isinstance(cell, str) and cell.lstrip("-").isdigit():
                        cell = int(cell)
                    cells.append(cell)
                pattern.append(tuple(cells))
            pattern = tuple(pattern)
        except (KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"malformed family spec: {exc}") from None
        if len(pattern) != dim or any(len(row) != dim for row in pattern):
            raise UsageError(f"pattern of family {data.get('name')!r} is not {dim}x{dim}")
        spec = cls(
            name=data.get("name", "custom"),
            dim=dim,
            pattern=pattern,
            generators=tuple(dict(g) for g in data.get("generators", [])),
            odd_only=bool(data.get("odd_only", False)),
            description=data.get("description", ""),
        )
        constraints = parse_constraints(data.get("constraints", []), spec.variables)
        return cls(
            name=spec.name,
            dim=dim,
            pattern=pattern,
            constraints=constraints,
            generators=spec.generators,
            odd_only=spec.odd_only,
            description=spec.description,
        )

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "dim": self.dim,
            "pattern": [list(row) for row in self.pattern],
            "constraints": [{"poly": c.text, "rel": c.rel} for c in self.constraints],
            "generators": [dict(g) for g in self.generators],
            "odd_only": self.odd_only,
            "description": self.description,
        }

    def free_coordinates(self) -> int:
        return len(self.variables)

    def matrices_for(self, values, p) -> np.ndarray:
        """Fill the pattern for each row of variable values; returns ``(N, n, n)``."""
        values = np.asarray(values, dtype=np.int64)
        n = values.shape[0]
        out = np.zeros((n, self.dim, self.dim), dtype=np.int64)
        index = {v: j for j, v in enumerate(self.variables)}
        for r, row in enumerate(self.pattern):
            for c, cell in enumerate(row):
                if isinstance(cell, str):
                    out[:, r, c] = values[:, index[cell]] % p
                else:
                    out[:, r, c] = cell % p
        return out


def coordinate_grid(m: int, p: int) -> np.ndarray:
    """All points of F_p^m as rows, in lexicographic order."""
    if p**m > ENUMERATION_CAP:
        raise TooLarge(f"{p}^{m} candidate points exceed the enumeration cap {ENUMERATION_CAP}")
    if m == 0:
        return np.zeros((1, 0), dtype=np.int64)
    flat = np.arange(p**m, dtype=np.int64)
    cols = np.unravel_index(flat, (p,) * m)
    return np.stack(cols, axis=1).astype(np.int64)


def matmul_mod(a, b, p):
    return np.einsum("...ij,...jk->...ik", a, b) % p


def inverse_mod(mats, p) -> np.ndarray:
    """Vectorised Gauss-Jordan inversion of a stack of matrices over F_p."""
    mats = np.array(mats, dtype=np.int64) % p
    count, n, _ = mats.shape
    aug = np.concatenate([mats, np.broadcast_to(np.eye(n, dtype=np.int64), mats.shape)], axis=2)
    rows = np.arange(count)
    for col in range(n):
        candidates = aug[:, col:, col] != 0
        if not candidates.any(axis=1).all():
            raise NotAGroup("singular matrix encountered")
        pivot = col + np.argmax(candidates, axis=1)
        swap = aug[rows, pivot].copy()
        aug[rows, pivot] = aug[:, col]
        aug[:, col] = swap
        inv_pivot = np.array([pow(int(v), -1, p) for v in aug[:, col, col]], dtype=np.int64)
        aug[:, col] = (aug[:, col] * inv_pivot[:, None]) % p
        for r in range(n):
            if r == col:
                continue
            factor = aug[:, r, col][:, None]
            aug[:, r] = (aug[:, r] - factor * aug[:, col]) % p
    return aug[:, :, n:]


@dataclass(frozen=True)
class ConjugacyData:
    class_of: np.ndarray
    class_reps: tuple[int, ...]
    class_sizes: tuple[int, ...]
    centralizer_orders: tuple[int, ...]

    @property
    def count(self) -> int:
        return len(self.class_reps)

    def members(self, c: int) -> np.ndarray:
        return np.flatnonzero(self.class_of == c)


class FiniteGroup:
    """A finite group of matrices over F_p, elements indexed 0..order-1 with 0 the identity.

    Immutable after construction. The multiplication table is materialised
    only for order <= ``table_limit``; larger groups multiply matrices on
    demand and look results up in a sorted key index.
    """

    def __init__(self, matrices, p: int, name: str = "group", generators_hint=None,
                 table_limit: int = TABLE_LIMIT, spec: FamilySpec | None = None):
        matrices = np.asarray(matrices, dtype=np.int64) % p
        if matrices.ndim != 3 or matrices.shape[1] != matrices.shape[2]:
            raise ValueError("expected a stack of square matrices")
        self.p = p
        self.name = name
        self.spec = spec
        self.dim = matrices.shape[1]
        self.order = matrices.shape[0]
        eye = np.eye(self.dim, dtype=np.int64)
        ident = np.flatnonzero((matrices == eye).all(axis=(1, 2)))
        if len(ident) != 1:
            raise NotAGroup(f"{name}: identity matrix not present exactly once")
        if ident[0] != 0:
            perm = np.concatenate([ident, np.delete(np.arange(self.order), ident[0])])
            matrices = matrices[perm]
        self.matrices = matrices
        self.matrices.setflags(write=False)
        self.identity_index = 0
        self._build_index()
        if (self.lookup(matrices) != np.arange(self.order)).any():
            raise NotAGroup(f"{name}: duplicate elements")
        self.mul_table = None
        self._generators = self._closure_generators()
        if self.order <= table_limit:
            self.mul_table = self._build_table()
            self.inverse_table = np.argmax(self.mul_table == 0, axis=1).astype(np.int32)
        else:
            inv = self.lookup(inverse_mod(self.matrices, p))
            if (inv < 0).any():
                raise NotAGroup(f"{name}: not closed under inversion")
            self.inverse_table = inv.astype(np.int32)
        self.inverse_table.setflags(write=False)
        self._check_axioms()
        self.generators_hint = self._resolve_hint(generators_hint)
        self.classes = conjugacy_classes(self)

    def __repr__(self):
        return f"FiniteGroup({self.name}, p={self.p}, order={self.order})"

    # element index <-> matrix ---------------------------------------------

    def _build_index(self):
        m = self.matrices.reshape(self.order, -1)
        self._vary = np.flatnonzero((m != m[0]).any(axis=0)) if self.order > 1 else np.array([], dtype=np.int64)
        self._fixed = np.setdiff1d(np.arange(m.shape[1]), self._vary)
        self._fixed_values = m[0, self._fixed]
        if len(self._vary) * np.log2(max(self.p, 2)) > 62:
            raise TooLarge("too many varying matrix entries to index")
        self._weights = (self.p ** np.arange(len(self._vary), dtype=np.int64)).astype(np.int64)
        keys = m[:, self._vary] @ self._weights if len(self._vary) else np.zeros(self.order, dtype=np.int64)
        self._sort = np.argsort(keys, kind="stable")
        self._sorted_keys = keys[self._sort]

    def lookup(self, mats) -> np.ndarray:
        """Element indices of the given matrices, -1 where a matrix is not in the group."""
        mats = np.asarray(mats, dtype=np.int64) % self.p
        flat = mats.reshape(mats.shape[0], -1)
        ok = (flat[:, self._fixed] == self._fixed_values).all(axis=1)
        keys = flat[:, self._vary] @ self._weights if len(self._vary) else np.zeros(len(flat), dtype=np.int64)
        pos = np.searchsorted(self._sorted_keys, keys)
        pos = np.minimum(pos, self.order - 1)
        found = ok & (self._sorted_keys[pos] == keys)
        return np.where(found, self._sort[pos], -1)

    def index_of(self, matrix) -> int:
        idx = int(self.lookup(np.asarray(matrix)[None])[0])
        if idx < 0:
            raise KeyError("matrix is not an element of the group")
        return idx

    def element(self, i: int) -> tuple:
        return tuple(tuple(int(v) for v in row) for row in self.matrices[i])

    # multiplication ---------------------------------------------------------

    def _product_lookup(self, a, b):
        prod = matmul_mod(self.matrices[a], self.matrices[b], self.p)
        idx = self.lookup(prod)
        if (idx < 0).any():
            raise NotAGroup(f"{self.name}: not closed under multiplication")
        return idx

    def _build_table(self):
        table = np.empty((self.order, self.order), dtype=np.int32)
        cols = np.arange(self.order)
        for i in range(self.order):
            table[i] = self._product_lookup(np.full(self.order, i), cols)
        table.setflags(write=False)
        return table

    def products(self, a, b) -> np.ndarray:
        """Vectorised products a[i] * b[i]."""
        a = np.asarray(a)
        b = np.asarray(b)
        if self.mul_table is not None:
            return self.mul_table[a, b]
        a, b = np.broadcast_arrays(a, b)
        return self._product_lookup(a.ravel(), b.ravel()).reshape(a.shape)

    def mul(self, a: int, b: int) -> int:
        if self.mul_table is not None:
            return int(self.mul_table[a, b])
        return self._mul_cached(a, b)

    @lru_cache(maxsize=1 << 16)
    def _mul_cached(self, a, b):
        return int(self._product_lookup(np.array([a]), np.array([b]))[0])

    def inv(self, a: int) -> int:
        return int(self.inverse_table[a])

    def conjugation_permutation(self, s: int) -> np.ndarray:
        """x -> s x s^-1 for every element x."""
        everything = np.arange(self.order)
        return self.products(self.products(np.full(self.order, s), everything),
                             np.full(self.order, self.inverse_table[s]))

    # validation ---------------------------------------------------------------

    def _closure_generators(self):
        """Greedy generating set; verifies closure of the element set along the way."""
        gens = []
        reached = np.zeros(self.order, dtype=bool)
        reached[0] = True
        for candidate in range(1, self.order):
            if reached[candidate]:
                continue
            gens.append(candidate)
            frontier = np.flatnonzero(reached)
            while len(frontier):
                nxt = []
                for g in gens:
                    prod = self._product_lookup(frontier, np.full(len(frontier), g))
                    fresh = prod[~reached[prod]]
                    reached[fresh] = True
                    nxt.append(fresh)
                frontier = np.unique(np.concatenate(nxt))
            if reached.all():
                break
        return tuple(gens)

    def _check_axioms(self):
        if self.mul_table is not None and self.order < EXHAUSTIVE_AXIOMS_BELOW:
            t = self.mul_table
            for a in range(self.order):
                if not np.array_equal(t[t[a], :], t[a][t]):
                    raise NotAGroup(f"{self.name}: associativity fails at a={a}")
        else:
            rng = np.random.default_rng(0)
            a, b, c = rng.integers(0, self.order, size=(3, SAMPLED_TRIPLES))
            if not np.array_equal(self.products(self.products(a, b), c),
                                  self.products(a, self.products(b, c))):
                raise NotAGroup(f"{self.name}: associativity fails on sampled triples")
        prod = self.products(np.arange(self.order), self.inverse_table)
        if (prod != 0).any():
            raise NotAGroup(f"{self.name}: inverse table is wrong")

    def _resolve_hint(self, hint):
        if hint is None:
            return None
        hint = np.asarray(hint, dtype=np.int64)
        if hint.ndim == 3:
            hint = self.lookup(hint)
            if (hint < 0).any():
                log.warning("%s: generators hint outside the group; ignoring it", self.name)
                return None
        hint = tuple(int(h) for h in hint)
        reached = np.zeros(self.order, dtype=bool)
        reached[0] = True
        frontier = np.array([0])
        while len(frontier):
            nxt = [self.products(frontier, np.full(len(frontier), g)) for g in hint]
            cand = np.unique(np.concatenate(nxt)) if nxt else np.array([], dtype=int)
            frontier = cand[~reached[cand]]
            reached[frontier] = True
        if not reached.all():
            log.warning("%s: generators hint does not generate the group; ignoring it", self.name)
            return None
        return hint

    @property
    def generators(self) -> tuple[int, ...]:
        return self.generators_hint or self._generators

    def is_abelian(self) -> bool:
        return all(self.classes.class_sizes[c] == 1 for c in range(self.classes.count))


def commutator(G: FiniteGroup, a: int, b: int) -> int:
    """[a, b] = a b a^-1 b^-1."""
    return G.mul(G.mul(G.mul(a, b), G.inv(a)), G.inv(b))


def _renumber(labels) -> np.ndarray:
    first = {}
    out = np.empty(len(labels), dtype=np.int64)
    for i, lab in enumerate(labels):
        out[i] = first.setdefault(int(lab), len(first))
    return out


def conjugacy_classes(G: FiniteGroup, exhaustive: bool = False) -> ConjugacyData:
    """Partition G into classes by orbit closure under conjugation.

    Conjugating elements: the generators hint when present, otherwise all
    elements for small groups, otherwise a computed generating set.
    ``exhaustive=True`` forces conjugation by every element.
    """
    if exhaustive:
        conj = np.arange(G.order)
    elif G.generators_hint is not None:
        conj = np.array(G.generators_hint)
    elif G.order <= TABLE_LIMIT:
        conj = np.arange(G.order)
    else:
        conj = np.array(G._generators)
    if G.mul_table is not None:
        labels = kernels.conjugation_orbits(G.mul_table, G.inverse_table, conj.astype(np.int32))
    else:
        src = np.tile(np.arange(G.order), len(conj))
        dst = np.concatenate([G.conjugation_permutation(int(s)) for s in conj])
        graph = coo_matrix((np.ones(len(src), dtype=np.int8), (src, dst)), shape=(G.order, G.order))
        _, labels = connected_components(graph, directed=True, connection="weak")
    class_of = _renumber(labels)
    k = int(class_of.max()) + 1
    sizes = np.bincount(class_of, minlength=k)
    reps = [int(np.argmax(class_of == c)) for c in range(k)]
    class_of.setflags(write=False)
    return ConjugacyData(
        class_of=class_of,
        class_reps=tuple(reps),
        class_sizes=tuple(int(s) for s in sizes),
        centralizer_orders=tuple(G.order // int(s) for s in sizes),
    )


def _hint_matrices(spec: FamilySpec, p: int):
    if not spec.generators:
        return None
    rows = []
    for assignment in spec.generators:
        row = []
        for v in spec.variables:
            val = assignment.get(v, 0)
            row.append(primitive_root(p) if val == "prim" else int(val))
        rows.append(row)
    return spec.matrices_for(np.array(rows, dtype=np.int64).reshape(len(rows), -1), p)


def instantiate_family(spec: FamilySpec, p: int, *, max_prime: int = MAX_PRIME,
                       order_cap: int = ORDER_CAP, table_limit: int = TABLE_LIMIT) -> FiniteGroup:
    """All matrices over F_p matching ``spec``'s pattern and constraints, as a group."""
    if not is_prime(p):
        raise UsageError(f"{p} is not prime")
    if p > max_prime:
        raise UsageError(f"prime {p} exceeds the configured bound {max_prime}")
    if spec.odd_only and p == 2:
        raise UsageError(f"family {spec.name} requires an odd prime")
    grid = coordinate_grid(len(spec.variables), p)
    keep = np.ones(len(grid), dtype=bool)
    for con in spec.constraints:
        keep &= con.mask(grid, p)
    points = grid[keep]
    if len(points) > order_cap:
        raise TooLarge(f"{spec.name}(F_{p}) has {len(points)} elements, cap is {order_cap}")
    if len(points) == 0:
        raise NotAGroup(f"{spec.name}(F_{p}) is empty")
    mats = spec.matrices_for(points, p)
    return FiniteGroup(mats, p, name=f"{spec.name}(F_{p})", table_limit=table_limit,
                       spec=spec, generators_hint=_hint_matrices(spec, p))
