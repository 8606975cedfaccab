"""The Frobenius algebra of rational class functions on a finite group.

Everything is expressed in the basis of class indicators 1_C, with the
identity class first. Convolution goes through precomputed structure
constants; nothing here touches individual irreducible characters.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from . import kernels
from .errors import GroupMismatch, UsageError
from .groups import FiniteGroup
from .linalg import fraction_str, qarray, qzeros

_ALGEBRAS: dict[int, "ClassAlgebra"] = {}


class ClassFunction:
    """A rational-valued class function, stored as one value per conjugacy class."""

    __slots__ = ("group", "values")

    def __init__(self, group: FiniteGroup, values):
        values = tuple(Fraction(v) for v in values)
        if len(values) != group.classes.count:
            raise ValueError(f"expected {group.classes.count} class values, got {len(values)}")
        self.group = group
        self.values = values

    @classmethod
    def zero(cls, group):
        return cls(group, [0] * group.classes.count)

    @classmethod
    def constant(cls, group, c=1):
        return cls(group, [c] * group.classes.count)

    @classmethod
    def indicator(cls, group, classes):
        classes = set(classes)
        return cls(group, [1 if c in classes else 0 for c in range(group.classes.count)])

    @classmethod
    def from_element_values(cls, group, values):
        """Build from a per-element array, checking constancy on every class."""
        values = list(values)
        cls_of = group.classes.class_of
        out = []
        for c, rep in enumerate(group.classes.class_reps):
            v = values[rep]
            members = np.flatnonzero(cls_of == c)
            if any(values[m] != v for m in members):
                raise ValueError(f"values are not constant on class {c}")
            out.append(v)
        return cls(group, out)

    def at(self, element: int) -> Fraction:
        return self.values[self.group.classes.class_of[element]]

    def _check(self, other):
        if not isinstance(other, ClassFunction):
            return NotImplemented
        if other.group is not self.group:
            raise GroupMismatch("class functions live on different groups")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return ClassFunction(self.group, [a + b for a, b in zip(self.values, other.values)])

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return ClassFunction(self.group, [a - b for a, b in zip(self.values, other.values)])

    def __neg__(self):
        return ClassFunction(self.group, [-a for a in self.values])

    def __mul__(self, scalar):
        if isinstance(scalar, ClassFunction):
            return NotImplemented
        s = Fraction(scalar)
        return ClassFunction(self.group, [s * a for a in self.values])

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, ClassFunction):
            return NotImplemented
        return other.group is self.group and other.values == self.values

    def __hash__(self):
        return hash((id(self.group), self.values))

    def __repr__(self):
        vals = ", ".join(str(v) for v in self.values)
        return f"ClassFunction({self.group.name}: [{vals}])"

    def is_zero(self) -> bool:
        return not any(self.values)

    def to_json(self) -> dict:
        G = self.group
        return {
            "group": G.name,
            "values": [fraction_str(v) for v in self.values],
            "class_representatives": [
                [v for row in G.element(r) for v in row] for r in G.classes.class_reps
            ],
        }

    @classmethod
    def from_json(cls, group, data) -> "ClassFunction":
        if isinstance(data, str):
            data = json.loads(data)
        reps = data.get("class_representatives")
        if reps is not None:
            ours = [[v for row in group.element(r) for v in row] for r in group.classes.class_reps]
            if [list(r) for r in reps] != ours:
                raise GroupMismatch("class representatives do not match this group")
        return cls(group, [Fraction(v) for v in data["values"]])


def _int_vector(values):
    """Integer object vector and common denominator for a list of Fractions."""
    den = 1
    for v in values:
        den = den * v.denominator // np.gcd(den, v.denominator)
    ints = np.array([int(v * den) for v in values], dtype=object)
    return ints, den


class ClassAlgebra:
    """Cached per-group data: inverse classes, structure constants, commutator counts."""

    def __init__(self, group: FiniteGroup):
        self.group = group
        self.k = group.classes.count
        self.order = group.order

    @classmethod
    def of(cls, group: FiniteGroup) -> "ClassAlgebra":
        alg = _ALGEBRAS.get(id(group))
        if alg is None or alg.group is not group:
            alg = _ALGEBRAS[id(group)] = cls(group)
        return alg

    @cached_property
    def inverse_class(self) -> tuple[int, ...]:
        G = self.group
        return tuple(int(G.classes.class_of[G.inverse_table[r]]) for r in G.classes.class_reps)

    @cached_property
    def class_sizes(self) -> np.ndarray:
        return np.array(self.group.classes.class_sizes, dtype=np.int64)

    @cached_property
    def centralizers(self) -> np.ndarray:
        return np.array(self.group.classes.centralizer_orders, dtype=np.int64)

    @cached_property
    def structure_constants(self) -> np.ndarray:
        """N[C1, C2, C] = #{(x, y) in C1 x C2 : x y = c} for the representative c of C."""
        G = self.group
        k = self.k
        cls_of = G.classes.class_of
        N = np.zeros((k, k, k), dtype=np.int64)
        inv = G.inverse_table
        for c, rep in enumerate(G.classes.class_reps):
            y = G.products(inv, np.full(G.order, rep))
            np.add.at(N[:, :, c], (cls_of, cls_of[y]), 1)
        N.setflags(write=False)
        return N

    @cached_property
    def commutator_counts(self) -> np.ndarray:
        """f(C) = #{(A, B) : [A, B] = c}, one value per class."""
        G = self.group
        if G.mul_table is not None:
            per_element = kernels.commutator_counts(G.mul_table, G.inverse_table)
            return per_element[list(G.classes.class_reps)]
        return self.commutator_counts_by_centralizers()

    def commutator_counts_by_centralizers(self) -> np.ndarray:
        """Same counts via f(c) = sum over A of |Z(A)| [A^-1 c ~ A^-1]; O(|G| k)."""
        G = self.group
        cls_of = G.classes.class_of
        inv = G.inverse_table
        zA = self.centralizers[cls_of]
        inv_cls = cls_of[inv]
        out = np.zeros(self.k, dtype=np.int64)
        for c, rep in enumerate(G.classes.class_reps):
            moved = cls_of[G.products(inv, np.full(G.order, rep))]
            out[c] = int(zA[moved == inv_cls].sum())
        return out

    def multiplication_matrix(self, c: int) -> np.ndarray:
        """Integer matrix of a -> mu(a (x) 1_C) in the class basis."""
        return self.structure_constants[:, c, :].T

    @cached_property
    def genus_matrix(self) -> np.ndarray:
        """Integer matrix of h = mu o delta, computed as a -> mu(a (x) f)."""
        G = self.group
        f = self.commutator_counts
        cls_of = G.classes.class_of
        inv = G.inverse_table
        H = np.zeros((self.k, self.k), dtype=object)
        for c, rep in enumerate(G.classes.class_reps):
            partner = cls_of[G.products(inv, np.full(G.order, rep))]
            row = np.zeros(self.k, dtype=np.int64)
            np.add.at(row, cls_of, f[partner])
            H[c, :] = [int(v) for v in row]
        return H

    @cached_property
    def genus_matrix_via_comultiplication(self) -> np.ndarray:
        """mu o delta assembled from structure constants and the copairing."""
        total = np.zeros((self.k, self.k), dtype=np.int64)
        for c in range(self.k):
            left = self.multiplication_matrix(self.inverse_class[c])
            right = self.multiplication_matrix(c)
            total += self.centralizers[c] * (left @ right)
        return total.astype(object)

    # operations on ClassFunctions ------------------------------------------------

    def _own(self, *fs):
        for f in fs:
            if f.group is not self.group:
                raise GroupMismatch("class function belongs to a different group")

    @cached_property
    def _flat_constants(self) -> np.ndarray:
        return self.structure_constants.reshape(self.k, self.k * self.k)

    def convolve(self, a: ClassFunction, b: ClassFunction) -> ClassFunction:
        self._own(a, b)
        A, da = _int_vector(a.values)
        B, db = _int_vector(b.values)
        k = self.k
        bound = max(map(abs, A), default=0) * max(map(abs, B), default=0) * self.order
        if bound < 2**62:
            t = A.astype(np.int64) @ self._flat_constants
            out = B.astype(np.int64) @ t.reshape(k, k)
        else:
            t = A @ self._flat_constants.astype(object)
            out = B @ t.reshape(k, k)
        d = da * db
        return ClassFunction(self.group, [Fraction(int(v), d) for v in out])

    def pair(self, a: ClassFunction, b: ClassFunction) -> Fraction:
        self._own(a, b)
        total = Fraction(0)
        inv = self.inverse_class
        for c in range(self.k):
            if a.values[c] and b.values[inv[c]]:
                total += int(self.class_sizes[c]) * a.values[c] * b.values[inv[c]]
        return total / self.order

    def unit(self) -> ClassFunction:
        return ClassFunction.indicator(self.group, [0])

    def counit(self, a: ClassFunction) -> Fraction:
        self._own(a)
        return a.values[0] / self.order

    def gamma(self, c1: int, c2: int) -> Fraction:
        """Copairing coefficient of 1_{c1} (x) 1_{c2}: |Z(c1)| when c2 is the class of c1^-1."""
        if c2 == self.inverse_class[c1]:
            return Fraction(int(self.centralizers[c1]))
        return Fraction(0)

    def gamma_matrix(self) -> np.ndarray:
        return qarray([[self.gamma(i, j) for j in range(self.k)] for i in range(self.k)])

    def comultiply(self, a: ClassFunction) -> np.ndarray:
        """delta(a) = (mu (x) id)(a (x) gamma(1)) as a k x k matrix D, delta(a) = sum D[i,j] 1_i (x) 1_j."""
        self._own(a)
        A, da = _int_vector(a.values)
        # M[c, r] = coefficient of 1_r in mu(a (x) 1_c), times da
        M = np.tensordot(A, self.structure_constants.astype(object), axes=(0, 0))
        D = qzeros((self.k, self.k))
        for c in range(self.k):
            j = self.inverse_class[c]
            z = int(self.centralizers[c])
            for r in range(self.k):
                D[r, j] += Fraction(z * int(M[c, r]), da)
        return D

    def genus_operator(self, a: ClassFunction) -> ClassFunction:
        self._own(a)
        A, da = _int_vector(a.values)
        out = self.genus_matrix @ A
        return ClassFunction(self.group, [Fraction(int(v), da) for v in out])

    def commutator_function(self) -> ClassFunction:
        return ClassFunction(self.group, [int(v) for v in self.commutator_counts])


def algebra(group: FiniteGroup) -> ClassAlgebra:
    return ClassAlgebra.of(group)


def convolve(a: ClassFunction, b: ClassFunction) -> ClassFunction:
    if a.group is not b.group:
        raise GroupMismatch("class functions live on different groups")
    return algebra(a.group).convolve(a, b)


def pair(a: ClassFunction, b: ClassFunction) -> Fraction:
    if a.group is not b.group:
        raise GroupMismatch("class functions live on different groups")
    return algebra(a.group).pair(a, b)


def unit(group: FiniteGroup) -> ClassFunction:
    return algebra(group).unit()


def counit(a: ClassFunction) -> Fraction:
    return algebra(a.group).counit(a)


def gamma(group: FiniteGroup, c1: int, c2: int) -> Fraction:
    return algebra(group).gamma(c1, c2)


def comultiply(a: ClassFunction) -> np.ndarray:
    return algebra(a.group).comultiply(a)


def genus_operator(a: ClassFunction) -> ClassFunction:
    return algebra(a.group).genus_operator(a)


def apply_matrix(M, a: ClassFunction) -> ClassFunction:
    return ClassFunction(a.group, list(qarray(M) @ qarray(a.values)))


# axiom suite -----------------------------------------------------------------


@dataclass
class AxiomCheck:
    name: str
    passed: bool
    witness: str = ""


@dataclass
class AxiomReport:
    group: str
    checks: list

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self) -> dict:
        return {
            "group": self.group,
            "passed": self.passed,
            "checks": [{"name": c.name, "passed": c.passed, "witness": c.witness} for c in self.checks],
        }


def frobenius_axiom_suite(G: FiniteGroup) -> AxiomReport:
    """Check the Frobenius algebra laws exactly on the class-indicator basis."""
    alg = algebra(G)
    k = alg.k
    N = alg.structure_constants
    basis = [ClassFunction.indicator(G, [c]) for c in range(k)]
    checks = []

    def record(name, failures):
        checks.append(AxiomCheck(name, not failures, "; ".join(failures[:3])))

    fails = [f"{i},{j}" for i in range(k) for j in range(k) if not np.array_equal(N[i, j], N[j, i])]
    record("commutativity", fails)

    # (1_i * 1_j) * 1_l versus 1_i * (1_j * 1_l), coefficients of 1_m
    left = np.einsum("ijd,dlm->ijlm", N, N)
    right = np.einsum("jld,idm->ijlm", N, N)
    bad = np.argwhere(left != right)
    record("associativity", [str(tuple(b)) for b in bad[:3]])

    pairing = qarray([[alg.pair(a, b) for b in basis] for a in basis])
    fails = [
        f"beta({i},{j}) != epsilon(mu({i},{j}))"
        for i in range(k)
        for j in range(k)
        if pairing[i, j] != Fraction(int(N[i, j, 0]), G.order)
    ]
    record("pairing_is_counit_of_product", fails)

    # |G| * pairing is an integer matrix
    S = np.zeros((k, k), dtype=np.int64)
    for i in range(k):
        S[i, alg.inverse_class[i]] = alg.class_sizes[i]
    if any(pairing[i, j] * G.order != S[i, j] for i in range(k) for j in range(k)):
        raise AssertionError("pairing matrix disagrees with its closed form")
    lhs = np.einsum("ijd,dl->ijl", N, S)
    rhs = np.einsum("id,jld->ijl", S, N)
    record("pairing_associativity", [str(tuple(b)) for b in np.argwhere(lhs != rhs)[:3]])

    eta = alg.unit()
    record("unit_law", [str(i) for i, b in enumerate(basis) if alg.convolve(eta, b) != b])

    gam = alg.gamma_matrix()
    fails = []
    for i, a in enumerate(basis):
        left_snake = [sum(pairing[i, r] * gam[r, s] for r in range(k)) for s in range(k)]
        right_snake = [sum(gam[s, r] * pairing[r, i] for r in range(k)) for s in range(k)]
        if list(left_snake) != list(a.values) or list(right_snake) != list(a.values):
            fails.append(str(i))
    record("snake_identities", fails)

    fails = []
    eps_row = [alg.counit(b) for b in basis]
    for i, a in enumerate(basis):
        D = alg.comultiply(a)
        first = [sum(eps_row[r] * D[r, s] for r in range(k)) for s in range(k)]
        second = [sum(D[s, r] * eps_row[r] for r in range(k)) for s in range(k)]
        if first != list(a.values) or second != list(a.values):
            fails.append(str(i))
    record("counit_law", fails)

    via_delta = alg.genus_matrix_via_comultiplication
    f = alg.commutator_function()
    h_eta = apply_matrix(via_delta, eta)
    fails = [] if h_eta == f else ["(mu o delta)(eta) differs from the commutator count"]
    lemma = qzeros((k, k))
    for j, b in enumerate(basis):
        col = alg.convolve(b, h_eta)
        for i in range(k):
            lemma[i, j] = col.values[i]
    if not np.array_equal(lemma, qarray(via_delta)):
        fails.append("mu o delta != mu o (id (x) f)")
    if not np.array_equal(qarray(alg.genus_matrix), qarray(via_delta)):
        fails.append("direct genus matrix differs")
    record("genus_lemma", fails)

    return AxiomReport(G.name, checks)
