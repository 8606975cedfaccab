"""Finite groupoids stored flat, iso-comma fiber products and span quantization.

Morphisms are integers ``0..n_morphisms-1`` with ``src``/``tgt`` arrays;
composition ``compose(m2, m1)`` means "m1 then m2". Composition is computed
on demand by a vectorized rule so that large fiber products need not
materialize their composition tables.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Callable

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .errors import NotAFunctor, NotAnAction, NotIsoInvariant, SizeCap
from .linalg import qzeros

FIBER_CAP = 2 * 10**6
CHECK_PAIRS_CAP = 200_000


class FiniteGroupoid:
    def __init__(self, n_objects: int, src, tgt, identity, inverse,
                 compose_many: Callable, labels=None, name: str = "groupoid"):
        self.n_objects = int(n_objects)
        self.src = np.asarray(src, dtype=np.int64)
        self.tgt = np.asarray(tgt, dtype=np.int64)
        self.identity = np.asarray(identity, dtype=np.int64)
        self.inverse = np.asarray(inverse, dtype=np.int64)
        self._compose_many = compose_many
        self.labels = labels
        self.name = name
        for arr in (self.src, self.tgt, self.identity, self.inverse):
            arr.setflags(write=False)

    def __repr__(self):
        return f"FiniteGroupoid({self.name}, objects={self.n_objects}, morphisms={self.n_morphisms})"

    @property
    def n_morphisms(self) -> int:
        return len(self.src)

    def compose(self, m2: int, m1: int) -> int:
        if self.tgt[m1] != self.src[m2]:
            raise ValueError(f"morphisms {m2} and {m1} are not composable")
        return int(self._compose_many(np.array([m2]), np.array([m1]))[0])

    def compose_many(self, m2, m1) -> np.ndarray:
        return np.asarray(self._compose_many(np.asarray(m2, dtype=np.int64), np.asarray(m1, dtype=np.int64)))

    @cached_property
    def components(self) -> np.ndarray:
        """Iso-class label of every object, classes numbered by smallest object."""
        n = self.n_objects
        graph = coo_matrix((np.ones(self.n_morphisms, dtype=np.int8), (self.src, self.tgt)), shape=(n, n))
        _, labels = connected_components(graph, directed=True, connection="weak")
        first = {}
        out = np.empty(n, dtype=np.int64)
        for i, lab in enumerate(labels):
            out[i] = first.setdefault(lab, len(first))
        out.setflags(write=False)
        return out

    @cached_property
    def iso_reps(self) -> tuple[int, ...]:
        reps = {}
        for i, c in enumerate(self.components):
            reps.setdefault(int(c), i)
        return tuple(reps[c] for c in range(len(reps)))

    @property
    def n_iso_classes(self) -> int:
        return len(self.iso_reps)

    @cached_property
    def aut_orders(self) -> np.ndarray:
        loops = self.src[self.src == self.tgt]
        return np.bincount(loops, minlength=self.n_objects)

    @cached_property
    def out_degree(self) -> np.ndarray:
        return np.bincount(self.src, minlength=self.n_objects)

    def morphisms_between(self, x: int, y: int) -> np.ndarray:
        return np.flatnonzero((self.src == x) & (self.tgt == y))

    def cardinality(self) -> Fraction:
        """Sum over iso classes of 1/|Aut|."""
        return sum((Fraction(1, int(self.aut_orders[r])) for r in self.iso_reps), Fraction(0))

    def composable_pairs(self):
        """Arrays (m2, m1) over every pair with tgt(m1) = src(m2)."""
        order = np.argsort(self.src, kind="stable")
        starts = np.searchsorted(self.src[order], np.arange(self.n_objects + 1))
        counts = np.diff(starts)[self.tgt]
        m1 = np.repeat(np.arange(self.n_morphisms), counts)
        offsets = np.arange(len(m1)) - np.repeat(np.cumsum(counts) - counts, counts)
        m2 = order[starts[self.tgt[m1]] + offsets]
        return m2, m1

    def check_axioms(self, max_pairs: int = CHECK_PAIRS_CAP) -> None:
        ids = self.identity
        if (self.src[ids] != np.arange(self.n_objects)).any() or (self.tgt[ids] != np.arange(self.n_objects)).any():
            raise ValueError("identity morphisms have wrong endpoints")
        m = np.arange(self.n_morphisms)
        if (self.compose_many(ids[self.tgt], m) != m).any() or (self.compose_many(m, ids[self.src]) != m).any():
            raise ValueError("identity law fails")
        inv = self.inverse
        if (self.compose_many(inv, m) != ids[self.src]).any() or (self.compose_many(m, inv) != ids[self.tgt]).any():
            raise ValueError("inverse law fails")
        m2, m1 = self.composable_pairs()
        if len(m1) > max_pairs:
            pick = np.random.default_rng(0).choice(len(m1), max_pairs, replace=False)
            m2, m1 = m2[pick], m1[pick]
        c = self.compose_many(m2, m1)
        if (self.src[c] != self.src[m1]).any() or (self.tgt[c] != self.tgt[m2]).any():
            raise ValueError("composite has wrong endpoints")
        # associativity: (m3 m2) m1 = m3 (m2 m1) with m3 = inverse of the composite
        m3 = inv[c]
        if (self.compose_many(self.compose_many(m3, m2), m1) != self.compose_many(m3, c)).any():
            raise ValueError("associativity fails")


@dataclass(frozen=True)
class GroupoidFunctor:
    source: FiniteGroupoid
    target: FiniteGroupoid
    obj_map: np.ndarray
    mor_map: np.ndarray

    @classmethod
    def build(cls, source, target, obj_map, mor_map, validate: bool = True) -> "GroupoidFunctor":
        F = cls(source, target, np.asarray(obj_map, dtype=np.int64), np.asarray(mor_map, dtype=np.int64))
        if validate:
            F.validate()
        return F

    def validate(self, max_pairs: int = CHECK_PAIRS_CAP) -> None:
        S, T = self.source, self.target
        if len(self.obj_map) != S.n_objects or len(self.mor_map) != S.n_morphisms:
            raise NotAFunctor("object or morphism map has the wrong length")
        mm = self.mor_map
        if (T.src[mm] != self.obj_map[S.src]).any() or (T.tgt[mm] != self.obj_map[S.tgt]).any():
            raise NotAFunctor("sources or targets not preserved")
        if (mm[S.identity] != T.identity[self.obj_map]).any():
            raise NotAFunctor("identities not preserved")
        m2, m1 = S.composable_pairs()
        if len(m1) > max_pairs:
            pick = np.random.default_rng(0).choice(len(m1), max_pairs, replace=False)
            m2, m1 = m2[pick], m1[pick]
        if (mm[S.compose_many(m2, m1)] != T.compose_many(mm[m2], mm[m1])).any():
            raise NotAFunctor("composition not preserved")

    def then(self, other: "GroupoidFunctor") -> "GroupoidFunctor":
        """``other`` after ``self``."""
        if other.source is not self.target:
            raise ValueError("functors are not composable")
        return GroupoidFunctor(self.source, other.target, other.obj_map[self.obj_map], other.mor_map[self.mor_map])


class IsoInvariantFunction:
    __slots__ = ("groupoid", "values")

    def __init__(self, groupoid: FiniteGroupoid, values, check: bool = True):
        vals = np.empty(groupoid.n_objects, dtype=object)
        vals[:] = [Fraction(v) for v in values]
        if check:
            comp = groupoid.components
            reps = np.array(groupoid.iso_reps)
            bad = np.flatnonzero(vals != vals[reps[comp]])
            if len(bad):
                raise NotIsoInvariant(f"values differ on isomorphic objects (object {int(bad[0])})")
        self.groupoid = groupoid
        self.values = vals

    @classmethod
    def from_classes(cls, groupoid: FiniteGroupoid, class_values) -> "IsoInvariantFunction":
        class_values = list(class_values)
        return cls(groupoid, [class_values[c] for c in groupoid.components], check=False)

    @classmethod
    def constant(cls, groupoid, c=1):
        return cls(groupoid, [c] * groupoid.n_objects, check=False)

    def on_classes(self) -> list[Fraction]:
        return [self.values[r] for r in self.groupoid.iso_reps]

    def __eq__(self, other):
        return isinstance(other, IsoInvariantFunction) and self.groupoid is other.groupoid and bool(
            (self.values == other.values).all())

    def __repr__(self):
        return f"IsoInvariantFunction({[str(v) for v in self.on_classes()]})"


# groups given by tables -------------------------------------------------

@dataclass(frozen=True)
class TableGroup:
    """A finite group by multiplication and inverse tables, identity at index 0."""

    mul: np.ndarray
    inv: np.ndarray

    @property
    def order(self) -> int:
        return len(self.inv)

    @classmethod
    def of(cls, G) -> "TableGroup":
        if isinstance(G, TableGroup):
            return G
        if G.mul_table is None:
            raise SizeCap(f"{G.name} has no multiplication table")
        return cls(np.asarray(G.mul_table, dtype=np.int64), np.asarray(G.inverse_table, dtype=np.int64))

    @classmethod
    def trivial(cls) -> "TableGroup":
        return cls(np.zeros((1, 1), dtype=np.int64), np.zeros(1, dtype=np.int64))

    @classmethod
    def cyclic(cls, n: int) -> "TableGroup":
        a = np.arange(n)
        return cls((a[:, None] + a[None, :]) % n, (-a) % n)

    def power(self, r: int) -> "TableGroup":
        out = TableGroup.trivial()
        for _ in range(r):
            out = out.product(self)
        return out

    def product(self, other: "TableGroup") -> "TableGroup":
        n1, n2 = self.order, other.order
        a = np.arange(n1 * n2)
        x, y = a // n2, a % n2
        mul = self.mul[x[:, None], x[None, :]] * n2 + other.mul[y[:, None], y[None, :]]
        return TableGroup(mul, self.inv[x] * n2 + other.inv[y])

    def conjugation_action(self) -> np.ndarray:
        g = np.arange(self.order)
        return self.mul[self.mul[g[:, None], g[None, :]], self.inv[g][:, None]]


def action_groupoid(G, n_points: int, action, name: str = "action") -> FiniteGroupoid:
    """[X/G] for X = {0..n_points-1} with ``action[g, x] = g.x``.

    Morphism (g, x): x -> g.x has index g * |X| + x.
    """
    H = TableGroup.of(G)
    act = np.asarray(action, dtype=np.int64)
    m, n = n_points, H.order
    if act.shape != (n, m) or (m and ((act < 0) | (act >= m)).any()):
        raise NotAnAction("action array has the wrong shape or range")
    if (act[0] != np.arange(m)).any():
        raise NotAnAction("identity does not act trivially")
    # (gh).x == g.(h.x)
    gh = act[H.mul.reshape(-1)].reshape(n, n, m)
    g_hx = act[np.arange(n)[:, None, None], act[None, :, :]]
    if (gh != g_hx).any():
        raise NotAnAction("action is not compatible with the group law")
    g = np.repeat(np.arange(n), m)
    x = np.tile(np.arange(m), n)
    src, tgt = x, act[g, x]
    inverse = H.inv[g] * m + tgt

    def compose_many(m2, m1):
        return H.mul[m2 // m, m1 // m] * m + m1 % m

    gpd = FiniteGroupoid(m, src, tgt, np.arange(m), inverse, compose_many, name=name)
    gpd.acting_group = H
    gpd.action = act
    return gpd


def point_groupoid() -> FiniteGroupoid:
    return action_groupoid(TableGroup.trivial(), 1, np.zeros((1, 1), dtype=np.int64), name="point")


def classifying_groupoid(G) -> FiniteGroupoid:
    """[*/G]."""
    H = TableGroup.of(G)
    return action_groupoid(H, 1, np.zeros((H.order, 1), dtype=np.int64), name="BG")


def conjugation_groupoid(G, copies: int = 1) -> FiniteGroupoid:
    """[G^r/G^r]: r independent copies of G acting on itself by conjugation."""
    H = TableGroup.of(G).power(copies)
    return action_groupoid(H, H.order, H.conjugation_action(), name=f"[G^{copies}/G^{copies}]")


def equivariant_functor(source: FiniteGroupoid, target: FiniteGroupoid, hom, point_map,
                        validate: bool = True) -> GroupoidFunctor:
    """Functor between action groupoids from a group homomorphism and an equivariant map."""
    hom = np.asarray(hom, dtype=np.int64)
    point_map = np.asarray(point_map, dtype=np.int64)
    m = source.n_objects
    g = np.arange(source.n_morphisms) // m
    x = np.arange(source.n_morphisms) % m
    mor = hom[g] * target.n_objects + point_map[x]
    return GroupoidFunctor.build(source, target, point_map, mor, validate=validate)


def terminal_functor(gpd: FiniteGroupoid, point: FiniteGroupoid | None = None) -> GroupoidFunctor:
    point = point or point_groupoid()
    return GroupoidFunctor(gpd, point, np.zeros(gpd.n_objects, dtype=np.int64),
                           np.zeros(gpd.n_morphisms, dtype=np.int64))


def identity_functor(gpd: FiniteGroupoid) -> GroupoidFunctor:
    return GroupoidFunctor(gpd, gpd, np.arange(gpd.n_objects), np.arange(gpd.n_morphisms))


def product(A: FiniteGroupoid, B: FiniteGroupoid) -> FiniteGroupoid:
    na, nb = A.n_morphisms, B.n_morphisms
    oa, ob = A.n_objects, B.n_objects
    idx = np.arange(na * nb)
    ma, mb = idx // nb, idx % nb
    src = A.src[ma] * ob + B.src[mb]
    tgt = A.tgt[ma] * ob + B.tgt[mb]
    o = np.arange(oa * ob)
    identity = A.identity[o // ob] * nb + B.identity[o % ob]
    inverse = A.inverse[ma] * nb + B.inverse[mb]

    def compose_many(m2, m1):
        return A.compose_many(m2 // nb, m1 // nb) * nb + B.compose_many(m2 % nb, m1 % nb)

    return FiniteGroupoid(oa * ob, src, tgt, identity, inverse, compose_many, name=f"{A.name}x{B.name}")


@dataclass(frozen=True)
class FiberProduct:
    groupoid: FiniteGroupoid
    to_b: GroupoidFunctor
    to_c: GroupoidFunctor
    objects: np.ndarray  # rows (b, c, alpha)


def fiber_product(f: GroupoidFunctor, h: GroupoidFunctor, cap: int = FIBER_CAP) -> FiberProduct:
    """Iso-comma groupoid B x_A C.

    Objects (b, c, alpha: f(b) -> h(c)); a morphism (beta, kappa) goes from
    (b, c, alpha) to (b', c', h(kappa) alpha f(beta)^-1).
    """
    if f.target is not h.target:
        raise ValueError("legs must share their target")
    A, B, C = f.target, f.source, h.source
    # group A's morphisms by (src, tgt)
    key = A.src * A.n_objects + A.tgt
    order = np.argsort(key, kind="stable")
    skey = key[order]
    fb = f.obj_map
    hc = h.obj_map
    want = (fb[:, None] * A.n_objects + hc[None, :]).reshape(-1)
    lo = np.searchsorted(skey, want, side="left")
    hi = np.searchsorted(skey, want, side="right")
    counts = hi - lo
    n_obj = int(counts.sum())
    if n_obj > cap:
        raise SizeCap(f"fiber product would have {n_obj} objects, cap is {cap}")
    pair = np.repeat(np.arange(len(want)), counts)
    offs = np.arange(n_obj) - np.repeat(np.cumsum(counts) - counts, counts)
    alpha = order[lo[pair] + offs]
    ob = pair // C.n_objects
    oc = pair % C.n_objects
    objects = np.stack([ob, oc, alpha], axis=1)
    obj_key = (ob * C.n_objects + oc) * A.n_morphisms + alpha
    key_order = np.argsort(obj_key)
    sorted_keys = obj_key[key_order]

    def find(b, c, a):
        k = (b * C.n_objects + c) * A.n_morphisms + a
        pos = np.searchsorted(sorted_keys, k)
        return key_order[pos]

    # morphisms: for each object, every beta out of b and kappa out of c
    b_out = np.argsort(B.src, kind="stable")
    b_start = np.searchsorted(B.src[b_out], np.arange(B.n_objects + 1))
    c_out = np.argsort(C.src, kind="stable")
    c_start = np.searchsorted(C.src[c_out], np.arange(C.n_objects + 1))
    db = np.diff(b_start)[ob]
    dc = np.diff(c_start)[oc]
    per = db * dc
    n_mor = int(per.sum())
    if n_mor > cap * 8:
        raise SizeCap(f"fiber product would have {n_mor} morphisms")
    mo = np.repeat(np.arange(n_obj), per)
    r = np.arange(n_mor) - np.repeat(np.cumsum(per) - per, per)
    dcm = dc[mo]
    beta = b_out[b_start[ob[mo]] + r // dcm]
    kappa = c_out[c_start[oc[mo]] + r % dcm]
    new_alpha = A.compose_many(A.compose_many(h.mor_map[kappa], alpha[mo]), A.inverse[f.mor_map[beta]])
    tgt = find(B.tgt[beta], C.tgt[kappa], new_alpha)
    # index a morphism by (source object, beta, kappa)
    mor_key = (mo * B.n_morphisms + beta) * C.n_morphisms + kappa
    mor_order = np.argsort(mor_key)
    mor_sorted = mor_key[mor_order]

    def find_mor(o, bb, kk):
        k = (o * B.n_morphisms + bb) * C.n_morphisms + kk
        return mor_order[np.searchsorted(mor_sorted, k)]

    identity = find_mor(np.arange(n_obj), B.identity[ob], C.identity[oc])
    inverse = find_mor(tgt, B.inverse[beta], C.inverse[kappa])

    def compose_many(m2, m1):
        return find_mor(mo[m1], B.compose_many(beta[m2], beta[m1]), C.compose_many(kappa[m2], kappa[m1]))

    gpd = FiniteGroupoid(n_obj, mo, tgt, identity, inverse, compose_many,
                         name=f"{B.name}x_{A.name}{C.name}")
    to_b = GroupoidFunctor(gpd, B, ob, beta)
    to_c = GroupoidFunctor(gpd, C, oc, kappa)
    return FiberProduct(gpd, to_b, to_c, objects)


def object_inclusion(gpd: FiniteGroupoid, x: int) -> GroupoidFunctor:
    """The functor * -> gpd picking out object x."""
    pt = point_groupoid()
    return GroupoidFunctor(pt, gpd, np.array([x]), np.array([gpd.identity[x]]))


def pullback(f: GroupoidFunctor, phi: IsoInvariantFunction) -> IsoInvariantFunction:
    if phi.groupoid is not f.target:
        raise ValueError("function lives on the wrong groupoid")
    return IsoInvariantFunction(f.source, phi.values[f.obj_map], check=False)


def pushforward(f: GroupoidFunctor, phi: IsoInvariantFunction) -> IsoInvariantFunction:
    """f_!(phi)(y) = sum over iso classes [(x, alpha)] of the fiber f^-1(y) of phi(x)/|Aut(x, alpha)|."""
    if phi.groupoid is not f.source:
        raise ValueError("function lives on the wrong groupoid")
    T = f.target
    per_class = []
    for y in T.iso_reps:
        fib = fiber_product(f, object_inclusion(T, y))
        F = fib.groupoid
        total = Fraction(0)
        for r in F.iso_reps:
            total += phi.values[fib.objects[r, 0]] / int(F.aut_orders[r])
        per_class.append(total)
    return IsoInvariantFunction.from_classes(T, per_class)


@dataclass(frozen=True)
class Span:
    """source <-left- apex -right-> target."""

    left: GroupoidFunctor
    right: GroupoidFunctor

    def __post_init__(self):
        if self.left.source is not self.right.source:
            raise ValueError("span legs must share their source")

    @property
    def apex(self):
        return self.left.source

    @property
    def source(self):
        return self.left.target

    @property
    def target(self):
        return self.right.target

    def then(self, other: "Span", cap: int = FIBER_CAP) -> "Span":
        """The composite ``other`` after ``self``, through the iso-comma fiber product."""
        if other.source is not self.target:
            raise ValueError("spans are not composable")
        fib = fiber_product(self.right, other.left, cap)
        return Span(fib.to_b.then(self.left), fib.to_c.then(other.right))

    def apply(self, phi: IsoInvariantFunction) -> IsoInvariantFunction:
        return pushforward(self.right, pullback(self.left, phi))


def quantize_span(span: Span) -> np.ndarray:
    """Matrix of g_! f^* from iso-class indicators of the source to those of the target."""
    S, T = span.source, span.target
    M = qzeros((T.n_iso_classes, S.n_iso_classes))
    for j in range(S.n_iso_classes):
        e = [Fraction(int(i == j)) for i in range(S.n_iso_classes)]
        out = span.apply(IsoInvariantFunction.from_classes(S, e))
        M[:, j] = out.on_classes()
    return M


def identity_span(gpd: FiniteGroupoid) -> Span:
    i = identity_functor(gpd)
    return Span(i, i)


def skeletonize(gpd: FiniteGroupoid):
    """Full subgroupoid on one object per iso class, with its inclusion functor."""
    reps = np.array(gpd.iso_reps, dtype=np.int64)
    new_index = -np.ones(gpd.n_objects, dtype=np.int64)
    new_index[reps] = np.arange(len(reps))
    keep = np.flatnonzero((new_index[gpd.src] >= 0) & (new_index[gpd.tgt] >= 0))
    mor_index = -np.ones(gpd.n_morphisms, dtype=np.int64)
    mor_index[keep] = np.arange(len(keep))

    def compose_many(m2, m1):
        return mor_index[gpd.compose_many(keep[m2], keep[m1])]

    skel = FiniteGroupoid(len(reps), new_index[gpd.src[keep]], new_index[gpd.tgt[keep]],
                          mor_index[gpd.identity[reps]], mor_index[gpd.inverse[keep]],
                          compose_many, name=f"sk({gpd.name})")
    return skel, GroupoidFunctor(skel, gpd, reps, keep)


# spans realizing the Frobenius structure ---------------------------------

def _diag_hom(H: TableGroup, copies: int) -> np.ndarray:
    idx = np.zeros(H.order, dtype=np.int64)
    for _ in range(copies):
        idx = idx * H.order + np.arange(H.order)
    return idx


class FrobeniusSpans:
    """The spans whose quantizations give mu, eta, epsilon, beta, delta and the genus operator."""

    def __init__(self, G):
        self.group = TableGroup.of(G)
        H = self.group
        n = H.order
        self.n = n
        self.one = conjugation_groupoid(H, 1)
        self.two = conjugation_groupoid(H, 2)
        self.point = point_groupoid()
        self.BG = classifying_groupoid(H)
        # [G^2/G], G acting diagonally
        conj = H.conjugation_action()
        pairs = np.arange(n * n)
        x, y = pairs // n, pairs % n
        self.pairs = action_groupoid(H, n * n, conj[:, x] * n + conj[:, y], name="[G^2/G]")
        self._xy = H.mul[x, y]

    def multiplication(self) -> Span:
        H, n = self.group, self.n
        left = equivariant_functor(self.pairs, self.two, _diag_hom(H, 2), np.arange(n * n))
        right = equivariant_functor(self.pairs, self.one, np.arange(n), self._xy)
        return Span(left, right)

    def comultiplication(self) -> Span:
        m = self.multiplication()
        return Span(m.right, m.left)

    def unit(self) -> Span:
        H = self.group
        left = terminal_functor(self.BG, self.point)
        right = equivariant_functor(self.BG, self.one, np.arange(H.order), [0])
        return Span(left, right)

    def counit(self) -> Span:
        u = self.unit()
        return Span(u.right, u.left)

    def pairing(self) -> Span:
        """The cylinder [G/G]^2 <- [G/G] -> *, x |-> (x, x^-1)."""
        H, n = self.group, self.n
        left = equivariant_functor(self.one, self.two, _diag_hom(H, 2), np.arange(n) * n + H.inv)
        return Span(left, terminal_functor(self.one, self.point))

    def copairing(self) -> Span:
        p = self.pairing()
        return Span(p.right, p.left)

    def genus(self) -> Span:
        """[G/G] <- [{(x, A, B)}/G] -> [G/G], (x, A, B) |-> x and x[A, B]."""
        H, n = self.group, self.n
        conj = H.conjugation_action()
        t = np.arange(n**3)
        x, a, b = t // (n * n), (t // n) % n, t % n
        act = (conj[:, x] * n + conj[:, a]) * n + conj[:, b]
        apex = action_groupoid(H, n**3, act, name="[G^3/G]")
        comm = H.mul[H.mul[a, b], H.mul[H.inv[a], H.inv[b]]]
        ident = np.arange(n)
        left = equivariant_functor(apex, self.one, ident, x)
        right = equivariant_functor(apex, self.one, ident, H.mul[x, comm])
        return Span(left, right)


# character groupoids ------------------------------------------------------

def representation_tuples(H: TableGroup, genus: int) -> np.ndarray:
    """All (A_1, B_1, ..., A_g, B_g) with prod [A_i, B_i] = 1, as rows."""
    n = H.order
    comm = H.mul[H.mul[np.arange(n)[:, None], np.arange(n)[None, :]],
                 H.mul[H.inv[:, None], H.inv[None, :]]]
    rows = np.zeros((1, 0), dtype=np.int64)
    acc = np.zeros(1, dtype=np.int64)
    for _ in range(genus):
        a = np.repeat(np.arange(n), n)
        b = np.tile(np.arange(n), n)
        c = comm[a, b]
        rows = np.concatenate([np.repeat(rows, n * n, axis=0),
                               np.tile(np.stack([a, b], axis=1), (len(rows), 1))], axis=1)
        acc = H.mul[np.repeat(acc, n * n), np.tile(c, len(acc))]
    return rows[acc == 0]


def character_groupoid(G, genus: int, cap: int = 200_000) -> FiniteGroupoid:
    """[Hom(pi_1 Sigma_g, G)/G] with G acting by simultaneous conjugation."""
    H = TableGroup.of(G)
    if H.order ** (2 * genus) > cap * 50:
        raise SizeCap("representation variety too large to enumerate as a groupoid")
    tuples = representation_tuples(H, genus)
    if len(tuples) * H.order > cap * 50:
        raise SizeCap("character groupoid too large")
    n = H.order
    width = tuples.shape[1]
    codes = np.zeros(len(tuples), dtype=np.int64)
    for j in range(width):
        codes = codes * n + tuples[:, j]
    order = np.argsort(codes)
    conj = H.conjugation_action()
    act = np.empty((n, len(tuples)), dtype=np.int64)
    for g in range(n):
        moved = conj[g][tuples]
        mc = np.zeros(len(tuples), dtype=np.int64)
        for j in range(width):
            mc = mc * n + moved[:, j]
        act[g] = order[np.searchsorted(codes[order], mc)]
    return action_groupoid(H, len(tuples), act, name=f"char_{genus}")


# random small spans, for property tests -----------------------------------

def codiscrete_groupoid(components) -> FiniteGroupoid:
    """Disjoint union of connected groupoids, component i having ``m_i`` objects and Aut = Z/n_i.

    ``components`` is a list of (m_i, n_i). Morphism (x, y, a) : x -> y.
    """
    obj_comp, obj_pos = [], []
    for ci, (m, _) in enumerate(components):
        obj_comp += [ci] * m
        obj_pos += list(range(m))
    first_obj = np.cumsum([0] + [m for m, _ in components])
    src, tgt, val, order = [], [], [], []
    for ci, (m, n) in enumerate(components):
        base = first_obj[ci]
        for x in range(m):
            for y in range(m):
                for a in range(n):
                    src.append(base + x)
                    tgt.append(base + y)
                    val.append(a)
                    order.append(n)
    src, tgt, val, order = map(lambda v: np.array(v, dtype=np.int64), (src, tgt, val, order))
    lookup = {(s, t, a): i for i, (s, t, a) in enumerate(zip(src.tolist(), tgt.tolist(), val.tolist()))}
    n_obj = len(obj_comp)
    identity = np.array([lookup[(x, x, 0)] for x in range(n_obj)], dtype=np.int64)
    inverse = np.array([lookup[(t, s, (-a) % o)] for s, t, a, o in zip(src, tgt, val, order)], dtype=np.int64)
    key = (src * n_obj + tgt) * 64 + val
    korder = np.argsort(key)
    skey = key[korder]

    def compose_many(m2, m1):
        v = (val[m1] + val[m2]) % order[m1]
        k = (src[m1] * n_obj + tgt[m2]) * 64 + v
        return korder[np.searchsorted(skey, k)]

    gpd = FiniteGroupoid(n_obj, src, tgt, identity, inverse, compose_many, name="codiscrete")
    gpd.layout = (list(components), np.array(obj_comp), val, first_obj)
    return gpd


def random_groupoid(rng: random.Random, max_objects: int = 6, max_aut: int = 8) -> FiniteGroupoid:
    comps = []
    total = 0
    while not comps or (total < max_objects and rng.random() < 0.6):
        m = rng.randint(1, max(1, min(3, max_objects - total)))
        comps.append((m, rng.randint(1, max_aut)))
        total += m
    return codiscrete_groupoid(comps)


def random_functor(rng: random.Random, S: FiniteGroupoid, T: FiniteGroupoid) -> GroupoidFunctor:
    """A random functor between codiscrete groupoids.

    Each source component goes to a target component via a hom Z/n -> Z/n'
    (multiplication by s with n' | s n) and a choice of object images and
    transport elements t_x, so that (x, y, a) maps to (F x, F y, t_y + s a - t_x).
    """
    s_comps, s_comp_of, s_val, s_first = S.layout
    t_comps, t_comp_of, t_val, t_first = T.layout
    obj_map = np.zeros(S.n_objects, dtype=np.int64)
    scale = {}
    transport = np.zeros(S.n_objects, dtype=np.int64)
    for ci, (m, n) in enumerate(s_comps):
        cj = rng.randrange(len(t_comps))
        mt, nt = t_comps[cj]
        choices = [s for s in range(nt) if (s * n) % nt == 0]
        scale[ci] = (cj, rng.choice(choices), nt)
        for x in range(m):
            obj = s_first[ci] + x
            obj_map[obj] = t_first[cj] + rng.randrange(mt)
            transport[obj] = rng.randrange(nt)
    t_key = {(int(a), int(b), int(v)): i for i, (a, b, v) in enumerate(zip(T.src, T.tgt, t_val))}
    mor_map = np.zeros(S.n_morphisms, dtype=np.int64)
    for i in range(S.n_morphisms):
        x, y, a = int(S.src[i]), int(S.tgt[i]), int(s_val[i])
        _, s, nt = scale[int(s_comp_of[x])]
        v = (transport[y] + s * a - transport[x]) % nt
        mor_map[i] = t_key[(int(obj_map[x]), int(obj_map[y]), int(v))]
    return GroupoidFunctor.build(S, T, obj_map, mor_map)


def random_span(rng: random.Random, source: FiniteGroupoid, target: FiniteGroupoid,
                max_objects: int = 6, max_aut: int = 8) -> Span:
    apex = random_groupoid(rng, max_objects, max_aut)
    return Span(random_functor(rng, apex, source), random_functor(rng, apex, target))
