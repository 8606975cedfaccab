"""Words in the generating 2d bordisms: parsing, type checking and evaluation.

Grammar (composition is right-to-left, ``.`` binds loosest)::

    EXPR    := TERM { "." TERM }
    TERM    := FACTOR { "*" FACTOR }
    FACTOR  := PRIMARY [ "^" INT ]
    PRIMARY := ATOM | "(" EXPR ")"
    ATOM    := unit | counit | mult | comult | twist | id | genus
             | pair | copair | sigma "(" INT ")"

A word with n incoming and m outgoing circles evaluates to a k^m x k^n
matrix of rationals, k the number of conjugacy classes; tensor factors are
ordered with the first factor most significant.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import kernels
from .classalg import ClassFunction, algebra
from .errors import BordismSyntaxError, BordismTypeError, MemoryCap, ResourceCap
from .groups import FiniteGroup
from .linalg import qarray, qeye, qzeros

TENSOR_CAP = 10**6
NAIVE_CAP = 10**8

ARITIES = {
    "unit": (0, 1),
    "counit": (1, 0),
    "mult": (2, 1),
    "comult": (1, 2),
    "twist": (2, 2),
    "id": (1, 1),
    "genus": (1, 1),
    "pair": (2, 0),
    "copair": (0, 2),
    "sigma": (0, 0),
}


@dataclass(frozen=True)
class Atom:
    name: str
    arg: int | None = None
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Compose:
    """``left . right``: apply ``right`` first."""

    left: object
    right: object
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Tensor:
    left: object
    right: object
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Power:
    base: object
    exponent: int
    pos: int = field(default=0, compare=False)


BordismExpr = Atom | Compose | Tensor | Power

_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z_]\w*)|(?P<sym>[.*^()]))")


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            start = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise BordismSyntaxError(f"unexpected character {text[start]!r}", start)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind=None, value=None):
        tok = self.tokens[self.i]
        if (kind and tok[0] != kind) or (value and tok[1] != value):
            want = value or kind
            found = tok[1] or "end of input"
            raise BordismSyntaxError(f"expected {want!r}, found {found!r}", tok[2])
        self.i += 1
        return tok

    def expr(self):
        node = self.term()
        while self.peek()[1] == ".":
            pos = self.take()[2]
            node = Compose(node, self.term(), pos)
        return node

    def term(self):
        node = self.factor()
        while self.peek()[1] == "*":
            pos = self.take()[2]
            node = Tensor(node, self.factor(), pos)
        return node

    def factor(self):
        node = self.primary()
        if self.peek()[1] == "^":
            pos = self.take()[2]
            n = int(self.take("int")[1])
            node = Power(node, n, pos)
        return node

    def primary(self):
        kind, value, pos = self.peek()
        if value == "(":
            self.take()
            node = self.expr()
            self.take("sym", ")")
            return node
        if kind != "name":
            raise BordismSyntaxError(f"expected a bordism, found {value or 'end of input'!r}", pos)
        if value not in ARITIES:
            raise BordismSyntaxError(f"unknown bordism {value!r}", pos)
        self.take()
        if value == "sigma":
            self.take("sym", "(")
            g = int(self.take("int")[1])
            self.take("sym", ")")
            return Atom("sigma", g, pos)
        return Atom(value, None, pos)


def parse(text: str, check: bool = True) -> BordismExpr:
    parser = _Parser(text)
    node = parser.expr()
    kind, value, pos = parser.peek()
    if kind != "end":
        raise BordismSyntaxError(f"unexpected {value!r}", pos)
    if check:
        typecheck(node)
    return node


def typecheck(expr) -> tuple[int, int]:
    """(incoming circles, outgoing circles); raises BordismTypeError on mismatch."""
    if isinstance(expr, Atom):
        return ARITIES[expr.name]
    if isinstance(expr, Compose):
        lin, lout = typecheck(expr.left)
        rin, rout = typecheck(expr.right)
        if lin != rout:
            raise BordismTypeError("composition mismatch", lin, rout, expr.pos)
        return rin, lout
    if isinstance(expr, Tensor):
        a = typecheck(expr.left)
        b = typecheck(expr.right)
        return a[0] + b[0], a[1] + b[1]
    if isinstance(expr, Power):
        n_in, n_out = typecheck(expr.base)
        if n_in != n_out:
            raise BordismTypeError("power of a non-endomorphism", n_in, n_out, expr.pos)
        return n_in, n_out
    raise TypeError(f"not a bordism expression: {expr!r}")


def to_text(expr) -> str:
    if isinstance(expr, Atom):
        return f"sigma({expr.arg})" if expr.name == "sigma" else expr.name
    if isinstance(expr, Compose):
        right = to_text(expr.right)
        if isinstance(expr.right, Compose):
            right = f"({right})"
        return f"{to_text(expr.left)} . {right}"
    if isinstance(expr, Tensor):
        left, right = to_text(expr.left), to_text(expr.right)
        if isinstance(expr.left, Compose):
            left = f"({left})"
        if isinstance(expr.right, (Compose, Tensor)):
            right = f"({right})"
        return f"{left} * {right}"
    if isinstance(expr, Power):
        base = to_text(expr.base)
        if not isinstance(expr.base, Atom):
            base = f"({base})"
        return f"{base}^{expr.exponent}"
    raise TypeError(f"not a bordism expression: {expr!r}")


def desugar(expr):
    """Expand ``genus`` to ``mult . comult`` and ``sigma(g)`` to ``counit . genus^g . unit``."""
    if isinstance(expr, Atom):
        if expr.name == "genus":
            return Compose(Atom("mult"), Atom("comult"))
        if expr.name == "sigma":
            inner = Compose(Atom("counit"), Power(desugar(Atom("genus")), expr.arg))
            return Compose(inner, Atom("unit"))
        return expr
    if isinstance(expr, Compose):
        return Compose(desugar(expr.left), desugar(expr.right))
    if isinstance(expr, Tensor):
        return Tensor(desugar(expr.left), desugar(expr.right))
    return Power(desugar(expr.base), expr.exponent)


_INT64_SAFE = 2**62


def _reduce(numer: np.ndarray, denom: int):
    g = denom
    for v in numer.reshape(-1):
        if g == 1:
            break
        g = math.gcd(g, int(v))
    if g > 1:
        numer = numer // g
        denom //= g
    return numer, denom


def _as_int64_if_small(a: np.ndarray) -> np.ndarray:
    if a.dtype == np.int64:
        return a
    if a.size == 0 or max(abs(int(v)) for v in a.reshape(-1)) < 2**31:
        return a.astype(np.int64)
    return a


def _bound(a: np.ndarray) -> int:
    return int(np.abs(a).max()) if a.size else 0


class TensorLinearMap:
    """A k^m x k^n rational matrix, held as an integer numerator array over one denominator."""

    __slots__ = ("in_arity", "out_arity", "numer", "denom")

    def __init__(self, in_arity: int, out_arity: int, numer, denom: int = 1):
        numer = np.asarray(numer)
        if numer.dtype != np.int64:
            numer = _as_int64_if_small(numer.astype(object))
        numer, denom = _reduce(numer, int(denom))
        self.in_arity = in_arity
        self.out_arity = out_arity
        self.numer = numer
        self.denom = denom

    @classmethod
    def from_fractions(cls, in_arity, out_arity, matrix) -> "TensorLinearMap":
        m = qarray(matrix)
        den = 1
        for v in m.reshape(-1):
            den = den * v.denominator // math.gcd(den, v.denominator)
        numer = np.array([int(v * den) for v in m.reshape(-1)], dtype=object).reshape(m.shape)
        return cls(in_arity, out_arity, numer, den)

    @property
    def matrix(self) -> np.ndarray:
        out = np.empty(self.numer.shape, dtype=object)
        flat = out.reshape(-1)
        for i, v in enumerate(self.numer.reshape(-1)):
            flat[i] = Fraction(int(v), self.denom)
        return out

    @property
    def scalar(self) -> Fraction:
        if self.numer.shape != (1, 1):
            raise ValueError("map is not 0 -> 0")
        return Fraction(int(self.numer[0, 0]), self.denom)

    @staticmethod
    def _combine(a, b, op, inner):
        if a.dtype == np.int64 and b.dtype == np.int64 and _bound(a) * _bound(b) * max(inner, 1) < _INT64_SAFE:
            return op(a, b)
        return op(a.astype(object), b.astype(object))

    def __matmul__(self, other: "TensorLinearMap") -> "TensorLinearMap":
        numer = self._combine(self.numer, other.numer, np.matmul, self.numer.shape[1])
        return TensorLinearMap(other.in_arity, self.out_arity, numer, self.denom * other.denom)

    def tensor(self, other: "TensorLinearMap") -> "TensorLinearMap":
        numer = self._combine(self.numer, other.numer, np.kron, 1)
        return TensorLinearMap(self.in_arity + other.in_arity, self.out_arity + other.out_arity,
                               numer, self.denom * other.denom)

    @classmethod
    def identity(cls, arity: int, k: int) -> "TensorLinearMap":
        return cls(arity, arity, np.eye(k**arity, dtype=np.int64), 1)

    def __eq__(self, other):
        if not isinstance(other, TensorLinearMap):
            return NotImplemented
        if (self.in_arity, self.out_arity) != (other.in_arity, other.out_arity):
            return False
        return self.denom == other.denom and np.array_equal(
            self.numer.astype(object), other.numer.astype(object))

    def __repr__(self):
        return f"TensorLinearMap({self.in_arity} -> {self.out_arity}, shape {self.numer.shape})"


class _Evaluator:
    def __init__(self, G: FiniteGroup, cap: int):
        self.G = G
        self.alg = algebra(G)
        self.k = self.alg.k
        self.cap = cap
        self._atoms = {}

    def check_size(self, n_in, n_out):
        if self.k ** max(n_in, n_out) > self.cap:
            raise MemoryCap(f"k^{max(n_in, n_out)} = {self.k ** max(n_in, n_out)} exceeds cap {self.cap}")

    def atom(self, name, arg=None):
        key = (name, arg)
        if key not in self._atoms:
            self._atoms[key] = self._build_atom(name, arg)
        return self._atoms[key]

    def _build_atom(self, name, arg):
        alg, k, G = self.alg, self.k, self.G
        N = alg.structure_constants
        if name == "unit":
            m = qzeros((k, 1))
            m[0, 0] = Fraction(1)
        elif name == "counit":
            m = qzeros((1, k))
            m[0, 0] = Fraction(1, G.order)
        elif name == "id":
            m = qeye(k)
        elif name == "mult":
            # column (i, j) holds mu(1_i (x) 1_j)
            m = qarray(N.reshape(k * k, k).T)
        elif name == "comult":
            m = qzeros((k * k, k))
            for i in range(k):
                D = alg.comultiply(ClassFunction.indicator(G, [i]))
                m[:, i] = D.reshape(-1)
        elif name == "twist":
            m = qzeros((k * k, k * k))
            for i in range(k):
                for j in range(k):
                    m[j * k + i, i * k + j] = Fraction(1)
        elif name == "genus":
            m = qarray(alg.genus_matrix)
        elif name == "pair":
            m = qzeros((1, k * k))
            for i in range(k):
                m[0, i * k + alg.inverse_class[i]] = Fraction(int(alg.class_sizes[i]), G.order)
        elif name == "copair":
            m = alg.gamma_matrix().reshape(k * k, 1)
        elif name == "sigma":
            m = qzeros((1, 1))
            m[0, 0] = surface_invariant(G, arg)
        else:
            raise ValueError(name)
        n_in, n_out = ARITIES[name]
        return TensorLinearMap.from_fractions(n_in, n_out, m)

    def run(self, expr) -> TensorLinearMap:
        n_in, n_out = typecheck(expr)
        self.check_size(n_in, n_out)
        if isinstance(expr, Atom):
            return self.atom(expr.name, expr.arg)
        if isinstance(expr, Compose):
            return self.run(expr.left) @ self.run(expr.right)
        if isinstance(expr, Tensor):
            a, b = self.run(expr.left), self.run(expr.right)
            return a.tensor(b)
        base = self.run(expr.base)
        result = TensorLinearMap.identity(n_in, self.k)
        for _ in range(expr.exponent):
            result = base @ result
        return result


def evaluate(expr, G: FiniteGroup, *, cap: int = TENSOR_CAP, expand: bool = False) -> TensorLinearMap:
    """Evaluate a bordism word (text or AST) into the Frobenius TQFT of G.

    ``expand=True`` desugars ``genus`` and ``sigma`` into the generating
    bordisms first instead of using their closed forms.
    """
    if isinstance(expr, str):
        expr = parse(expr)
    typecheck(expr)
    if expand:
        expr = desugar(expr)
    return _Evaluator(G, cap).run(expr)


def surface_invariant(G: FiniteGroup, genus: int) -> Fraction:
    """epsilon(h^g(eta(1))) = |Hom(pi_1 Sigma_g, G)| / |G|."""
    alg = algebra(G)
    v = alg.unit()
    for _ in range(genus):
        v = alg.genus_operator(v)
    return alg.counit(v)


def brute_force_hom_count(G: FiniteGroup, genus: int, *, naive_cap: int = NAIVE_CAP,
                          method: str = "auto") -> int:
    """#{(A_1, B_1, ..., A_g, B_g) : prod [A_i, B_i] = 1}.

    ``method`` is "naive" (visit every tuple), "convolution" (g-fold
    convolution of the commutator-count function, evaluated at 1) or "auto".
    """
    if genus < 0:
        raise ValueError("genus must be non-negative")
    naive_ok = G.mul_table is not None and G.order ** (2 * genus) <= naive_cap
    if method == "naive" or (method == "auto" and naive_ok):
        if not naive_ok:
            raise ResourceCap(f"|G|^{2 * genus} = {G.order ** (2 * genus)} tuples exceed the naive cap")
        return int(kernels.hom_count_naive(G.mul_table, G.inverse_table, genus, 0))
    alg = algebra(G)
    f = alg.commutator_function()
    v = alg.unit()
    for _ in range(genus):
        v = alg.convolve(v, f)
    value = v.values[0]
    assert value.denominator == 1
    return int(value)


def character_groupoid_cardinality(G: FiniteGroup, genus: int, **kw) -> Fraction:
    """|Hom(pi_1 Sigma_g, G)| / |G|, the cardinality of the character groupoid."""
    return Fraction(brute_force_hom_count(G, genus, **kw), G.order)
