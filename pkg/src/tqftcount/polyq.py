"""Integer polynomials in a single formal variable q."""

from __future__ import annotations

from fractions import Fraction

from .polynomials import IntPoly


class PolyQ:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        c = [int(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs = tuple(c)

    @classmethod
    def parse(cls, text) -> "PolyQ":
        if isinstance(text, PolyQ):
            return text
        poly = IntPoly.parse(str(text), ("q",))
        deg = max((e[0] for e, _ in poly.terms), default=-1)
        c = [0] * (deg + 1)
        for (e,), v in poly.terms:
            c[e] += v
        return cls(c)

    @classmethod
    def constant(cls, c: int) -> "PolyQ":
        return cls([c])

    @classmethod
    def q(cls) -> "PolyQ":
        return cls([0, 1])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other):
        if isinstance(other, int):
            other = PolyQ([other])
        return isinstance(other, PolyQ) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        other = _lift(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return PolyQ([x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        return PolyQ([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-_lift(other))

    def __rsub__(self, other):
        return _lift(other) - self

    def __mul__(self, other):
        other = _lift(other)
        if not self.coeffs or not other.coeffs:
            return PolyQ()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return PolyQ(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = PolyQ([1])
        for _ in range(n):
            out = out * self
        return out

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for e in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[e]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            mono = "" if e == 0 else ("q" if e == 1 else f"q^{e}")
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            text += sign + body
        return text

    def __repr__(self):
        return f"PolyQ({str(self)!r})"

    def to_json(self) -> str:
        return str(self)


def _lift(x) -> PolyQ:
    if isinstance(x, PolyQ):
        return x
    if isinstance(x, Fraction):
        if x.denominator != 1:
            raise ValueError("PolyQ has integer coefficients")
        x = x.numerator
    return PolyQ([int(x)])
