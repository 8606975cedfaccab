"""Integer polynomials in named variables, evaluated modulo a prime.

Parsing is delegated to sympy; evaluation is vectorised over numpy arrays
of residues so a whole coordinate grid can be tested at once.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import sympy
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations
from tokenize import TokenError

from .errors import UsageError

_TRANSFORMS = standard_transformations + (convert_xor,)


@dataclass(frozen=True)
class IntPoly:
    """Sparse integer polynomial: ``terms`` maps exponent tuples to coefficients."""

    variables: tuple[str, ...]
    terms: tuple[tuple[tuple[int, ...], int], ...]

    @classmethod
    def parse(cls, text, variables) -> "IntPoly":
        variables = tuple(variables)
        if isinstance(text, int):
            text = str(text)
        symbols = {v: sympy.Symbol(v) for v in variables}
        try:
            expr = parse_expr(str(text), local_dict=symbols, transformations=_TRANSFORMS)
        except (SyntaxError, TypeError, TokenError, sympy.SympifyError) as exc:
            raise UsageError(f"cannot parse polynomial {text!r}: {exc}") from None
        expr = sympy.sympify(expr)
        stray = {str(s) for s in expr.free_symbols} - set(variables)
        if stray:
            raise UsageError(f"polynomial {text!r} uses undeclared variables {sorted(stray)}")
        gens = [symbols[v] for v in variables]
        if not gens:
            if not expr.is_Integer:
                raise UsageError(f"constant {text!r} is not an integer")
            value = int(expr)
            return cls(variables, (((), value),) if value else ())
        try:
            poly = sympy.Poly(expr, *gens)
        except sympy.PolynomialError as exc:
            raise UsageError(f"{text!r} is not a polynomial: {exc}") from None
        terms = []
        for monom, coeff in poly.terms():
            if coeff == 0:
                continue
            if not coeff.is_Integer:
                raise UsageError(f"polynomial {text!r} has non-integer coefficient {coeff}")
            terms.append((tuple(int(e) for e in monom), int(coeff)))
        return cls(variables, tuple(sorted(terms)))

    def evaluate_mod(self, values, p: int) -> np.ndarray:
        """Evaluate at columns of ``values`` (shape ``(N, nvars)``), modulo ``p``."""
        values = np.asarray(values, dtype=np.int64)
        n = values.shape[0]
        out = np.zeros(n, dtype=np.int64)
        for exps, coeff in self.terms:
            term = np.full(n, coeff % p, dtype=np.int64)
            for j, e in enumerate(exps):
                for _ in range(e):
                    term = (term * values[:, j]) % p
            out = (out + term) % p
        return out

    def evaluate(self, point, p: int) -> int:
        return int(self.evaluate_mod(np.asarray([point], dtype=np.int64).reshape(1, -1), p)[0])

    def is_constant(self) -> bool:
        return all(not any(e) for e, _ in self.terms)

    def constant_value(self) -> int:
        return sum(c for e, c in self.terms if not any(e))

    def __str__(self):
        if not self.terms:
            return "0"
        gens = [sympy.Symbol(v) for v in self.variables]
        expr = sum(
            c * sympy.prod([g**e for g, e in zip(gens, exps)]) for exps, c in self.terms
        )
        return str(expr).replace("**", "^")
