"""Sparse multivariate polynomials with rational coefficients.

Monomials are exponent tuples; the monomial order is total degree first,
then lexicographic on the exponent tuple (so with variables ``x, y`` we
get ``x^2 > x*y > y^2 > x > y > 1``).
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Optional, Sequence


def _order_key(exps):
    return (sum(exps), exps)


class Poly:
    __slots__ = ("nvars", "_terms", "_hash")

    def __init__(self, nvars: int, terms: Iterable = ()):
        acc: dict = {}
        for exps, coef in terms:
            exps = tuple(exps)
            if len(exps) != nvars:
                raise ValueError(f"monomial {exps} has wrong arity for {nvars} variables")
            acc[exps] = acc.get(exps, 0) + Fraction(coef)
        self.nvars = nvars
        self._terms = {e: c for e, c in acc.items() if c != 0}
        self._hash = None

    @classmethod
    def constant(cls, nvars, c):
        return cls(nvars, [((0,) * nvars, c)])

    @classmethod
    def variable(cls, nvars, index):
        exps = [0] * nvars
        exps[index] = 1
        return cls(nvars, [(exps, 1)])

    def terms(self):
        """(exponents, coefficient) pairs, largest monomial first."""
        return sorted(self._terms.items(), key=lambda t: _order_key(t[0]), reverse=True)

    def leading(self):
        return max(self._terms.items(), key=lambda t: _order_key(t[0]))

    def is_zero(self):
        return not self._terms

    def degrees(self):
        return {sum(e) for e in self._terms}

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.nvars == other.nvars and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self._terms.items())))
        return self._hash

    def __add__(self, other):
        return Poly(self.nvars, list(self._terms.items()) + list(other._terms.items()))

    def __neg__(self):
        return Poly(self.nvars, [(e, -c) for e, c in self._terms.items()])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        out = []
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                out.append((tuple(a + b for a, b in zip(e1, e2)), c1 * c2))
        return Poly(self.nvars, out)

    def __pow__(self, k: int):
        result = Poly.constant(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def divide(self, den: "Poly") -> Optional["Poly"]:
        """Exact quotient ``self / den``, or None when ``den`` does not divide.

        Leading-term elimination: with a single divisor the remainder is zero
        iff the division is exact, so the first leading term that ``LT(den)``
        fails to divide settles non-divisibility.
        """
        if den.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        lead_e, lead_c = den.leading()
        quotient = []
        rem = self
        while not rem.is_zero():
            e, c = rem.leading()
            shift = tuple(a - b for a, b in zip(e, lead_e))
            if any(s < 0 for s in shift):
                return None
            q = Poly(self.nvars, [(shift, c / lead_c)])
            quotient.append((shift, c / lead_c))
            rem = rem - q * den
        return Poly(self.nvars, quotient)

    def format(self, names: Sequence[str]) -> str:
        if not self._terms:
            return "0"
        parts = []
        for exps, coef in self.terms():
            mono = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(names, exps) if k)
            mag = abs(coef)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            parts.append(("-" if coef < 0 else "+", body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"Poly({self.nvars}, {self.terms()!r})"


_TERM = re.compile(r"\s*([+-])?\s*([^+-]+)")
_COEF = re.compile(r"^\d+(/\d+)?$")
_POWER = re.compile(r"^([A-Za-z_]\w*)(\^(\d+))?$")


def parse_poly(text: str, names: Sequence[str]) -> Poly:
    index = {n: i for i, n in enumerate(names)}
    nvars = len(names)
    src = text.strip()
    if not src:
        raise ValueError("empty polynomial literal")
    terms = []
    pos = 0
    first = True
    while pos < len(src):
        m = _TERM.match(src, pos)
        if not m or (not first and m.group(1) is None):
            raise ValueError(f"malformed polynomial at offset {pos}: {text!r}")
        sign = -1 if m.group(1) == "-" else 1
        coef = Fraction(sign)
        exps = [0] * nvars
        for factor in m.group(2).strip().split("*"):
            factor = factor.strip()
            if _COEF.match(factor):
                num, _, den = factor.partition("/")
                if den and int(den) == 0:
                    raise ValueError(f"zero denominator in {text!r}")
                coef *= Fraction(int(num), int(den or 1))
                continue
            pm = _POWER.match(factor)
            if not pm or pm.group(1) not in index:
                raise ValueError(f"unknown factor {factor!r} in {text!r}")
            exps[index[pm.group(1)]] += int(pm.group(3) or 1)
        terms.append((exps, coef))
        pos = m.end()
        first = False
    return Poly(nvars, terms)
