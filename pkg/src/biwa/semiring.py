"""Commutative semirings with exact, instance-tagged element values.

A :class:`Semiring` describes one instance (``kind`` plus parameter).  Its
elements are :class:`Value` objects pairing the instance with a raw payload:

* ``boolean``: ``bool``
* ``rational`` / ``tropical-rat``: :class:`fractions.Fraction`
* ``integer`` / ``tropical-nat`` / ``tropical-int``: ``int``
* ``prime-field`` / ``mod-int``: ``int`` residue in ``[0, m)``
* tropical kinds additionally use the :data:`INF` singleton (their zero)
* ``poly-rat``: :class:`biwa.polynomial.Poly`
* ``trunc-lang``: :data:`EMPTY`, :data:`TOP`, or a ``str`` word

Arithmetic between values of different instances raises
:class:`MixedSemiringError`; conversions go through :func:`embed` only.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterator, Optional

from .polynomial import Poly, parse_poly

KINDS = (
    "boolean", "rational", "prime-field", "integer", "mod-int",
    "tropical-nat", "tropical-int", "tropical-rat", "poly-rat", "trunc-lang",
)
TROPICAL_KINDS = ("tropical-nat", "tropical-int", "tropical-rat")


class SemiringError(ValueError):
    pass


class MixedSemiringError(SemiringError):
    pass


class _Marker:
    __slots__ = ("name",)

    def __init__(self, name):
        self.name = name

    def __repr__(self):
        return self.name

    def __reduce__(self):
        return (_marker, (self.name,))


INF = _Marker("inf")
EMPTY = _Marker("empty")
TOP = _Marker("top")
_MARKERS = {"inf": INF, "empty": EMPTY, "top": TOP}


def _marker(name):
    return _MARKERS[name]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


# -- raw payload arithmetic per kind -------------------------------------

def _trop_add(a, b):
    if a is INF:
        return b
    if b is INF:
        return a
    return a if a <= b else b


def _trop_mul(a, b):
    if a is INF or b is INF:
        return INF
    return a + b


def _lang_add(a, b):
    if a is EMPTY:
        return b
    if b is EMPTY:
        return a
    if a is TOP or b is TOP or a != b:
        return TOP
    return a


def _lang_mul(a, b):
    if a is EMPTY or b is EMPTY:
        return EMPTY
    if a is TOP or b is TOP:
        return TOP
    return a + b


_RATIONAL = re.compile(r"^-?\d+(/\d+)?$")
_INTEGER = re.compile(r"^-?\d+$")
_NATURAL = re.compile(r"^\d+$")


def _parse_fraction(text):
    num, _, den = text.partition("/")
    if den and int(den) == 0:
        raise SemiringError(f"zero denominator in {text!r}")
    return Fraction(int(num), int(den or 1))


@dataclass(frozen=True)
class Semiring:
    """One semiring instance.  ``param`` is the modulus/prime for modular
    kinds, the variable names for ``poly-rat`` and the alphabet (a string of
    single-character symbols) for ``trunc-lang``."""

    kind: str
    param: Any = None
    _ops: tuple = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        kind, param = self.kind, self.param
        if kind not in KINDS:
            raise SemiringError(f"unknown semiring kind {kind!r}")
        if kind in ("prime-field", "mod-int"):
            if not isinstance(param, int) or param < 1:
                raise SemiringError(f"{kind} needs a positive integer modulus, got {param!r}")
            if kind == "prime-field" and not is_prime(param):
                raise SemiringError(f"prime-field modulus {param} is not prime")
        elif kind == "poly-rat":
            names = tuple(param or ())
            if not names or len(set(names)) != len(names):
                raise SemiringError("poly-rat needs distinct variable names")
            object.__setattr__(self, "param", names)
        elif kind == "trunc-lang":
            alphabet = "".join(param or "")
            if not alphabet or len(set(alphabet)) != len(alphabet):
                raise SemiringError("trunc-lang needs an alphabet of distinct symbols")
            object.__setattr__(self, "param", alphabet)
        elif param is not None:
            raise SemiringError(f"{kind} takes no parameter")
        object.__setattr__(self, "_ops", self._make_ops())

    def __reduce__(self):
        return (Semiring, (self.kind, self.param))

    def _make_ops(self):
        kind, m = self.kind, self.param
        if kind == "boolean":
            return (lambda a, b: a or b, lambda a, b: a and b, False, True)
        if kind in ("rational", "integer"):
            zero, one = (Fraction(0), Fraction(1)) if kind == "rational" else (0, 1)
            return (lambda a, b: a + b, lambda a, b: a * b, zero, one)
        if kind in ("prime-field", "mod-int"):
            return (lambda a, b: (a + b) % m, lambda a, b: (a * b) % m, 0, 1 % m)
        if kind in TROPICAL_KINDS:
            one = Fraction(0) if kind == "tropical-rat" else 0
            return (_trop_add, _trop_mul, INF, one)
        if kind == "poly-rat":
            k = len(m)
            return (lambda a, b: a + b, lambda a, b: a * b, Poly(k), Poly.constant(k, 1))
        return (_lang_add, _lang_mul, EMPTY, "")

    # -- flags ----------------------------------------------------------
    @property
    def is_commutative(self):
        return True

    @property
    def is_zero_sum_free(self):
        return self.kind == "boolean" or self.kind in TROPICAL_KINDS or self.kind == "trunc-lang"

    @property
    def is_zero_divisor_free(self):
        if self.kind == "mod-int":
            return self.param == 1 or is_prime(self.param)
        return True

    @property
    def is_positive(self):
        return self.is_zero_sum_free and self.is_zero_divisor_free

    @property
    def is_field(self):
        if self.kind == "mod-int":
            return is_prime(self.param)
        return self.kind in ("rational", "prime-field")

    @property
    def is_ring(self):
        return self.kind in ("rational", "prime-field", "integer", "mod-int", "poly-rat")

    @property
    def is_finite(self):
        return self.kind in ("boolean", "prime-field", "mod-int")

    @property
    def is_tropical(self):
        return self.kind in TROPICAL_KINDS

    # -- elements -------------------------------------------------------
    @property
    def zero(self) -> "Value":
        return Value(self, self._ops[2])

    @property
    def one(self) -> "Value":
        return Value(self, self._ops[3])

    def raw_add(self, a, b):
        return self._ops[0](a, b)

    def raw_mul(self, a, b):
        return self._ops[1](a, b)

    def raw_is_zero(self, a) -> bool:
        return a == self._ops[2] if self.kind != "poly-rat" else a.is_zero()

    def value(self, x) -> "Value":
        """Coerce ``x`` (a Value of this instance, a literal string, or a raw
        python object) to a normalised element."""
        if isinstance(x, Value):
            if x.semiring != self:
                raise MixedSemiringError(f"{x!r} does not belong to {self}")
            return x
        if isinstance(x, str) and self.kind != "trunc-lang":
            return self.parse(x)
        return Value(self, self._normalise(x))

    def _normalise(self, x):
        kind = self.kind
        if kind == "boolean":
            if x not in (0, 1, True, False):
                raise SemiringError(f"not a boolean: {x!r}")
            return bool(x)
        if kind == "rational":
            return Fraction(x)
        if kind == "integer":
            if Fraction(x).denominator != 1:
                raise SemiringError(f"not an integer: {x!r}")
            return int(x)
        if kind in ("prime-field", "mod-int"):
            if Fraction(x).denominator != 1:
                raise SemiringError(f"not an integer residue: {x!r}")
            return int(x) % self.param
        if kind in TROPICAL_KINDS:
            if x is INF:
                return INF
            q = Fraction(x)
            if kind == "tropical-rat":
                return q
            if q.denominator != 1:
                raise SemiringError(f"not an integer: {x!r}")
            if kind == "tropical-nat" and q < 0:
                raise SemiringError(f"tropical-nat weights are nonnegative, got {x!r}")
            return int(q)
        if kind == "poly-rat":
            if isinstance(x, Poly):
                if x.nvars != len(self.param):
                    raise SemiringError("polynomial has wrong number of variables")
                return x
            return Poly.constant(len(self.param), Fraction(x))
        # trunc-lang
        if x is EMPTY or x is TOP:
            return x
        if isinstance(x, str):
            bad = set(x) - set(self.param)
            if bad:
                raise SemiringError(f"word {x!r} uses symbols outside {self.param!r}")
            return x
        raise SemiringError(f"not a trunc-lang element: {x!r}")

    def elements(self) -> Iterator["Value"]:
        """All elements of a finite instance, zero first."""
        if self.kind == "boolean":
            yield from (Value(self, False), Value(self, True))
        elif self.kind in ("prime-field", "mod-int"):
            for r in range(self.param):
                yield Value(self, r)
        else:
            raise SemiringError(f"{self} is not finite")

    # -- text -----------------------------------------------------------
    def parse(self, text: str) -> "Value":
        t = text.strip()
        kind = self.kind
        if kind == "boolean":
            if t not in ("0", "1"):
                raise SemiringError(f"boolean literal must be 0 or 1, got {text!r}")
            return Value(self, t == "1")
        if kind == "rational":
            if not _RATIONAL.match(t):
                raise SemiringError(f"bad rational literal {text!r}")
            return Value(self, _parse_fraction(t))
        if kind == "integer":
            if not _INTEGER.match(t):
                raise SemiringError(f"bad integer literal {text!r}")
            return Value(self, int(t))
        if kind in ("prime-field", "mod-int"):
            if not _NATURAL.match(t):
                raise SemiringError(f"bad residue literal {text!r}")
            r = int(t)
            if r >= self.param:
                raise SemiringError(f"residue {r} out of range for modulus {self.param}")
            return Value(self, r)
        if kind in TROPICAL_KINDS:
            if t == "inf":
                return Value(self, INF)
            if not _RATIONAL.match(t):
                raise SemiringError(f"bad tropical literal {text!r}")
            return Value(self, self._normalise(_parse_fraction(t)))
        if kind == "poly-rat":
            try:
                return Value(self, parse_poly(t, self.param))
            except ValueError as exc:
                raise SemiringError(str(exc)) from None
        if t == "empty":
            return Value(self, EMPTY)
        if t == "top":
            return Value(self, TOP)
        if t.startswith("word:"):
            return Value(self, self._normalise(t[5:]))
        raise SemiringError(f"bad trunc-lang literal {text!r}")

    def format(self, payload) -> str:
        kind = self.kind
        if kind == "boolean":
            return "1" if payload else "0"
        if payload is INF:
            return "inf"
        if kind == "poly-rat":
            return payload.format(self.param)
        if kind == "trunc-lang":
            if payload is EMPTY or payload is TOP:
                return payload.name
            return "word:" + payload
        return str(payload)

    # -- (de)serialisation of the instance itself --------------------------
    def spec(self) -> dict:
        if self.kind in ("prime-field", "mod-int"):
            key = "p" if self.kind == "prime-field" else "m"
            return {"kind": self.kind, key: self.param}
        if self.kind == "poly-rat":
            return {"kind": self.kind, "variables": list(self.param)}
        if self.kind == "trunc-lang":
            return {"kind": self.kind, "alphabet": list(self.param)}
        return {"kind": self.kind}

    @classmethod
    def from_spec(cls, spec: dict) -> "Semiring":
        kind = spec.get("kind")
        extra = set(spec) - {"kind"}
        if kind == "prime-field":
            param, expected = spec.get("p"), {"p"}
        elif kind == "mod-int":
            param, expected = spec.get("m"), {"m"}
        elif kind == "poly-rat":
            param, expected = tuple(spec.get("variables") or ()), {"variables"}
        elif kind == "trunc-lang":
            param, expected = "".join(spec.get("alphabet") or ()), {"alphabet"}
        else:
            param, expected = None, set()
        if extra != expected:
            raise SemiringError(f"semiring {kind!r} expects fields {sorted(expected)}, got {sorted(extra)}")
        return cls(kind, param)

    def __str__(self):
        if self.param is None:
            return self.kind
        if isinstance(self.param, tuple):
            return f"{self.kind}({','.join(self.param)})"
        return f"{self.kind}({self.param})"


class Value:
    """An immutable semiring element tagged with its instance."""

    __slots__ = ("semiring", "payload")

    def __init__(self, semiring: Semiring, payload):
        self.semiring = semiring
        self.payload = payload

    def _check(self, other):
        if not isinstance(other, Value):
            raise TypeError(f"expected a semiring Value, got {type(other).__name__}")
        if other.semiring is not self.semiring and other.semiring != self.semiring:
            raise MixedSemiringError(f"cannot combine {self.semiring} and {other.semiring}")

    def __add__(self, other):
        self._check(other)
        return Value(self.semiring, self.semiring._ops[0](self.payload, other.payload))

    def __mul__(self, other):
        self._check(other)
        return Value(self.semiring, self.semiring._ops[1](self.payload, other.payload))

    def __eq__(self, other):
        if not isinstance(other, Value):
            return NotImplemented
        return self.semiring == other.semiring and self.payload == other.payload

    def __hash__(self):
        return hash((self.semiring.kind, self.payload))

    @property
    def is_zero(self) -> bool:
        return self.semiring.raw_is_zero(self.payload)

    def __bool__(self):
        return not self.is_zero

    def __str__(self):
        return self.semiring.format(self.payload)

    def __repr__(self):
        return f"Value({self.semiring}, {self})"


# -- module-level operations ----------------------------------------------

def add(a: Value, b: Value) -> Value:
    return a + b


def mul(a: Value, b: Value) -> Value:
    return a * b


def zero(semiring: Semiring) -> Value:
    return semiring.zero


def one(semiring: Semiring) -> Value:
    return semiring.one


def parse_value(semiring: Semiring, text: str) -> Value:
    return semiring.parse(text)


def format_value(v: Value) -> str:
    return str(v)


def embed(v: Value, target: Semiring) -> Value:
    """The only implicit-free coercions: integer -> rational, and the
    identity on mod-int(m) and poly-rat instances."""
    src = v.semiring
    if src == target and target.kind in ("mod-int", "poly-rat"):
        return v
    if src.kind == "integer" and target.kind == "rational":
        return Value(target, Fraction(v.payload))
    raise SemiringError(f"no embedding from {src} into {target}")


def poly_subring_membership_QX(v: Value) -> bool:
    """True iff ``v`` lies in the subring of Q[x, y] generated over Q by the
    monomials of total degree at least two."""
    if v.semiring.kind != "poly-rat" or set(v.semiring.param) != {"x", "y"}:
        raise SemiringError("membership test needs a poly-rat value over exactly x, y")
    return all(d == 0 or d >= 2 for d in v.payload.degrees())


def poly_exact_divide(num: Value, den: Value) -> Optional[Value]:
    """``num / den`` if ``den`` divides ``num`` exactly, else None."""
    num._check(den)
    if num.semiring.kind != "poly-rat":
        raise SemiringError("poly_exact_divide works on poly-rat values")
    if den.payload.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    q = num.payload.divide(den.payload)
    return None if q is None else Value(num.semiring, q)


# -- convenience constructors -----------------------------------------------

def boolean() -> Semiring:
    return Semiring("boolean")


def rational() -> Semiring:
    return Semiring("rational")


def integer() -> Semiring:
    return Semiring("integer")


def prime_field(p: int) -> Semiring:
    return Semiring("prime-field", p)


def mod_int(m: int) -> Semiring:
    return Semiring("mod-int", m)


def tropical_nat() -> Semiring:
    return Semiring("tropical-nat")


def tropical_int() -> Semiring:
    return Semiring("tropical-int")


def tropical_rat() -> Semiring:
    return Semiring("tropical-rat")


def poly_rat(*variables: str) -> Semiring:
    return Semiring("poly-rat", tuple(variables))


def trunc_lang(alphabet) -> Semiring:
    return Semiring("trunc-lang", "".join(alphabet))


_INSTANCE = re.compile(r"^([a-z-]+)(?:\(([^()]*)\))?$")


def semiring_from_text(text: str) -> Semiring:
    """Inverse of ``str(semiring)``: ``"mod-int(6)"``, ``"poly-rat(x,y)"``,
    ``"trunc-lang(ab)"``, ``"tropical-nat"``."""
    m = _INSTANCE.match(text.strip())
    if not m:
        raise SemiringError(f"bad semiring description {text!r}")
    kind, arg = m.group(1), m.group(2)
    if arg is None:
        return Semiring(kind)
    if kind in ("prime-field", "mod-int"):
        if not _NATURAL.match(arg):
            raise SemiringError(f"bad modulus in {text!r}")
        return Semiring(kind, int(arg))
    if kind == "poly-rat":
        return Semiring(kind, tuple(v.strip() for v in arg.split(",")))
    return Semiring(kind, arg)
