"""Executable versions of the worked examples, each with checkable claims.

Each entry is built from the constraints listed here:

``fig1(s, t)``
    ``iota(1)=1, sigma(1,a,2)=s, tau(2)=t`` with ``s, t != 0`` and ``st = 0``.
``fig2(s, t, s', t')``
    path ``1 -a-> 2 -b-> 3 -a-> 4`` weighted ``s, 1, t`` plus
    ``1 -b-> 5 -b-> 4`` weighted ``s', t'``; ``iota(1) = tau(4) = 1``.
``fig3(s, t, s', t')``
    ``1 -a-> 2 (s), 2 -b-> 3 (1), 3 -a-> 4 (t), 1 -b-> 3 (s'), 3 -b-> 4 (t')``.
``zmod(m)``
    ``fig2`` over Z/mZ with ``s = t = p^k`` and ``s' = t' = m / p^k`` for the
    least prime ``p`` dividing ``m`` (``m`` needs two distinct prime factors).
``fig5`` / ``fig6``
    the two-state Q[x,y] automaton with behaviour ``sum (x+y)^(t+2) a^t`` and
    its one-state equivalent with loop weight ``x + y``.
``fig7``
    ``iota(1)=1, sigma(1,a,3)=2, sigma(1,b,2)=1, sigma(2,b,3)=1, tau(3)=1``
    over Z.
``fig9(pcp)`` / ``fig10(alphabet)``
    the Post correspondence automaton over the truncated-language semiring
    and the one-state automaton with behaviour constantly ``top``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

from .automaton import (
    WeightedAutomaton, behaviour_table, coefficient, empty_automaton, equiv_bounded,
    equiv_finite_semiring, is_bideterministic, semantic_trim, trim,
)
from .field import left_basic_language, minimize_field_report, reduce_right, right_basic_language
from .polynomial import Poly
from .semiring import (
    TOP, Semiring, Value, is_prime, poly_exact_divide, poly_subring_membership_QX,
    semiring_from_text,
)

NAMES = ("fig1", "fig2", "fig3", "zmod", "fig5", "fig6", "fig7", "fig9", "fig10")


class HypothesisError(ValueError):
    """Parameters violate the hypotheses an example is built on."""


@dataclass(frozen=True)
class Claim:
    name: str
    check: Callable[[], bool]


@dataclass
class GalleryEntry:
    name: str
    params: dict
    automaton: WeightedAutomaton
    others: Dict[str, WeightedAutomaton] = field(default_factory=dict)
    claims: List[Claim] = field(default_factory=list)


@dataclass(frozen=True)
class ClaimReport:
    entry: str
    results: Tuple[Tuple[str, bool], ...]

    @property
    def passed(self):
        return all(ok for _, ok in self.results)

    def __bool__(self):
        return self.passed


def verify_example_claims(entry: GalleryEntry) -> ClaimReport:
    return ClaimReport(entry.name, tuple((c.name, bool(c.check())) for c in entry.claims))


# -- PCP --------------------------------------------------------------------

@dataclass(frozen=True)
class PCPInstance:
    """Two morphisms ``f, g`` from ``gamma*`` to words, given letter-wise."""

    gamma: str
    f: Dict[str, str]
    g: Dict[str, str]

    def __post_init__(self):
        for name, h in (("f", self.f), ("g", self.g)):
            if set(h) != set(self.gamma):
                raise ValueError(f"{name} must be defined on exactly the letters of {self.gamma!r}")

    def image(self, h, w):
        return "".join(h[c] for c in w)

    @property
    def sigma(self) -> str:
        letters = set("".join(self.f.values()) + "".join(self.g.values()))
        return "".join(sorted(letters)) or "a"


def pcp_behaviour(inst: PCPInstance, w: str, S: Semiring) -> Value:
    """The coefficient the PCP automaton must have on ``w``."""
    if not w:
        return S.value(TOP)
    fw, gw = inst.image(inst.f, w), inst.image(inst.g, w)
    return S.value(fw) if fw == gw else S.value(TOP)


def pcp_automaton(inst: PCPInstance, sigma: Optional[str] = None, check_len: int = 6) -> WeightedAutomaton:
    sigma = sigma or inst.sigma
    S = Semiring("trunc-lang", sigma)
    missing = set("".join(inst.f.values()) + "".join(inst.g.values())) - set(sigma)
    if missing:
        raise ValueError(f"images use symbols {sorted(missing)} outside {sigma!r}")
    eps = S.value("")
    sig = {}
    for c in inst.gamma:
        sig[(1, c, 1)] = S.value(inst.f[c])
        sig[(2, c, 2)] = S.value(inst.g[c])
    A = WeightedAutomaton(S, inst.gamma, 3, sig, {1: eps, 2: eps, 3: S.value(TOP)}, {1: eps, 2: eps, 3: eps})
    for k in range(check_len + 1):
        for w in map("".join, itertools.product(inst.gamma, repeat=k)):
            assert coefficient(A, w) == pcp_behaviour(inst, w, S), w
    return A


def top_automaton(gamma: str, sigma: str) -> WeightedAutomaton:
    S = Semiring("trunc-lang", sigma)
    eps = S.value("")
    return WeightedAutomaton(S, gamma, 1, {(1, c, 1): eps for c in gamma}, {1: S.value(TOP)}, {1: eps})


# -- builders ---------------------------------------------------------------

def _semiring(params, default="mod-int(6)") -> Semiring:
    S = params.get("semiring", default)
    return S if isinstance(S, Semiring) else semiring_from_text(S)


def _weights(S, params, names, defaults):
    return [S.value(params.get(n, d)) for n, d in zip(names, defaults)]


def _exact_equiv(A, B, maxlen=8):
    if A.semiring.is_finite:
        return equiv_finite_semiring(A, B)
    return equiv_bounded(A, B, maxlen)


def fig1(S, s, t):
    if s.is_zero or t.is_zero or not (s * t).is_zero:
        raise HypothesisError("fig1 needs s, t nonzero with st = 0")
    return WeightedAutomaton(S, "a", 2, {(1, "a", 2): s}, {1: S.one}, {2: t})


def _check_hypotheses(s, t, s2, t2):
    if (s * t).is_zero or (s2 * t2).is_zero:
        raise HypothesisError("needs st != 0 and s't' != 0")
    if not (s * t2).is_zero or not (s2 * t).is_zero:
        raise HypothesisError("needs st' = 0 and s't = 0")


def fig2(S, s, t, s2, t2):
    _check_hypotheses(s, t, s2, t2)
    one = S.one
    sig = {(1, "a", 2): s, (2, "b", 3): one, (3, "a", 4): t, (1, "b", 5): s2, (5, "b", 4): t2}
    return WeightedAutomaton(S, "ab", 5, sig, {1: one}, {4: one})


def fig3(S, s, t, s2, t2):
    _check_hypotheses(s, t, s2, t2)
    one = S.one
    sig = {(1, "a", 2): s, (2, "b", 3): one, (3, "a", 4): t, (1, "b", 3): s2, (3, "b", 4): t2}
    return WeightedAutomaton(S, "ab", 4, sig, {1: one}, {4: one})


def zmod_parameters(m: int) -> Tuple[int, int]:
    """``(u, v) = (p^k, m / p^k)`` for the least prime factor ``p`` of ``m``."""
    if m < 2:
        raise HypothesisError("m must have two distinct prime factors")
    p = next(d for d in range(2, m + 1) if m % d == 0 and is_prime(d))
    u = 1
    while m % (u * p) == 0:
        u *= p
    if u == m:
        raise HypothesisError(f"m = {m} is a prime power; it needs two distinct prime factors")
    return u, m // u


def _xy():
    S = Semiring("poly-rat", ("x", "y"))
    xy = S.value(Poly.variable(2, 0) + Poly.variable(2, 1))
    return S, xy


def fig5():
    S, xy = _xy()
    sq = xy * xy
    return WeightedAutomaton(S, "a", 2, {(1, "a", 2): S.one, (2, "a", 1): sq}, {1: S.one}, {1: sq, 2: sq * xy})


def fig6():
    S, xy = _xy()
    return WeightedAutomaton(S, "a", 1, {(1, "a", 1): xy}, {1: xy * xy}, {1: S.one})


def fig7():
    S = Semiring("integer")
    return WeightedAutomaton(S, "ab", 3, {(1, "a", 3): 2, (1, "b", 2): 1, (2, "b", 3): 1}, {1: 1}, {3: 1})


def _words(alphabet, maxlen):
    for k in range(maxlen + 1):
        yield from map("".join, itertools.product(alphabet, repeat=k))


def build_example(name: str, params: Optional[dict] = None) -> GalleryEntry:
    params = dict(params or {})
    if name == "fig1":
        S = _semiring(params)
        s, t = _weights(S, params, ("s", "t"), ("2", "3"))
        A = fig1(S, s, t)
        claims = [
            Claim("trim", lambda: trim(A) == A),
            Claim("bideterministic", lambda: bool(is_bideterministic(A))),
            Claim("equivalent to the empty automaton", lambda: bool(_exact_equiv(A, empty_automaton(S, A.alphabet)))),
        ]
        if S.is_finite:
            claims.append(Claim("semantic trim is empty", lambda: semantic_trim(A).n == 0))
        return GalleryEntry(name, {"semiring": str(S), "s": str(s), "t": str(t)}, A, claims=claims)

    if name in ("fig2", "fig3", "zmod"):
        if name == "zmod":
            m = int(params.get("m", 6))
            u, v = zmod_parameters(m)
            S = Semiring("mod-int", m)
            s, t, s2, t2 = (S.value(x) for x in (u, u, v, v))
        else:
            S = _semiring(params)
            s, t, s2, t2 = _weights(S, params, ("s", "t", "s2", "t2"), ("2", "2", "3", "3"))
        A, B = fig2(S, s, t, s2, t2), fig3(S, s, t, s2, t2)
        expected = {"aba": s * t, "bb": s2 * t2}
        table = lambda: dict(behaviour_table(A, 4).coeffs) == expected
        shown = {"semiring": str(S), "s": str(s), "t": str(t), "s2": str(s2), "t2": str(t2)}
        if name == "zmod":
            shown["m"] = m
        if name == "fig3":
            claims = [
                Claim("four states", lambda: B.n == 4),
                Claim("not bideterministic", lambda: not is_bideterministic(B)),
                Claim("equivalent to fig2", lambda: bool(_exact_equiv(A, B))),
            ]
            return GalleryEntry(name, shown, B, {"fig2": A}, claims)
        claims = [
            Claim("trim", lambda: trim(A) == A),
            Claim("bideterministic", lambda: bool(is_bideterministic(A))),
            Claim("behaviour is st.aba + s't'.bb", table),
            Claim("four-state fig3 is equivalent", lambda: bool(_exact_equiv(A, B))),
        ]
        return GalleryEntry(name, shown, A, {"fig3": B}, claims)

    if name in ("fig5", "fig6"):
        A, B = fig5(), fig6()
        S, xy = _xy()

        def coefficients():
            return all(coefficient(A, "a" * t).payload == (xy.payload ** (t + 2)) for t in range(9))

        def certificate():
            q = poly_exact_divide(coefficient(A, "a"), coefficient(A, ""))
            return q == xy and not poly_subring_membership_QX(q)

        claims = [
            Claim("coefficient of a^t is (x+y)^(t+2) for t <= 8", coefficients),
            Claim("one-state loop weight would be x+y, outside Q[X]", certificate),
            Claim("fig6 is bideterministic", lambda: bool(is_bideterministic(B))),
            Claim("fig6 is equivalent up to length 8", lambda: bool(equiv_bounded(A, B, 8))),
        ]
        if name == "fig5":
            claims.insert(0, Claim("weights lie in Q[X]", lambda: all(poly_subring_membership_QX(w) for w in A.weights())))
            return GalleryEntry(name, {}, A, {"fig6": B}, claims)
        claims.insert(0, Claim("loop weight lies outside Q[X]", lambda: not poly_subring_membership_QX(B.sigma[(1, "a", 1)])))
        return GalleryEntry(name, {}, B, {"fig5": A}, claims)

    if name == "fig7":
        A = fig7()
        report = minimize_field_report(A)
        C = report.automaton

        def basics():
            return (right_basic_language(A).words == ("", "a", "b")
                    and left_basic_language(reduce_right(A)).words == ("", "a", "b"))

        claims = [
            Claim("bideterministic over Z", lambda: bool(is_bideterministic(A))),
            Claim("right and left basic languages are {e, a, b}", basics),
            Claim("minimal automaton has 3 states", lambda: C.n == 3),
            Claim("minimal automaton is bideterministic", lambda: bool(is_bideterministic(C))),
            Claim("minimal automaton has a non-integer weight", lambda: any(w.payload.denominator != 1 for w in C.weights())),
            Claim("weights not all within Z", lambda: not report.within_domain),
        ]
        return GalleryEntry(name, {}, A, {"minimal": C}, claims)

    if name == "fig9":
        inst = params.get("pcp") or PCPInstance("c", {"c": "ab"}, {"c": "ab"})
        A = pcp_automaton(inst)
        S = A.semiring
        B = top_automaton(inst.gamma, S.param)

        def formula():
            return all(coefficient(A, w) == pcp_behaviour(inst, w, S) for w in _words(inst.gamma, 6))

        def matches_top():
            # a PCP solution of length <= 8 shows up as a difference
            solved = any(inst.image(inst.f, w) == inst.image(inst.g, w) for w in _words(inst.gamma, 8) if w)
            return bool(equiv_bounded(A, B, 8)) == (not solved)

        claims = [
            Claim("behaviour formula holds for |w| <= 6", formula),
            Claim("equivalent to fig10 up to length 8 iff no solution of length <= 8", matches_top),
        ]
        shown = {"gamma": inst.gamma, "f": dict(inst.f), "g": dict(inst.g)}
        return GalleryEntry(name, shown, A, {"fig10": B}, claims)

    if name == "fig10":
        gamma = params.get("gamma", "c")
        sigma = params.get("sigma", "ab")
        B = top_automaton(gamma, sigma)
        claims = [
            Claim("bideterministic", lambda: bool(is_bideterministic(B))),
            Claim("coefficient is top for |w| <= 8", lambda: all(coefficient(B, w).payload is TOP for w in _words(gamma, 8))),
        ]
        return GalleryEntry(name, {"gamma": gamma, "sigma": sigma}, B, claims=claims)

    raise KeyError(f"unknown example {name!r}; choose from {', '.join(NAMES)}")
