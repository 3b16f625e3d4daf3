"""Minimisation, equivalence and bideterminisability over fields.

Minimisation is the two-step basis reduction on linear representations:
first onto a basis of the column space spanned by ``mu(y) f`` (a right
basic language), then onto a basis of the row space spanned by
``i mu(x)`` (a left basic language).  Basic languages are grown one word
length at a time, testing candidates in shortlex order, so the output is
fully determined by the alphabet order.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional

from .automaton import WeightedAutomaton, coefficient, is_bideterministic, shortlex_key
from . import hankel
from .linalg import Arith, FieldMatrix, IndependenceTracker, left_inverse_raw
from .results import Decision, Equivalence
from .semiring import Semiring, SemiringError, embed, rational


class _Rep:
    """Sparse internal linear representation: 0-based states, entries in the
    :class:`Arith` format, ``trans[c]`` a list of ``(p, q, w)``."""

    def __init__(self, ar: Arith, alphabet, n, i, f, trans):
        self.ar = ar
        self.alphabet = tuple(alphabet)
        self.n = n
        self.i = i
        self.f = f
        self.trans = trans

    @classmethod
    def of(cls, A: WeightedAutomaton, ar: Arith) -> "_Rep":
        z = ar.zero
        i = [z] * A.n
        f = [z] * A.n
        for q, v in A.iota.items():
            i[q - 1] = ar.conv(v.payload)
        for q, v in A.tau.items():
            f[q - 1] = ar.conv(v.payload)
        trans = {c: [] for c in A.alphabet}
        for (p, c, q), v in A.sigma.items():
            trans[c].append((p - 1, q - 1, ar.conv(v.payload)))
        return cls(ar, A.alphabet, A.n, i, f, trans)

    def automaton(self) -> WeightedAutomaton:
        back = self.ar.back
        return WeightedAutomaton(
            self.ar.semiring, self.alphabet, self.n,
            {(p + 1, c, q + 1): back(w) for c, ts in self.trans.items() for p, q, w in ts},
            {q + 1: back(x) for q, x in enumerate(self.i) if x},
            {q + 1: back(x) for q, x in enumerate(self.f) if x},
        )

    def _fix(self, out):
        if self.ar.p is not None:
            p = self.ar.p
            return [x % p for x in out]
        return out

    def row_step(self, v, c):
        """``v mu(c)``"""
        out = [self.ar.zero] * self.n
        for p, q, w in self.trans[c]:
            if v[p]:
                out[q] += v[p] * w
        return self._fix(out)

    def col_step(self, v, c):
        """``mu(c) v``"""
        out = [self.ar.zero] * self.n
        for p, q, w in self.trans[c]:
            if v[q]:
                out[p] += w * v[q]
        return self._fix(out)

    def dense(self, c):
        M = [[self.ar.zero] * self.n for _ in range(self.n)]
        for p, q, w in self.trans[c]:
            M[p][q] = w
        return M


def _field_arith(A: WeightedAutomaton) -> Arith:
    if not A.semiring.is_field:
        raise SemiringError(f"{A.semiring} is not a field")
    return Arith(A.semiring)


@dataclass(frozen=True)
class BasicLanguage:
    """Words in shortlex order with their vectors (``i mu(x)`` rows for the
    left side, ``mu(y) f`` columns for the right side), as payload tuples."""

    words: tuple
    side: str
    vectors: tuple

    def __len__(self):
        return len(self.words)


def _basic(rep: _Rep, side: str):
    ar = rep.ar
    start = rep.f if side == "right" else rep.i
    step = rep.col_step if side == "right" else rep.row_step
    key = shortlex_key(rep.alphabet)
    tracker = IndependenceTracker(ar, rep.n)
    if rep.n == 0 or not tracker.add(start):
        return [], []
    words, vecs = [""], [start]
    level = [("", start)]
    while level:
        cands = []
        for w, v in level:
            for c in rep.alphabet:
                cands.append((c + w if side == "right" else w + c, step(v, c)))
        cands.sort(key=lambda wv: key(wv[0]))
        level = []
        for w, v in cands:
            if tracker.add(v):
                words.append(w)
                vecs.append(v)
                level.append((w, v))
    return words, vecs


def _language(rep, side) -> BasicLanguage:
    words, vecs = _basic(rep, side)
    back = rep.ar.back
    return BasicLanguage(tuple(words), side, tuple(tuple(back(x) for x in v) for v in vecs))


def right_basic_language(A: WeightedAutomaton) -> BasicLanguage:
    A = _as_field(A)
    return _language(_Rep.of(A, _field_arith(A)), "right")


def left_basic_language(A: WeightedAutomaton) -> BasicLanguage:
    A = _as_field(A)
    return _language(_Rep.of(A, _field_arith(A)), "left")


def _reduce_right(rep: _Rep) -> _Rep:
    ar = rep.ar
    _words, cols = _basic(rep, "right")
    k = len(cols)
    if k == 0:
        return _Rep(ar, rep.alphabet, 0, [], [], {c: [] for c in rep.alphabet})
    Y = [[cols[j][p] for j in range(k)] for p in range(rep.n)]
    Yl = left_inverse_raw(ar, Y, k)
    i2 = [ar.dot(rep.i, cols[j]) for j in range(k)]
    trans = {}
    for c in rep.alphabet:
        mapped = [rep.col_step(cols[j], c) for j in range(k)]
        ts = []
        for r in range(k):
            for j in range(k):
                w = ar.dot(Yl[r], mapped[j])
                if w:
                    ts.append((r, j, w))
        trans[c] = ts
    f2 = [ar.one] + [ar.zero] * (k - 1)
    return _Rep(ar, rep.alphabet, k, i2, f2, trans)


def _reduce_left(rep: _Rep):
    ar = rep.ar
    _words, X = _basic(rep, "left")
    m = len(X)
    if m == 0:
        return _Rep(ar, rep.alphabet, 0, [], [], {c: [] for c in rep.alphabet}), X
    XT = [[X[r][j] for r in range(m)] for j in range(rep.n)]
    Xr_cols = left_inverse_raw(ar, XT, m)  # row j is column j of the right inverse
    trans = {}
    for c in rep.alphabet:
        ts = []
        for r in range(m):
            moved = rep.row_step(X[r], c)
            for j in range(m):
                w = ar.dot(moved, Xr_cols[j])
                if w:
                    ts.append((r, j, w))
        trans[c] = ts
    f2 = [ar.dot(X[r], rep.f) for r in range(m)]
    i2 = [ar.one] + [ar.zero] * (m - 1)
    return _Rep(ar, rep.alphabet, m, i2, f2, trans), X


def reduce_right(A: WeightedAutomaton) -> WeightedAutomaton:
    """Restrict to the span of the columns ``mu(y) f``: with ``Y`` the basis
    columns (first ``f`` itself) and ``Y_l`` a left inverse, the result is
    ``(i Y, Y_l mu(c) Y, e_1)``."""
    A = _as_field(A)
    return _reduce_right(_Rep.of(A, _field_arith(A))).automaton()


@dataclass(frozen=True)
class ConjugacyWitness:
    """``X`` conjugates ``target`` to ``source``: ``i_t X = i_s``,
    ``mu_t(c) X = X mu_s(c)`` and ``f_t = X f_s``."""

    X: FieldMatrix
    source: WeightedAutomaton
    target: WeightedAutomaton

    def holds(self) -> bool:
        ar = Arith(self.X.semiring)
        X = [[ar.conv(x) for x in r] for r in self.X.rows]
        s, t = _Rep.of(self.source, ar), _Rep.of(self.target, ar)
        m, k = t.n, s.n
        if len(X) != m or any(len(r) != k for r in X):
            return False
        cols = [[X[r][j] for r in range(m)] for j in range(k)]
        if [ar.dot(t.i, col) for col in cols] != s.i:
            return False
        for c in s.alphabet:
            mu_t = t.dense(c)
            left = [[ar.dot(row, col) for col in cols] for row in mu_t]
            right = [s.row_step(X[r], c) for r in range(m)]
            if left != right:
                return False
        return t.f == [ar.dot(row, s.f) for row in X]


def reduce_left(B: WeightedAutomaton):
    """Restrict to the span of the rows ``i mu(x)``: with ``X`` the basis rows
    (first ``i`` itself) and ``X_r`` a right inverse, the result is
    ``(e_1, X mu(c) X_r, X f)``.  Returns the automaton and the witness."""
    B = _as_field(B)
    ar = _field_arith(B)
    rep, X = _reduce_left(_Rep.of(B, ar))
    C = rep.automaton()
    Xm = FieldMatrix(B.semiring, [[ar.back(x) for x in r] for r in X], B.n)
    return C, ConjugacyWitness(Xm, B, C)


def _as_field(A: WeightedAutomaton) -> WeightedAutomaton:
    if A.semiring.kind == "integer":
        Q = rational()
        return A.map_weights(Q, lambda v: embed(v, Q))
    if not A.semiring.is_field:
        raise SemiringError(f"minimisation needs a field or the integers, got {A.semiring}")
    return A


def minimize_field(A: WeightedAutomaton) -> WeightedAutomaton:
    """Minimal equivalent automaton over the field (integer weights are
    minimised over the rationals).

    Rational inputs take the Hankel route of :mod:`biwa.hankel`, which
    yields the same automaton as :func:`reduce_left` after
    :func:`reduce_right`; that two-step path is the fallback whenever a
    modular rank decision cannot be certified, and the only path over prime
    fields.
    """
    A = _as_field(A)
    if A.semiring.kind == "rational":
        try:
            return hankel.minimize_rational(A)
        except hankel.Uncertified:
            pass
    ar = Arith(A.semiring)
    rep, _X = _reduce_left(_reduce_right(_Rep.of(A, ar)))
    return rep.automaton()


@dataclass(frozen=True)
class FieldMinimization:
    automaton: WeightedAutomaton
    domain: Semiring
    within_domain: bool


def weights_within(A: WeightedAutomaton, domain: Semiring) -> bool:
    """Whether every weight of a rational automaton lies in ``domain``."""
    if domain.kind == "integer":
        return all(v.payload.denominator == 1 for v in A.weights())
    return domain == A.semiring


def minimize_field_report(A: WeightedAutomaton) -> FieldMinimization:
    C = minimize_field(A)
    return FieldMinimization(C, A.semiring, weights_within(C, A.semiring))


def equiv_field(A: WeightedAutomaton, B: WeightedAutomaton) -> Equivalence:
    """Exact equivalence over a field via the difference representation
    ``(i_A, -i_B)``, ``f = (f_A; f_B)``: explore ``i mu(x)`` in shortlex
    order, extending only words whose vector is new to the span, and report
    the first ``x`` with ``i mu(x) f != 0``."""
    if A.semiring != B.semiring:
        raise SemiringError(f"automata over different semirings: {A.semiring} vs {B.semiring}")
    if A.alphabet != B.alphabet:
        raise ValueError("automata over different alphabets")
    ar = _field_arith(A)
    ra, rb = _Rep.of(A, ar), _Rep.of(B, ar)
    shift = ra.n
    neg = (lambda x: -x) if ar.p is None else (lambda x: (-x) % ar.p)
    trans = {c: ra.trans[c] + [(p + shift, q + shift, w) for p, q, w in rb.trans[c]] for c in A.alphabet}
    rep = _Rep(ar, A.alphabet, ra.n + rb.n, ra.i + [neg(x) for x in rb.i], ra.f + rb.f, trans)
    tracker = IndependenceTracker(ar, rep.n)
    queue = deque([("", rep.i)])
    while queue:
        w, v = queue.popleft()
        if ar.dot(v, rep.f):
            return Equivalence(False, w)
        if not tracker.add(v):
            continue
        for c in rep.alphabet:
            queue.append((w + c, rep.row_step(v, c)))
    return Equivalence(True)


def _shortest_to_final(C: WeightedAutomaton, q: int) -> str:
    queue = deque([(q, "")])
    seen = {q}
    while queue:
        p, w = queue.popleft()
        if p in C.tau:
            return w
        for c in C.alphabet:
            for t, _ in C.successors(p, c):
                if t not in seen:
                    seen.add(t)
                    queue.append((t, w + c))
    raise AssertionError(f"state {q} is not coaccessible")


def _state_words(C: WeightedAutomaton) -> dict:
    """For a deterministic minimal automaton, a word leading to each state."""
    lang = left_basic_language(C)
    out = {}
    for w, v in zip(lang.words, lang.vectors):
        nz = [j for j, x in enumerate(v) if x]
        out.setdefault(nz[0] + 1, w)
    return out


def quotient_evidence(C: WeightedAutomaton, check) -> Optional[dict]:
    """Words ``u, v`` whose left quotients are independent but share the
    support word ``z`` (so no bideterministic automaton can realise the
    series), recomputed on the deterministic minimal automaton ``C``."""
    if check.condition not in ("iii", "iv"):
        return None
    words = _state_words(C)
    if check.condition == "iii":
        p1, p2 = check.states
        z = ""
    else:
        q, p1, p2 = check.states
        z = check.letter + _shortest_to_final(C, q)
    u, v = words[p1], words[p2]
    cu, cv = coefficient(C, u + z), coefficient(C, v + z)
    if cu.is_zero or cv.is_zero:
        raise AssertionError("quotient evidence failed to reproduce")
    return {"u": u, "v": v, "common_word": z, "coefficients": [str(cu), str(cv)]}


def bideterminize_field(A: WeightedAutomaton) -> Decision:
    """YES with the minimal automaton when it is bideterministic, NO
    otherwise: any bideterministic equivalent would force the minimal output
    itself to be bideterministic."""
    C = minimize_field(A)
    check = is_bideterministic(C)
    if check:
        return Decision(True, "empty" if C.n == 0 else "minimal", witness=C)
    details = {"condition": check.condition, "states": list(check.states), "letter": check.letter,
               "minimal_automaton": C}
    evidence = quotient_evidence(C, check)
    if evidence:
        details["quotients"] = evidence
    reason = f"minimal automaton violates condition ({check.condition}): {check.describe()}"
    return Decision(False, "minimal", reason=reason, details=details)
