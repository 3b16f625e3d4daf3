"""Weighted automata over a semiring: behaviour, structural predicates,
trimming, and exact/bounded equivalence.

States are ``1..n`` (``n`` may be 0).  A weight equal to the semiring zero
is never stored: giving one to the constructor simply omits the entry, so
"transition exists" and "weight is nonzero" coincide.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Dict, Iterable, List, NamedTuple, Optional, Tuple

from .nfa import NFA
from .results import Equivalence
from .semiring import Semiring, SemiringError, Value


class AutomatonError(ValueError):
    pass


def _items(obj, arity):
    if obj is None:
        return []
    if hasattr(obj, "items"):
        if arity == 2:
            return list(obj.items())
        return [(*k, v) for k, v in obj.items()]
    return list(obj)


class WeightedAutomaton:
    """``A = (n, sigma, iota, tau)`` over ``semiring`` and ``alphabet``.

    ``sigma`` maps ``(p, c, q)`` to a weight, ``iota``/``tau`` map states to
    weights; each may also be given as an iterable of tuples.  Weights may be
    :class:`Value` objects, literal strings or raw payloads.
    """

    def __init__(self, semiring: Semiring, alphabet, n: int, sigma=None, iota=None, tau=None):
        alphabet = tuple(alphabet)
        if any(len(c) != 1 for c in alphabet) or len(set(alphabet)) != len(alphabet):
            raise AutomatonError(f"alphabet must be distinct single characters, got {alphabet!r}")
        if n < 0:
            raise AutomatonError("negative state count")
        self.semiring = semiring
        self.alphabet = alphabet
        self.n = n
        symbols = set(alphabet)

        def state(q):
            if not isinstance(q, int) or not 1 <= q <= n:
                raise AutomatonError(f"state {q!r} outside 1..{n}")
            return q

        def weight(w):
            try:
                return semiring.value(w)
            except SemiringError as exc:
                raise AutomatonError(str(exc)) from None

        sig: Dict[tuple, Value] = {}
        for p, c, q, w in _items(sigma, 4):
            if c not in symbols:
                raise AutomatonError(f"symbol {c!r} not in alphabet")
            v = weight(w)
            if not v.is_zero:
                sig[(state(p), c, state(q))] = v
        self._sigma = sig
        self._iota = {state(q): v for q, v in ((q, weight(w)) for q, w in _items(iota, 2)) if not v.is_zero}
        self._tau = {state(q): v for q, v in ((q, weight(w)) for q, w in _items(tau, 2)) if not v.is_zero}

        out: Dict[tuple, list] = {}
        inc: Dict[tuple, list] = {}
        for (p, c, q), v in sorted(sig.items(), key=lambda kv: kv[0][2]):
            out.setdefault((p, c), []).append((q, v.payload))
        for (p, c, q), v in sorted(sig.items(), key=lambda kv: kv[0][0]):
            inc.setdefault((q, c), []).append((p, v.payload))
        self._out = out
        self._in = inc

    @property
    def sigma(self):
        return MappingProxyType(self._sigma)

    @property
    def iota(self):
        return MappingProxyType(self._iota)

    @property
    def tau(self):
        return MappingProxyType(self._tau)

    @property
    def states(self):
        return range(1, self.n + 1)

    def transitions(self) -> List[Tuple[int, str, int, Value]]:
        pos = {c: i for i, c in enumerate(self.alphabet)}
        return [(p, c, q, v) for (p, c, q), v in sorted(self._sigma.items(), key=lambda kv: (kv[0][0], pos[kv[0][1]], kv[0][2]))]

    def successors(self, p: int, c: str):
        """``(q, payload)`` pairs for transitions leaving ``p`` on ``c``."""
        return self._out.get((p, c), ())

    def predecessors(self, q: int, c: str):
        return self._in.get((q, c), ())

    def weights(self):
        yield from self._iota.values()
        yield from self._sigma.values()
        yield from self._tau.values()

    def restrict(self, keep: Iterable[int]) -> "WeightedAutomaton":
        """Sub-automaton on the states ``keep``, renumbered in increasing order."""
        keep = sorted(set(keep))
        ren = {q: i + 1 for i, q in enumerate(keep)}
        return WeightedAutomaton(
            self.semiring, self.alphabet, len(keep),
            {(ren[p], c, ren[q]): v for (p, c, q), v in self._sigma.items() if p in ren and q in ren},
            {ren[q]: v for q, v in self._iota.items() if q in ren},
            {ren[q]: v for q, v in self._tau.items() if q in ren},
        )

    def map_weights(self, semiring: Semiring, fn) -> "WeightedAutomaton":
        return WeightedAutomaton(
            semiring, self.alphabet, self.n,
            {k: fn(v) for k, v in self._sigma.items()},
            {k: fn(v) for k, v in self._iota.items()},
            {k: fn(v) for k, v in self._tau.items()},
        )

    def check_word(self, word: str):
        for c in word:
            if c not in self.alphabet:
                raise AutomatonError(f"symbol {c!r} not in alphabet {''.join(self.alphabet)!r}")

    def representation(self) -> "LinearRepresentation":
        S = self.semiring
        z = S.zero.payload
        i = [self._iota[q].payload if q in self._iota else z for q in self.states]
        f = [self._tau[q].payload if q in self._tau else z for q in self.states]
        mu = {c: [[z] * self.n for _ in range(self.n)] for c in self.alphabet}
        for (p, c, q), v in self._sigma.items():
            mu[c][p - 1][q - 1] = v.payload
        return LinearRepresentation(self.n, i, mu, f)

    def __eq__(self, other):
        if not isinstance(other, WeightedAutomaton):
            return NotImplemented
        return (self.semiring == other.semiring and self.alphabet == other.alphabet and self.n == other.n
                and self._sigma == other._sigma and self._iota == other._iota and self._tau == other._tau)

    def __hash__(self):
        return hash((self.semiring, self.alphabet, self.n, frozenset(self._sigma.items())))

    def __repr__(self):
        parts = [f"{p}-{c}->{q}:{v}" for p, c, q, v in self.transitions()]
        ini = ", ".join(f"{q}:{v}" for q, v in sorted(self._iota.items()))
        fin = ", ".join(f"{q}:{v}" for q, v in sorted(self._tau.items()))
        return (f"WeightedAutomaton({self.semiring}, {''.join(self.alphabet)!r}, n={self.n}, "
                f"iota={{{ini}}}, tau={{{fin}}}, [{', '.join(parts)}])")


class LinearRepresentation(NamedTuple):
    """``(n, i, mu, f)`` with raw payload entries: ``i`` and ``f`` are lists,
    ``mu[c]`` is an ``n x n`` list of rows."""

    n: int
    i: list
    mu: dict
    f: list


def empty_automaton(semiring: Semiring, alphabet) -> WeightedAutomaton:
    return WeightedAutomaton(semiring, alphabet, 0)


def shortlex_key(alphabet):
    pos = {c: i for i, c in enumerate(alphabet)}
    return lambda w: (len(w), [pos[c] for c in w])


# -- behaviour ----------------------------------------------------------

def _step(A: WeightedAutomaton, vec: dict, c: str) -> dict:
    S = A.semiring
    add, mul = S.raw_add, S.raw_mul
    out: dict = {}
    for p, x in vec.items():
        for q, y in A.successors(p, c):
            prod = mul(x, y)
            out[q] = add(out[q], prod) if q in out else prod
    return {q: v for q, v in out.items() if not S.raw_is_zero(v)}


def _finish(A: WeightedAutomaton, vec: dict):
    S = A.semiring
    acc = S.zero.payload
    for q, x in vec.items():
        t = A.tau.get(q)
        if t is not None:
            acc = S.raw_add(acc, S.raw_mul(x, t.payload))
    return acc


def coefficient(A: WeightedAutomaton, word: str) -> Value:
    """``(||A||, w) = i mu(w) f`` by successive vector-matrix products."""
    A.check_word(word)
    vec = {q: v.payload for q, v in A.iota.items()}
    for c in word:
        if not vec:
            break
        vec = _step(A, vec, c)
    return Value(A.semiring, _finish(A, vec))


@dataclass
class SeriesTable:
    """Nonzero coefficients of a series on words of length ``<= maxlen``."""

    semiring: Semiring
    alphabet: tuple
    coeffs: Dict[str, Value] = field(default_factory=dict)
    maxlen: Optional[int] = None

    def __getitem__(self, word):
        return self.coeffs.get(word, self.semiring.zero)

    def support(self):
        return set(self.coeffs)

    def as_text(self) -> Dict[str, str]:
        return {w: str(v) for w, v in self.coeffs.items()}

    def words(self):
        return sorted(self.coeffs, key=shortlex_key(self.alphabet))


def behaviour_table(A: WeightedAutomaton, maxlen: int) -> SeriesTable:
    if maxlen < 0:
        raise ValueError("maxlen must be nonnegative")
    table = SeriesTable(A.semiring, A.alphabet, {}, maxlen)
    frontier = [("", {q: v.payload for q, v in A.iota.items()})]
    for length in range(maxlen + 1):
        nxt = []
        for w, vec in frontier:
            coef = _finish(A, vec)
            if not A.semiring.raw_is_zero(coef):
                table.coeffs[w] = Value(A.semiring, coef)
            if length < maxlen:
                for c in A.alphabet:
                    v2 = _step(A, vec, c)
                    if v2:
                        nxt.append((w + c, v2))
        frontier = nxt
    return table


# -- structure ------------------------------------------------------------

def transpose(A: WeightedAutomaton) -> WeightedAutomaton:
    return WeightedAutomaton(
        A.semiring, A.alphabet, A.n,
        {(q, c, p): v for (p, c, q), v in A.sigma.items()},
        dict(A.tau), dict(A.iota),
    )


@dataclass(frozen=True)
class BidetCheck:
    """Truthy iff bideterministic.  Otherwise ``condition`` is one of
    ``"i"`` (two initial states), ``"ii"`` (two ``c``-successors),
    ``"iii"`` (two terminal states), ``"iv"`` (two ``c``-predecessors), and
    ``states``/``letter`` locate the violation."""

    ok: bool
    condition: Optional[str] = None
    states: tuple = ()
    letter: Optional[str] = None

    def __bool__(self):
        return self.ok

    def describe(self) -> str:
        if self.ok:
            return "bideterministic"
        template = {
            "i": "states {0} and {1} both have nonzero initial weight",
            "ii": "state {0} has {c}-transitions to both {1} and {2}",
            "iii": "states {0} and {1} both have nonzero terminal weight",
            "iv": "state {0} has {c}-transitions from both {1} and {2}",
        }[self.condition]
        return template.format(*self.states, c=self.letter)


def is_bideterministic(A: WeightedAutomaton) -> BidetCheck:
    ini = sorted(A.iota)
    if len(ini) > 1:
        return BidetCheck(False, "i", tuple(ini[:2]))
    for p in A.states:
        for c in A.alphabet:
            succ = A.successors(p, c)
            if len(succ) > 1:
                return BidetCheck(False, "ii", (p, succ[0][0], succ[1][0]), c)
    fin = sorted(A.tau)
    if len(fin) > 1:
        return BidetCheck(False, "iii", tuple(fin[:2]))
    for q in A.states:
        for c in A.alphabet:
            pred = A.predecessors(q, c)
            if len(pred) > 1:
                return BidetCheck(False, "iv", (q, pred[0][0], pred[1][0]), c)
    return BidetCheck(True)


def is_deterministic(A: WeightedAutomaton) -> bool:
    if len(A.iota) > 1:
        return False
    return all(len(A.successors(p, c)) <= 1 for p in A.states for c in A.alphabet)


def support_skeleton(A: WeightedAutomaton) -> "Skeleton":
    """Forget the weights.  The language equals ``supp(||A||)`` when the
    semiring is positive; otherwise it only over-approximates it and the
    result is tagged ``exact=False``."""
    nfa = NFA.build(A.alphabet, A.n, A.iota, A.tau, A.sigma)
    return Skeleton(nfa, A.semiring.is_positive)


class Skeleton(NamedTuple):
    nfa: NFA
    exact: bool


def trim(A: WeightedAutomaton) -> WeightedAutomaton:
    """Keep the states that are both accessible and coaccessible."""
    return A.restrict(support_skeleton(A).nfa.useful_states())


def semantic_trim(A: WeightedAutomaton) -> WeightedAutomaton:
    """Keep the states lying on some run with a nonzero monomial.

    Over zero-divisor-free semirings this coincides with :func:`trim`.  Over
    finite semirings the sets of prefix values ``iota(p) * sigma(run)``
    reaching each state and suffix values ``sigma(run) * tau(p')`` leaving it
    are saturated, and a state survives iff some prefix times suffix is
    nonzero (commutativity lets the two halves be multiplied in either order).
    """
    S = A.semiring
    if S.is_zero_divisor_free:
        return trim(A)
    if not S.is_finite:
        raise SemiringError(f"semantic trimming over {S} (infinite, with zero divisors) is unsupported")
    fwd = _saturate(A, {q: v.payload for q, v in A.iota.items()}, A.successors)
    bwd = _saturate(A, {q: v.payload for q, v in A.tau.items()}, A.predecessors)
    keep = [q for q in A.states
            if any(not S.raw_is_zero(S.raw_mul(x, y)) for x in fwd[q] for y in bwd[q])]
    return A.restrict(keep)


def _saturate(A, seeds: dict, moves) -> dict:
    S = A.semiring
    reach = {q: set() for q in A.states}
    work = deque()
    for q, x in seeds.items():
        reach[q].add(x)
        work.append((q, x))
    while work:
        p, x = work.popleft()
        for c in A.alphabet:
            for q, y in moves(p, c):
                z = S.raw_mul(x, y)
                if not S.raw_is_zero(z) and z not in reach[q]:
                    reach[q].add(z)
                    work.append((q, z))
    return reach


def state_series(A: WeightedAutomaton, q: int, direction: str = "future") -> WeightedAutomaton:
    """The automaton realising the future (iota := unit at q) or the past
    (tau := unit at q) of state ``q``."""
    if not 1 <= q <= A.n:
        raise AutomatonError(f"state {q} outside 1..{A.n}")
    unit = {q: A.semiring.one}
    if direction == "future":
        return WeightedAutomaton(A.semiring, A.alphabet, A.n, A.sigma, unit, A.tau)
    if direction == "past":
        return WeightedAutomaton(A.semiring, A.alphabet, A.n, A.sigma, A.iota, unit)
    raise ValueError(f"direction must be 'future' or 'past', not {direction!r}")


# -- equivalence --------------------------------------------------------

def _check_pair(A, B):
    if A.semiring != B.semiring:
        raise SemiringError(f"automata over different semirings: {A.semiring} vs {B.semiring}")
    if A.alphabet != B.alphabet:
        raise AutomatonError("automata over different alphabets")


def equiv_finite_semiring(A: WeightedAutomaton, B: WeightedAutomaton) -> Equivalence:
    """Exact equivalence over a finite semiring.

    Explores the reachable pairs of row vectors ``(i_A mu_A(w), i_B mu_B(w))``
    breadth-first in shortlex order, each distinct pair once; the finite
    semiring bounds the number of pairs.  The returned counterexample is the
    shortlex-least word on which the behaviours differ.
    """
    _check_pair(A, B)
    if not A.semiring.is_finite:
        raise SemiringError(f"{A.semiring} is not finite; use equiv_bounded or equiv_field")

    def key(vec):
        return tuple(sorted(vec.items()))

    start = ({q: v.payload for q, v in A.iota.items()}, {q: v.payload for q, v in B.iota.items()})
    seen = {(key(start[0]), key(start[1]))}
    queue = deque([(start, "")])
    while queue:
        (va, vb), w = queue.popleft()
        if _finish(A, va) != _finish(B, vb):
            return Equivalence(False, w)
        for c in A.alphabet:
            na, nb = _step(A, va, c), _step(B, vb, c)
            k = (key(na), key(nb))
            if k not in seen:
                seen.add(k)
                queue.append(((na, nb), w + c))
    return Equivalence(True)


def equiv_bounded(A: WeightedAutomaton, B: WeightedAutomaton, maxlen: int) -> Equivalence:
    """Compare behaviours on all words of length ``<= maxlen`` only."""
    _check_pair(A, B)
    ta, tb = behaviour_table(A, maxlen), behaviour_table(B, maxlen)
    for w in sorted(set(ta.coeffs) | set(tb.coeffs), key=shortlex_key(A.alphabet)):
        if ta[w] != tb[w]:
            return Equivalence(False, w)
    return Equivalence(True)


def to_dot(A: WeightedAutomaton, name: str = "A") -> str:
    lines = [f"digraph {name} {{", "  rankdir=LR;", '  node [shape=circle];']
    for q in A.states:
        attrs = [f'label="{q}"']
        if q in A.tau:
            attrs.append("shape=doublecircle")
        lines.append(f"  q{q} [{', '.join(attrs)}];")
    for q, v in sorted(A.iota.items()):
        lines.append(f'  start{q} [shape=point]; start{q} -> q{q} [label="{v}"];')
    for q, v in sorted(A.tau.items()):
        lines.append(f'  end{q} [shape=point]; q{q} -> end{q} [label="{v}"];')
    for p, c, q, v in A.transitions():
        lines.append(f'  q{p} -> q{q} [label="{c} / {v}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
