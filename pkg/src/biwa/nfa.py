"""Unweighted automata: NFA skeletons, subset construction, partial-DFA
minimisation and exact language comparison.

Deterministic automata are partial (no dead state) and may be empty.
Words are strings over single-character symbols.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Optional, Tuple

from .results import Equivalence


@dataclass(frozen=True)
class NFA:
    alphabet: Tuple[str, ...]
    n: int
    initial: FrozenSet[int]
    final: FrozenSet[int]
    transitions: FrozenSet[Tuple[int, str, int]]

    def __post_init__(self):
        succ: Dict[tuple, set] = {}
        for p, c, q in self.transitions:
            succ.setdefault((p, c), set()).add(q)
        object.__setattr__(self, "_succ", {k: frozenset(v) for k, v in succ.items()})

    @classmethod
    def build(cls, alphabet, n, initial, final, transitions) -> "NFA":
        return cls(tuple(alphabet), n, frozenset(initial), frozenset(final), frozenset(transitions))

    def step(self, states: FrozenSet[int], c: str) -> FrozenSet[int]:
        out = set()
        for p in states:
            out |= self._succ.get((p, c), frozenset())
        return frozenset(out)

    def accepts(self, word: str) -> bool:
        states = self.initial
        for c in word:
            states = self.step(states, c)
            if not states:
                return False
        return bool(states & self.final)

    def language(self, maxlen: int) -> set:
        """All accepted words of length at most ``maxlen``."""
        out = set()
        frontier = [("", self.initial)]
        for length in range(maxlen + 1):
            nxt = []
            for w, states in frontier:
                if states & self.final:
                    out.add(w)
                if length < maxlen:
                    for c in self.alphabet:
                        s = self.step(states, c)
                        if s:
                            nxt.append((w + c, s))
            frontier = nxt
        return out

    def useful_states(self) -> set:
        out_edges: dict = {}
        in_edges: dict = {}
        for p, _c, q in self.transitions:
            out_edges.setdefault(p, set()).add(q)
            in_edges.setdefault(q, set()).add(p)
        return _closure(self.initial, out_edges) & _closure(self.final, in_edges)

    def trim(self) -> "NFA":
        keep = sorted(self.useful_states())
        ren = {q: i + 1 for i, q in enumerate(keep)}
        return NFA.build(
            self.alphabet, len(keep),
            (ren[q] for q in self.initial if q in ren),
            (ren[q] for q in self.final if q in ren),
            ((ren[p], c, ren[q]) for p, c, q in self.transitions if p in ren and q in ren),
        )


def _closure(start: Iterable[int], edges: dict) -> set:
    seen = set(start)
    stack = list(seen)
    while stack:
        p = stack.pop()
        for q in edges.get(p, ()):
            if q not in seen:
                seen.add(q)
                stack.append(q)
    return seen


class DFA:
    """Partial deterministic automaton on states ``1..n``.

    Transitions are indexed ``1..M`` in (source, alphabet position) order and
    final states ``1..N`` in increasing order; these indices name the unknown
    weights when the automaton is used as a weighting template.
    """

    def __init__(self, alphabet, n: int, initial: Optional[int], final: Iterable[int], delta: Dict[tuple, int]):
        self.alphabet = tuple(alphabet)
        self.n = n
        self.initial = initial
        self.final = frozenset(final)
        self.delta = dict(delta)
        pos = {c: i for i, c in enumerate(self.alphabet)}
        self.transition_keys = sorted(self.delta, key=lambda k: (k[0], pos[k[1]]))
        self.final_states = sorted(self.final)

    def _key(self):
        return (self.alphabet, self.n, self.initial, self.final, frozenset(self.delta.items()))

    def __eq__(self, other):
        return isinstance(other, DFA) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        edges = ", ".join(f"{p}-{c}->{self.delta[(p, c)]}" for p, c in self.transition_keys)
        return f"DFA(n={self.n}, initial={self.initial}, final={sorted(self.final)}, [{edges}])"

    def run(self, word: str) -> Optional[list]:
        if self.initial is None:
            return None
        states = [self.initial]
        for c in word:
            q = self.delta.get((states[-1], c))
            if q is None:
                return None
            states.append(q)
        return states

    def accepts(self, word: str) -> bool:
        states = self.run(word)
        return states is not None and states[-1] in self.final

    def to_nfa(self) -> NFA:
        return NFA.build(
            self.alphabet, self.n,
            () if self.initial is None else (self.initial,),
            self.final,
            ((p, c, q) for (p, c), q in self.delta.items()),
        )

    def is_bideterministic(self) -> bool:
        if len(self.final) > 1:
            return False
        seen = set()
        for (p, c), q in self.delta.items():
            if (q, c) in seen:
                return False
            seen.add((q, c))
        return True

    def trim(self) -> "DFA":
        nfa = self.to_nfa().trim()
        delta = {(p, c): q for p, c, q in nfa.transitions}
        return DFA(self.alphabet, nfa.n, next(iter(nfa.initial), None), nfa.final, delta)


def determinize(nfa: NFA) -> DFA:
    """Accessible subset construction over the trim part of ``nfa``.

    Subsets are numbered in order of discovery by breadth-first search with
    letters tried in alphabet order, i.e. by their shortlex-least word.  The
    empty subset is omitted, so the result is partial and trim.
    """
    nfa = nfa.trim()
    if not nfa.initial:
        return DFA(nfa.alphabet, 0, None, (), {})
    index = {nfa.initial: 1}
    order = [nfa.initial]
    delta = {}
    i = 0
    while i < len(order):
        subset = order[i]
        i += 1
        for c in nfa.alphabet:
            target = nfa.step(subset, c)
            if not target:
                continue
            if target not in index:
                index[target] = len(order) + 1
                order.append(target)
            delta[(index[subset], c)] = index[target]
    final = [index[s] for s in order if s & nfa.final]
    return DFA(nfa.alphabet, len(order), 1, final, delta)


def minimize_dfa(dfa: DFA) -> DFA:
    """Moore partition refinement on the trim part; a missing transition acts
    as a move to the (omitted) dead state.  Blocks are renumbered in
    breadth-first order from the initial block, so equal languages give
    equal automata."""
    dfa = dfa.trim()
    if dfa.n == 0:
        return DFA(dfa.alphabet, 0, None, (), {})
    states = range(1, dfa.n + 1)
    label = {q: int(q in dfa.final) for q in states}
    count = len(set(label.values()))
    while True:
        sigs = {}
        new = {}
        for q in states:
            sig = (label[q],) + tuple(
                label[dfa.delta[(q, c)]] if (q, c) in dfa.delta else -1 for c in dfa.alphabet
            )
            new[q] = sigs.setdefault(sig, len(sigs))
        label = new
        if len(sigs) == count:
            break
        count = len(sigs)
    rep = {}
    for q in states:
        rep.setdefault(label[q], q)
    number = {label[dfa.initial]: 1}
    queue = deque([label[dfa.initial]])
    delta = {}
    while queue:
        b = queue.popleft()
        q = rep[b]
        for c in dfa.alphabet:
            t = dfa.delta.get((q, c))
            if t is None:
                continue
            tb = label[t]
            if tb not in number:
                number[tb] = len(number) + 1
                queue.append(tb)
            delta[(number[b], c)] = number[tb]
    final = {number[label[q]] for q in dfa.final}
    return DFA(dfa.alphabet, len(number), 1, final, delta)


def _first_word(n1: NFA, n2: NFA, bad) -> Optional[str]:
    """Shortlex-least word whose pair of reached subsets satisfies ``bad``."""
    start = (n1.initial, n2.initial)
    seen = {start}
    queue = deque([(start, "")])
    while queue:
        (s1, s2), w = queue.popleft()
        if bad(s1, s2):
            return w
        for c in n1.alphabet:
            nxt = (n1.step(s1, c), n2.step(s2, c))
            if nxt not in seen:
                seen.add(nxt)
                queue.append((nxt, w + c))
    return None


def language_equivalent(n1: NFA, n2: NFA) -> Equivalence:
    if tuple(n1.alphabet) != tuple(n2.alphabet):
        raise ValueError("automata over different alphabets")
    w = _first_word(n1, n2, lambda a, b: bool(a & n1.final) != bool(b & n2.final))
    return Equivalence(w is None, w)


def language_included(n1: NFA, n2: NFA) -> Equivalence:
    """Whether L(n1) is contained in L(n2); the counterexample is the
    shortlex-least word of L(n1) missing from L(n2)."""
    if tuple(n1.alphabet) != tuple(n2.alphabet):
        raise ValueError("automata over different alphabets")
    w = _first_word(n1, n2, lambda a, b: bool(a & n1.final) and not (b & n2.final))
    return Equivalence(w is None, w)
