"""Bideterminisability over the tropical semirings N_min, Z_min and Q_min.

A tropical automaton is bideterminisable iff the minimal DFA ``D`` of its
support is bideterministic (or empty) and some assignment of weights to
``D`` realises the same series.  Candidate weights solve a linear system
with one equation per basis word (rows are the :func:`psi_vector`s);
the resulting deterministic automaton is then compared exactly with the
input by :func:`equiv_det_tropical`.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional

from .automaton import WeightedAutomaton, coefficient, is_bideterministic, is_deterministic, shortlex_key, support_skeleton
from .linalg import Arith, IndependenceTracker, LinearSystem, SystemSolution
from .nfa import DFA, NFA, determinize, language_equivalent, language_included, minimize_dfa
from .results import Decision, Equivalence
from .semiring import INF, Semiring, SemiringError

__all__ = [
    "determinize_support", "minimize_dfa", "support_dfa", "psi_vector", "basis_words",
    "synthesize_weights", "assign_weights", "equiv_det_tropical", "bideterminize_tropical",
]

DOMAINS = {"tropical-nat": "nonnegative-integer", "tropical-int": "integer", "tropical-rat": "rational"}


def determinize_support(nfa: NFA) -> DFA:
    return determinize(nfa)


def support_dfa(A: WeightedAutomaton) -> DFA:
    """Minimal partial DFA of the support (exact: tropical semirings are positive)."""
    return minimize_dfa(determinize(support_skeleton(A).nfa))


def dfa_automaton(D: DFA, semiring: Semiring) -> WeightedAutomaton:
    """``D`` with every weight equal to the semiring one."""
    one = semiring.one
    return WeightedAutomaton(
        semiring, D.alphabet, D.n,
        {(p, c, q): one for (p, c), q in D.delta.items()},
        {} if D.initial is None else {D.initial: one},
        {q: one for q in D.final},
    )


def psi_vector(D: DFA, word: str) -> tuple:
    """``(1, eta_1..eta_M, nu_1..nu_N)``: transition-use counts along the run
    on ``word`` and the indicator of the final state reached."""
    run = D.run(word)
    if run is None or run[-1] not in D.final:
        raise ValueError(f"word {word!r} is not accepted")
    tindex = {k: i for i, k in enumerate(D.transition_keys)}
    eta = [0] * len(tindex)
    for p, c in zip(run, word):
        eta[tindex[(p, c)]] += 1
    nu = [int(q == run[-1]) for q in D.final_states]
    return (1, *eta, *nu)


# -- basis words ------------------------------------------------------------

def _simple_paths(D: DFA):
    """Accepting runs visiting no state twice, as (word, states)."""
    out = []

    def dfs(q, word, states):
        if q in D.final:
            out.append((word, states))
        for c in D.alphabet:
            t = D.delta.get((q, c))
            if t is not None and t not in states:
                dfs(t, word + c, states + [t])

    dfs(D.initial, "", [D.initial])
    return out


def _simple_cycles(D: DFA):
    """Simple cycles as (start state, word), each listed once from its least state."""
    out = []
    for s in range(1, D.n + 1):
        def dfs(q, word, seen):
            for c in D.alphabet:
                t = D.delta.get((q, c))
                if t is None:
                    continue
                if t == s:
                    out.append((s, word + c))
                elif t > s and t not in seen:
                    dfs(t, word + c, seen | {t})

        dfs(s, "", {s})
    return out


def _cycle_states(D, start, word):
    states, q = [start], start
    for c in word[:-1]:
        q = D.delta[(q, c)]
        states.append(q)
    return states


def _insert(D, word, states, start, cyc):
    """Splice a cycle (given from ``start``) into the run at a state it shares."""
    cstates = _cycle_states(D, start, cyc)
    for pos, q in enumerate(states):
        if q in cstates:
            r = cstates.index(q)
            rotated = cyc[r:] + cyc[:r]
            rot_states = cstates[r:] + cstates[:r]
            return word[:pos] + rotated + word[pos:], states[:pos] + rot_states + states[pos:]
    return None


def basis_words(D: DFA) -> List[str]:
    """Words whose Psi-vectors form a basis of the span of all Psi(w), w
    accepted.

    Every accepting run is a simple accepting path plus simple cycles that
    can be ordered so each one touches the path or an earlier cycle.  For
    every simple accepting path we therefore keep inserting simple cycles
    that touch the states visited so far, each cycle once, recording the
    word after every insertion; the candidates are then scanned in shortlex
    order keeping those with independent Psi-vectors.
    """
    D = D.trim()
    if D.n == 0:
        raise ValueError("the DFA accepts nothing")
    cycles = _simple_cycles(D)
    cands = set()
    for word, states in _simple_paths(D):
        cands.add(word)
        pending = list(cycles)
        progress = True
        while progress:
            progress = False
            for cyc in list(pending):
                got = _insert(D, word, states, *cyc)
                if got is not None:
                    word, states = got
                    cands.add(word)
                    pending.remove(cyc)
                    progress = True
    tracker = IndependenceTracker(Arith(Semiring("rational")), 1 + len(D.transition_keys) + len(D.final_states))
    out = []
    for w in sorted(cands, key=shortlex_key(D.alphabet)):
        if tracker.add([Fraction(x) for x in psi_vector(D, w)]):
            out.append(w)
    return out


# -- weight synthesis -----------------------------------------------------------

def assign_weights(D: DFA, semiring: Semiring, x) -> WeightedAutomaton:
    """``B_x``: ``x = (initial, transitions..., finals...)`` in Psi order."""
    M = len(D.transition_keys)
    sigma = {(p, c, D.delta[(p, c)]): x[1 + j] for j, (p, c) in enumerate(D.transition_keys)}
    tau = {q: x[1 + M + j] for j, q in enumerate(D.final_states)}
    return WeightedAutomaton(semiring, D.alphabet, D.n, sigma, {D.initial: x[0]}, tau)


@dataclass(frozen=True)
class Synthesis:
    """Outcome of solving the weight system for a support DFA."""

    system: LinearSystem
    words: tuple
    result: SystemSolution
    automaton: Optional[WeightedAutomaton] = None

    @property
    def feasible(self):
        return self.result.feasible

    def __bool__(self):
        return self.feasible


def synthesize_weights(A: WeightedAutomaton, D: DFA) -> Synthesis:
    """Solve ``Psi(w_i) . x = (||A||, w_i)`` over the weight domain of
    ``A``'s semiring (N, Z or Q) and build ``B_x`` from the solver's
    canonical solution."""
    S = A.semiring
    if not S.is_tropical:
        raise SemiringError(f"{S} is not a tropical semiring")
    if D.alphabet != A.alphabet:
        raise ValueError("alphabet mismatch between automaton and DFA")
    eq = language_equivalent(support_skeleton(A).nfa, D.to_nfa())
    if not eq:
        raise ValueError(f"the DFA does not recognise the support (differs on {eq.counterexample!r})")
    words = tuple(basis_words(D))
    rows = tuple(psi_vector(D, w) for w in words)
    rhs = []
    for w in words:
        v = coefficient(A, w).payload
        assert v is not INF
        rhs.append(v)
    system = LinearSystem(rows, tuple(rhs), DOMAINS[S.kind])
    result = system.solve()
    B = assign_weights(D, S, result.solution) if result.feasible else None
    return Synthesis(system, words, result, B)


# -- equivalence with a deterministic automaton -------------------------------

@dataclass(frozen=True)
class TropicalEquivalence(Equivalence):
    """``phase`` names the phase that settled a negative verdict:
    ``"support"``, ``"lower-bound"`` (some run of A undercuts the
    deterministic automaton) or ``"upper-bound"`` (some support word has no
    run of A matching it).  ``lower_bound_holds`` records whether
    ``||A|| >= ||D||`` pointwise was established."""

    phase: Optional[str] = None
    lower_bound_holds: Optional[bool] = None
    details: dict = field(default_factory=dict)


_S, _T = "source", "sink"


def _product(A: WeightedAutomaton, Dx: WeightedAutomaton):
    """Trim product graph of A-runs paired with the unique Dx-run, with gap
    weights ``A - Dx``; ``_S``/``_T`` carry the initial/terminal gaps."""
    d0 = next(iter(Dx.iota))
    di = Dx.iota[d0].payload
    start = [(p, d0) for p in sorted(A.iota)]
    edges = {}
    seen = set(start)
    queue = deque(start)
    while queue:
        u = queue.popleft()
        p, d = u
        out = []
        for c in A.alphabet:
            dn = Dx.successors(d, c)
            if not dn:
                continue
            (d2, wd), = dn
            for p2, wa in A.successors(p, c):
                v = (p2, d2)
                out.append((c, v, wa - wd))
                if v not in seen:
                    seen.add(v)
                    queue.append(v)
        if p in A.tau and d in Dx.tau:
            out.append(("", _T, A.tau[p].payload - Dx.tau[d].payload))
        edges[u] = out
    edges[_S] = [("", u, A.iota[u[0]].payload - di) for u in start]
    # keep only nodes that reach the sink
    rev = {}
    for u, out in edges.items():
        for _c, v, _g in out:
            rev.setdefault(v, []).append(u)
    alive = {_T}
    stack = [_T]
    while stack:
        v = stack.pop()
        for u in rev.get(v, ()):
            if u not in alive:
                alive.add(u)
                stack.append(u)
    graph = {u: [e for e in out if e[1] in alive] for u, out in edges.items() if u in alive}
    graph.setdefault(_S, [])
    graph[_T] = []
    return graph


def _bellman_ford(graph):
    nodes = list(graph)
    dist = {u: None for u in nodes}
    pred = {}
    dist[_S] = 0
    last = None
    for _ in range(len(nodes)):
        last = None
        for u in nodes:
            if dist[u] is None:
                continue
            for c, v, g in graph[u]:
                nd = dist[u] + g
                if dist[v] is None or nd < dist[v]:
                    dist[v] = nd
                    pred[v] = (u, c, g)
                    last = v
        if last is None:
            break
    return dist, pred, last


def _path_word(pred, v, stop=_S):
    word, gap = [], 0
    while v != stop:
        u, c, g = pred[v]
        word.append(c)
        gap += g
        v = u
    return "".join(reversed(word)), gap


def _walk(graph, u, target):
    """Shortest (by edge count) path from ``u`` to ``target``: (word, gap)."""
    prev = {u: None}
    queue = deque([u])
    while queue:
        x = queue.popleft()
        if x == target:
            break
        for c, v, g in graph[x]:
            if v not in prev:
                prev[v] = (x, c, g)
                queue.append(v)
    word, gap, v = [], 0, target
    while prev[v] is not None:
        x, c, g = prev[v]
        word.append(c)
        gap += g
        v = x
    return "".join(reversed(word)), gap


def _cycle_from(pred, v, n):
    for _ in range(n):
        v = pred[v][0]
    start, word, gap, x = v, [], 0, v
    while True:
        u, c, g = pred[x]
        word.append(c)
        gap += g
        x = u
        if x == start:
            break
    return start, "".join(reversed(word)), gap


def equiv_det_tropical(A: WeightedAutomaton, Dx: WeightedAutomaton) -> TropicalEquivalence:
    """Exact equivalence of a tropical automaton with a deterministic one.

    1. The supports must agree (skeleton language equivalence).
    2. ``||A|| >= ||Dx||``: no accepting path of the trim product graph may
       have negative total gap; Bellman-Ford from the source finds a
       negative cycle or a negative sink distance otherwise, and the
       violating path (with the cycle pumped enough times) is the witness.
    3. ``||A|| <= ||Dx||``: with the distances ``h`` as potentials every
       reduced gap is nonnegative and a path's total gap is its reduced sum
       plus ``h(sink)``.  So equality on ``w`` needs ``h(sink) = 0`` and a
       run of A on ``w`` using zero reduced gaps only, which is a language
       inclusion between the support and that zero-gap subgraph.
    """
    S = A.semiring
    if not S.is_tropical or Dx.semiring != S:
        raise SemiringError("equiv_det_tropical needs two automata over the same tropical semiring")
    if A.alphabet != Dx.alphabet:
        raise ValueError("automata over different alphabets")
    if not is_deterministic(Dx):
        raise ValueError("the second automaton must be deterministic")

    supp = language_equivalent(support_skeleton(A).nfa, support_skeleton(Dx).nfa)
    if not supp:
        return TropicalEquivalence(False, supp.counterexample, phase="support")
    if not Dx.iota:
        return TropicalEquivalence(True, lower_bound_holds=True)

    graph = _product(A, Dx)
    if not graph[_S]:
        return TropicalEquivalence(True, lower_bound_holds=True)
    dist, pred, last = _bellman_ford(graph)
    if last is not None:
        start, cyc, g_cyc = _cycle_from(pred, last, len(graph))
        prefix, g_pre = _walk(graph, _S, start)
        suffix, g_suf = _walk(graph, start, _T)
        k = max(1, (g_pre + g_suf) // (-g_cyc) + 1)
        word = prefix + cyc * int(k) + suffix
        return TropicalEquivalence(False, word, phase="lower-bound", lower_bound_holds=False,
                                   details={"cycle": cyc, "cycle_gap": g_cyc, "repetitions": int(k)})
    hT = dist[_T]
    if hT < 0:
        word, _ = _path_word(pred, _T)
        return TropicalEquivalence(False, word, phase="lower-bound", lower_bound_holds=False,
                                   details={"gap": hT})
    if hT > 0:
        word = _first_word(support_skeleton(Dx).nfa)
        return TropicalEquivalence(False, word, phase="upper-bound", lower_bound_holds=True,
                                   details={"minimal_gap": hT})
    # zero-reduced-gap subgraph as an NFA over product nodes
    nodes = [u for u in graph if u not in (_S, _T)]
    num = {u: i + 1 for i, u in enumerate(nodes)}
    trans, initial, final = set(), set(), set()
    for c, v, g in graph[_S]:
        if g - dist[v] == 0:
            initial.add(num[v])
    for u in nodes:
        for c, v, g in graph[u]:
            red = g + dist[u] - dist[v]
            assert red >= 0, "negative reduced gap after the lower-bound phase"
            if red == 0:
                if v == _T:
                    final.add(num[u])
                else:
                    trans.add((num[u], c, num[v]))
    zero = NFA.build(A.alphabet, len(nodes), initial, final, trans)
    inc = language_included(support_skeleton(Dx).nfa, zero)
    if not inc:
        return TropicalEquivalence(False, inc.counterexample, phase="upper-bound", lower_bound_holds=True)
    return TropicalEquivalence(True, lower_bound_holds=True)


def _first_word(nfa: NFA) -> str:
    w = language_included(nfa, NFA.build(nfa.alphabet, 0, (), (), ())).counterexample
    assert w is not None
    return w


def bideterminize_tropical(A: WeightedAutomaton) -> Decision:
    S = A.semiring
    if not S.is_tropical:
        raise SemiringError(f"{S} is not a tropical semiring")
    D = support_dfa(A)
    if D.n == 0:
        return Decision(True, "empty", witness=WeightedAutomaton(S, A.alphabet, 0))
    check = is_bideterministic(dfa_automaton(D, S))
    if not check:
        return Decision(False, "skeleton", reason=f"minimal DFA of the support is not bideterministic: {check.describe()}",
                        details={"dfa": D, "condition": check.condition})
    syn = synthesize_weights(A, D)
    details = {"dfa": D, "basis_words": list(syn.words), "system": syn.system}
    if not syn:
        return Decision(False, "system", reason=f"weight system has no solution ({syn.result.status}) over "
                        f"{DOMAINS[S.kind]} values", details=details)
    details["solution"] = syn.result.solution
    eq = equiv_det_tropical(A, syn.automaton)
    if eq:
        return Decision(True, "equivalence", witness=syn.automaton, details=details)
    details["phase"] = eq.phase
    details["candidate"] = syn.automaton
    return Decision(False, "equivalence", reason=f"weighted minimal DFA differs from the input on {eq.counterexample!r}",
                    counterexample=eq.counterexample, details=details)
