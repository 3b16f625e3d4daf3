"""Brute-force oracles, independent of the algebraic machinery they check.

Everything here enumerates: runs of an automaton, tuples of vectors,
skeletons and weight assignments.  Budgets guard against accidental
exponential blow-ups.
"""
from __future__ import annotations

import itertools
from functools import reduce
from typing import Iterator, List, Optional

from .automaton import WeightedAutomaton, coefficient, equiv_finite_semiring, empty_automaton
from .nfa import NFA, language_equivalent
from .semiring import INF, Semiring, SemiringError, Value, is_prime


class BudgetExceeded(RuntimeError):
    pass


def words(alphabet, maxlen: int) -> Iterator[str]:
    """All words of length <= maxlen in shortlex order."""
    for k in range(maxlen + 1):
        yield from map("".join, itertools.product(alphabet, repeat=k))


# -- runs ---------------------------------------------------------------------

def runs(A: WeightedAutomaton, w: str) -> List[tuple]:
    """Every run of A on ``w`` from an initial to a terminal state, as a
    state tuple."""
    out = []
    for q0 in sorted(A.iota):
        stack = [(q0,)]
        while stack:
            path = stack.pop()
            k = len(path) - 1
            if k == len(w):
                if path[-1] in A.tau:
                    out.append(path)
                continue
            for q, _ in A.successors(path[-1], w[k]):
                stack.append(path + (q,))
    return sorted(out)


def run_weight(A: WeightedAutomaton, w: str, path: tuple) -> Value:
    ws = [A.iota[path[0]]]
    ws += [A.sigma[(p, c, q)] for p, c, q in zip(path, w, path[1:])]
    ws.append(A.tau[path[-1]])
    return reduce(lambda x, y: x * y, ws)


def run_sum(A: WeightedAutomaton, w: str) -> Value:
    """Coefficient of ``w`` as the sum of all run monomials."""
    total = A.semiring.zero
    for path in runs(A, w):
        total = total + run_weight(A, w, path)
    return total


# -- the Z/p^kZ lemma -------------------------------------------------------------

def lemma_zpk_check(p: int, k: int, n: int, budget: int = 10**6) -> bool:
    """For every (n-1)-tuple of vectors of (Z/p^kZ)^n, some unit vector e_j has
    no nonzero multiple in the submodule they generate."""
    if k < 1 or n < 1:
        raise ValueError("need k >= 1 and n >= 1")
    if not is_prime(p):
        raise ValueError(f"p = {p} is not prime")
    m = p ** k
    tuples = m ** (n * (n - 1))
    if tuples * m ** (n - 1) > budget:
        raise BudgetExceeded(f"{tuples} tuples exceed the enumeration budget")
    vectors = list(itertools.product(range(m), repeat=n))
    coeffs = list(itertools.product(range(m), repeat=n - 1))
    for gens in itertools.product(vectors, repeat=n - 1):
        span = {tuple(sum(c * g[i] for c, g in zip(cs, gens)) % m for i in range(n)) for cs in coeffs}
        blocked = any(
            not any(v[j] and all(v[i] == 0 for i in range(n) if i != j) for v in span)
            for j in range(n)
        )
        if not blocked:
            return False
    return True


# -- bideterministic skeletons --------------------------------------------------

def bideterministic_skeletons(alphabet, n: int) -> Iterator[tuple]:
    """Trim bideterministic skeletons on states 1..n with initial state 1,
    one per isomorphism class, as ``(transitions, final)``.

    States are numbered in order of first appearance in a breadth-first
    walk from state 1 (letters in alphabet order), which makes the
    numbering canonical for accessible deterministic automata.
    """
    if n == 0:
        return
    slots = [(q, c) for q in range(1, n + 1) for c in alphabet]

    def fill(i, delta, used, targets):
        if i == len(slots):
            if used == n:
                yield dict(delta)
            return
        q, c = slots[i]
        if q > used:            # state never reached: not accessible
            return
        options = [None] + list(range(1, used + 1))
        if used < n:
            options.append(used + 1)
        for t in options:
            if t is not None and t in targets[c]:
                continue
            if t is None:
                yield from fill(i + 1, delta, used, targets)
                continue
            delta[(q, c)] = t
            targets[c].add(t)
            yield from fill(i + 1, delta, max(used, t), targets)
            targets[c].discard(t)
            del delta[(q, c)]

    for delta in fill(0, {}, 1, {c: set() for c in alphabet}):
        trans = tuple(sorted((p, c, q) for (p, c), q in delta.items()))
        for final in range(1, n + 1):
            if _coaccessible(trans, final, n):
                yield trans, final


def _coaccessible(trans, final, n):
    seen, stack = {final}, [final]
    while stack:
        q = stack.pop()
        for p, _c, r in trans:
            if r == q and p not in seen:
                seen.add(p)
                stack.append(p)
    return len(seen) == n


def _run(trans_map, w):
    q = 1
    for c in w:
        q = trans_map.get((q, c))
        if q is None:
            return None
    return q


def search_bidet_equivalent(target: WeightedAutomaton, max_states: int = 4, cap: int = 6,
                            prune_len: Optional[int] = None):
    """First trim bideterministic automaton with at most ``max_states``
    states equivalent to ``target``, or None.

    Order: state count, then skeleton (fewest transitions first, then the
    sorted transition list, then the final state), then weights
    lexicographically in the order iota, tau, transitions.  Skeletons whose
    paths miss a support word are skipped before any weight is tried, and
    weight tuples are cut as soon as a fully weighted path contradicts the
    target's coefficient.  Survivors are confirmed by exact equivalence.
    """
    S = target.semiring
    if not S.is_finite:
        raise SemiringError("search_bidet_equivalent needs a finite semiring")
    if max_states > cap:
        raise BudgetExceeded(f"max_states {max_states} exceeds the cap {cap}")
    alphabet = target.alphabet
    if equiv_finite_semiring(target, empty_automaton(S, alphabet)):
        return empty_automaton(S, alphabet)
    nonzero = [v for v in S.elements() if not v.is_zero]
    memo = {}

    def coef(w):
        if w not in memo:
            memo[w] = coefficient(target, w)
        return memo[w]

    for n in range(1, max_states + 1):
        L = prune_len if prune_len is not None else 2 * n + 1
        support = [w for w in words(alphabet, L) if not coef(w).is_zero]
        skeletons = sorted(bideterministic_skeletons(alphabet, n), key=lambda sk: (len(sk[0]), sk))
        for trans, final in skeletons:
            tmap = {(p, c): q for p, c, q in trans}
            if any(_run(tmap, w) != final for w in support):
                continue
            found = _weights_for(target, n, trans, final, tmap, nonzero, coef, L)
            if found is not None:
                return found
    return None


def _weights_for(target, n, trans, final, tmap, nonzero, coef, L):
    S, alphabet = target.semiring, target.alphabet
    # variables: 0 = iota(1), 1 = tau(final), 2.. = transitions
    tindex = {(p, c): 2 + i for i, (p, c, _q) in enumerate(trans)}
    nvars = 2 + len(trans)
    checks = [[] for _ in range(nvars)]
    for w in words(alphabet, L):
        if _run(tmap, w) != final:
            continue
        q, used = 1, [0, 1]
        for c in w:
            used.append(tindex[(q, c)])
            q = tmap[(q, c)]
        checks[max(used)].append((tuple(used), coef(w)))
    x = [None] * nvars

    def assign(i):
        if i == nvars:
            yield list(x)
            return
        for v in nonzero:
            x[i] = v
            if all(reduce(lambda a, b: a * b, (x[j] for j in used)) == want for used, want in checks[i]):
                yield from assign(i + 1)
        x[i] = None

    for sol in assign(0):
        B = WeightedAutomaton(S, alphabet, n, {(p, c, q): sol[tindex[(p, c)]] for p, c, q in trans},
                              {1: sol[0]}, {final: sol[1]})
        if equiv_finite_semiring(B, target):
            return B
    return None


# -- minimality oracles ----------------------------------------------------------

def all_nfas(alphabet, n: int) -> Iterator[NFA]:
    """Every NFA on states 1..n (initial and final sets arbitrary)."""
    triples = [(p, c, q) for p in range(1, n + 1) for c in alphabet for q in range(1, n + 1)]
    subsets = lambda xs: itertools.chain.from_iterable(itertools.combinations(xs, r) for r in range(len(xs) + 1))
    states = range(1, n + 1)
    for trans in subsets(triples):
        for ini in subsets(states):
            for fin in subsets(states):
                yield NFA.build(alphabet, n, ini, fin, trans)


def smaller_nfa(nfa: NFA, max_states: int, sig_len: int = 6, _cache={}) -> Optional[NFA]:
    """An NFA with at most ``max_states`` states accepting L(nfa), or None.

    Candidates are bucketed by their language up to ``sig_len``; only those
    agreeing there are tested for exact equivalence.
    """
    key = (tuple(nfa.alphabet), max_states, sig_len)
    if key not in _cache:
        buckets = {}
        for n in range(max_states + 1):
            for cand in all_nfas(nfa.alphabet, n):
                buckets.setdefault(frozenset(cand.language(sig_len)), []).append(cand)
        _cache[key] = buckets
    for cand in _cache[key].get(frozenset(nfa.language(sig_len)), ()):
        if language_equivalent(cand, nfa):
            return cand
    return None


def boolean_minimality_violations(alphabet="ab", max_states: int = 3) -> List[tuple]:
    """Trim bideterministic Boolean automata (up to ``max_states`` states)
    for which some NFA with fewer states accepts the same language."""
    bad = []
    for n in range(1, max_states + 1):
        for trans, final in bideterministic_skeletons(alphabet, n):
            nfa = NFA.build(alphabet, n, {1}, {final}, trans)
            smaller = smaller_nfa(nfa, n - 1)
            if smaller is not None:
                bad.append((trans, final, smaller))
    return bad


def all_automata(S: Semiring, alphabet, n: int) -> Iterator[WeightedAutomaton]:
    """Every automaton with n states over the finite semiring S."""
    elems = list(S.elements())
    triples = [(p, c, q) for p in range(1, n + 1) for c in alphabet for q in range(1, n + 1)]
    states = list(range(1, n + 1))
    for ws in itertools.product(elems, repeat=len(triples) + 2 * n):
        yield WeightedAutomaton(S, alphabet, n, dict(zip(triples, ws)), dict(zip(states, ws[len(triples):])),
                                dict(zip(states, ws[len(triples) + n:])))


def search_smaller_equivalent(target: WeightedAutomaton, max_states: int, sig_len: int = 6,
                              budget: int = 10**6) -> Optional[WeightedAutomaton]:
    """Any automaton (not necessarily bideterministic) with at most
    ``max_states`` states equivalent to ``target``, or None."""
    S, alphabet = target.semiring, target.alphabet
    size = len(list(S.elements()))
    total = sum(size ** (n * n * len(alphabet) + 2 * n) for n in range(max_states + 1))
    if total > budget:
        raise BudgetExceeded(f"{total} candidate automata exceed the budget")
    probe = list(words(alphabet, sig_len))
    want = [coefficient(target, w) for w in probe]
    for n in range(max_states + 1):
        for cand in all_automata(S, alphabet, n):
            if all(coefficient(cand, w) == v for w, v in zip(probe, want)) and equiv_finite_semiring(cand, target):
                return cand
    return None


# -- tropical run oracles ------------------------------------------------------------

def tropical_phase_violations(A: WeightedAutomaton, D: WeightedAutomaton, maxlen: int = 8):
    """``(lower, upper)``: the first words up to ``maxlen`` where some run
    of A undercuts D, resp. where the best run of A exceeds D, both found
    by run enumeration (``None`` when there is none)."""
    lower = upper = None
    for w in words(A.alphabet, maxlen):
        a, d = run_sum(A, w), run_sum(D, w)
        if lower is None and _trop_lt(a.payload, d.payload):
            lower = w
        if upper is None and _trop_lt(d.payload, a.payload):
            upper = w
    return lower, upper


def _trop_lt(x, y):
    if x is INF:
        return False
    return y is INF or x < y
