import random

import pytest
from hypothesis import given, settings, strategies as st

from biwa.automaton import WeightedAutomaton, coefficient, equiv_bounded, is_bideterministic, is_deterministic
from biwa.linalg import FieldMatrix, rref, solve_diophantine, solve_field, solve_nonneg
from biwa.nfa import DFA, NFA, determinize, language_equivalent, minimize_dfa
from biwa.randomgen import random_automaton
from biwa.semiring import Semiring, SemiringError
from biwa.tropical import (
    assign_weights, basis_words, bideterminize_tropical, equiv_det_tropical, psi_vector, support_dfa,
    synthesize_weights,
)

N = Semiring("tropical-nat")
Z = Semiring("tropical-int")
Qmin = Semiring("tropical-rat")


def loops(S, *pairs):
    """One state per (offset, slope): coefficient of a^t is min(offset + slope*t)."""
    n = len(pairs)
    return WeightedAutomaton(S, "a", n, {(q, "a", q): s for q, (_, s) in enumerate(pairs, 1)},
                             {q: o for q, (o, _) in enumerate(pairs, 1)}, {q: 0 for q in range(1, n + 1)})


def loop_dfa():
    return DFA("a", 1, 1, {1}, {(1, "a"): 1})


def chain_dfa():
    return DFA("ab", 3, 1, {3}, {(1, "a"): 2, (2, "b"): 3})


# -- support DFAs -------------------------------------------------------------------

def test_determinize_examples():
    fig2_like = NFA.build("ab", 4, {1}, {4}, {(1, "a", 2), (2, "b", 3), (3, "a", 4), (1, "b", 3), (3, "b", 4)})
    D = determinize(fig2_like)
    assert D.n == 4 and D.accepts("aba") and D.accepts("bb") and not D.accepts("ab")
    star = NFA.build("a", 2, {1, 2}, {1, 2}, {(1, "a", 1), (2, "a", 2)})
    assert determinize(star).n == 1
    D = chain_dfa()
    assert determinize(D.to_nfa()) == D


def test_determinize_fig2_skeleton():
    from biwa.automaton import support_skeleton
    from biwa.gallery import build_example
    D = determinize(support_skeleton(build_example("fig2").automaton).nfa)
    assert D.n == 5
    assert language_equivalent(D.to_nfa(), NFA.build("ab", 0, (), (), ())).counterexample == "bb"


def test_minimize_dfa_examples():
    nfa = NFA.build("ab", 3, {1}, {3}, {(1, "a", 2), (2, "b", 3), (1, "b", 3)})
    D = minimize_dfa(determinize(nfa))
    assert D.n == 3
    assert sorted(p for (p, c), q in D.delta.items() if c == "b" and q in D.final) == [1, 2]
    assert not D.is_bideterministic()
    assert minimize_dfa(chain_dfa()) == chain_dfa()
    two = DFA("a", 2, 1, {1, 2}, {(1, "a"): 2, (2, "a"): 1})
    assert minimize_dfa(two).n == 1


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 10**6))
def test_minimize_preserves_language(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 4)
    trans = {(p, c, q) for p in range(1, n + 1) for c in "ab" for q in range(1, n + 1) if rng.random() < 0.3}
    nfa = NFA.build("ab", n, {1}, {q for q in range(1, n + 1) if rng.random() < 0.5}, trans)
    D = determinize(nfa)
    M = minimize_dfa(D)
    assert language_equivalent(nfa, M.to_nfa())
    assert M.n <= D.n
    assert minimize_dfa(M) == M


# -- Psi vectors and basis words ----------------------------------------------------

def test_psi_examples():
    assert psi_vector(loop_dfa(), "aa") == (1, 2, 1)
    assert psi_vector(loop_dfa(), "") == (1, 0, 1)
    assert psi_vector(chain_dfa(), "ab") == (1, 1, 1, 1)
    with pytest.raises(ValueError):
        psi_vector(chain_dfa(), "a")


def test_basis_word_examples():
    assert basis_words(loop_dfa()) == ["", "a"]
    acyclic = minimize_dfa(determinize(NFA.build(
        "ab", 5, {1}, {4}, {(1, "a", 2), (2, "b", 3), (3, "a", 4), (1, "b", 5), (5, "b", 4)})))
    assert basis_words(acyclic) == ["bb", "aba"]
    looped = DFA("ab", 2, 1, {2}, {(1, "a"): 2, (2, "b"): 2})
    assert basis_words(looped) == ["a", "ab"]
    with pytest.raises(ValueError):
        basis_words(DFA("a", 0, None, (), {}))


def _rank(vectors):
    return rref(FieldMatrix(Semiring("rational"), [list(v) for v in vectors])).rank


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 10**6))
def test_basis_spans_all_psi_vectors(seed):
    rng = random.Random(seed)
    A = random_automaton(rng, N, "ab", rng.randint(1, 4), density=0.35)
    D = support_dfa(A)
    if D.n == 0:
        return
    B = basis_words(D)
    base = [psi_vector(D, w) for w in B]
    assert _rank(base) == len(base)
    accepted = [w for w in _words("ab", 7) if D.accepts(w)]
    for w in accepted:
        assert sum(psi_vector(D, w)) == len(w) + 2
    assert _rank(base + [psi_vector(D, w) for w in accepted]) == len(base)


def _words(alphabet, maxlen):
    from biwa.oracles import words
    return words(alphabet, maxlen)


# -- synthesis ----------------------------------------------------------------------

def test_synthesis_examples():
    A = loops(N, (0, 2), (0, 3))
    D = support_dfa(A)
    syn = synthesize_weights(A, D)
    assert syn and syn.words == ("", "a") and syn.result.solution == (0, 2, 0)
    A = loops(N, (0, 2), (5, 1))
    syn = synthesize_weights(A, support_dfa(A))
    assert syn and syn.result.solution == (0, 2, 0)
    chain = WeightedAutomaton(N, "ab", 3, {(1, "a", 2): 0, (2, "b", 3): 5}, {1: 0}, {2: 0, 3: 0})
    D = support_dfa(chain)
    syn = synthesize_weights(chain, D)
    assert syn
    for w in ("a", "ab"):
        assert coefficient(syn.automaton, w) == coefficient(chain, w)


def test_synthesis_routing():
    rows, rhs = [(1, 0, 1), (1, 1, 1)], [0, 2]
    assert solve_nonneg(rows, rhs).solution == (0, 2, 0)
    s = solve_diophantine(rows, rhs)
    assert s and [sum(a * x for a, x in zip(r, s.solution)) for r in rows] == rhs
    assert solve_field(rows, rhs)
    for S, dom in ((N, "nonnegative-integer"), (Z, "integer"), (Qmin, "rational")):
        syn = synthesize_weights(loops(S, (0, 2), (0, 3)), support_dfa(loops(S, (0, 2), (0, 3))))
        assert syn.system.domain == dom and syn


def test_synthesis_errors():
    with pytest.raises(SemiringError):
        synthesize_weights(WeightedAutomaton(Semiring("rational"), "a", 0), loop_dfa())
    with pytest.raises(ValueError):
        synthesize_weights(loops(N, (0, 1)), chain_dfa())
    with pytest.raises(ValueError):
        synthesize_weights(loops(N, (0, 1)), DFA("a", 1, 1, {1}, {}))


def test_system_infeasible_over_nat_only():
    # coefficient 5 on the empty word and 2 on every a^t, t >= 1: the loop would need weight -3
    def build(S):
        return WeightedAutomaton(S, "a", 3, {(2, "a", 3): 2, (3, "a", 3): 0}, {1: 5, 2: 0}, {1: 0, 3: 0})
    A = build(N)
    syn = synthesize_weights(A, support_dfa(A))
    assert not syn and syn.result.status == "infeasible"
    d = bideterminize_tropical(A)
    assert not d and d.stage == "system"
    B = build(Z)
    syn = synthesize_weights(B, support_dfa(B))
    assert syn and syn.result.solution[1] == -3
    d = bideterminize_tropical(B)
    assert not d and d.stage == "equivalence" and d.counterexample == "aa"


# -- equivalence ---------------------------------------------------------------------

def test_equivalence_examples():
    Dx = loops(N, (0, 2))
    assert equiv_det_tropical(Dx, Dx)
    assert equiv_det_tropical(loops(N, (0, 2), (0, 3)), Dx)
    eq = equiv_det_tropical(loops(N, (0, 2), (5, 1)), Dx)
    assert not eq and eq.counterexample == "a" * 6 and eq.phase == "lower-bound"
    A = loops(N, (0, 2), (5, 1))
    assert coefficient(A, "a" * 6) == N.value(11) and coefficient(Dx, "a" * 6) == N.value(12)


def test_equivalence_upper_bound_phase():
    # every run of A costs at least Dx, but the loop of slope 3 overprices a^t for t >= 1
    A = loops(N, (0, 3))
    Dx = WeightedAutomaton(N, "a", 1, {(1, "a", 1): 2}, {1: 0}, {1: 0})
    eq = equiv_det_tropical(A, Dx)
    assert not eq and eq.phase == "upper-bound" and eq.lower_bound_holds and eq.counterexample == "a"
    shifted = WeightedAutomaton(N, "a", 1, {(1, "a", 1): 2}, {1: 1}, {1: 0})
    eq = equiv_det_tropical(shifted, Dx)
    assert not eq and eq.phase == "upper-bound" and eq.counterexample == ""


def test_equivalence_support_phase_and_errors():
    eq = equiv_det_tropical(loops(N, (0, 2)), WeightedAutomaton(N, "a", 1, {}, {1: 0}, {1: 0}))
    assert not eq and eq.phase == "support" and eq.counterexample == "a"
    with pytest.raises(ValueError):
        equiv_det_tropical(loops(N, (0, 2)), loops(N, (0, 2), (0, 3)))
    with pytest.raises(SemiringError):
        equiv_det_tropical(loops(N, (0, 2)), loops(Z, (0, 2)))


def test_rational_weights():
    A = loops(Qmin, (0, "1/2"), (0, "2/3"))
    d = bideterminize_tropical(A)
    assert d and coefficient(d.witness, "aa") == Qmin.value(1)


# -- the decision procedure ----------------------------------------------------------

def test_decision_examples():
    d = bideterminize_tropical(loops(N, (0, 2), (0, 3)))
    assert d and d.stage == "equivalence"
    assert d.witness == WeightedAutomaton(N, "a", 1, {(1, "a", 1): 2}, {1: 0}, {1: 0})
    A = WeightedAutomaton(N, "ab", 3, {(1, "a", 2): 0, (2, "b", 3): 0, (1, "b", 3): 0}, {1: 0}, {3: 0})
    d = bideterminize_tropical(A)
    assert not d and d.stage == "skeleton"
    d = bideterminize_tropical(loops(N, (0, 2), (5, 1)))
    assert not d and d.stage == "equivalence" and d.counterexample == "a" * 6
    d = bideterminize_tropical(WeightedAutomaton(N, "a", 2))
    assert d and d.stage == "empty" and d.witness.n == 0
    with pytest.raises(SemiringError):
        bideterminize_tropical(WeightedAutomaton(Semiring("rational"), "a", 0))


def _second_solution(syn):
    """Another rational solution of the same system, or None."""
    res = syn.result
    if not res.null_basis:
        return None
    x = [a + b for a, b in zip(res.solution, res.null_basis[0])]
    return x


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 10**6))
def test_decision_properties(seed):
    rng = random.Random(seed)
    A = random_automaton(rng, rng.choice([N, Z, Qmin]), "ab", rng.randint(1, 3), density=0.35)
    d = bideterminize_tropical(A)
    if d:
        W = d.witness
        assert is_bideterministic(W) and is_deterministic(W)
        assert equiv_det_tropical(A, W)
        assert equiv_bounded(A, W, 6)
    elif d.stage == "skeleton":
        assert not d.details["dfa"].is_bideterministic()
    if "solution" in d.details:
        D = d.details["dfa"]
        B = assign_weights(D, A.semiring, d.details["solution"])
        for w in d.details["basis_words"]:
            assert coefficient(B, w) == coefficient(A, w)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 10**6))
def test_choice_of_solution_is_immaterial(seed):
    rng = random.Random(seed)
    A = random_automaton(rng, Qmin, "ab", rng.randint(1, 3), density=0.35)
    D = support_dfa(A)
    if D.n == 0 or not D.is_bideterministic():
        return
    syn = synthesize_weights(A, D)
    x = _second_solution(syn)
    if x is None:
        return
    other = assign_weights(D, Qmin, x)
    assert bool(equiv_det_tropical(A, syn.automaton)) == bool(equiv_det_tropical(A, other))


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 10**6))
def test_equivalence_never_contradicts_bounded(seed):
    rng = random.Random(seed)
    S = rng.choice([N, Z])
    A = random_automaton(rng, S, "ab", rng.randint(1, 4), density=0.35)
    D = support_dfa(A)
    if D.n == 0:
        return
    x = [rng.randint(0, 4) for _ in range(1 + len(D.transition_keys) + len(D.final_states))]
    Dx = assign_weights(D, S, x)
    eq = equiv_det_tropical(A, Dx)
    bounded = equiv_bounded(A, Dx, 8)
    if not bounded:
        assert not eq
    if not eq:
        assert coefficient(A, eq.counterexample) != coefficient(Dx, eq.counterexample)
