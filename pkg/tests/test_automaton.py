import random

import pytest
from hypothesis import given, settings, strategies as st

from biwa.automaton import (
    AutomatonError, WeightedAutomaton, behaviour_table, coefficient, empty_automaton, equiv_bounded,
    equiv_finite_semiring, is_bideterministic, semantic_trim, state_series, support_skeleton, to_dot,
    transpose, trim,
)
from biwa.gallery import PCPInstance, build_example, pcp_automaton, top_automaton
from biwa.oracles import run_sum, runs, words
from biwa.randomgen import random_automaton, random_bideterministic
from biwa.semiring import Semiring, SemiringError, TOP

Z6 = Semiring("mod-int", 6)
Z4 = Semiring("mod-int", 4)
RANDOM_KINDS = [Semiring("rational"), Semiring("integer"), Z6, Z4, Semiring("boolean"),
                Semiring("tropical-nat"), Semiring("tropical-int"), Semiring("prime-field", 5)]
seeds = st.integers(0, 10**6)


@pytest.fixture
def fig2():
    return build_example("fig2").automaton


@pytest.fixture
def fig3():
    return build_example("fig3").automaton


def test_zero_weights_dropped():
    A = WeightedAutomaton(Z6, "a", 2, {(1, "a", 2): 0, (2, "a", 1): 6}, {1: 1}, {2: 0})
    assert A.sigma == {} and A.tau == {}


def test_bad_input_rejected():
    with pytest.raises(AutomatonError):
        WeightedAutomaton(Z6, "a", 1, {(1, "b", 1): 1})
    with pytest.raises(AutomatonError):
        WeightedAutomaton(Z6, "a", 1, {(1, "a", 2): 1})
    with pytest.raises(AutomatonError):
        WeightedAutomaton(Z6, "a", 1, iota={1: "x"})


def test_coefficient_examples(fig2):
    assert coefficient(fig2, "aba") == Z6.value(4)
    assert coefficient(fig2, "ab").is_zero
    fig1 = build_example("fig1").automaton
    assert coefficient(fig1, "a").is_zero
    with pytest.raises(ValueError):
        coefficient(fig2, "abc")


def test_behaviour_tables(fig2):
    assert behaviour_table(fig2, 3).coeffs == {"bb": Z6.value(3), "aba": Z6.value(4)}
    assert behaviour_table(empty_automaton(Z6, "ab"), 5).coeffs == {}
    A = pcp_automaton(PCPInstance("c", {"c": "ab"}, {"c": "ab"}))
    S = A.semiring
    assert behaviour_table(A, 1).coeffs == {"": S.value(TOP), "c": S.value("ab")}


def test_bideterminism_reports(fig2, fig3):
    assert is_bideterministic(fig2)
    check = is_bideterministic(fig3)
    assert not check and check.condition == "iv" and check.letter == "b"
    assert check.states == (3, 1, 2)
    assert is_bideterministic(empty_automaton(Z6, "a"))
    two_initial = WeightedAutomaton(Z6, "a", 2, {}, {1: 1, 2: 1}, {1: 1})
    assert is_bideterministic(two_initial).condition == "i"
    two_final = WeightedAutomaton(Z6, "a", 2, {}, {1: 1}, {1: 1, 2: 1})
    assert is_bideterministic(two_final).condition == "iii"
    fork = WeightedAutomaton(Z6, "a", 3, {(1, "a", 2): 1, (1, "a", 3): 1}, {1: 1}, {2: 1})
    assert is_bideterministic(fork).condition == "ii"


def test_trim_examples():
    fig1 = build_example("fig1").automaton
    assert trim(fig1) == fig1
    A = WeightedAutomaton(Z6, "a", 3, {(1, "a", 2): 1}, {1: 1}, {2: 1})
    assert trim(A).n == 2


def test_semantic_trim_examples():
    assert semantic_trim(build_example("fig1").automaton).n == 0
    Q = Semiring("rational")
    A = WeightedAutomaton(Q, "a", 2, {(1, "a", 2): 3}, {1: 1}, {2: 1})
    assert semantic_trim(A) == A
    # 1 -a/2-> 2 -a/1-> 3 over Z/4Z: every state lies on a run of weight 2
    B = WeightedAutomaton(Z4, "a", 3, {(1, "a", 2): 2, (2, "a", 3): 1}, {1: 1}, {3: 1})
    assert semantic_trim(B) == B


def test_state_series(fig2):
    one = WeightedAutomaton(Z6, "a", 1, {}, {1: 1}, {1: 1})
    assert equiv_finite_semiring(state_series(one, 1, "future"), one)
    assert coefficient(state_series(fig2, 3, "future"), "a") == Z6.value(2)
    assert coefficient(state_series(fig2, 3, "past"), "ab") == Z6.value(2)


def test_skeleton_examples(fig2):
    sk = support_skeleton(fig2)
    assert not sk.exact
    assert sk.nfa.language(4) == {"aba", "bb"}
    T = Semiring("tropical-nat")
    loop = WeightedAutomaton(T, "a", 1, {(1, "a", 1): 0}, {1: 0}, {1: 0})
    sk = support_skeleton(loop)
    assert sk.exact and sk.nfa.language(3) == {"", "a", "aa", "aaa"}
    fig1 = build_example("fig1").automaton
    assert support_skeleton(fig1).nfa.language(3) == {"a"}
    assert behaviour_table(fig1, 3).coeffs == {}


def test_finite_equivalence_examples(fig2, fig3):
    assert equiv_finite_semiring(fig2, fig3)
    fig1 = build_example("fig1").automaton
    assert equiv_finite_semiring(fig1, empty_automaton(Z6, "a"))
    assert equiv_finite_semiring(fig2, fig2)
    eq = equiv_finite_semiring(fig2, empty_automaton(Z6, "ab"))
    assert not eq and eq.counterexample == "bb"
    with pytest.raises(SemiringError):
        equiv_finite_semiring(build_example("fig7").automaton, build_example("fig7").automaton)


def test_bounded_equivalence_examples():
    inst = PCPInstance("c", {"c": "a"}, {"c": "b"})
    assert equiv_bounded(pcp_automaton(inst), top_automaton("c", "ab"), 8)
    same = PCPInstance("c", {"c": "ab"}, {"c": "ab"})
    eq = equiv_bounded(pcp_automaton(same), top_automaton("c", "ab"), 1)
    assert not eq and eq.counterexample == "c"


def test_dot_export(fig2):
    dot = to_dot(fig2)
    assert dot.startswith("digraph") and '"a / 2"' in dot and dot.count("->") == 7


# -- properties ---------------------------------------------------------------

@settings(max_examples=40, deadline=None)
@given(seed=seeds, kind=st.sampled_from(RANDOM_KINDS))
def test_coefficient_matches_run_enumeration(seed, kind):
    rng = random.Random(seed)
    A = random_automaton(rng, kind, "ab", rng.randint(0, 5))
    for w in words("ab", 4):
        assert coefficient(A, w) == run_sum(A, w)


@settings(max_examples=40, deadline=None)
@given(seed=seeds, kind=st.sampled_from(RANDOM_KINDS))
def test_structure_ops_preserve_behaviour(seed, kind):
    rng = random.Random(seed)
    A = random_automaton(rng, kind, "ab", rng.randint(0, 4))
    table = behaviour_table(A, 6).coeffs
    assert behaviour_table(trim(A), 6).coeffs == table
    if kind.is_finite or kind.is_zero_divisor_free:
        assert behaviour_table(semantic_trim(A), 6).coeffs == table
    T = transpose(A)
    assert transpose(T) == A
    assert {w[::-1]: v for w, v in behaviour_table(T, 6).coeffs.items()} == table
    assert bool(is_bideterministic(A)) == bool(is_bideterministic(T))


@settings(max_examples=40, deadline=None)
@given(seed=seeds)
def test_bideterministic_means_one_run(seed):
    rng = random.Random(seed)
    A = random_bideterministic(rng, Z6, "ab", rng.randint(1, 5), trimmed=False)
    assert is_bideterministic(A)
    for w in words("ab", 5):
        assert len(runs(A, w)) <= 1


@settings(max_examples=30, deadline=None)
@given(seed=seeds, kind=st.sampled_from([Z6, Z4, Semiring("boolean"), Semiring("prime-field", 3)]))
def test_finite_equivalence_properties(seed, kind):
    rng = random.Random(seed)
    A = random_automaton(rng, kind, "ab", rng.randint(0, 3))
    B = random_automaton(rng, kind, "ab", rng.randint(0, 3))
    assert equiv_finite_semiring(A, A)
    ab, ba = equiv_finite_semiring(A, B), equiv_finite_semiring(B, A)
    assert bool(ab) == bool(ba)
    bounded = equiv_bounded(A, B, 6)
    if not bounded:
        assert not ab
        assert ab.counterexample == bounded.counterexample
    if not ab:
        assert coefficient(A, ab.counterexample) != coefficient(B, ab.counterexample)


@settings(max_examples=30, deadline=None)
@given(seed=seeds, kind=st.sampled_from([Semiring("boolean"), Semiring("tropical-int"), Semiring("rational")]))
def test_skeleton_exact_for_positive(seed, kind):
    rng = random.Random(seed)
    A = random_automaton(rng, kind, "ab", rng.randint(0, 4))
    sk = support_skeleton(A)
    assert sk.exact == kind.is_positive
    if sk.exact:
        assert sk.nfa.language(6) == behaviour_table(A, 6).support()


def test_past_future_duality():
    rng = random.Random(7)
    for _ in range(20):
        A = random_automaton(rng, Semiring("integer"), "ab", 3)
        for q in A.states:
            left = transpose(state_series(A, q, "future"))
            right = state_series(transpose(A), q, "past")
            assert equiv_bounded(left, right, 5)
