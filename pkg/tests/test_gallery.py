import pytest

from biwa.automaton import behaviour_table, coefficient, equiv_bounded, is_bideterministic, semantic_trim
from biwa.gallery import (
    NAMES, HypothesisError, PCPInstance, build_example, pcp_automaton, pcp_behaviour, top_automaton,
    verify_example_claims, zmod_parameters,
)
from biwa.oracles import words
from biwa.semiring import TOP, Semiring


@pytest.mark.parametrize("name", NAMES)
def test_every_claim_passes(name):
    report = verify_example_claims(build_example(name))
    assert report.results and report.passed, report.results


def test_fig2_table():
    A = build_example("fig2").automaton
    S = A.semiring
    assert behaviour_table(A, 4).coeffs == {"bb": S.value(3), "aba": S.value(4)}


def test_fig1_parameters():
    entry = build_example("fig1", {"s": "3", "t": "4"})
    assert verify_example_claims(entry)
    with pytest.raises(HypothesisError):
        build_example("fig1", {"s": "1", "t": "5"})
    with pytest.raises(HypothesisError):
        build_example("fig1", {"s": "0", "t": "5"})


def test_fig2_hypotheses():
    with pytest.raises(HypothesisError):
        build_example("fig2", {"s": "1", "t": "1", "s2": "1", "t2": "1"})
    ok = build_example("fig2", {"semiring": "mod-int(10)", "s": "5", "t": "5", "s2": "2", "t2": "2"})
    assert verify_example_claims(ok)


def test_zmod():
    assert zmod_parameters(6) == (2, 3)
    assert zmod_parameters(12) == (4, 3)
    with pytest.raises(HypothesisError):
        zmod_parameters(8)
    entry = build_example("zmod", {"m": 12})
    assert verify_example_claims(entry)
    assert is_bideterministic(entry.automaton)


def test_fig5_coefficients():
    A = build_example("fig5").automaton
    S = A.semiring
    xy = S.parse("x + y")
    power = xy * xy
    for t in range(9):
        assert coefficient(A, "a" * t) == power
        power = power * xy


def test_fig10():
    B = top_automaton("c", "ab")
    assert all(coefficient(B, w).payload is TOP for w in words("c", 8))
    assert is_bideterministic(B)


def test_pcp_examples():
    diff = pcp_automaton(PCPInstance("c", {"c": "a"}, {"c": "b"}))
    S = diff.semiring
    assert coefficient(diff, "cc") == S.value(TOP)
    same = pcp_automaton(PCPInstance("c", {"c": "ab"}, {"c": "ab"}))
    assert coefficient(same, "cc") == same.semiring.value("abab")
    for A in (diff, same):
        assert coefficient(A, "").payload is TOP
    with pytest.raises(ValueError):
        PCPInstance("cd", {"c": "a"}, {"c": "a", "d": "b"})
    with pytest.raises(ValueError):
        pcp_automaton(PCPInstance("c", {"c": "z"}, {"c": "a"}), sigma="ab")


def test_pcp_two_letter_instance():
    # cd is a solution: f(cd) = g(cd) = aba
    inst = PCPInstance("cd", {"c": "a", "d": "ba"}, {"c": "ab", "d": "a"})
    A = pcp_automaton(inst)
    S = A.semiring
    for w in words("cd", 6):
        assert coefficient(A, w) == pcp_behaviour(inst, w, S)
    assert coefficient(A, "cd") == S.value("aba")
    assert not equiv_bounded(A, top_automaton("cd", "ab"), 2)


def test_unknown_example():
    with pytest.raises(KeyError):
        build_example("fig4")


def test_semantic_trim_keeps_bideterminism():
    # Corollary check on the gallery automata over Z/mZ
    for name in ("fig1", "fig2", "zmod"):
        A = build_example(name).automaton
        assert is_bideterministic(semantic_trim(A))
    Z4 = Semiring("mod-int", 4)
    A = build_example("fig1", {"semiring": "mod-int(4)", "s": "2", "t": "2"}).automaton
    assert A.semiring == Z4 and semantic_trim(A).n == 0
