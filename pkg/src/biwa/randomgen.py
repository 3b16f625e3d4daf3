"""Seeded random automata for property tests and the acceptance suite."""
from __future__ import annotations

import random
from fractions import Fraction

from .automaton import WeightedAutomaton, trim
from .linalg import FieldMatrix, left_inverse
from .polynomial import Poly
from .semiring import TOP, Semiring


def random_weight(rng: random.Random, S: Semiring, nonzero: bool = True, size: int = 5):
    kind = S.kind
    while True:
        if kind == "boolean":
            v = rng.random() < 0.5
        elif kind == "rational":
            v = Fraction(rng.randint(-size, size), rng.randint(1, size))
        elif kind == "integer":
            v = rng.randint(-size, size)
        elif kind in ("prime-field", "mod-int"):
            v = rng.randrange(S.param)
        elif kind == "tropical-nat":
            v = rng.randint(0, size)
        elif kind == "tropical-int":
            v = rng.randint(-size, size)
        elif kind == "tropical-rat":
            v = Fraction(rng.randint(-size, size), rng.randint(1, 3))
        elif kind == "poly-rat":
            k = len(S.param)
            terms = [(tuple(rng.randint(0, 2) for _ in range(k)), rng.randint(-size, size)) for _ in range(rng.randint(1, 3))]
            v = Poly(k, terms)
        elif kind == "trunc-lang":
            v = rng.choice([TOP, "".join(rng.choice(S.param) for _ in range(rng.randint(0, 2)))])
        else:
            raise ValueError(f"no random weights for {S}")
        value = S.value(v)
        if not (nonzero and value.is_zero):
            return value


def random_automaton(rng: random.Random, S: Semiring, alphabet="ab", n: int = 3,
                     density: float = 0.4, size: int = 5) -> WeightedAutomaton:
    sigma = {(p, c, q): random_weight(rng, S, size=size)
             for p in range(1, n + 1) for c in alphabet for q in range(1, n + 1) if rng.random() < density}
    iota = {q: random_weight(rng, S, size=size) for q in range(1, n + 1) if rng.random() < 0.5}
    tau = {q: random_weight(rng, S, size=size) for q in range(1, n + 1) if rng.random() < 0.5}
    if n and not iota:
        iota[rng.randint(1, n)] = random_weight(rng, S, size=size)
    if n and not tau:
        tau[rng.randint(1, n)] = random_weight(rng, S, size=size)
    return WeightedAutomaton(S, alphabet, n, sigma, iota, tau)


def random_bideterministic(rng: random.Random, S: Semiring, alphabet="ab", n: int = 4,
                           density: float = 0.7, size: int = 5, trimmed: bool = True,
                           min_states: int = 0) -> WeightedAutomaton:
    """Random partial injective transition maps, one initial and one
    terminal state; trimmed (so possibly fewer than n states) by default.
    Draws are repeated until at least ``min_states`` states survive."""
    while True:
        A = _bideterministic(rng, S, alphabet, n, density, size)
        if trimmed:
            A = trim(A)
        if A.n >= min_states:
            return A


def _bideterministic(rng, S, alphabet, n, density, size):
    sigma = {}
    for c in alphabet:
        sources = [p for p in range(1, n + 1) if rng.random() < density]
        targets = rng.sample(range(1, n + 1), len(sources))
        for p, q in zip(sources, targets):
            sigma[(p, c, q)] = random_weight(rng, S, size=size)
    return WeightedAutomaton(S, alphabet, n, sigma, {1: random_weight(rng, S, size=size)},
                             {rng.randint(1, n): random_weight(rng, S, size=size)})


def random_invertible(rng: random.Random, n: int, size: int = 3) -> FieldMatrix:
    Q = Semiring("rational")
    while True:
        rows = [[Fraction(rng.randint(-size, size), rng.randint(1, size)) for _ in range(n)] for _ in range(n)]
        M = FieldMatrix(Q, rows)
        try:
            left_inverse(M)
        except ValueError:
            continue
        return M


def conjugate(A: WeightedAutomaton, P: FieldMatrix) -> WeightedAutomaton:
    """The automaton with representation ``(iP, P^-1 mu(c) P, P^-1 f)``,
    which has the same behaviour and generally dense weights."""
    n = A.n
    Pinv = left_inverse(P)
    rep = A.representation()
    Q = A.semiring
    zero = Fraction(0)
    i = [sum((rep.i[k] * P[k, j] for k in range(n)), zero) for j in range(n)]
    f = [sum((Pinv[j, k] * rep.f[k] for k in range(n)), zero) for j in range(n)]
    sigma = {}
    for c in A.alphabet:
        M = FieldMatrix(Q, rep.mu[c])
        C = Pinv @ M @ P
        for p in range(n):
            for q in range(n):
                if C[p, q] != 0:
                    sigma[(p + 1, c, q + 1)] = C[p, q]
    return WeightedAutomaton(Q, A.alphabet, n, sigma,
                             {j + 1: x for j, x in enumerate(i) if x != 0},
                             {j + 1: x for j, x in enumerate(f) if x != 0})
