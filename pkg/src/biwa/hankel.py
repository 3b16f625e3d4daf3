"""Fast exact minimisation over the rationals.

The minimal automaton produced by the two-step basis reduction depends only
on the shortlex left basis of the quotient space: state ``j`` stands for the
quotient by the ``j``-th left basic word ``x_j``, terminal weights are
``(r, x_j)``, and row ``j`` of ``mu(c)`` holds the coordinates of the
quotient by ``x_j c``.  Quotients are represented injectively by their
values on a right basic language (Hankel rows), so everything reduces to
rank decisions and one square solve on a matrix of series coefficients,
whose entries stay far smaller than those of the intermediate reduced
representation.

Rank decisions are made modulo a 61-bit prime and then certified exactly
with FLINT; :class:`Uncertified` is raised when a certificate fails so that
the caller can fall back to plain rational elimination.
"""
from __future__ import annotations

from fractions import Fraction

import flint

from .automaton import WeightedAutomaton, shortlex_key
from .linalg import IndependenceTracker

P = (1 << 61) - 1


class Uncertified(Exception):
    pass


class _ModP:
    """Duck-typed scalar arithmetic modulo ``P`` for IndependenceTracker."""

    p = P
    zero = 0
    one = 1

    @staticmethod
    def inv(x):
        return pow(x, -1, P)

    @staticmethod
    def axpy(row, f, piv):
        return [(a - f * b) % P for a, b in zip(row, piv)]

    @staticmethod
    def scale(row, f):
        return [(a * f) % P for a in row]


def _residues(entries):
    out = []
    for e in entries:
        q = int(e.q) % P
        if not q:
            raise Uncertified("denominator divisible by the working prime")
        out.append(int(e.p) * pow(q, -1, P) % P)
    return out


def _fmpq(x: Fraction):
    return flint.fmpq(x.numerator, x.denominator)


def _frac(e) -> Fraction:
    return Fraction(int(e.p), int(e.q))


def _column(M, j):
    return [M[i, j] for i in range(M.nrows())]


def _levels(alphabet, start_vec, step, side, tracker, key):
    """Grow a basic language level by level; ``step(batch, c)`` maps a
    matrix of vectors (as columns for the right side, rows for the left)
    to the matrix of extended vectors.  Returns kept words/vectors and every
    candidate word/vector tested."""
    kept = [("", start_vec)]
    tested = [("", start_vec)]
    level = kept[:]
    while level:
        cands = []
        for c in alphabet:
            moved = step([v for _, v in level], c)
            for (w, _), v in zip(level, moved):
                cands.append((c + w if side == "right" else w + c, v))
        cands.sort(key=lambda wv: key(wv[0]))
        level = []
        for w, v in cands:
            tested.append((w, v))
            if tracker.add(_residues(v)):
                kept.append((w, v))
                level.append((w, v))
    return kept, tested


def minimize_rational(A: WeightedAutomaton) -> WeightedAutomaton:
    n, alphabet = A.n, A.alphabet
    key = shortlex_key(alphabet)
    empty = WeightedAutomaton(A.semiring, alphabet, 0)
    if n == 0 or not A.tau or not A.iota:
        return empty
    mu = {}
    for c in alphabet:
        M = flint.fmpq_mat(n, n)
        for (p, d, q), v in A.sigma.items():
            if d == c:
                M[p - 1, q - 1] = _fmpq(v.payload)
        mu[c] = M
    f = [flint.fmpq(0)] * n
    for q, v in A.tau.items():
        f[q - 1] = _fmpq(v.payload)
    i = [flint.fmpq(0)] * n
    for q, v in A.iota.items():
        i[q - 1] = _fmpq(v.payload)

    def col_step(vecs, c):
        B = flint.fmpq_mat(n, len(vecs), [vecs[j][r] for r in range(n) for j in range(len(vecs))])
        out = mu[c] * B
        return [_column(out, j) for j in range(len(vecs))]

    def row_step(vecs, c):
        B = flint.fmpq_mat(len(vecs), n, [x for v in vecs for x in v])
        out = B * mu[c]
        return [[out[r, j] for j in range(n)] for r in range(len(vecs))]

    # right basic language: a basis of the columns mu(y) f
    tr = IndependenceTracker(_ModP, n)
    if not tr.add(_residues(f)):
        raise Uncertified("terminal vector vanishes modulo the working prime")
    right, tested = _levels(alphabet, f, col_step, "right", tr, key)
    k = len(right)
    if flint.fmpq_mat(len(tested), n, [x for _, v in tested for x in v]).rank() != k:
        raise Uncertified("right basis not certified")
    Y = flint.fmpq_mat(n, k, [right[j][1][r] for r in range(n) for j in range(k)])

    # left basic language on Hankel rows h(x) = i mu(x) Y
    def hrow(rows):
        return flint.fmpq_mat(len(rows), n, [x for v in rows for x in v]) * Y

    start_row = i
    h0 = hrow([start_row])
    h0 = [h0[0, j] for j in range(k)]
    if all(x == 0 for x in h0):
        return empty
    tl = IndependenceTracker(_ModP, k)
    if not tl.add(_residues(h0)):
        raise Uncertified("initial Hankel row vanishes modulo the working prime")

    # carry (i mu(x), h(x)) pairs; steps act on the first component
    def pair_step(pairs, c):
        rows = row_step([r for r, _ in pairs], c)
        H = hrow(rows)
        return [(rows[t], [H[t, j] for j in range(k)]) for t in range(len(rows))]

    kept = [("", (start_row, h0))]
    tested_rows = {"": h0}
    level = kept[:]
    while level:
        cands = []
        for c in alphabet:
            moved = pair_step([v for _, v in level], c)
            for (w, _), v in zip(level, moved):
                cands.append((w + c, v))
        cands.sort(key=lambda wv: key(wv[0]))
        level = []
        for w, v in cands:
            tested_rows[w] = v[1]
            if tl.add(_residues(v[1])):
                kept.append((w, v))
                level.append((w, v))
    m = len(kept)
    allH = flint.fmpq_mat(len(tested_rows), k, [x for h in tested_rows.values() for x in h])
    if allH.rank() != m:
        raise Uncertified("left basis not certified")

    words = [w for w, _ in kept]
    index = {w: j for j, w in enumerate(words)}
    piv = tl.pivots
    S = flint.fmpq_mat(m, m, [tested_rows[w][c] for w in words for c in piv])
    targets = [w + c for w in words for c in alphabet if w + c not in index]
    coords = {}
    if targets:
        T = flint.fmpq_mat(m, len(targets), [tested_rows[t][c] for c in piv for t in targets])
        X = S.transpose().solve(T, algorithm="dixon" if m > 20 else None)
        for col, t in enumerate(targets):
            coords[t] = [X[r, col] for r in range(m)]

    sigma = {}
    for r, w in enumerate(words):
        for c in alphabet:
            t = w + c
            if t in index:
                sigma[(r + 1, c, index[t] + 1)] = Fraction(1)
            else:
                for j, x in enumerate(coords[t]):
                    if x != 0:
                        sigma[(r + 1, c, j + 1)] = _frac(x)
    tau = {r + 1: _frac(tested_rows[w][0]) for r, w in enumerate(words) if tested_rows[w][0] != 0}
    return WeightedAutomaton(A.semiring, alphabet, m, sigma, {1: Fraction(1)}, tau)
