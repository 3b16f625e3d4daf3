"""Exact linear algebra over the field instances (rationals and prime fields)
plus rational, integer and nonnegative-integer linear system solvers.

Rational arithmetic runs on ``gmpy2.mpq`` internally and converts back to
:class:`fractions.Fraction` at the boundary.  Nothing here uses floats.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence

from gmpy2 import mpq

from .semiring import Semiring, SemiringError


class RankDeficientError(ValueError):
    """Raised by the one-sided inverses; ``index`` is the first dependent
    column (left inverse) or row (right inverse), 0-based."""

    def __init__(self, message, index):
        super().__init__(message)
        self.index = index


class Arith:
    """Internal scalar arithmetic for one field instance."""

    def __init__(self, semiring: Semiring):
        if not semiring.is_field:
            raise SemiringError(f"{semiring} is not a field")
        self.semiring = semiring
        self.p = semiring.param if semiring.kind in ("prime-field", "mod-int") else None

    def conv(self, x):
        if self.p is None:
            if isinstance(x, Fraction):
                return mpq(x.numerator, x.denominator)
            return mpq(x)
        return int(x) % self.p

    def back(self, x):
        if self.p is None:
            return Fraction(int(x.numerator), int(x.denominator))
        return x

    def inv(self, x):
        if self.p is None:
            return 1 / x
        return pow(x, -1, self.p)

    @property
    def zero(self):
        return mpq(0) if self.p is None else 0

    @property
    def one(self):
        return mpq(1) if self.p is None else 1

    def axpy(self, row, f, piv):
        """``row - f * piv`` elementwise."""
        if self.p is None:
            return [a - f * b for a, b in zip(row, piv)]
        p = self.p
        return [(a - f * b) % p for a, b in zip(row, piv)]

    def scale(self, row, f):
        if self.p is None:
            return [a * f for a in row]
        return [(a * f) % self.p for a in row]

    def dot(self, u, v):
        s = self.zero
        for a, b in zip(u, v):
            if a and b:
                s += a * b
        return s if self.p is None else s % self.p

    def matmul(self, A, B):
        if not A:
            return []
        cols = list(zip(*B)) if B else []
        inner = len(B)
        if not cols:
            return [[] for _ in A]
        return [[self.dot(r, c) for c in cols] if inner else [self.zero] * len(cols) for r in A]


class FieldMatrix:
    """Immutable matrix of payloads over a field instance."""

    def __init__(self, semiring: Semiring, rows: Sequence[Sequence], cols: Optional[int] = None):
        self.semiring = semiring
        ar = Arith(semiring)
        self.rows = tuple(tuple(ar.back(ar.conv(semiring.value(x).payload if not _is_raw(x) else x)) for x in r) for r in rows)
        widths = {len(r) for r in self.rows}
        if len(widths) > 1:
            raise ValueError("ragged matrix")
        self.ncols = widths.pop() if widths else (cols or 0)
        self.nrows = len(self.rows)

    @classmethod
    def identity(cls, semiring, n):
        return cls(semiring, [[int(i == j) for j in range(n)] for i in range(n)], n)

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        return self.rows[ij[0]][ij[1]]

    def transpose(self) -> "FieldMatrix":
        return FieldMatrix(self.semiring, [list(c) for c in zip(*self.rows)], self.nrows)

    def __matmul__(self, other: "FieldMatrix") -> "FieldMatrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        ar = Arith(self.semiring)
        A = [[ar.conv(x) for x in r] for r in self.rows]
        B = [[ar.conv(x) for x in r] for r in other.rows]
        out = ar.matmul(A, B) if other.ncols else [[] for _ in A]
        return FieldMatrix(self.semiring, [[ar.back(x) for x in r] for r in out], other.ncols)

    def __eq__(self, other):
        return isinstance(other, FieldMatrix) and self.semiring == other.semiring and self.shape == other.shape and self.rows == other.rows

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in r) for r in self.rows)
        return f"FieldMatrix({self.semiring}, [{body}])"


def _is_raw(x):
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


@dataclass(frozen=True)
class RREF:
    matrix: FieldMatrix
    pivots: tuple
    rank: int


def _rref_rows(ar: Arith, rows: List[list], ncols: int):
    """In-place reduction of internal-format rows; returns pivot columns."""
    pivots = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        if r == nrows:
            break
        sel = next((i for i in range(r, nrows) if rows[i][c]), None)
        if sel is None:
            continue
        rows[r], rows[sel] = rows[sel], rows[r]
        rows[r] = ar.scale(rows[r], ar.inv(rows[r][c]))
        piv = rows[r]
        for i in range(nrows):
            if i != r and rows[i][c]:
                rows[i] = ar.axpy(rows[i], rows[i][c], piv)
        pivots.append(c)
        r += 1
    return pivots


def rref(M: FieldMatrix) -> RREF:
    """Reduced row echelon form.  Pivot columns are 0-based and chosen as the
    first column with a nonzero entry at or below the current row, taking the
    topmost such row."""
    ar = Arith(M.semiring)
    rows = [[ar.conv(x) for x in r] for r in M.rows]
    pivots = _rref_rows(ar, rows, M.ncols)
    out = FieldMatrix(M.semiring, [[ar.back(x) for x in r] for r in rows], M.ncols)
    return RREF(out, tuple(pivots), len(pivots))


def _independent_rows(ar, rows, ncols):
    """Indices of the first maximal independent subset of ``rows``, in order."""
    tracker = IndependenceTracker(ar, ncols)
    return [i for i, r in enumerate(rows) if tracker.add(r)]


def _invert_square(ar, rows):
    k = len(rows)
    aug = [list(r) + [ar.one if i == j else ar.zero for j in range(k)] for i, r in enumerate(rows)]
    pivots = _rref_rows(ar, aug, k)
    if len(pivots) < k:
        raise RankDeficientError("singular matrix", len(pivots))
    return [r[k:] for r in aug]


def left_inverse_raw(ar: Arith, M: List[list], ncols: int) -> List[list]:
    """Left inverse of an ``r x k`` full-column-rank matrix in internal format.

    The first ``k`` independent rows of ``M`` form an invertible block ``S``;
    the result places the columns of ``S^-1`` at those row positions and zero
    columns elsewhere, so ``L M = S^-1 S = I``.
    """
    k = ncols
    if k == 0:
        return []
    chosen = _independent_rows(ar, M, k)
    if len(chosen) < k:
        cols = IndependenceTracker(ar, len(M))
        dep = next(j for j in range(k) if not cols.add([row[j] for row in M]))
        raise RankDeficientError(f"matrix has rank {len(chosen)} < {k} columns; column {dep} is dependent", dep)
    S_inv = _invert_square(ar, [M[i] for i in chosen])
    out = [[ar.zero] * len(M) for _ in range(k)]
    for pos, i in enumerate(chosen):
        for r in range(k):
            out[r][i] = S_inv[r][pos]
    return out


def left_inverse(M: FieldMatrix) -> FieldMatrix:
    ar = Arith(M.semiring)
    rows = [[ar.conv(x) for x in r] for r in M.rows]
    L = left_inverse_raw(ar, rows, M.ncols)
    return FieldMatrix(M.semiring, [[ar.back(x) for x in r] for r in L], M.nrows)


def right_inverse(M: FieldMatrix) -> FieldMatrix:
    try:
        return left_inverse(M.transpose()).transpose()
    except RankDeficientError as exc:
        raise RankDeficientError(str(exc).replace("column", "row"), exc.index) from None


class IndependenceTracker:
    """Incrementally maintained echelon basis of a growing set of vectors."""

    def __init__(self, ar: Arith, dim: int):
        self.ar = ar
        self.dim = dim
        self.basis: List[list] = []  # each row normalised to 1 at its pivot
        self.pivots: List[int] = []

    def reduce(self, vec):
        ar = self.ar
        v = list(vec)
        for row, c in zip(self.basis, self.pivots):
            if v[c]:
                v = ar.axpy(v, v[c], row)
        return v

    def add(self, vec) -> bool:
        """Add ``vec`` if it is independent of the current basis."""
        v = self.reduce(vec)
        c = next((i for i, x in enumerate(v) if x), None)
        if c is None:
            return False
        self.basis.append(self.ar.scale(v, self.ar.inv(v[c])))
        self.pivots.append(c)
        return True

    def add_all(self, vecs) -> bool:
        return all([self.add(v) for v in vecs])

    def __len__(self):
        return len(self.basis)


# -- linear systems -------------------------------------------------------

@dataclass(frozen=True)
class SystemSolution:
    """``status`` is ``"feasible"``, ``"infeasible"`` or
    ``"infeasible-within-cap"`` (nonnegative search where some variable had
    no derivable bound).  For rational systems ``null_basis`` spans the
    solutions of the homogeneous system and an infeasible result carries
    ``certificate``: multipliers ``y`` with ``y A = 0`` and ``y b != 0``."""

    status: str
    solution: Optional[tuple] = None
    null_basis: tuple = ()
    certificate: Optional[tuple] = None

    @property
    def feasible(self):
        return self.status == "feasible"

    def __bool__(self):
        return self.feasible


def _check_shape(A, b):
    if len(A) != len(b):
        raise ValueError(f"{len(A)} rows but {len(b)} right-hand sides")
    n = len(A[0]) if A else 0
    if any(len(r) != n for r in A):
        raise ValueError("ragged coefficient matrix")
    return n


def solve_field(A, b, semiring: Optional[Semiring] = None) -> SystemSolution:
    """Solve ``A x = b`` over a field (rationals by default) by reducing the
    augmented matrix ``[A | b | I]``; free variables are set to zero in the
    particular solution."""
    semiring = semiring or Semiring("rational")
    n = _check_shape(A, b)
    ar = Arith(semiring)
    m = len(A)
    rows = [[ar.conv(x) for x in A[i]] + [ar.conv(b[i])] + [ar.one if i == j else ar.zero for j in range(m)]
            for i in range(m)]
    pivots = _rref_rows(ar, rows, n + 1)
    if n in pivots:
        r = pivots.index(n)
        return SystemSolution("infeasible", certificate=tuple(ar.back(x) for x in rows[r][n + 1:]))
    x = [ar.zero] * n
    for r, c in enumerate(pivots):
        x[c] = rows[r][n]
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fcol in free:
        v = [ar.zero] * n
        v[fcol] = ar.one
        for r, c in enumerate(pivots):
            v[c] = -rows[r][fcol] if ar.p is None else (-rows[r][fcol]) % ar.p
        basis.append(tuple(ar.back(t) for t in v))
    return SystemSolution("feasible", tuple(ar.back(t) for t in x), tuple(basis))


def hermite_column_form(A):
    """Column-style Hermite reduction ``A U = H`` with ``U`` unimodular.

    Returns ``(H, U, pivots)`` where ``pivots`` lists ``(row, column)`` of the
    leading entries; ``H`` is lower echelon with positive pivots and entries
    left of each pivot reduced into ``[0, pivot)``."""
    m = len(A)
    n = len(A[0]) if A else 0
    H = [list(map(int, r)) for r in A]
    U = [[int(i == j) for j in range(n)] for i in range(n)]

    def colop(j, k, q):  # col_j -= q * col_k
        if q:
            for row in H:
                row[j] -= q * row[k]
            for row in U:
                row[j] -= q * row[k]

    def swap(j, k):
        for row in H:
            row[j], row[k] = row[k], row[j]
        for row in U:
            row[j], row[k] = row[k], row[j]

    def negate(j):
        for row in H:
            row[j] = -row[j]
        for row in U:
            row[j] = -row[j]

    pivots = []
    c = 0
    for r in range(m):
        if c == n:
            break
        while True:
            nz = [j for j in range(c, n) if H[r][j]]
            if not nz:
                break
            k = min(nz, key=lambda j: (abs(H[r][j]), j))
            if k != c:
                swap(c, k)
            done = True
            for j in range(c + 1, n):
                if H[r][j]:
                    colop(j, c, H[r][j] // H[r][c])
                    if H[r][j]:
                        done = False
            if done:
                break
        if not H[r][c]:
            continue
        if H[r][c] < 0:
            negate(c)
        for j in range(c):
            colop(j, c, H[r][j] // H[r][c])
        pivots.append((r, c))
        c += 1
    return H, U, pivots


def solve_diophantine(A, b) -> SystemSolution:
    """Integer solution of ``A x = b`` via the column Hermite form: solve
    ``H y = b`` by forward substitution (each pivot must divide exactly, each
    non-pivot row must already balance) and return ``x = U y``."""
    n = _check_shape(A, b)
    if any(Fraction(x).denominator != 1 for r in A for x in r) or any(Fraction(x).denominator != 1 for x in b):
        raise ValueError("solve_diophantine needs integer coefficients")
    H, U, pivots = hermite_column_form(A)
    y = [0] * n
    pivot_of_row = dict(pivots)
    for r in range(len(A)):
        acc = sum(H[r][j] * y[j] for j in range(n) if y[j])
        rest = int(b[r]) - acc
        if r in pivot_of_row:
            c = pivot_of_row[r]
            if rest % H[r][c]:
                return SystemSolution("infeasible")
            y[c] = rest // H[r][c]
        elif rest:
            return SystemSolution("infeasible")
    x = tuple(sum(U[i][j] * y[j] for j in range(n)) for i in range(n))
    return SystemSolution("feasible", x)


# -- exact simplex and nonnegative integer search ---------------------------

def _simplex(A, b, c):
    """Minimise ``c x`` subject to ``A x = b, x >= 0`` exactly (two-phase,
    Bland's rule).  Returns ``("infeasible", None)``, ``("unbounded", None)``
    or ``("optimal", value)``."""
    m = len(A)
    n = len(c)
    rows = []
    for i in range(m):
        r = [Fraction(x) for x in A[i]] + [Fraction(b[i])]
        if r[-1] < 0:
            r = [-x for x in r]
        rows.append(r)
    # tableau columns: n structural, m artificial, rhs
    T = [r[:n] + [Fraction(int(i == j)) for j in range(m)] + [r[n]] for i, r in enumerate(rows)]
    basis = [n + i for i in range(m)]
    width = n + m

    def run(obj, allowed):
        # obj: cost vector of length width
        while True:
            red = [obj[j] - sum(obj[basis[i]] * T[i][j] for i in range(len(T))) for j in range(width)]
            enter = next((j for j in allowed if red[j] < 0), None)
            if enter is None:
                return True
            best = None
            for i in range(len(T)):
                a = T[i][enter]
                if a > 0:
                    ratio = T[i][-1] / a
                    if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                        best = (ratio, i)
            if best is None:
                return False
            i = best[1]
            piv = T[i][enter]
            T[i] = [x / piv for x in T[i]]
            for k in range(len(T)):
                if k != i and T[k][enter]:
                    f = T[k][enter]
                    T[k] = [x - f * y for x, y in zip(T[k], T[i])]
            basis[i] = enter

    phase1 = [Fraction(0)] * n + [Fraction(1)] * m
    run(phase1, range(width))
    if sum(T[i][-1] for i in range(len(T)) if basis[i] >= n) > 0:
        return "infeasible", None
    # drive zero-level artificials out of the basis, dropping redundant rows
    i = 0
    while i < len(T):
        if basis[i] >= n:
            j = next((j for j in range(n) if T[i][j]), None)
            if j is None:
                del T[i]
                del basis[i]
                continue
            piv = T[i][j]
            T[i] = [x / piv for x in T[i]]
            for k in range(len(T)):
                if k != i and T[k][j]:
                    f = T[k][j]
                    T[k] = [x - f * y for x, y in zip(T[k], T[i])]
            basis[i] = j
        i += 1
    obj = [Fraction(x) for x in c] + [Fraction(0)] * m
    if not run(obj, range(n)):
        return "unbounded", None
    value = sum(obj[basis[i]] * T[i][-1] for i in range(len(T)))
    return "optimal", value


DEFAULT_CAP = 64


def nonneg_bounds(A, b, cap=DEFAULT_CAP):
    """Per-variable upper bounds from rows whose coefficients are all
    nonnegative.  Returns ``(bounds, capped, contradiction)``."""
    n = len(A[0]) if A else 0
    bound = [None] * n
    for row, rhs in zip(A, b):
        if all(a >= 0 for a in row):
            if rhs < 0:
                return bound, [], True
            for j, a in enumerate(row):
                if a > 0:
                    u = math.floor(Fraction(rhs) / Fraction(a))
                    bound[j] = u if bound[j] is None else min(bound[j], u)
    capped = [j for j in range(n) if bound[j] is None]
    return [cap if u is None else u for u in bound], capped, False


def solve_nonneg(A, b, cap: int = DEFAULT_CAP) -> SystemSolution:
    """Nonnegative integer solution of ``A x = b``.

    Variables are fixed in index order, each trying values upward from the
    ceiling of its LP minimum to the floor of its LP maximum over the current
    relaxation ``{A x = b, 0 <= x <= u}``; the first solution found is thus
    the lexicographically least one.  Variables without a derivable bound get
    ``cap``, and failure then reports ``"infeasible-within-cap"``.
    """
    n = _check_shape(A, b)
    A = [[Fraction(x) for x in r] for r in A]
    b = [Fraction(x) for x in b]
    upper, capped, contradiction = nonneg_bounds(A, b, cap)
    if contradiction:
        return SystemSolution("infeasible")
    fail = SystemSolution("infeasible-within-cap" if capped else "infeasible")
    m = len(A)

    def lp_range(j, fixed):
        # variables j..n-1 free in [0, upper]; slack per variable
        k = n - j
        rows = []
        rhs = []
        for i in range(m):
            rows.append(A[i][j:] + [0] * k)
            rhs.append(b[i] - sum(A[i][t] * fixed[t] for t in range(j)))
        for t in range(k):
            rows.append([int(s == t) for s in range(k)] + [int(s == t) for s in range(k)])
            rhs.append(upper[j + t])
        goal = [int(s == 0) for s in range(2 * k)]
        st, lo = _simplex(rows, rhs, goal)
        if st != "optimal":
            return None
        _st, hi = _simplex(rows, rhs, [-g for g in goal])
        return math.ceil(lo), math.floor(-hi)

    def search(fixed):
        j = len(fixed)
        if j == n:
            ok = all(sum(A[i][t] * fixed[t] for t in range(n)) == b[i] for i in range(m))
            return tuple(fixed) if ok else None
        rng = lp_range(j, fixed)
        if rng is None:
            return None
        for v in range(max(rng[0], 0), min(rng[1], upper[j]) + 1):
            got = search(fixed + [v])
            if got is not None:
                return got
        return None

    if n == 0:
        return SystemSolution("feasible", ()) if all(x == 0 for x in b) else SystemSolution("infeasible")
    sol = search([])
    if sol is None:
        return fail
    return SystemSolution("feasible", sol)


@dataclass(frozen=True)
class LinearSystem:
    """``A x = b`` with a variable domain: ``"rational"``, ``"integer"`` or
    ``"nonnegative-integer"``."""

    A: tuple
    b: tuple
    domain: str = "rational"
    cap: int = field(default=DEFAULT_CAP, compare=False)

    def solve(self) -> SystemSolution:
        if self.domain == "rational":
            return solve_field(self.A, self.b)
        if self.domain == "integer":
            return solve_diophantine(self.A, self.b)
        if self.domain == "nonnegative-integer":
            return solve_nonneg(self.A, self.b, self.cap)
        raise ValueError(f"unknown domain {self.domain!r}")

    def satisfied_by(self, x) -> bool:
        return all(sum(Fraction(a) * Fraction(v) for a, v in zip(row, x)) == rhs for row, rhs in zip(self.A, self.b))
