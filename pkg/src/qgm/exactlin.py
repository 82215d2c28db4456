"""Exact linear algebra over the rationals and the integers.

Everything in this module is exact: entries are Python ints or
``fractions.Fraction`` and no floating point is used anywhere.  It
provides the primitives the rest of the package is built on: rank,
unique solving, integer kernel lattices, Smith normal form, and
nonnegative-combination (conic) feasibility via a two-phase simplex
with Bland's anti-cycling rule.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd


class DimensionMismatch(ValueError):
    """Operands have incompatible dimensions."""


class ColumnRankDeficient(ValueError):
    """solve_unique was given a matrix whose columns are dependent."""


def _rat(x) -> Fraction:
    if isinstance(x, float):
        raise TypeError("floating-point entries are not allowed")
    return Fraction(x)


def _check_int(x) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise TypeError(f"integer entry expected, got {x!r}")
    return x


class RatMatrix:
    """Immutable dense matrix with exact rational entries."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries):
        data = tuple(tuple(_rat(x) for x in row) for row in entries)
        if data and any(len(r) != len(data[0]) for r in data):
            raise DimensionMismatch("ragged rows")
        self.entries = data
        self.rows = len(data)
        self.cols = len(data[0]) if data else 0

    def row(self, i):
        return self.entries[i]

    def entry(self, i, j):
        return self.entries[i][j]

    def transpose(self) -> "RatMatrix":
        return RatMatrix(zip(*self.entries)) if self.rows else RatMatrix([])

    def __eq__(self, other):
        return isinstance(other, RatMatrix) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        return f"RatMatrix({self.rows}x{self.cols})"


class IntMatrix:
    """Immutable dense matrix with arbitrary-precision integer entries."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries):
        data = tuple(tuple(_check_int(x) for x in row) for row in entries)
        if data and any(len(r) != len(data[0]) for r in data):
            raise DimensionMismatch("ragged rows")
        self.entries = data
        self.rows = len(data)
        self.cols = len(data[0]) if data else 0

    def row(self, i):
        return self.entries[i]

    def entry(self, i, j):
        return self.entries[i][j]

    def transpose(self) -> "IntMatrix":
        return IntMatrix(zip(*self.entries)) if self.rows else IntMatrix([])

    def to_rational(self) -> RatMatrix:
        return RatMatrix(self.entries)

    def __eq__(self, other):
        return isinstance(other, IntMatrix) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        return f"IntMatrix({self.rows}x{self.cols})"


def identity_int(n: int) -> IntMatrix:
    return IntMatrix([[1 if i == j else 0 for j in range(n)] for i in range(n)])


# ---------------------------------------------------------------------------
# rank and span membership (fraction-free integer elimination)

def _strip_content(row):
    g = 0
    for v in row:
        g = gcd(g, v)
    if g > 1:
        return [v // g for v in row]
    return row


def _int_row_reduce(rows):
    """Fraction-free row reduction of integer rows.

    Returns ``(rank, pivot_rows, pivot_cols)``.  Pivot selection:
    smallest absolute value, then lowest row index.  Pivot rows are
    divided by their content to curb coefficient growth; only exact
    integer operations are used.
    """
    rows = [list(r) for r in rows]
    ncols = len(rows[0]) if rows else 0
    piv_rows, piv_cols = [], []
    r = 0
    for c in range(ncols):
        best = None
        bi = None
        for i in range(r, len(rows)):
            v = rows[i][c]
            if v:
                a = -v if v < 0 else v
                if best is None or a < best:
                    best, bi = a, i
        if bi is None:
            continue
        rows[r], rows[bi] = rows[bi], rows[r]
        prow = _strip_content(rows[r])
        rows[r] = prow
        p = prow[c]
        for i in range(r + 1, len(rows)):
            v = rows[i][c]
            if v:
                ri = rows[i]
                rows[i] = [p * a - v * b for a, b in zip(ri, prow)]
        piv_rows.append(prow)
        piv_cols.append(c)
        r += 1
    return r, piv_rows, piv_cols


def _reduce_against_pivots(vec, piv_rows, piv_cols):
    """Reduce an integer vector against pivot rows.

    The result is zero exactly when the vector lies in the rational row
    span of the pivots (each step rescales by the nonzero pivot, which
    preserves membership).
    """
    v = list(vec)
    for prow, c in zip(piv_rows, piv_cols):
        a = v[c]
        if a:
            p = prow[c]
            v = [p * x - a * y for x, y in zip(v, prow)]
    return v


def _scaled_int_rows(m: RatMatrix):
    out = []
    for row in m.entries:
        lcm = 1
        for x in row:
            d = x.denominator
            lcm = lcm // gcd(lcm, d) * d
        out.append([int(x * lcm) for x in row])
    return out


def rank(m) -> int:
    """Rank over Q, computed by exact fraction-free elimination."""
    if isinstance(m, IntMatrix):
        return _int_row_reduce(m.entries)[0]
    if isinstance(m, RatMatrix):
        return _int_row_reduce(_scaled_int_rows(m))[0]
    raise TypeError("rank expects RatMatrix or IntMatrix")


# ---------------------------------------------------------------------------
# solving

def solve_unique(m, b):
    """Solve m*x = b for a matrix of full column rank.

    Returns the unique solution as a list of Fractions, or None when the
    system is inconsistent.  Raises ColumnRankDeficient when the columns
    are dependent (detected before consistency is decided).
    """
    if isinstance(m, IntMatrix):
        m = m.to_rational()
    if len(b) != m.rows:
        raise DimensionMismatch("right-hand side has wrong length")
    aug = [list(m.row(i)) + [_rat(b[i])] for i in range(m.rows)]
    n = m.cols
    piv_of_col = {}
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(aug)) if aug[i][c] != 0), None)
        if piv is None:
            raise ColumnRankDeficient(f"column {c} is dependent on earlier columns")
        aug[r], aug[piv] = aug[piv], aug[r]
        p = aug[r][c]
        for i in range(r + 1, len(aug)):
            f = aug[i][c]
            if f:
                fac = f / p
                aug[i] = [a - fac * bb for a, bb in zip(aug[i], aug[r])]
        piv_of_col[c] = r
        r += 1
    for i in range(r, len(aug)):
        if aug[i][n] != 0:
            return None
    x = [Fraction(0)] * n
    for c in range(n - 1, -1, -1):
        i = piv_of_col[c]
        s = aug[i][n] - sum(aug[i][j] * x[j] for j in range(c + 1, n))
        x[c] = s / aug[i][c]
    return x


# ---------------------------------------------------------------------------
# Hermite and Smith normal forms

def _hermite_rows(rows):
    """Canonical row Hermite form of an integer row lattice.

    Pivots are positive, entries above a pivot are reduced into
    [0, pivot).  The output is the unique canonical basis of the lattice
    spanned by the input rows.
    """
    rows = [list(r) for r in rows if any(r)]
    if not rows:
        return []
    n = len(rows[0])
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(r + 1, len(rows)):
            while rows[i][c]:
                if abs(rows[i][c]) < abs(rows[r][c]):
                    rows[r], rows[i] = rows[i], rows[r]
                q = rows[i][c] // rows[r][c]
                if q:
                    rows[i] = [a - q * b for a, b in zip(rows[i], rows[r])]
                else:
                    rows[r], rows[i] = rows[i], rows[r]
        if rows[r][c] < 0:
            rows[r] = [-a for a in rows[r]]
        for j in range(r):
            q = rows[j][c] // rows[r][c]
            if q:
                rows[j] = [a - q * b for a, b in zip(rows[j], rows[r])]
        r += 1
    return rows[:r]


def smith_normal_form(m: IntMatrix):
    """Smith normal form with transforms: U*m*V = D.

    D is diagonal with a divisibility chain d1 | d2 | ..., and U, V are
    unimodular.  Pivot selection: smallest absolute value, then lowest
    (row, column) index.
    """
    if not isinstance(m, IntMatrix):
        raise TypeError("smith_normal_form expects IntMatrix")
    nr, nc = m.rows, m.cols
    A = [list(row) for row in m.entries]
    U = [[1 if i == j else 0 for j in range(nr)] for i in range(nr)]
    V = [[1 if i == j else 0 for j in range(nc)] for i in range(nc)]

    def row_sub(i, j, q):  # row_i -= q * row_j
        A[i] = [a - q * b for a, b in zip(A[i], A[j])]
        U[i] = [a - q * b for a, b in zip(U[i], U[j])]

    def col_sub(j, k, q):  # col_j -= q * col_k
        for row in A:
            row[j] -= q * row[k]
        for row in V:
            row[j] -= q * row[k]

    def row_swap(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def col_swap(j, k):
        for row in A:
            row[j], row[k] = row[k], row[j]
        for row in V:
            row[j], row[k] = row[k], row[j]

    def row_neg(i):
        A[i] = [-a for a in A[i]]
        U[i] = [-a for a in U[i]]

    def move_block_min(t):
        # smallest nonzero |entry| of A[t:, t:] into position (t, t)
        best = None
        loc = None
        for i in range(t, nr):
            row = A[i]
            for j in range(t, nc):
                v = row[j]
                if v:
                    a = -v if v < 0 else v
                    if best is None or a < best:
                        best, loc = a, (i, j)
        if loc is None:
            return False
        if loc[0] != t:
            row_swap(t, loc[0])
        if loc[1] != t:
            col_swap(t, loc[1])
        if A[t][t] < 0:
            row_neg(t)
        return True

    def move_edge_min(t):
        # smallest nonzero |entry| of row t / column t beyond the pivot,
        # swapped into (t, t); False when the edging is already clear
        best = None
        loc = None
        for i in range(t + 1, nr):
            v = A[i][t]
            if v:
                a = -v if v < 0 else v
                if best is None or a < best:
                    best, loc = a, ("r", i)
        for j in range(t + 1, nc):
            v = A[t][j]
            if v:
                a = -v if v < 0 else v
                if best is None or a < best:
                    best, loc = a, ("c", j)
        if loc is None:
            return False
        if best < abs(A[t][t]):
            if loc[0] == "r":
                row_swap(t, loc[1])
            else:
                col_swap(t, loc[1])
            if A[t][t] < 0:
                row_neg(t)
        return True

    t = 0
    while t < min(nr, nc):
        if not move_block_min(t):
            break
        while True:
            # one balanced-quotient reduction pass over the edging; the
            # smallest surviving entry becomes the next pivot, so the
            # pivot strictly shrinks and the loop terminates
            p = A[t][t]
            half = p >> 1
            for i in range(t + 1, nr):
                if A[i][t]:
                    q = (A[i][t] + half) // p
                    if q:
                        row_sub(i, t, q)
            for j in range(t + 1, nc):
                if A[t][j]:
                    q = (A[t][j] + half) // p
                    if q:
                        col_sub(j, t, q)
            if not move_edge_min(t):
                p = A[t][t]
                offender = None
                for i in range(t + 1, nr):
                    row = A[i]
                    for j in range(t + 1, nc):
                        if row[j] % p:
                            offender = i
                            break
                    if offender is not None:
                        break
                if offender is None:
                    break
                row_sub(t, offender, -1)  # row_t += row_offender
        t += 1
    return IntMatrix(U), IntMatrix(A), IntMatrix(V)


def integer_kernel_basis(m: IntMatrix):
    """Basis of the integer kernel lattice { v : m*v = 0 }.

    The returned basis is the canonical Hermite basis of the kernel,
    which is saturated (the quotient of Z^cols by it is torsion-free)
    and has primitive rows; the output is deterministic.
    """
    if not isinstance(m, IntMatrix):
        raise TypeError("integer_kernel_basis expects IntMatrix")
    _u, d, v = smith_normal_form(m)
    r = sum(1 for i in range(min(d.rows, d.cols)) if d.entry(i, i))
    if r == m.cols:
        return []
    cols = [[v.entry(i, j) for i in range(m.cols)] for j in range(r, m.cols)]
    return [tuple(row) for row in _hermite_rows(cols)]


# ---------------------------------------------------------------------------
# conic feasibility (exact two-phase simplex, Bland's rule)

def _pivot(T, basis, r, c):
    piv = T[r][c]
    T[r] = [v / piv for v in T[r]]
    prow = T[r]
    for i in range(len(T)):
        if i != r and T[i][c]:
            f = T[i][c]
            T[i] = [a - f * b for a, b in zip(T[i], prow)]
    basis[r] = c


def _bland_minimize(T, basis, ncols):
    """Run the simplex on a tableau whose last row holds reduced costs.

    Entering variable: lowest column index with negative reduced cost.
    Leaving variable: among the minimum-ratio rows, the one whose basic
    variable has the lowest index.  Bland's rule guarantees termination.
    """
    m = len(T) - 1
    while True:
        obj = T[-1]
        e = next((j for j in range(ncols) if obj[j] < 0), None)
        if e is None:
            return
        best = None
        leave = None
        for i in range(m):
            a = T[i][e]
            if a > 0:
                ratio = T[i][-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:
            raise ArithmeticError("unbounded linear program")
        _pivot(T, basis, leave, e)


def _phase_one(arows, b):
    """Find a basic feasible solution of Ax = b, x >= 0.

    Returns (T, basis, n) restricted to the n original columns, or None
    when the system is infeasible.
    """
    m = len(arows)
    n = len(arows[0]) if m else 0
    T = []
    for i in range(m):
        row = [_rat(v) for v in arows[i]]
        rhs = _rat(b[i])
        if rhs < 0:
            row = [-v for v in row]
            rhs = -rhs
        art = [Fraction(0)] * m
        art[i] = Fraction(1)
        T.append(row + art + [rhs])
    ncols = n + m
    basis = list(range(n, ncols))
    obj = [Fraction(0)] * (ncols + 1)
    for j in range(n, ncols):
        obj[j] = Fraction(1)
    for i in range(m):
        obj = [a - b2 for a, b2 in zip(obj, T[i])]
    T.append(obj)
    _bland_minimize(T, basis, ncols)
    if T[-1][-1] != 0:  # optimum of sum of artificials is -T[-1][-1]
        return None
    T.pop()
    # drive artificial variables out of the basis, dropping redundant rows
    i = 0
    while i < len(T):
        if basis[i] >= n:
            c = next((j for j in range(n) if T[i][j] != 0), None)
            if c is None:
                T.pop(i)
                basis.pop(i)
                continue
            _pivot(T, basis, i, c)
        i += 1
    T = [row[:n] + [row[-1]] for row in T]
    return T, basis, n


def conic_feasible(generators, target):
    """Nonnegative rational coefficients writing target over the generators.

    Returns a list of coefficients c with sum(c_i * gen_i) == target, or
    None when target is outside the cone.  Exact rational feasibility
    with a deterministic anti-cycling pivot rule; always terminates.
    """
    target = tuple(_rat(x) for x in target)
    d = len(target)
    gens = [tuple(_rat(x) for x in g) for g in generators]
    for g in gens:
        if len(g) != d:
            raise DimensionMismatch("generator/target dimension mismatch")
    n = len(gens)
    arows = [[gens[j][i] for j in range(n)] for i in range(d)]
    res = _phase_one(arows, target)
    if res is None:
        return None
    T, basis, _n = res
    x = [Fraction(0)] * n
    for i, bv in enumerate(basis):
        x[bv] = T[i][-1]
    for i in range(d):  # re-verify the certificate by multiplication
        if sum(x[j] * gens[j][i] for j in range(n)) != target[i]:
            raise ArithmeticError("simplex returned an invalid certificate")
    return x


def strictly_conic_feasible(generators, target, ambient_rank=None):
    """Interior membership test for the cone of the generators.

    True exactly when target admits a representation with all
    coefficients strictly positive and the generators span the ambient
    space.  The ambient dimension defaults to the length of target; a
    caller holding the weights of a fixed torus action passes the rank
    of the full weight matrix instead.
    """
    target = tuple(_rat(x) for x in target)
    d = len(target)
    gens = [tuple(_rat(x) for x in g) for g in generators]
    for g in gens:
        if len(g) != d:
            raise DimensionMismatch("generator/target dimension mismatch")
    if ambient_rank is None:
        ambient_rank = d
    if rank(RatMatrix(gens) if gens else RatMatrix([])) != ambient_rank:
        return False
    n = len(gens)
    ssum = [sum(g[i] for g in gens) for i in range(d)] if gens else [Fraction(0)] * d
    # maximize eps subject to  G d + eps * ssum = target,  eps <= 1
    arows = [[gens[j][i] for j in range(n)] + [ssum[i], Fraction(0)] for i in range(d)]
    arows.append([Fraction(0)] * n + [Fraction(1), Fraction(1)])
    b = list(target) + [Fraction(1)]
    res = _phase_one(arows, b)
    if res is None:
        return False
    T, basis, ncols = res
    obj = [Fraction(0)] * (ncols + 1)
    obj[n] = Fraction(-1)  # maximize eps == minimize -eps
    for i, bv in enumerate(basis):
        if obj[bv]:
            f = obj[bv]
            obj = [a - f * bb for a, bb in zip(obj, T[i])]
    T.append(obj)
    _bland_minimize(T, basis, ncols)
    T.pop()
    eps = Fraction(0)
    for i, bv in enumerate(basis):
        if bv == n:
            eps = T[i][-1]
    return eps > 0
