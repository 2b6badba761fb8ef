"""Exact linear algebra over the rationals.

Matrices are lists of lists of ``Fraction``.  Everything here is
deterministic: row-echelon reduction always picks the leftmost available
pivot column and the first nonzero row below the current one, so the same
input produces the same reduced form regardless of call order.  All
downstream "canonical basis" guarantees rest on this.
"""

from __future__ import annotations

from fractions import Fraction

ZERO = Fraction(0)
ONE = Fraction(1)

Matrix = list  # list[list[Fraction]]


def zeros(rows: int, cols: int) -> Matrix:
    return [[ZERO] * cols for _ in range(rows)]


def identity(n: int) -> Matrix:
    m = zeros(n, n)
    for i in range(n):
        m[i][i] = ONE
    return m


def copy(m: Matrix) -> Matrix:
    return [row[:] for row in m]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    rows, inner, cols = len(a), len(b), len(b[0]) if b else 0
    out = zeros(rows, cols)
    for i in range(rows):
        ai = a[i]
        oi = out[i]
        for k in range(inner):
            t = ai[k]
            if t:
                bk = b[k]
                for j in range(cols):
                    if bk[j]:
                        oi[j] += t * bk[j]
    return out


def matvec(a: Matrix, v: list) -> list:
    return [sum((a[i][j] * v[j] for j in range(len(v)) if v[j]), start=ZERO) for i in range(len(a))]


def mat_sub(a: Matrix, b: Matrix) -> Matrix:
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(a: Matrix, c: Fraction) -> Matrix:
    return [[c * x for x in row] for row in a]


def mat_eq(a: Matrix, b: Matrix) -> bool:
    return a == b


def is_zero_matrix(a: Matrix) -> bool:
    return all(not x for row in a for x in row)


def mat_pow(a: Matrix, k: int) -> Matrix:
    if k < 0:
        raise ValueError("negative matrix power; invert explicitly first")
    result = identity(len(a))
    for _ in range(k):
        result = matmul(result, a)
    return result


def transpose(a: Matrix) -> Matrix:
    if not a:
        return []
    return [list(col) for col in zip(*a)]


def rref(m: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and the list of pivot columns.

    Pivot order is fixed: columns scanned left to right, rows top to
    bottom.  Returns a new matrix; the input is not modified.
    """
    a = copy(m)
    rows = len(a)
    cols = len(a[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        pivot_row = None
        for i in range(r, rows):
            if a[i][c]:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        a[r], a[pivot_row] = a[pivot_row], a[r]
        inv = ONE / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return a, pivots


def rank(m: Matrix) -> int:
    if not m or not m[0]:
        return 0
    return len(rref(m)[1])


def nullspace(m: Matrix, cols: int | None = None) -> Matrix:
    """Deterministic basis of ``{x : m x = 0}``, one row per basis vector.

    Free variables are taken in increasing column order and each basis
    vector has a 1 in its free slot, so the result is already in a
    canonical (RREF-like) shape.
    """
    if cols is None:
        if not m:
            raise ValueError("empty system needs an explicit column count")
        cols = len(m[0])
    if not m:
        return identity(cols)
    red, pivots = rref(m)
    pivot_set = set(pivots)
    basis = []
    for free in range(cols):
        if free in pivot_set:
            continue
        vec = [ZERO] * cols
        vec[free] = ONE
        for r, pc in enumerate(pivots):
            vec[pc] = -red[r][free]
        basis.append(vec)
    return basis


def row_space(m: Matrix) -> Matrix:
    """Canonical basis (RREF nonzero rows) of the span of the input rows."""
    if not m or not m[0]:
        return []
    red, pivots = rref(m)
    return [red[i] for i in range(len(pivots))]


def solve(m: Matrix, b: list) -> list | None:
    """One exact solution of ``m x = b``, or ``None`` if inconsistent.

    With free variables present, returns the solution whose free
    coordinates are zero (deterministic canonical choice).
    """
    rows = len(m)
    cols = len(m[0]) if rows else 0
    aug = [m[i][:] + [b[i]] for i in range(rows)]
    red, pivots = rref(aug)
    if cols in pivots:
        return None
    x = [ZERO] * cols
    for r, pc in enumerate(pivots):
        x[pc] = red[r][cols]
    return x


def invert(m: Matrix) -> Matrix | None:
    """Inverse matrix, or ``None`` if singular."""
    n = len(m)
    aug = [m[i][:] + identity(n)[i] for i in range(n)]
    red, pivots = rref(aug)
    if pivots != list(range(n)):
        return None
    return [red[i][n:] for i in range(n)]


def in_row_space(basis: Matrix, v: list) -> bool:
    """Whether ``v`` lies in the span of the given rows."""
    if all(not x for x in v):
        return True
    if not basis:
        return False
    return rank(basis + [v]) == rank(basis)


def reduce_against(rows_rref: Matrix, pivots: list[int], v: list) -> list:
    """Reduce ``v`` modulo a row space given in RREF with known pivots."""
    v = v[:]
    for r, pc in enumerate(pivots):
        if v[pc]:
            f = v[pc]
            v = [x - f * y for x, y in zip(v, rows_rref[r])]
    return v


def complement_basis(sub: Matrix, total: Matrix) -> Matrix:
    """Deterministic coset representatives extending ``sub`` to span ``total``.

    Both arguments are row collections; rows of ``sub`` must lie in the span
    of ``total``.  Returns total-span vectors that together with ``sub`` span
    the same space as ``total``, reduced against ``sub``.
    """
    if not total:
        return []
    sub_red, sub_piv = rref(sub) if sub else ([], [])
    chosen: Matrix = []
    chosen_red: Matrix = []
    chosen_piv: list[int] = []
    for v in total:
        w = reduce_against(sub_red, sub_piv, v)
        w = reduce_against(chosen_red, chosen_piv, w)
        if any(w):
            lead = next(i for i, x in enumerate(w) if x)
            w = [x / w[lead] for x in w]
            chosen.append(w)
            stacked, piv = rref(chosen)
            chosen_red, chosen_piv = stacked, piv
    return chosen
