"""Exact rational scalars and dense linear algebra over Q.

Matrices are plain row-major lists of lists of :class:`fractions.Fraction`.
Rank and determinant use fraction-free (Bareiss) elimination on rows that have
been scaled to integers; the nullspace is read off the reduced row echelon form
so that its basis is canonical.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import gcd, lcm
from typing import Iterable, Sequence

Rat = Fraction
RatMatrix = list[list[Fraction]]


def rat(x) -> Fraction:
    """Coerce ints, strings like ``"3/4"`` and Fractions to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not accepted; pass an int, str or Fraction")
    return Fraction(x)


def as_matrix(rows: Iterable[Iterable]) -> RatMatrix:
    m = [[rat(x) for x in row] for row in rows]
    if not m or not m[0]:
        raise ValueError("matrix must be nonempty")
    width = len(m[0])
    if any(len(row) != width for row in m):
        raise ValueError("ragged matrix")
    return m


def identity(n: int) -> RatMatrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def transpose(m: Sequence[Sequence[Fraction]]) -> RatMatrix:
    return [list(col) for col in zip(*m)]


def matmul(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]]) -> RatMatrix:
    bt = transpose(b)
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt] for row in a]


def matvec(m: Sequence[Sequence[Fraction]], v: Sequence[Fraction]) -> list[Fraction]:
    return [sum((x * y for x, y in zip(row, v)), Fraction(0)) for row in m]


def dot(v: Sequence[Fraction], w: Sequence[Fraction]) -> Fraction:
    return sum((x * y for x, y in zip(v, w)), Fraction(0))


def integer_row(row: Sequence[Fraction]) -> list[int]:
    """Scale a rational row by the lcm of its denominators."""
    row = [rat(x) for x in row]
    den = lcm(*(x.denominator for x in row)) if row else 1
    return [x.numerator * (den // x.denominator) for x in row]


def primitive_integer_vector(v: Sequence[Fraction]) -> list[int]:
    """Clear denominators and divide out the content; sign is left unchanged."""
    ints = integer_row(v)
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        return ints
    return [x // g for x in ints]


def _bareiss_rank(rows: list[list[int]]) -> int:
    m = [list(r) for r in rows]
    nrows, ncols = len(m), len(m[0]) if m else 0
    prev = 1
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        for i in range(r + 1, nrows):
            mic = m[i][c]
            row_i, row_r = m[i], m[r]
            for j in range(c + 1, ncols):
                row_i[j] = (p * row_i[j] - mic * row_r[j]) // prev
            row_i[c] = 0
        prev = p
        r += 1
    return r


def integer_rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank of an integer matrix; callers that test many row subsets convert once."""
    if not rows:
        return 0
    return _bareiss_rank([list(r) for r in rows])


def rank(m: Sequence[Sequence]) -> int:
    """Exact rank via integer Bareiss elimination."""
    if not m:
        return 0
    return _bareiss_rank([integer_row(row) for row in m])


def det(m: Sequence[Sequence]) -> Fraction:
    """Exact determinant of a square rational matrix (Bareiss on the integer-scaled rows)."""
    n = len(m)
    if any(len(row) != n for row in m):
        raise ValueError("determinant needs a square matrix")
    if n == 0:
        return Fraction(1)
    scale = Fraction(1)
    a = []
    for row in m:
        row = [rat(x) for x in row]
        den = lcm(*(x.denominator for x in row))
        scale /= den
        a.append([int(x * den) for x in row])
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return Fraction(0)
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        p = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (p * a[i][j] - a[i][k] * a[k][j]) // prev
        prev = p
    return sign * a[n - 1][n - 1] * scale


def rref(m: Sequence[Sequence]) -> tuple[RatMatrix, list[int]]:
    """Reduced row echelon form and the pivot columns.

    Forward elimination is fraction-free on integer rows; only the final
    normalisation divides.
    """
    rows = [integer_row([rat(x) for x in row]) for row in m]
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r][c]
        for i in range(nrows):
            if i == r or rows[i][c] == 0:
                continue
            f = rows[i][c]
            rows[i] = [p * x - f * y for x, y in zip(rows[i], rows[r])]
            g = 0
            for x in rows[i]:
                g = gcd(g, x)
            if g > 1:
                rows[i] = [x // g for x in rows[i]]
        pivots.append(c)
        r += 1
    out: RatMatrix = []
    for i, c in enumerate(pivots):
        p = rows[i][c]
        out.append([Fraction(x, p) for x in rows[i]])
    out.extend([Fraction(0)] * ncols for _ in range(nrows - len(pivots)))
    return out, pivots


def nullspace(m: Sequence[Sequence]) -> tuple[int, list[list[Fraction]]]:
    """Rank and canonical nullspace basis of ``m``.

    One basis vector per free column, in ascending column order; the vector for
    free column f has a 1 in position f, zeros at the other free columns, and
    minus the RREF entries at the pivot columns.
    """
    if not m or not m[0]:
        raise ValueError("matrix must be nonempty")
    ncols = len(m[0])
    red, pivots = rref(m)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, c in enumerate(pivots):
            v[c] = -red[i][f]
        basis.append(v)
    return len(pivots), basis


def solve(a: Sequence[Sequence], b: Sequence) -> list[Fraction]:
    """Unique solution of a square nonsingular system."""
    n = len(a)
    aug = [list(map(rat, row)) + [rat(bi)] for row, bi in zip(a, b)]
    red, pivots = rref(aug)
    if pivots != list(range(n)):
        raise ZeroDivisionError("singular system")
    return [red[i][n] for i in range(n)]


def inverse(a: Sequence[Sequence]) -> RatMatrix:
    n = len(a)
    aug = [list(map(rat, row)) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in red[:n]]


def is_symmetric(g: Sequence[Sequence]) -> bool:
    n = len(g)
    return all(len(row) == n for row in g) and all(
        g[i][j] == g[j][i] for i in range(n) for j in range(i + 1, n)
    )


def psd_rank(g: Sequence[Sequence]) -> tuple[bool, int]:
    """Decide positive semidefiniteness exactly and return ``(is_psd, rank)``.

    Symmetric LDL^T with diagonal pivoting: every pivot must be a positive
    diagonal entry of the active block.  A negative diagonal entry, or an
    all-zero diagonal with a nonzero off-diagonal entry left, certifies that
    the matrix is indefinite.  The rank is always the true rank of ``g``.
    """
    if not is_symmetric(g):
        raise ValueError("psd_rank needs a symmetric matrix")
    a = [[rat(x) for x in row] for row in g]
    n = len(a)
    active = list(range(n))
    pivots = 0
    is_psd = True
    while active:
        diag = [(a[i][i], i) for i in active]
        if any(d < 0 for d, _ in diag):
            is_psd = False
            break
        pos = [i for d, i in diag if d > 0]
        if not pos:
            if any(a[i][j] != 0 for i in active for j in active):
                is_psd = False
            break
        # largest pivot keeps the elimination deterministic
        k = max(pos, key=lambda i: (a[i][i], -i))
        active.remove(k)
        akk = a[k][k]
        for i in active:
            f = a[i][k] / akk
            if f == 0:
                continue
            row_i, row_k = a[i], a[k]
            for j in active:
                row_i[j] -= f * row_k[j]
        pivots += 1
    if is_psd:
        return True, pivots
    return False, rank(g)


def rank_of_submatrices(m: Sequence[Sequence], subset_size: int) -> tuple[int, int]:
    """(max, min) rank over all row subsets of the given size."""
    if subset_size > len(m):
        raise ValueError("subset larger than the number of rows")
    ranks = [rank([m[i] for i in idx]) for idx in combinations(range(len(m)), subset_size)]
    return max(ranks), min(ranks)


def format_rat(x: Fraction) -> str:
    """``num/den`` with the denominator always written, as in the file formats."""
    x = rat(x)
    return f"{x.numerator}/{x.denominator}"


def parse_rat(text: str) -> Fraction:
    text = text.strip()
    if not text:
        raise ValueError("empty rational")
    if any(ch in text for ch in ".eE"):
        raise ValueError(f"not an exact rational: {text!r}")
    return Fraction(text)
