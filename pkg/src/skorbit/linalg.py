"""Exact linear algebra over the rationals or any exact field.

Entries must support +, -, *, /, and == 0 exactly (fractions and number field
elements both qualify). No pivoting heuristics beyond first-nonzero: all
arithmetic is exact, so numerical stability is not a concern; determinism is.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple

Matrix = List[List]
Vector = List


def mat_identity(n: int, one=Fraction(1), zero=Fraction(0)) -> Matrix:
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    rows, inner, cols = len(a), len(b), len(b[0])
    out = []
    for i in range(rows):
        row = []
        for j in range(cols):
            acc = a[i][0] * b[0][j]
            for k in range(1, inner):
                acc = acc + a[i][k] * b[k][j]
            row.append(acc)
        out.append(row)
    return out


def mat_vec(a: Matrix, v: Vector) -> Vector:
    out = []
    for row in a:
        acc = row[0] * v[0]
        for x, y in zip(row[1:], v[1:]):
            acc = acc + x * y
        out.append(acc)
    return out


def vec_dot(u: Vector, v: Vector):
    acc = u[0] * v[0]
    for x, y in zip(u[1:], v[1:]):
        acc = acc + x * y
    return acc


def mat_transpose(a: Matrix) -> Matrix:
    return [list(col) for col in zip(*a)]


def rref(matrix: Matrix, zero=Fraction(0), one=Fraction(1)) -> Tuple[Matrix, List[int], Matrix]:
    """Reduced row echelon form.

    Returns (R, pivot_columns, T) with T @ matrix == R and T invertible.
    Pivot choice: first row with a nonzero entry in the leftmost open column.
    """
    if not matrix:
        return [], [], []
    rows, cols = len(matrix), len(matrix[0])
    a = [list(r) for r in matrix]
    t = mat_identity(rows, one, zero)
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        pivot_row = None
        for i in range(r, rows):
            if not a[i][c] == 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        a[r], a[pivot_row] = a[pivot_row], a[r]
        t[r], t[pivot_row] = t[pivot_row], t[r]
        inv = one / a[r][c]
        a[r] = [x * inv for x in a[r]]
        t[r] = [x * inv for x in t[r]]
        for i in range(rows):
            if i != r and not a[i][c] == 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
                t[i] = [x - f * y for x, y in zip(t[i], t[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return a, pivots, t


def rank(matrix: Matrix) -> int:
    if not matrix:
        return 0
    _, pivots, _ = rref(matrix)
    return len(pivots)


def kernel_basis(matrix: Matrix, zero=Fraction(0), one=Fraction(1)) -> List[Vector]:
    """Basis of {v : matrix @ v = 0}, one vector per non-pivot column."""
    if not matrix:
        return []
    cols = len(matrix[0])
    r, pivots, _ = rref(matrix, zero, one)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [zero] * cols
        v[fc] = one
        for i, pc in enumerate(pivots):
            v[pc] = zero - r[i][fc]
        basis.append(v)
    return basis


def solve_linear(matrix: Matrix, rhs: Vector, zero=Fraction(0), one=Fraction(1)) -> Optional[Vector]:
    """One solution of matrix @ v = rhs, or None if inconsistent."""
    if not matrix:
        return [] if all(x == 0 for x in rhs) else None
    cols = len(matrix[0])
    aug = [list(row) + [b] for row, b in zip(matrix, rhs)]
    r, pivots, _ = rref(aug, zero, one)
    for i, row in enumerate(r):
        if all(x == 0 for x in row[:cols]) and not row[cols] == 0:
            return None
    v = [zero] * cols
    for i, pc in enumerate(pivots):
        if pc == cols:
            return None
        v[pc] = r[i][cols]
    return v


def in_row_span(matrix: Matrix, vector: Vector) -> bool:
    cols = mat_transpose(matrix)
    return solve_linear(cols, list(vector)) is not None


def det_bareiss(matrix: Sequence[Sequence[int]]) -> int:
    """Exact determinant of an integer matrix, fraction-free elimination."""
    n = len(matrix)
    if n == 0:
        return 1
    a = [list(map(int, row)) for row in matrix]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def det_exact(matrix: Matrix, zero=Fraction(0), one=Fraction(1)):
    """Determinant over any exact field by Gaussian elimination."""
    n = len(matrix)
    if n == 0:
        return one
    a = [list(r) for r in matrix]
    det = one
    for k in range(n):
        pivot = next((i for i in range(k, n) if not a[i][k] == 0), None)
        if pivot is None:
            return zero
        if pivot != k:
            a[k], a[pivot] = a[pivot], a[k]
            det = zero - det
        det = det * a[k][k]
        inv = one / a[k][k]
        for i in range(k + 1, n):
            if not a[i][k] == 0:
                f = a[i][k] * inv
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
    return det


def charpoly_faddeev(matrix: Sequence[Sequence[Fraction]]) -> List[Fraction]:
    """Characteristic polynomial det(xI - A), ascending coefficients.

    Faddeev-LeVerrier recurrence: exact over Q, O(d^4) field operations.
    """
    n = len(matrix)
    a = [[Fraction(x) for x in row] for row in matrix]
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    m = mat_identity(n)
    for k in range(1, n + 1):
        am = mat_mul(a, m)
        trace = sum(am[i][i] for i in range(n))
        c = -trace / k
        coeffs[n - k] = c
        m = [[am[i][j] + (c if i == j else 0) for j in range(n)] for i in range(n)]
    return coeffs


def charpoly_principal_minors(matrix: Sequence[Sequence[Fraction]]) -> List[Fraction]:
    """Characteristic polynomial via sums of principal minors (test oracle).

    Coefficient of x^(d-r) is (-1)^r times the sum of all r x r principal
    minors. Exponential in d; intended only for small matrices.
    """
    from itertools import combinations

    n = len(matrix)
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    for r in range(1, n + 1):
        total = Fraction(0)
        for subset in combinations(range(n), r):
            sub = [[Fraction(matrix[i][j]) for j in subset] for i in subset]
            total += det_exact(sub)
        coeffs[n - r] = (-1) ** r * total
    return coeffs
