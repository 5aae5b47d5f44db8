"""Exact linear algebra over a square-root-closed number field.

Matrices are lists of rows of FieldElement values.  Vectors are rows and act
on the left, v |-> v*M, matching the integer-lattice conventions used
elsewhere.  Everything is exact; singularity and rank questions are decided
by exact zero tests.
"""

from __future__ import annotations

from fractions import Fraction

from .field import FieldError, FieldTower


def mzeros(tower: FieldTower, r: int, c: int) -> list:
    return [[tower.zero() for _ in range(c)] for _ in range(r)]


def meye(tower: FieldTower, n: int) -> list:
    out = mzeros(tower, n, n)
    for i in range(n):
        out[i][i] = tower.one()
    return out


def mat_from_ints(tower: FieldTower, rows: list) -> list:
    return [[tower.from_rational(Fraction(x)) for x in row] for row in rows]


def madd(a: list, b: list) -> list:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def msub(a: list, b: list) -> list:
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mscale(c, a: list) -> list:
    return [[c * x for x in row] for row in a]


def mmul(a: list, b: list) -> list:
    rows, inner, cols = len(a), len(b), len(b[0]) if b else 0
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


def vmat(v: list, m: list) -> list:
    cols = len(m[0]) if m else 0
    out = []
    for j in range(cols):
        acc = v[0] * m[0][j]
        for k in range(1, len(v)):
            acc = acc + v[k] * m[k][j]
        out.append(acc)
    return out


def mconj(a: list) -> list:
    return [[x.conj() for x in row] for row in a]


def mtranspose(a: list) -> list:
    return [list(col) for col in zip(*a)]


def meq(a: list, b: list) -> bool:
    return all(x == y for ra, rb in zip(a, b) for x, y in zip(ra, rb))


def is_zero_matrix(a: list) -> bool:
    return all(x.is_zero() for row in a for x in row)


def mtrace(a: list):
    acc = a[0][0]
    for i in range(1, len(a)):
        acc = acc + a[i][i]
    return acc


def row_reduce(a: list, tower: FieldTower) -> tuple:
    """Reduced row echelon form.  Returns (rref, transform, pivot columns)."""
    rows = [list(r) for r in a]
    m = len(rows)
    n = len(rows[0]) if rows else 0
    trans = meye(tower, m)
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if not rows[i][c].is_zero()), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        trans[r], trans[piv] = trans[piv], trans[r]
        inv = rows[r][c].inverse()
        rows[r] = [x * inv for x in rows[r]]
        trans[r] = [x * inv for x in trans[r]]
        for i in range(m):
            if i != r and not rows[i][c].is_zero():
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
                trans[i] = [x - f * y for x, y in zip(trans[i], trans[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return rows, trans, pivots


def mrank(a: list, tower: FieldTower) -> int:
    if not a:
        return 0
    _, _, pivots = row_reduce(a, tower)
    return len(pivots)


def minverse(a: list, tower: FieldTower) -> list:
    n = len(a)
    rref, trans, pivots = row_reduce(a, tower)
    if len(pivots) < n:
        raise FieldError("singular")
    return trans


def left_kernel(a: list, tower: FieldTower) -> list:
    """Basis of {v : v*a = 0} as rows."""
    m = len(a)
    if m == 0:
        return []
    at = mtranspose(a)
    rref, _, pivots = row_reduce(at, tower)
    free = [j for j in range(m) if j not in pivots]
    basis = []
    for j in free:
        v = [tower.zero()] * m
        v[j] = tower.one()
        for r, c in enumerate(pivots):
            v[c] = -rref[r][j]
        basis.append(v)
    return basis


def solve_left(a: list, target: list, tower: FieldTower):
    """One solution v of v*a = target, or None."""
    m = len(a)
    if m == 0:
        return [] if all(x.is_zero() for x in target) else None
    at = mtranspose(a)
    n = len(at)
    aug = [list(at[i]) + [target[i]] for i in range(n)]
    rref, _, pivots = row_reduce(aug, tower)
    if m in pivots:
        return None
    v = [tower.zero()] * m
    for r, c in enumerate(pivots):
        v[c] = rref[r][m]
    return v


def charpoly(a: list, tower: FieldTower) -> list:
    """Characteristic polynomial det(xI - a), coefficients low to high.

    Faddeev-LeVerrier recursion; exact since the field has characteristic 0.
    """
    n = len(a)
    coeffs = [tower.zero()] * n + [tower.one()]
    m = meye(tower, n)
    c = tower.one()
    for k in range(1, n + 1):
        m = mmul(a, m)
        c = mtrace(m) / (-k)
        coeffs[n - k] = c
        for i in range(n):
            m[i][i] = m[i][i] + c
    return coeffs
