"""Small exact linear algebra over a coefficient ring.

Matrices are lists (or tuples) of rows; functions never mutate their inputs.
The ring argument must provide zero/one/add/sub/mul/neg/is_zero/is_unit and
exact_div (exact division, defined whenever the quotient lies in the ring),
which is what fields.Rationals, fields.PrimeField and poly.PolyRing supply.
Everything here is fraction-free, so it works over k[T] as well as over a
field; sizes are desk scale throughout.
"""
from __future__ import annotations


def mat_identity(ring, n):
    return [[ring.one if i == j else ring.zero for j in range(n)] for i in range(n)]


def mat_copy(M):
    return [list(row) for row in M]


def mat_transpose(M):
    return [list(col) for col in zip(*M)]


def mat_mul(ring, A, B):
    n, m, k = len(A), len(B[0]), len(B)
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = ring.zero
            for t in range(k):
                acc = ring.add(acc, ring.mul(A[i][t], B[t][j]))
            row.append(acc)
        out.append(row)
    return out


def mat_vec(ring, A, v):
    return [
        _dot(ring, row, v)
        for row in A
    ]


def _dot(ring, row, v):
    acc = ring.zero
    for a, b in zip(row, v):
        acc = ring.add(acc, ring.mul(a, b))
    return acc


def mat_eq(ring, A, B):
    if len(A) != len(B):
        return False
    for ra, rb in zip(A, B):
        if len(ra) != len(rb):
            return False
        for a, b in zip(ra, rb):
            if not ring.is_zero(ring.sub(a, b)):
                return False
    return True


def is_symmetric(ring, M):
    n = len(M)
    return all(
        ring.is_zero(ring.sub(M[i][j], M[j][i]))
        for i in range(n)
        for j in range(i + 1, n)
    )


def det(ring, M):
    """Determinant by fraction-free (Bareiss) elimination.

    Valid over any integral domain with exact_div; intermediate divisions are
    exact by the Bareiss identity.
    """
    n = len(M)
    if n == 0:
        return ring.one
    M = mat_copy(M)
    sign = 1
    prev = ring.one
    for k in range(n - 1):
        if ring.is_zero(M[k][k]):
            for i in range(k + 1, n):
                if not ring.is_zero(M[i][k]):
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return ring.zero
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = ring.sub(ring.mul(M[k][k], M[i][j]), ring.mul(M[i][k], M[k][j]))
                M[i][j] = ring.exact_div(num, prev)
            M[i][k] = ring.zero
        prev = M[k][k]
    d = M[n - 1][n - 1]
    return d if sign == 1 else ring.neg(d)


def _minor(M, i, j):
    return [
        [x for jj, x in enumerate(row) if jj != j]
        for ii, row in enumerate(M)
        if ii != i
    ]


def adjugate(ring, M):
    """Classical adjugate: adj(M)[i][j] = (-1)^{i+j} det(minor(M, j, i))."""
    n = len(M)
    if n == 1:
        return [[ring.one]]
    out = [[ring.zero] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            c = det(ring, _minor(M, j, i))
            out[i][j] = c if (i + j) % 2 == 0 else ring.neg(c)
    return out


def inverse_times_det(ring, M):
    """Return (adj(M), det(M)) so that M^{-1} = adj / det."""
    return adjugate(ring, M), det(ring, M)


def solve_cramer(ring, M, rhs):
    """Solve M x = rhs by Cramer's rule with exact division by det(M).

    Intended for systems whose solution is known to lie in the ring (for us:
    the determinant is a unit, e.g. a nonzero constant of k[T]).  Raises if a
    division is not exact or the matrix is singular.
    """
    n = len(M)
    d = det(ring, M)
    if ring.is_zero(d):
        raise ZeroDivisionError("singular system")
    out = []
    for j in range(n):
        Mj = [list(row) for row in M]
        for i in range(n):
            Mj[i][j] = rhs[i]
        out.append(ring.exact_div(det(ring, Mj), d))
    return out


def solve_field(field, M, rhs):
    """Gaussian elimination over a field; returns None when inconsistent."""
    n = len(M)
    m = len(M[0]) if n else 0
    A = [list(row) + [rhs[i]] for i, row in enumerate(M)]
    row = 0
    pivots = []
    for col in range(m):
        piv = None
        for r in range(row, n):
            if not field.is_zero(A[r][col]):
                piv = r
                break
        if piv is None:
            continue
        A[row], A[piv] = A[piv], A[row]
        inv = field.inv(A[row][col])
        A[row] = [field.mul(inv, x) for x in A[row]]
        for r in range(n):
            if r != row and not field.is_zero(A[r][col]):
                c = A[r][col]
                A[r] = [field.sub(x, field.mul(c, y)) for x, y in zip(A[r], A[row])]
        pivots.append(col)
        row += 1
        if row == n:
            break
    for r in range(row, n):
        if not field.is_zero(A[r][m]):
            return None
    x = [field.zero] * m
    for r, col in enumerate(pivots):
        x[col] = A[r][m]
    return x
