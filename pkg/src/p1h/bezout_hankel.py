"""The Bezout symmetric form of a rational function and its Hankel inverse.

The coefficient matrix of (A(X)B(Y) - A(Y)B(X))/(X - Y) is symmetric, and
its determinant is (-1)^{n(n-1)/2} times the resultant, so the form is
non-degenerate exactly on valid points.  Its inverse is a Hankel matrix
whose entries are read off the expansion of V/A in descending powers of X,
which yields an explicit inverse reconstruction (psi) of a rational
function from (Hankel matrix, translation coordinate).
"""
from __future__ import annotations

from dataclasses import dataclass

from . import linalg
from .fields import FieldError
from .poly import Poly, PolyRing, bezout_pair, laurent_expand
from .ratmap import PointedRat, mk_pointed, phi_n


@dataclass(frozen=True)
class SymMatrix:
    """A symmetric n x n matrix over a field or over k[T]."""

    ring: object
    n: int
    rows: tuple  # tuple of tuples

    def __post_init__(self):
        assert len(self.rows) == self.n and all(len(r) == self.n for r in self.rows)
        if not linalg.is_symmetric(self.ring, self.rows):
            raise FieldError("matrix is not symmetric")

    @staticmethod
    def make(ring, rows) -> "SymMatrix":
        rows = tuple(tuple(ring.coerce(x) for x in r) for r in rows)
        return SymMatrix(ring, len(rows), rows)

    @staticmethod
    def diagonal(ring, units) -> "SymMatrix":
        n = len(units)
        return SymMatrix.make(
            ring,
            [[units[i] if i == j else ring.zero for j in range(n)] for i in range(n)],
        )

    def det(self):
        return linalg.det(self.ring, [list(r) for r in self.rows])

    def is_nondegenerate(self) -> bool:
        d = self.det()
        if isinstance(self.ring, PolyRing):
            return not d.is_zero()
        return not self.ring.is_zero(d)

    def entry(self, i, j):
        return self.rows[i][j]

    def eval(self, t) -> "SymMatrix":
        """Evaluate a k[T] matrix at T=t."""
        base = self.ring.base
        tv = base.coerce(t)
        return SymMatrix.make(
            base, [[c.eval(tv) for c in row] for row in self.rows]
        )

    def block_sum(self, other: "SymMatrix") -> "SymMatrix":
        z = self.ring.zero
        n, m = self.n, other.n
        rows = [list(r) + [z] * m for r in self.rows]
        rows += [[z] * n + list(r) for r in other.rows]
        return SymMatrix.make(self.ring, rows)


@dataclass(frozen=True)
class HankelMatrix:
    """Matrix constant along anti-diagonals, stored as s_1..s_{2n-1}."""

    ring: object
    n: int
    s: tuple

    def __post_init__(self):
        assert len(self.s) == 2 * self.n - 1

    def entry(self, p, q):
        # 1-based indices in the classical description; 0-based here
        return self.s[p + q]

    def to_sym(self) -> SymMatrix:
        n = self.n
        return SymMatrix.make(
            self.ring, [[self.s[i + j] for j in range(n)] for i in range(n)]
        )


def bezout_coeffs(A: Poly, B: Poly, n: int):
    """Coefficient matrix of (A(X)B(Y)-A(Y)B(X))/(X-Y) via a direct recurrence.

    Entry (i, j), 0-based, equals sum_t a_{i+1+t} b_{j-t} - a_{j-t} b_{i+1+t}
    over t >= 0 with j-t >= 0 and i+1+t <= n; no bivariate arithmetic needed.
    """
    R = A.ring
    a = [A.coeff(k) for k in range(n + 1)]
    b = [B.coeff(k) for k in range(n + 1)]
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = R.zero
            for t in range(0, min(j, n - i - 1) + 1):
                acc = R.add(
                    acc,
                    R.sub(
                        R.mul(a[i + 1 + t], b[j - t]), R.mul(a[j - t], b[i + 1 + t])
                    ),
                )
            row.append(acc)
        rows.append(row)
    return rows


def bezout_form(f: PointedRat) -> SymMatrix:
    """The Bezout form of f; det = (-1)^{n(n-1)/2} res(f), asserted exactly."""
    n = f.n
    if n < 1:
        raise FieldError("Bezout form needs degree >= 1")
    ring = f.ring
    rows = bezout_coeffs(f.A, f.B, n)
    S = SymMatrix.make(ring, rows)
    expected = f.res if (n * (n - 1) // 2) % 2 == 0 else ring.neg(f.res)
    assert ring.is_zero(ring.sub(S.det(), expected)), "determinant formula failed"
    return S


def hankel_of(f: PointedRat) -> HankelMatrix:
    """Inverse of the Bezout form, computed from the expansion of V/A.

    The product Bez(f) * Hank(f) = I is asserted exactly.
    """
    n = f.n
    if n < 1:
        raise FieldError("Hankel matrix needs degree >= 1")
    ring = f.ring
    s = laurent_expand(f.V, f.A, 2 * n - 1)
    H = HankelMatrix(ring, n, s)
    Bz = bezout_form(f)
    prod = linalg.mat_mul(ring, [list(r) for r in Bz.rows], [list(r) for r in H.to_sym().rows])
    assert linalg.mat_eq(ring, prod, linalg.mat_identity(ring, n)), "Bez * Hank != I"
    return H


def psi_n(H: HankelMatrix, v) -> PointedRat:
    """Reconstruct the rational function with Hankel data H and phi-value v.

    Solves H * (a_0..a_{n-1})^T = (-s_{n+1}, ..., -s_{2n-1}, v)^T for the
    monic numerator A, takes V as the polynomial part of
    (s_1 X^{-1} + ... + s_n X^{-n}) * A, and recovers B from the Bezout
    relation A U + B V = 1.  Exact over a field and over k[T] (where the
    Hankel determinant is a nonzero constant).
    """
    ring = H.ring
    n = H.n
    v = ring.coerce(v)
    s = H.s
    M = [[s[i + j] for j in range(n)] for i in range(n)]
    rhs = [ring.neg(s[n + i]) for i in range(n - 1)] + [v]
    a = linalg.solve_cramer(ring, M, rhs)
    A = Poly.make(ring, list(a) + [ring.one])
    # polynomial part of (sum s_i X^{-i}) A: X^j coefficient is
    # sum_{i=1}^{n-j} s_i a_{j+i} with a_n = 1
    acoef = list(a) + [ring.one]
    vcoef = []
    for j in range(n):
        acc = ring.zero
        for i in range(1, n - j + 1):
            acc = ring.add(acc, ring.mul(s[i - 1], acoef[j + i]))
        vcoef.append(acc)
    V = Poly.make(ring, vcoef)
    try:
        U, B = bezout_pair(A, V)
    except FieldError as exc:
        raise AssertionError(
            "internal inconsistency: gcd(A, V) != 1 for non-degenerate Hankel data"
        ) from exc
    f = mk_pointed(A, B)
    assert f.V == V and f.U == U
    assert hankel_of(f).s == H.s
    assert ring.is_zero(ring.sub(phi_n(f), v))
    return f


def inverse_sym(S: SymMatrix) -> SymMatrix:
    """Exact inverse of a non-degenerate symmetric matrix (adjugate / det)."""
    ring = S.ring
    d = S.det()
    if isinstance(ring, PolyRing):
        if d.is_zero() or not d.is_constant():
            raise FieldError("degenerate (or non-constant determinant) matrix")
    elif ring.is_zero(d):
        raise FieldError("degenerate matrix")
    adj = linalg.adjugate(ring, [list(r) for r in S.rows])
    inv = [[ring.exact_div(x, d) for x in row] for row in adj]
    return SymMatrix.make(ring, inv)


def hankel_from_sym(S: SymMatrix) -> HankelMatrix:
    """View a symmetric matrix as Hankel data; requires the Hankel constraint."""
    n = S.n
    ring = S.ring
    s = []
    for k in range(2 * n - 1):
        vals = [S.entry(i, k - i) for i in range(max(0, k - n + 1), min(k, n - 1) + 1)]
        for x in vals[1:]:
            if not ring.is_zero(ring.sub(x, vals[0])):
                raise FieldError("matrix is not Hankel")
        s.append(vals[0])
    return HankelMatrix(ring, n, tuple(s))


def f2_iso(f: PointedRat):
    """The degree-2 coordinates: (Bezout form, translation coordinate)."""
    if f.n != 2:
        raise FieldError("f2_iso is the degree-2 chart")
    return bezout_form(f), phi_n(f)


def f2_iso_inv(S: SymMatrix, t) -> PointedRat:
    """Inverse of f2_iso: psi_2 applied to S^{-1} read as Hankel data.

    Works identically over k and over k[T]; equivariant for the translation
    action in the second coordinate.
    """
    if S.n != 2:
        raise FieldError("f2_iso_inv is the degree-2 chart")
    H = hankel_from_sym(inverse_sym(S))
    f = psi_n(H, t)
    assert bezout_form(f).rows == S.rows
    return f


def block_sum_change_of_basis(u, g: PointedRat):
    """The det-1 matrix P with P^T Bez(X/u (+) g) P = Bez(g) (+) <u>.

    P is the contragredient of the unitriangular basis matrix whose last
    column is the coefficient vector of g's numerator: explicitly, identity
    with last row (-a_0, ..., -a_{n-1}, 1).
    """
    ring = g.ring
    n = g.n
    P = linalg.mat_identity(ring, n + 1)
    for j in range(n):
        P[n][j] = ring.neg(g.A.coeff(j))
    return P
