"""Shared helpers: independent oracles and exhaustive/random generators.

The oracles here deliberately avoid the library's own computation paths:
determinants by permutation expansion, the two-variable numerator quotient
by direct division in the second variable, Laurent coefficients by long
division.  Expected values in the tests are either computed by these or
asserted as frozen literals checked against them.
"""
from __future__ import annotations

import itertools
import random
from fractions import Fraction

import pytest

from p1h.fields import GF, QQ
from p1h.poly import Poly, X, const, poly_divmod
from p1h.ratmap import mk_pointed, monomial_sum, oplus, x_over


def perm_det(field, M):
    """Determinant by permutation expansion (independent of linalg)."""
    n = len(M)
    total = field.zero
    for perm in itertools.permutations(range(n)):
        sign = 1
        p = list(perm)
        for i in range(n):
            for j in range(i + 1, n):
                if p[i] > p[j]:
                    sign = -sign
        term = field.one
        for i in range(n):
            term = field.mul(term, M[i][p[i]])
        total = field.add(total, term if sign > 0 else field.neg(term))
    return total


def delta_matrix_oracle(field, A, B, n):
    """Coefficient matrix of (A(X)B(Y) - A(Y)B(X))/(X - Y) by dividing in Y.

    Works with explicit bivariate coefficient tables, independently of the
    library's recurrence.
    """
    # numerator N[i][j] = coeff of X^i Y^j
    N = [[field.zero] * (n + 1) for _ in range(n + 1)]
    for i in range(n + 1):
        for j in range(n + 1):
            N[i][j] = field.sub(
                field.mul(A.coeff(i), B.coeff(j)), field.mul(A.coeff(j), B.coeff(i))
            )
    # divide by (Y - X) viewing rows as coefficients in Y over k[X]:
    # quotient Q with N = (Y - X) Q, then delta = -Q
    Q = [[field.zero] * (n + 1) for _ in range(n + 1)]
    rem = [row[:] for row in N]
    for j in range(n, 0, -1):
        for i in range(n + 1):
            c = rem[i][j]
            Q[i][j - 1] = c
            rem[i][j] = field.zero
            # add X * c back into Y^{j-1}
            if not field.is_zero(c) and i + 1 <= n:
                rem[i + 1][j - 1] = field.add(rem[i + 1][j - 1], c)
    delta = [[field.neg(Q[i][j]) for j in range(n)] for i in range(n)]
    return delta


def laurent_oracle(field, V, A, m):
    """s_1..s_m of V/A by long division of V X^m by A."""
    q, _ = poly_divmod(V.shift(m), A)
    n = A.degree
    # V/A = q X^{-m} + O(X^{-m-1})? rather: coefficients of X^{m-i} in q
    return tuple(q.coeff(m - i) for i in range(1, m + 1))


def all_points(field, n):
    """All of F_n(field) for a finite field."""
    q = field.p
    out = []
    for acoef in itertools.product(range(q), repeat=n):
        A = Poly.make(field, list(acoef) + [1])
        for bcoef in itertools.product(range(q), repeat=n):
            B = Poly.make(field, list(bcoef))
            try:
                out.append(mk_pointed(A, B))
            except Exception:
                continue
    return out


def random_point(field, n, rng):
    """A random valid point, by retrying small random coefficients.

    Rational coefficients stay small (mostly integers, an occasional half)
    so that downstream resultants remain at desk scale.
    """
    while True:
        if field is QQ or not hasattr(field, "p"):
            acoef = [
                Fraction(rng.randint(-4, 4), rng.choice([1, 1, 1, 2]))
                for _ in range(n)
            ]
            bcoef = [
                Fraction(rng.randint(-4, 4), rng.choice([1, 1, 1, 2]))
                for _ in range(n)
            ]
        else:
            acoef = [rng.randrange(field.p) for _ in range(n)]
            bcoef = [rng.randrange(field.p) for _ in range(n)]
        A = Poly.make(field, acoef + [field.one])
        B = Poly.make(field, bcoef)
        try:
            return mk_pointed(A, B)
        except Exception:
            continue


@pytest.fixture
def rng():
    return random.Random(20260808)
