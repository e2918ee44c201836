"""Dense univariate polynomials over an exact coefficient ring.

Coefficients are stored lowest degree first with no trailing zeros; the zero
polynomial has an empty coefficient tuple.  The coefficient ring is either a
base field (fields.Rationals / fields.PrimeField) or PolyRing(k), i.e. k[T],
which is how homotopies are represented: a path of rational functions is a
polynomial in X whose coefficients are polynomials in T.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable

from . import linalg
from .fields import FieldError, PrimeField, Rationals


@dataclass(frozen=True)
class Poly:
    ring: object
    coeffs: tuple

    # -- construction -----------------------------------------------------

    @staticmethod
    def make(ring, coeffs: Iterable) -> "Poly":
        cs = [ring.coerce(c) for c in coeffs]
        while cs and ring.is_zero(cs[-1]):
            cs.pop()
        return Poly(ring, tuple(cs))

    # -- basic structure --------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    @property
    def lead(self):
        if not self.coeffs:
            raise FieldError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def constant(self):
        return self.coeffs[0] if self.coeffs else self.ring.zero

    def coeff(self, i: int):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else self.ring.zero

    def is_monic(self) -> bool:
        return bool(self.coeffs) and _ring_is_one(self.ring, self.lead)

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other: "Poly") -> "Poly":
        R = self.ring
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = R.add(out[i], c)
        return Poly.make(R, out)

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __neg__(self) -> "Poly":
        R = self.ring
        return Poly(R, tuple(R.neg(c) for c in self.coeffs))

    def __mul__(self, other: "Poly") -> "Poly":
        R = self.ring
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly(R, ())
        out = [R.zero] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if R.is_zero(ai):
                continue
            for j, bj in enumerate(b):
                out[i + j] = R.add(out[i + j], R.mul(ai, bj))
        return Poly.make(R, out)

    def scale(self, c) -> "Poly":
        R = self.ring
        c = R.coerce(c)
        return Poly.make(R, [R.mul(c, x) for x in self.coeffs])

    def shift(self, k: int) -> "Poly":
        """Multiply by X^k."""
        if self.is_zero():
            return self
        return Poly(self.ring, (self.ring.zero,) * k + self.coeffs)

    def monic(self) -> "Poly":
        return self.scale(self.ring.inv(self.lead))

    def eval(self, x):
        R = self.ring
        x = R.coerce(x) if not isinstance(x, Poly) else x
        acc = R.zero
        for c in reversed(self.coeffs):
            acc = R.add(R.mul(acc, x), c)
        return acc

    def subst(self, g: "Poly") -> "Poly":
        """Evaluate at another polynomial (Horner)."""
        R = self.ring
        acc = Poly(R, ())
        for c in reversed(self.coeffs):
            acc = acc * g + Poly.make(R, [c])
        return acc

    def derivative(self) -> "Poly":
        R = self.ring
        out = []
        for i in range(1, len(self.coeffs)):
            term = self.coeffs[i]
            acc = R.zero
            for _ in range(i):
                acc = R.add(acc, term)
            out.append(acc)
        return Poly.make(R, out)

    def map_coeffs(self, fn, new_ring) -> "Poly":
        return Poly.make(new_ring, [fn(c) for c in self.coeffs])

    def __repr__(self):
        return f"Poly({self.ring!r}, {poly_str(self)})"


def _ring_is_one(ring, c) -> bool:
    return ring.is_zero(ring.sub(c, ring.one))


def poly(ring, coeffs: Iterable) -> Poly:
    return Poly.make(ring, coeffs)


def X(ring) -> Poly:
    return Poly(ring, (ring.zero, ring.one))


def const(ring, c) -> Poly:
    return Poly.make(ring, [c])


def zero(ring) -> Poly:
    return Poly(ring, ())


def poly_str(p: Poly, var: str = "X") -> str:
    """Canonical human form, highest degree first (see expr for the parser)."""
    R = p.ring
    if p.is_zero():
        return "0"
    parts = []
    for i in range(p.degree, -1, -1):
        c = p.coeff(i)
        if R.is_zero(c):
            continue
        if isinstance(c, Poly):
            cs = poly_str(c, "T")
            coeff_txt = cs if ("+" not in cs and "-" not in cs[1:]) else f"({cs})"
            neg = False
        else:
            txt = R.format(c)
            neg = txt.startswith("-")
            coeff_txt = txt[1:] if neg else txt
        if i == 0:
            term = coeff_txt
        else:
            xpow = var if i == 1 else f"{var}^{i}"
            term = xpow if coeff_txt == "1" else f"{coeff_txt}*{xpow}"
        if not parts:
            parts.append(("-" if neg else "") + term)
        else:
            parts.append(("-" if neg else "+") + term)
    return "".join(parts)


class PolyRing:
    """k[T] viewed as a coefficient ring (the ring of homotopy parameters).

    Elements are Poly values over the base field.  This is an integral
    domain, not a field: is_unit means "nonzero constant", and exact_div
    performs polynomial division that must leave no remainder.
    """

    def __init__(self, base, var: str = "T"):
        self.base = base
        self.var = var
        self.char = base.char

    def __eq__(self, other):
        return isinstance(other, PolyRing) and other.base == self.base

    def __hash__(self):
        return hash(("polyring", self.base))

    def __repr__(self):
        return f"{self.base!r}[{self.var}]"

    @property
    def zero(self):
        return Poly(self.base, ())

    @property
    def one(self):
        return Poly(self.base, (self.base.one,))

    def from_int(self, n):
        return const(self.base, self.base.from_int(n))

    def coerce(self, a):
        if isinstance(a, Poly):
            if a.ring != self.base:
                raise FieldError(f"coefficient {a!r} not over {self.base!r}")
            return a
        return const(self.base, self.base.coerce(a))

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def is_zero(self, a):
        return a.is_zero()

    def is_unit(self, a):
        return a.is_constant() and not a.is_zero()

    def inv(self, a):
        if not self.is_unit(a):
            raise FieldError(f"{a!r} is not a unit of {self!r}")
        return const(self.base, self.base.inv(a.constant()))

    def exact_div(self, a, b):
        q, r = poly_divmod(a, b)
        if not r.is_zero():
            raise FieldError("non-exact division in k[T]")
        return q

    def format(self, a) -> str:
        return poly_str(a, self.var)


def coefficient_ring_pair(ring):
    """(base field, PolyRing over it or None) for a Poly coefficient ring."""
    if isinstance(ring, PolyRing):
        return ring.base, ring
    return ring, None


def poly_divmod(a: Poly, b: Poly) -> tuple[Poly, Poly]:
    """Euclidean division a = b*q + r with deg r < deg b.

    Requires an invertible leading coefficient on b; over k[T] that means a
    nonzero constant (practically: a monic divisor).
    """
    R = a.ring
    if b.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    if not R.is_unit(b.lead):
        raise FieldError("non-monic divisor over polynomial ring")
    inv_lead = R.inv(b.lead)
    rem = list(a.coeffs)
    db = b.degree
    if a.degree < db:
        return Poly(R, ()), a
    q = [R.zero] * (a.degree - db + 1)
    for i in range(a.degree - db, -1, -1):
        c = rem[i + db]
        if R.is_zero(c):
            continue
        factor = R.mul(c, inv_lead)
        q[i] = factor
        for j, bc in enumerate(b.coeffs):
            rem[i + j] = R.sub(rem[i + j], R.mul(factor, bc))
    return Poly.make(R, q), Poly.make(R, rem[:db])


def poly_xgcd(a: Poly, b: Poly) -> tuple[Poly, Poly, Poly]:
    """Extended gcd over a field: returns monic g and (s, t) with a*s + b*t = g.

    Degree bounds: deg s < deg b - deg g and deg t < deg a - deg g whenever
    both inputs are nonzero and neither divides the other.
    """
    R = a.ring
    if isinstance(R, PolyRing):
        raise FieldError("xgcd needs field coefficients")
    if a.is_zero() and b.is_zero():
        raise FieldError("xgcd(0, 0)")
    r0, r1 = a, b
    s0, s1 = const(R, R.one), zero(R)
    t0, t1 = zero(R), const(R, R.one)
    while not r1.is_zero():
        q, r = poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    lead_inv = R.inv(r0.lead)
    return r0.scale(lead_inv), s0.scale(lead_inv), t0.scale(lead_inv)


def poly_gcd(a: Poly, b: Poly) -> Poly:
    R = a.ring
    if a.is_zero() and b.is_zero():
        return zero(R)
    if a.is_zero():
        return b.monic()
    if b.is_zero():
        return a.monic()
    g, _, _ = poly_xgcd(a, b)
    return g


def sylvester_nn(a: Poly, b: Poly, n: int):
    """The 2n x 2n Sylvester matrix of (a, b), both padded to formal degree n."""
    R = a.ring
    rows = []
    for p in (a, b):
        cs = [p.coeff(n - j) for j in range(n + 1)]  # descending, padded
        for i in range(n):
            rows.append([R.zero] * i + cs + [R.zero] * (n - 1 - i))
    return rows


def resultant_nn(a: Poly, b: Poly, n: int):
    """Resultant of (a, b) taken at formal degree (n, n).

    Defined as the determinant of the Sylvester matrix with A-rows above
    B-rows, coefficients descending; this layout makes the determinant
    formula for the coefficient matrix of (A(X)B(Y)-A(Y)B(X))/(X-Y) hold
    with sign (-1)^{n(n-1)/2} (validated exhaustively in the test suite).
    For monic a the determinant is computed as det of the multiplication-
    by-b matrix on the quotient by a, which is the same scalar.
    """
    if n < max(a.degree, b.degree):
        raise FieldError("formal degree below an actual degree")
    if n == 0:
        return a.ring.one
    if a.degree == n and a.is_monic():
        return _res_monic(a, b, n)
    return linalg.det(a.ring, sylvester_nn(a, b, n))


def _res_monic(a: Poly, b: Poly, n: int):
    R = a.ring
    # Columns: X^j * b reduced modulo a, on the basis 1, X, ..., X^{n-1}.
    cols = []
    cur = b
    if cur.degree == n:  # padded formal degree: reduce before starting
        cur = cur - a.scale(cur.coeff(n))
    for _ in range(n):
        cols.append([cur.coeff(i) for i in range(n)])
        cur = cur.shift(1)
        if cur.degree == n:
            lead = cur.coeff(n)
            cur = cur - a.scale(lead)
    M = [[cols[j][i] for j in range(n)] for i in range(n)]
    return linalg.det(R, M)


def bezout_pair(A: Poly, B: Poly) -> tuple[Poly, Poly]:
    """The unique (U, V) with A*U + B*V = 1, deg U <= n-2, deg V <= n-1.

    A must be monic of degree n >= 1 with deg B < n and res_{n,n}(A, B) a
    unit; raises FieldError otherwise.  Over a field this runs through the
    extended Euclidean algorithm; over k[T] the coefficients solve a
    Sylvester-type linear system by Cramer's rule (the determinant is the
    resultant, a nonzero constant, so every division is exact).
    """
    R = A.ring
    n = A.degree
    if n < 1 or not A.is_monic() or B.degree >= n:
        raise FieldError("bezout_pair expects monic A with deg B < deg A")
    if isinstance(R, PolyRing):
        return _bezout_pair_kt(A, B, n)
    if B.is_zero():
        raise FieldError("not coprime / not a point of F_n")
    g, s, t = poly_xgcd(A, B)
    if g.degree != 0:
        raise FieldError("not coprime / not a point of F_n")
    U, V = s, t
    if U.degree > n - 2 or V.degree > n - 1:
        # xgcd bounds already guarantee this; keep the check as a tripwire.
        raise AssertionError("bezout degree bounds violated")
    return U, V


def _bezout_pair_kt(A: Poly, B: Poly, n: int) -> tuple[Poly, Poly]:
    R = A.ring
    # Unknowns u_0..u_{n-2}, v_0..v_{n-1}; equations: coefficients of
    # X^0..X^{2n-2} in A*U + B*V = 1.
    size = 2 * n - 1
    M = [[R.zero] * size for _ in range(size)]
    for j in range(n - 1):  # columns for U
        for i in range(n + 1):
            if j + i < size:
                M[j + i][j] = A.coeff(i)
    for j in range(n):  # columns for V
        for i in range(n):
            if j + i < size:
                M[j + i][n - 1 + j] = B.coeff(i)
    rhs = [R.one] + [R.zero] * (size - 1)
    try:
        sol = linalg.solve_cramer(R, M, rhs)
    except (ZeroDivisionError, FieldError) as exc:
        raise FieldError("not coprime / not a point of F_n") from exc
    U = Poly.make(R, sol[: n - 1])
    V = Poly.make(R, sol[n - 1 :])
    assert (A * U + B * V - const(R, R.one)).is_zero()
    return U, V


def laurent_expand(V: Poly, A: Poly, m: int) -> tuple:
    """First m coefficients s_1..s_m of V/A = s_1 X^{-1} + s_2 X^{-2} + ...

    Requires deg V < deg A and A monic; works over a field or over k[T].
    """
    R = V.ring
    n = A.degree
    if V.degree >= n:
        raise FieldError("laurent_expand needs deg V < deg A")
    if not A.is_monic():
        raise FieldError("laurent_expand needs monic A")
    out = []
    r = V
    for _ in range(m):
        s = r.coeff(n - 1)
        out.append(s)
        r = r.shift(1) - A.scale(s)
    return tuple(out)


# ---------------------------------------------------------------------------
# Factorization over prime fields
# ---------------------------------------------------------------------------

_IRR_CACHE: dict[tuple[int, int], list] = {}


def _monic_polys(field, d: int):
    p = field.p
    for code in range(p**d):
        cs = []
        c = code
        for _ in range(d):
            cs.append(c % p)
            c //= p
        yield Poly.make(field, cs + [1])


def irreducibles(field: PrimeField, max_deg: int) -> list:
    """All monic irreducible polynomials of degree <= max_deg, by sieve."""
    key = (field.p, max_deg)
    if key in _IRR_CACHE:
        return _IRR_CACHE[key]
    found: list[Poly] = []
    for d in range(1, max_deg + 1):
        for cand in _monic_polys(field, d):
            ok = True
            for q in found:
                if 2 * q.degree > d:
                    break
                if poly_divmod(cand, q)[1].is_zero():
                    ok = False
                    break
            if ok:
                found.append(cand)
    _IRR_CACHE[key] = found
    return found


def _pth_root(A: Poly) -> Poly:
    """p-th root of A(X) = C(X^p) over F_p (coefficients are fixed by Frobenius)."""
    p = A.ring.p
    return Poly.make(A.ring, [A.coeff(i) for i in range(0, A.degree + 1, p)])


def squarefree_decomposition(A: Poly) -> list[tuple[Poly, int]]:
    """Yun-style decomposition adapted to characteristic p."""
    field = A.ring
    p = field.p
    out: dict[int, Poly] = {}

    def accumulate(f: Poly, mult: int):
        if f.degree > 0:
            out[mult] = out.get(mult, const(field, 1)) * f

    def decompose(f: Poly, mult: int):
        if f.degree <= 0:
            return
        df = f.derivative()
        if df.is_zero():
            # f = C(X^p); recurse on the p-th root
            decompose(_pth_root(f), mult * p)
            return
        g = poly_gcd(f, df)
        w = poly_divmod(f, g)[0]
        i = 1
        while w.degree > 0:
            y = poly_gcd(w, g)
            accumulate(poly_divmod(w, y)[0], mult * i)
            w = y
            g = poly_divmod(g, y)[0]
            i += 1
        if g.degree > 0:
            # leftover has derivative zero
            decompose(g, mult)

    decompose(A.monic(), 1)
    return [(f, mult) for mult, f in sorted(out.items())]


_factor_rng = random.Random(0x5EED)


def _ddf(A: Poly) -> list[tuple[Poly, int]]:
    """Distinct-degree factorization of a squarefree monic polynomial."""
    field = A.ring
    p = field.p
    out = []
    f = A
    x = X(field)
    h = x
    d = 0
    while f.degree > 2 * (d + 1) - 1 and f.degree > 0:
        d += 1
        h = _pow_mod(h, p, f)
        g = poly_gcd(f, h - x)
        if g.degree > 0:
            out.append((g, d))
            f = poly_divmod(f, g)[0]
            h = poly_divmod(h, f)[1] if f.degree > 0 else h
    if f.degree > 0:
        out.append((f, f.degree))
    return out


def _pow_mod(b: Poly, e: int, m: Poly) -> Poly:
    acc = const(b.ring, 1)
    b = poly_divmod(b, m)[1]
    while e:
        if e & 1:
            acc = poly_divmod(acc * b, m)[1]
        b = poly_divmod(b * b, m)[1]
        e >>= 1
    return acc


def _edf(A: Poly, d: int) -> list[Poly]:
    """Equal-degree splitting (Cantor-Zassenhaus, odd p) of monic squarefree A."""
    field = A.ring
    if A.degree == d:
        return [A]
    p = field.p
    exponent = (p**d - 1) // 2
    while True:
        h = Poly.make(field, [_factor_rng.randrange(p) for _ in range(A.degree)] + [1])
        g = poly_gcd(A, h)
        if 0 < g.degree < A.degree:
            pass
        else:
            t = _pow_mod(h, exponent, A) - const(field, 1)
            g = poly_gcd(A, t)
        if 0 < g.degree < A.degree:
            return _edf(g, d) + _edf(poly_divmod(A, g)[0], d)


def factor_fp(A: Poly) -> tuple[tuple[Poly, int], ...]:
    """Factor a nonzero polynomial over F_p into monic irreducibles.

    Returns ((factor, multiplicity), ...) sorted by (degree, coeffs); the
    product of factor^mult times the leading unit reproduces the input.
    Uses squarefree decomposition, then trial division against the sieve of
    irreducibles for small search spaces (always for p <= 5), falling back
    to distinct-degree plus randomized equal-degree splitting for larger p.
    """
    field = A.ring
    if not isinstance(field, PrimeField):
        raise FieldError("factorization supported over prime fields only")
    if A.is_zero():
        raise FieldError("factor_fp(0)")
    factors: dict[Poly, int] = {}
    if A.degree == 0:
        return ()
    for part, mult in squarefree_decomposition(A):
        half = part.degree // 2
        if field.p <= 5 or field.p**max(half, 1) <= 200_000:
            rest = part
            for q in irreducibles(field, max(half, 1)):
                while rest.degree >= q.degree:
                    quo, rem = poly_divmod(rest, q)
                    if rem.is_zero():
                        factors[q] = factors.get(q, 0) + mult
                        rest = quo
                    else:
                        break
                if rest.degree == 0:
                    break
            if rest.degree > 0:
                factors[rest] = factors.get(rest, 0) + mult
        else:
            for sub, d in _ddf(part):
                for irr in _edf(sub, d):
                    factors[irr] = factors.get(irr, 0) + mult
    return tuple(
        sorted(factors.items(), key=lambda kv: (kv[0].degree, kv[0].coeffs))
    )


def random_poly(field, degree: int, rng: random.Random, monic: bool = False) -> Poly:
    if isinstance(field, Rationals):
        cs = [field.coerce(rng.randint(-6, 6)) for _ in range(degree + 1)]
    else:
        cs = [rng.randrange(field.p) for _ in range(degree + 1)]
    if monic:
        cs[-1] = field.one
    return Poly.make(field, cs)
