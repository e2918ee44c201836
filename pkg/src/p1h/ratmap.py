"""Pointed and unpointed rational functions, and their algebraic structure.

A pointed rational function of degree n over a coefficient ring R is a pair
(A, B) with A monic of degree n, deg B < n and res_{n,n}(A, B) a unit of R.
Over a base field these are the points we classify; over k[T] they are the
homotopies (paths), whose endpoints come from evaluating T at 0 and 1.

The monoid law stacks two functions by multiplying their unimodular
2x2 matrices [A -V; B U]; the twisted continued fraction expansion is its
inverse at the level of field points.
"""
from __future__ import annotations

from dataclasses import dataclass

from . import linalg
from .fields import FieldError
from .poly import (
    Poly,
    PolyRing,
    X,
    bezout_pair,
    const,
    poly_divmod,
    poly_str,
    resultant_nn,
    zero,
)


class RejectedPoint(ValueError):
    """Input pair is not a valid point: the resultant is not a unit."""

    def __init__(self, resultant, message="resultant is not a unit"):
        super().__init__(message)
        self.resultant = resultant


class RejectedPath(RejectedPoint):
    """k[T] input whose resultant is not a nonzero constant."""

    def __init__(self, resultant):
        super().__init__(resultant, "non-constant resultant: not a homotopy")


@dataclass(frozen=True)
class PointedRat:
    """A point of F_n(R): monic A, B with unit resultant, cached Bezout pair."""

    ring: object
    A: Poly
    B: Poly
    U: Poly
    V: Poly
    res: object

    @property
    def n(self) -> int:
        return self.A.degree

    degree = n

    @property
    def is_path(self) -> bool:
        return isinstance(self.ring, PolyRing)

    def __repr__(self):
        return f"({poly_str(self.A)})/({poly_str(self.B)})"

    def matrix(self):
        """The SL_2 matrix [A -V; B U] attached to the point."""
        return [[self.A, -self.V], [self.B, self.U]]

    def key(self):
        return (self.A.coeffs, self.B.coeffs)


def _unit_resultant(ring, res):
    if isinstance(ring, PolyRing):
        return res.is_constant() and not res.is_zero()
    return not ring.is_zero(res)


def mk_pointed(A: Poly, B: Poly) -> PointedRat:
    """Validate and build a point of F_n, raising RejectedPoint/RejectedPath."""
    ring = A.ring
    if B.ring != ring:
        raise FieldError("numerator and denominator over different rings")
    n = A.degree
    if n < 0 or not (n == 0 and _is_one(A) or A.is_monic()):
        raise FieldError("numerator must be monic")
    if B.degree >= n and not (n == 0 and B.is_zero()):
        raise FieldError("denominator degree must be below the numerator degree")
    if n == 0:
        if not B.is_zero():
            raise FieldError("degree-0 point must be 1/0")
        return PointedRat(ring, A, B, const(ring, ring.one), zero(ring), ring.one)
    res = resultant_nn(A, B, n)
    if not _unit_resultant(ring, res):
        if isinstance(ring, PolyRing):
            raise RejectedPath(res)
        raise RejectedPoint(res)
    U, V = bezout_pair(A, B)
    return PointedRat(ring, A, B, U, V, res)


def _is_one(p: Poly) -> bool:
    return p.degree == 0 and p.ring.is_zero(p.ring.sub(p.coeffs[0], p.ring.one))


def identity_point(ring) -> PointedRat:
    """The unique degree-0 point 1/0, the unit for the addition law."""
    return mk_pointed(const(ring, ring.one), zero(ring))


def poly_point(P: Poly, b) -> PointedRat:
    """The polynomial function P/b (P monic, b a unit)."""
    return mk_pointed(P, const(P.ring, b))


def x_over(ring, u) -> PointedRat:
    return poly_point(X(ring), u)


def monomial_sum(ring, units) -> PointedRat:
    """[u_1, ..., u_n] = X/u_1 (+) ... (+) X/u_n."""
    acc = identity_point(ring)
    for u in units:
        acc = oplus(acc, x_over(ring, u))
    return acc


def oplus(f: PointedRat, g: PointedRat) -> PointedRat:
    """The graded addition: multiply the attached 2x2 unimodular matrices.

    The Bezout pair of the result is read off the product matrix rather than
    recomputed; an assertion checks it against the (unique) recomputed pair.
    """
    if f.ring != g.ring:
        raise FieldError("oplus over different rings")
    ring = f.ring
    A3 = f.A * g.A - f.V * g.B
    B3 = f.B * g.A + f.U * g.B
    V3 = f.A * g.V + f.V * g.U
    U3 = f.U * g.U - f.B * g.V
    n3 = f.n + g.n
    assert A3.degree == n3 and A3.is_monic()
    assert B3.degree < n3 or B3.is_zero()
    one = const(ring, ring.one)
    assert (A3 * U3 + B3 * V3 - one).is_zero(), "determinant drifted from 1"
    # det of the Bezout form is multiplicative; res twists by (-1)^{n1 n2}
    res3 = ring.mul(f.res, g.res)
    if (f.n * g.n) % 2:
        res3 = ring.neg(res3)
    if n3 > 0:
        assert ring.is_zero(ring.sub(resultant_nn(A3, B3, n3), res3))
    if n3 > 0:
        U_check, V_check = bezout_pair(A3, B3)
        assert U_check == U3 and V_check == V3, "Bezout pair not the unique one"
    return PointedRat(ring, A3, B3, U3, V3, res3)


@dataclass(frozen=True)
class CFExpansion:
    """Twisted continued fraction expansion: pairs (P_i monic, b_i unit)."""

    field: object
    terms: tuple  # of (Poly, unit)

    def __iter__(self):
        return iter(self.terms)

    def __len__(self):
        return len(self.terms)


def cf_expand(f: PointedRat) -> CFExpansion:
    """Expand A/B = P_0/b_0 - 1/(b_0^2 (P_1/b_1 - ...)); unique and finite.

    The recursion: divide A = Q*B + R, set b = lc(B), P = b*Q, and continue
    with (B/b, -b*R); a constant denominator terminates the expansion.
    """
    if f.is_path:
        raise FieldError("cf expansion is for field points")
    if f.n < 1:
        raise FieldError("cf expansion needs degree >= 1")
    ring = f.ring
    terms = []
    A, B = f.A, f.B
    while B.degree >= 1:
        Q, R = poly_divmod(A, B)
        b = B.lead
        terms.append((Q.scale(b), b))
        A, B = B.scale(ring.inv(b)), R.scale(ring.neg(b))
    terms.append((A, B.constant()))
    assert sum(P.degree for P, _ in terms) == f.n
    return CFExpansion(ring, tuple(terms))


def cf_assemble(exp: CFExpansion) -> PointedRat:
    acc = identity_point(exp.field)
    for P, b in exp.terms:
        acc = oplus(acc, poly_point(P, b))
    return acc


def compose(f: PointedRat, g: PointedRat) -> PointedRat:
    """The composite endomorphism f o g; degree multiplies.

    With f = A/B of degree m and g = C/D, clearing denominators gives
    numerator sum a_i C^i D^{m-i} and denominator sum b_i C^i D^{m-i}.
    """
    if f.ring != g.ring:
        raise FieldError("compose over different rings")
    m, n = f.n, g.n
    if m < 1 or n < 1:
        raise FieldError("compose needs degrees >= 1")
    ring = f.ring
    C, D = g.A, g.B
    cpow = [const(ring, ring.one)]
    dpow = [const(ring, ring.one)]
    for _ in range(m):
        cpow.append(cpow[-1] * C)
        dpow.append(dpow[-1] * D)
    At = zero(ring)
    Bt = zero(ring)
    for i in range(m + 1):
        At = At + (cpow[i] * dpow[m - i]).scale(f.A.coeff(i))
        if i < m:
            Bt = Bt + (cpow[i] * dpow[m - i]).scale(f.B.coeff(i))
    return mk_pointed(At, Bt)


def ga_act(h, f: PointedRat) -> PointedRat:
    """Translation action h . (A/B) = (A + hB)/B; free, resultant-preserving."""
    ring = f.ring
    h = ring.coerce(h)
    A2 = f.A + f.B.scale(h)
    V2 = f.V - f.U.scale(h)
    out = PointedRat(ring, A2, f.B, f.U, V2, f.res)
    one = const(ring, ring.one)
    assert (A2 * f.U + f.B * V2 - one).is_zero()
    return out


def phi_n(f: PointedRat):
    """The translation coordinate: minus the X^{n-1} coefficient of V_1,
    where (U_1, V_1) is the unique solution of A U_1 + B V_1 = X^{2n-1}.

    Also computed as -s_{2n} from the expansion of V/A; the two routes are
    asserted to agree.
    """
    n = f.n
    if n < 1:
        raise FieldError("phi needs degree >= 1")
    ring = f.ring
    V1 = poly_divmod(f.V.shift(2 * n - 1), f.A)[1]
    U1 = poly_divmod(X(ring).shift(2 * n - 2) - f.B * V1, f.A)[0]
    assert (f.A * U1 + f.B * V1 - X(ring).shift(2 * n - 2)).is_zero()
    assert U1.degree == n - 1 and U1.is_monic()
    value = ring.neg(V1.coeff(n - 1))
    from .poly import laurent_expand

    s = laurent_expand(f.V, f.A, 2 * n)
    assert ring.is_zero(ring.sub(value, ring.neg(s[2 * n - 1])))
    return value


def eval_path(F: PointedRat, t) -> PointedRat:
    """Evaluate a k[T]-point at T = t; valid for every t since res is constant."""
    if not F.is_path:
        raise FieldError("eval_path expects a k[T] point")
    base = F.ring.base
    t = base.coerce(t)
    A = F.A.map_coeffs(lambda c: c.eval(t), base)
    B = F.B.map_coeffs(lambda c: c.eval(t), base)
    out = mk_pointed(A, B)
    assert base.is_zero(base.sub(out.res, F.res.constant()))
    return out


def path_of_point(f: PointedRat, kt: PolyRing) -> PointedRat:
    """The constant path at a field point."""
    lift = lambda c: const(f.ring, c)
    return PointedRat(
        kt,
        f.A.map_coeffs(lift, kt),
        f.B.map_coeffs(lift, kt),
        f.U.map_coeffs(lift, kt),
        f.V.map_coeffs(lift, kt),
        lift(f.res),
    )


def reverse_path(F: PointedRat) -> PointedRat:
    """Substitute T -> 1-T, swapping source and target."""
    kt = F.ring
    one_minus_t = Poly.make(kt.base, [kt.base.one, kt.base.neg(kt.base.one)])
    sub = lambda c: c.subst(one_minus_t)
    return PointedRat(
        kt,
        F.A.map_coeffs(sub, kt),
        F.B.map_coeffs(sub, kt),
        F.U.map_coeffs(sub, kt),
        F.V.map_coeffs(sub, kt),
        F.res,
    )


# ---------------------------------------------------------------------------
# Unpointed rational functions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class UnpointedRat:
    """A point of the scheme of unpointed degree-n functions: a homogeneous
    coefficient vector (a_0..a_n, b_0..b_n), scaled so its first nonzero
    coordinate is 1 (equality is equality in projective space)."""

    field: object
    n: int
    avec: tuple
    bvec: tuple

    def polys(self) -> tuple[Poly, Poly]:
        return Poly.make(self.field, self.avec), Poly.make(self.field, self.bvec)

    def __repr__(self):
        A, B = self.polys()
        return f"[{poly_str(A)} : {poly_str(B)}]"


def mk_unpointed(field, avec, bvec) -> UnpointedRat:
    n = len(avec) - 1
    if len(bvec) != n + 1:
        raise FieldError("coefficient vectors must share a length")
    avec = tuple(field.coerce(a) for a in avec)
    bvec = tuple(field.coerce(b) for b in bvec)
    coords = avec + bvec
    first = next((c for c in coords if not field.is_zero(c)), None)
    if first is None:
        raise FieldError("zero coefficient vector")
    inv = field.inv(first)
    avec = tuple(field.mul(inv, a) for a in avec)
    bvec = tuple(field.mul(inv, b) for b in bvec)
    if field.is_zero(avec[n]) and field.is_zero(bvec[n]):
        raise FieldError("true degree below n: not a point of the degree-n stratum")
    A = Poly.make(field, avec)
    B = Poly.make(field, bvec)
    res = resultant_nn(A, B, n)
    if field.is_zero(res):
        raise RejectedPoint(res)
    return UnpointedRat(field, n, avec, bvec)


def unpointed_of_pointed(f: PointedRat) -> UnpointedRat:
    n = f.n
    return mk_unpointed(
        f.ring,
        [f.A.coeff(i) for i in range(n + 1)],
        [f.B.coeff(i) for i in range(n + 1)],
    )


@dataclass(frozen=True)
class UnpointedMove:
    """Replayable normalization data: elementary factors of the Moebius matrix
    alpha_1 with alpha_1 . infinity = f(infinity).  The associated path is
    alpha(T)^{-1} . (A, B) with alpha(T) the T-scaled product of the factors."""

    field: object
    factors: tuple  # of ("12" | "21", scalar)
    source: UnpointedRat
    target: PointedRat


def sl2_elementary_factors(field, M) -> tuple:
    """Write an SL_2 matrix as a product of elementary matrices.

    Returns (("12", x) | ("21", x), ...) meaning [[1,x],[0,1]] / [[1,0],[x,1]];
    at most four factors.
    """
    a, b = M[0]
    c, d = M[1]
    det = field.sub(field.mul(a, d), field.mul(b, c))
    if not field.is_zero(field.sub(det, field.one)):
        raise FieldError("not an SL_2 matrix")
    if field.is_zero(c):
        # M = E21(-1) * (E21(1) * M), and the inner matrix has corner a != 0
        factors = [("21", field.neg(field.one))]
        a2, b2 = a, b
        c2, d2 = field.add(c, a), field.add(d, b)
    else:
        factors = []
        a2, b2, c2, d2 = a, b, c, d
    x = field.div(field.sub(a2, field.one), c2)
    y = field.div(field.sub(d2, field.one), c2)
    factors += [("12", x), ("21", c2), ("12", y)]
    out = tuple((kind, v) for kind, v in factors if not field.is_zero(v))
    assert _factors_to_matrix(field, out) == [[a, b], [c, d]]
    return out


def _factors_to_matrix(field, factors, scale=None):
    M = linalg.mat_identity(field, 2)
    for kind, v in factors:
        if scale is not None:
            v = field.mul(v, scale)
        E = linalg.mat_identity(field, 2)
        if kind == "12":
            E[0][1] = v
        else:
            E[1][0] = v
        M = linalg.mat_mul(field, M, E)
    return M


def normalize_unpointed(u: UnpointedRat) -> tuple[PointedRat, UnpointedMove]:
    """Slide an unpointed function to a pointed one along an SL_2(k[T]) path.

    Chooses alpha_1 in SL_2(k) with alpha_1 . infinity = [a_n : b_n] and at
    most three elementary factors; the inverse path applied to (A, B) is a
    valid unpointed homotopy from u to the pointed representative.
    """
    field = u.field
    n = u.n
    an, bn = u.avec[n], u.bvec[n]
    A, B = u.polys()
    if field.is_zero(bn):
        # already pointed up to scaling
        inv = field.inv(an)
        f = mk_pointed(A.scale(inv), B.scale(inv))
        move = UnpointedMove(field, (), u, f)
        return f, move
    if field.is_zero(an):
        alpha = [[field.zero, field.neg(field.inv(bn))], [bn, field.zero]]
    else:
        # [[a_n, 0], [b_n, 1/a_n]] sends infinity to [a_n : b_n]
        alpha = [[an, field.zero], [bn, field.inv(an)]]
    factors = sl2_elementary_factors(field, alpha)
    inv_alpha = [[alpha[1][1], field.neg(alpha[0][1])], [field.neg(alpha[1][0]), alpha[0][0]]]
    A2 = A.scale(inv_alpha[0][0]) + B.scale(inv_alpha[0][1])
    B2 = A.scale(inv_alpha[1][0]) + B.scale(inv_alpha[1][1])
    lead = A2.coeff(n)
    scl = field.inv(lead)
    f = mk_pointed(A2.scale(scl), B2.scale(scl))
    move = UnpointedMove(field, factors, u, f)
    return f, move
