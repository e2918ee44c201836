"""Homotopy invariants and equivalence decisions.

A pointed rational function is classified by its degree, the stable Witt
class of its Bezout form, and the exact determinant of that form (carried
here as the exact resultant, from which det = (-1)^{n(n-1)/2} res).  The
pair (Witt class, determinant) ranges over the fiber product cut out by
the discriminant, which is the coherence condition asserted below.

Unpointed classes reduce the determinant further modulo 2n-th powers;
maps to higher-dimensional projective spaces are classified by the degree
alone.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .bezout_hankel import bezout_form
from .fields import FieldError, PrimeField, Rationals, factorize
from .poly import Poly, PolyRing, poly_xgcd, const, zero
from .quadform import (
    WittInvariant,
    stable_equal,
    stable_invariant,
    witt_sum,
    witt_tensor,
)
from .ratmap import PointedRat, UnpointedRat, normalize_unpointed


def _detbez_sign(n: int) -> int:
    return -1 if (n * (n - 1) // 2) % 2 else 1


@dataclass(frozen=True)
class PointedInvariant:
    """Degree, stable Witt class of the Bezout form, exact resultant."""

    n: int
    witt: WittInvariant | None
    res: object
    field: object

    def detbez(self):
        """Exact determinant of the Bezout form."""
        if self.n == 0:
            return self.field.one
        v = self.res
        return self.field.neg(v) if _detbez_sign(self.n) < 0 else v

    def _key(self):
        witt_key = None if self.witt is None else self.witt._key()
        return (self.n, witt_key, self.res)

    def __eq__(self, other):
        return (
            isinstance(other, PointedInvariant)
            and self.field == other.field
            and self._key() == other._key()
        )

    def __hash__(self):
        return hash(self._key())


def pointed_invariant(f: PointedRat) -> PointedInvariant:
    field = f.ring
    if isinstance(field, PolyRing):
        raise FieldError("invariants are taken over the base field")
    if f.n == 0:
        return PointedInvariant(0, None, field.one, field)
    return _pointed_invariant_cached(f)


@lru_cache(maxsize=65536)
def _pointed_invariant_cached(f: PointedRat) -> PointedInvariant:
    field = f.ring
    witt = stable_invariant(bezout_form(f))
    inv = PointedInvariant(f.n, witt, f.res, field)
    # coherence: the form's discriminant matches the exact determinant
    assert field.square_class(witt.disc) == field.square_class(inv.detbez()) or (
        isinstance(field, PrimeField) and field.p == 2
    )
    return inv


def sum_invariant(i1: PointedInvariant, i2: PointedInvariant) -> PointedInvariant:
    """Invariant of an addition of functions: Witt sum, determinant product.

    On resultants the product twists by (-1)^{n1 n2} (the determinant of
    the Bezout form is the multiplicative coordinate).
    """
    if i1.field != i2.field:
        raise FieldError("invariants over different fields")
    field = i1.field
    if i1.n == 0:
        return i2
    if i2.n == 0:
        return i1
    res = field.mul(i1.res, i2.res)
    if (i1.n * i2.n) % 2:
        res = field.neg(res)
    return PointedInvariant(i1.n + i2.n, witt_sum(i1.witt, i2.witt), res, field)


def compose_invariant(i1: PointedInvariant, i2: PointedInvariant) -> PointedInvariant:
    """Invariant of a composition: tensor the forms; on determinants,
    d1^{rank b2} * d2^{(rank b1)^2}."""
    if i1.field != i2.field:
        raise FieldError("invariants over different fields")
    field = i1.field
    n1, n2 = i1.n, i2.n
    n3 = n1 * n2
    d1, d2 = i1.detbez(), i2.detbez()
    d3 = field.mul(_power(field, d1, n2), _power(field, d2, n1 * n1))
    if n3 == 0:
        return PointedInvariant(0, None, field.one, field)
    witt = witt_tensor(i1.witt, i2.witt)
    res3 = field.mul(d3, field.from_int(_detbez_sign(n3)))
    return PointedInvariant(n3, witt, res3, field)


def _power(field, a, e: int):
    acc = field.one
    for _ in range(e):
        acc = field.mul(acc, a)
    return acc


def pointed_equiv(f: PointedRat, g: PointedRat) -> bool:
    """Same naive homotopy class iff all invariants agree."""
    if f.ring != g.ring:
        raise FieldError("points over different fields")
    return pointed_invariant(f) == pointed_invariant(g)


# ---------------------------------------------------------------------------
# Unpointed classes
# ---------------------------------------------------------------------------


def res_class_mod_2n(field, r, n: int):
    """Canonical representative of r modulo 2n-th powers of units."""
    if isinstance(field, Rationals):
        r = field.coerce(r)
        sign = -1 if r < 0 else 1
        exps: dict[int, int] = {}
        for p, e in factorize(abs(r.numerator)).items():
            exps[p] = exps.get(p, 0) + e
        for p, e in factorize(r.denominator).items():
            exps[p] = exps.get(p, 0) - e
        out = Fraction(sign)
        for p in sorted(exps):
            out *= Fraction(p) ** (exps[p] % (2 * n))
        return out
    if field.p == 2:
        return 1
    d = _gcd_int(2 * n, field.p - 1)
    e = field.dlog(r) % d
    return pow(field.generator(), e, field.p)


def _gcd_int(a, b):
    while b:
        a, b = b, a % b
    return a


@dataclass(frozen=True)
class UnpointedInvariant:
    n: int
    witt: WittInvariant | None
    res_class: object
    field: object

    def _key(self):
        witt_key = None if self.witt is None else self.witt._key()
        return (self.n, witt_key, self.res_class)

    def __eq__(self, other):
        return (
            isinstance(other, UnpointedInvariant)
            and self.field == other.field
            and self._key() == other._key()
        )

    def __hash__(self):
        return hash(self._key())


def unpointed_invariant(u: UnpointedRat) -> UnpointedInvariant:
    f, _ = normalize_unpointed(u)
    base = pointed_invariant(f)
    if base.n == 0:
        return UnpointedInvariant(0, None, base.field.one, base.field)
    return UnpointedInvariant(
        base.n, base.witt, res_class_mod_2n(base.field, base.res, base.n), base.field
    )


def unpointed_equiv(u1: UnpointedRat, u2: UnpointedRat) -> bool:
    if u1.field != u2.field:
        raise FieldError("points over different fields")
    return unpointed_invariant(u1) == unpointed_invariant(u2)


# ---------------------------------------------------------------------------
# Maps to higher projective spaces
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PdPoint:
    """A pointed map to d-dimensional projective space: monic A and a
    d-tuple of B's generating the unit ideal, certified by cofactors."""

    ring: object
    d: int
    A: Poly
    Bs: tuple
    cofactors: tuple  # (c_0, ..., c_d) with A c_0 + sum B_i c_i = 1

    @property
    def n(self):
        return self.A.degree

    def key(self):
        return (self.A.coeffs, tuple(B.coeffs for B in self.Bs))


def mk_pd(A: Poly, Bs, cofactors=None) -> PdPoint:
    """Validate and build a point; over a field cofactors are constructed
    by iterated extended gcd when not supplied."""
    ring = A.ring
    Bs = tuple(Bs)
    d = len(Bs)
    if d < 2:
        raise FieldError("maps to P^d need d >= 2")
    n = A.degree
    if n < 0 or not (A.is_monic() or (n == 0 and not A.is_zero())):
        raise FieldError("A must be monic")
    for B in Bs:
        if B.ring != ring:
            raise FieldError("mixed rings")
        if B.degree >= n and not (n == 0 and B.is_zero()):
            raise FieldError("deg B_i must be below deg A")
    if cofactors is None:
        if isinstance(ring, PolyRing):
            raise FieldError("k[T] points need explicit cofactors")
        cofactors = _field_cofactors(A, Bs)
    cofactors = tuple(cofactors)
    total = A * cofactors[0]
    for B, c in zip(Bs, cofactors[1:]):
        total = total + B * c
    if not (total - const(ring, ring.one)).is_zero():
        raise FieldError("cofactors do not certify unimodularity")
    return PdPoint(ring, d, A, Bs, cofactors)


def _field_cofactors(A: Poly, Bs):
    ring = A.ring
    if A.degree == 0:
        return (const(ring, ring.inv(A.constant())),) + tuple(
            zero(ring) for _ in Bs
        )
    g = A
    combo = [const(ring, ring.one)] + [zero(ring)] * len(Bs)
    for idx, B in enumerate(Bs):
        if g.degree == 0:
            break
        if B.is_zero():
            continue
        g2, s, t = poly_xgcd(g, B)
        combo = [c * s for c in combo]
        combo[1 + idx] = combo[1 + idx] + t
        g = g2
    if g.degree != 0:
        raise FieldError("not unimodular: the ideal (A, B_1..B_d) is proper")
    # g is the monic gcd of degree 0, i.e. exactly 1
    return tuple(combo)


def pd_equiv(p1: PdPoint, p2: PdPoint) -> bool:
    """Degree is a complete invariant for d >= 2."""
    if p1.ring != p2.ring:
        raise FieldError("points over different fields")
    if p1.d != p2.d:
        raise FieldError("different target dimensions")
    if p1.d < 2:
        raise FieldError("d >= 2 required; d = 1 is the main machinery")
    return p1.n == p2.n
