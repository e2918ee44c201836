"""Constructive homotopy certificates and their exact verifier.

A certificate is a chain of k[T]-points (pointed rational paths, unpointed
projective paths, or paths of maps to P^d) whose endpoints match up: the
T=1 evaluation of each step equals the T=0 evaluation of the next.  The
verifier re-checks every step's validity from scratch (constant unit
resultant, or an explicit unimodularity identity), so a third party can
re-verify a serialized certificate without trusting its generator.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import linalg
from .bezout_hankel import SymMatrix, f2_iso_inv
from .classify import (
    PdPoint,
    PointedInvariant,
    mk_pd,
    pointed_invariant,
    unpointed_invariant,
)
from .fields import FieldError, PrimeField, Rationals, factorize
from .poly import (
    Poly,
    PolyRing,
    X,
    const,
    factor_fp,
    poly_divmod,
    poly_gcd,
    poly_xgcd,
    resultant_nn,
    zero,
)
from .quadform import stable_equal
from .ratmap import (
    PointedRat,
    UnpointedRat,
    cf_expand,
    eval_path,
    identity_point,
    mk_pointed,
    mk_unpointed,
    monomial_sum,
    normalize_unpointed,
    oplus,
    path_of_point,
    poly_point,
    reverse_path,
    sl2_elementary_factors,
    x_over,
)


class Exhausted:
    """Search budget exhausted; the decision stands but no certificate."""

    def __repr__(self):
        return "Exhausted"


EXHAUSTED = Exhausted()


@dataclass(frozen=True)
class NotEquivalent:
    """Decision: not homotopic, with the differing invariant components."""

    reason: str

    def __bool__(self):
        return False


@dataclass(frozen=True)
class UnpointedStep:
    """A k[T]-point of the unpointed scheme: homogeneous pair up to scaling."""

    kt: object
    n: int
    A: Poly
    B: Poly


@dataclass(frozen=True)
class Certificate:
    kind: str  # "pointed" | "unpointed" | "pd"
    field: object
    steps: tuple
    source: object
    target: object


@dataclass(frozen=True)
class VerifyResult:
    ok: bool
    reason: str = "ok"
    step: int | None = None

    def __bool__(self):
        return self.ok


def _step_endpoints(kind, step, field):
    if kind == "pointed":
        return eval_path(step, 0), eval_path(step, 1)
    if kind == "unpointed":
        outs = []
        for t in (0, 1):
            tv = field.coerce(t)
            av = [step.A.coeff(i).eval(tv) for i in range(step.n + 1)]
            bv = [step.B.coeff(i).eval(tv) for i in range(step.n + 1)]
            outs.append(mk_unpointed(field, av, bv))
        return outs[0], outs[1]
    if kind == "pd":
        outs = []
        for t in (0, 1):
            tv = field.coerce(t)
            A = step.A.map_coeffs(lambda c: c.eval(tv), field)
            Bs = [B.map_coeffs(lambda c: c.eval(tv), field) for B in step.Bs]
            outs.append(mk_pd(A, Bs))
        return outs[0], outs[1]
    raise FieldError(f"unknown certificate kind {kind}")


def _step_valid(kind, step, field):
    kt = PolyRing(field)
    if kind == "pointed":
        A, B = step.A, step.B
        n = A.degree
        if not A.is_monic() or (B.degree >= n and n > 0):
            return "step is not a monic pair"
        res = resultant_nn(A, B, n) if n > 0 else kt.one
        if not res.is_constant() or res.is_zero():
            return "non-constant resultant"
        return None
    if kind == "unpointed":
        if step.n == 0:
            # res_{0,0} is identically 1; validity is the non-vanishing of
            # the coefficient vector for every parameter value
            a = step.A.coeff(0)
            b = step.B.coeff(0)
            g = poly_gcd(a, b)
            if g.is_zero() or g.degree > 0:
                return "coefficient vector vanishes along the path"
            return None
        res = resultant_nn(step.A, step.B, step.n)
        if not res.is_constant() or res.is_zero():
            return "non-constant resultant"
        return None
    if kind == "pd":
        A = step.A
        n = A.degree
        if not A.is_monic():
            return "A is not monic"
        for B in step.Bs:
            if B.degree >= n and n > 0:
                return "denominator degree too large"
        total = A * step.cofactors[0]
        for B, c in zip(step.Bs, step.cofactors[1:]):
            total = total + B * c
        if not (total - const(kt, kt.one)).is_zero():
            return "cofactor identity fails"
        return None
    return f"unknown kind {kind}"


def _points_equal(kind, p, q) -> bool:
    if kind == "pointed":
        return p.A == q.A and p.B == q.B
    if kind == "unpointed":
        return p.avec == q.avec and p.bvec == q.bvec
    if kind == "pd":
        return p.A == q.A and p.Bs == q.Bs
    return False


def verify(cert: Certificate) -> VerifyResult:
    """Mechanically re-check a certificate: every step is a valid k[T]-point
    and the endpoints chain from source to target."""
    field = cert.field
    cur = cert.source
    for idx, step in enumerate(cert.steps):
        problem = _step_valid(cert.kind, step, field)
        if problem:
            return VerifyResult(False, f"{problem} at step {idx}", idx)
        try:
            s0, s1 = _step_endpoints(cert.kind, step, field)
        except (FieldError, ValueError) as exc:
            return VerifyResult(False, f"invalid endpoint at step {idx}: {exc}", idx)
        if not _points_equal(cert.kind, s0, cur):
            return VerifyResult(False, f"endpoint mismatch at step {idx}", idx)
        cur = s1
    if not _points_equal(cert.kind, cur, cert.target):
        return VerifyResult(False, "target mismatch", len(cert.steps))
    return VerifyResult(True)


def reverse_step(kind, step, field):
    if kind == "pointed":
        return reverse_path(step)
    one_minus_t = Poly.make(field, [field.one, field.neg(field.one)])
    sub = lambda c: c.subst(one_minus_t)
    kt = PolyRing(field)
    if kind == "unpointed":
        return UnpointedStep(
            kt, step.n, step.A.map_coeffs(sub, kt), step.B.map_coeffs(sub, kt)
        )
    if kind == "pd":
        return PdPoint(
            kt,
            step.d,
            step.A.map_coeffs(sub, kt),
            tuple(B.map_coeffs(sub, kt) for B in step.Bs),
            tuple(c.map_coeffs(sub, kt) for c in step.cofactors),
        )
    raise FieldError(f"unknown kind {kind}")


def reverse_certificate(cert: Certificate) -> Certificate:
    """Substitute T -> 1-T in every step and flip the chain."""
    steps = tuple(
        reverse_step(cert.kind, s, cert.field) for s in reversed(cert.steps)
    )
    return Certificate(cert.kind, cert.field, steps, cert.target, cert.source)


def concat_certificates(a: Certificate, b: Certificate) -> Certificate:
    assert a.kind == b.kind and a.field == b.field
    assert _points_equal(a.kind, a.target, b.source)
    return Certificate(a.kind, a.field, a.steps + b.steps, a.source, b.target)


# ---------------------------------------------------------------------------
# Normal-form certificates for pointed functions
# ---------------------------------------------------------------------------


def _fold(field, slots):
    acc = identity_point(field)
    for g in slots:
        acc = oplus(acc, g)
    return acc


def _embed(kt, left, G, right):
    """left (+) G (+) right with constant companions, as one k[T]-step."""
    F = path_of_point(_fold(G.ring.base, left), kt) if left else identity_point(kt)
    F = oplus(F, G)
    if right:
        F = oplus(F, path_of_point(_fold(G.ring.base, right), kt))
    return F


def _interp_poly(kt, P: Poly, Q: Poly) -> Poly:
    """(1-T) P + T Q over k[T] for field polynomials P, Q of equal arity."""
    field = P.ring
    t = Poly.make(field, [field.zero, field.one])
    onem = Poly.make(field, [field.one, field.neg(field.one)])
    m = max(P.degree, Q.degree)
    return Poly.make(
        kt,
        [onem.scale(P.coeff(i)) + t.scale(Q.coeff(i)) for i in range(m + 1)],
    )


def normal_form_cert(f: PointedRat):
    """A certificate from f to its monomial normal form [u_1, ..., u_n].

    Follows the continued-fraction decomposition: each polynomial block is
    slid to its leading monomial, each monomial X^d/u is slid to
    X^d/(X^{d-1}+u) which splits into blocks of smaller degree; degree-1
    blocks normalize to X/u.  Every step is a single k[T]-point embedded in
    the full-degree sum with constant companions.  Results are memoized
    (everything involved is immutable).
    """
    return _normal_form_cert_cached(f)


@lru_cache(maxsize=None)
def _normal_form_cert_cached(f: PointedRat):
    field = f.ring
    if isinstance(field, PolyRing):
        raise FieldError("normal forms are for field points")
    kt = PolyRing(field)
    if f.n == 0:
        return (), Certificate("pointed", field, (), f, f)
    slots = [poly_point(P, b) for P, b in cf_expand(f)]
    assert _fold(field, slots).A == f.A and _fold(field, slots).B == f.B
    steps = []

    def push(i, G, new_slots_i):
        src = _fold(field, slots)
        step = _embed(kt, slots[:i], G, slots[i + 1 :])
        slots[i : i + 1] = new_slots_i
        tgt = _fold(field, slots)
        assert eval_path(step, 0).A == src.A and eval_path(step, 0).B == src.B
        assert eval_path(step, 1).A == tgt.A and eval_path(step, 1).B == tgt.B
        steps.append(step)

    guard = 0
    while True:
        guard += 1
        assert guard < 10_000
        i = next((i for i, g in enumerate(slots) if g.n > 1), None)
        if i is None:
            break
        g = slots[i]
        d = g.n
        u = g.B.constant()
        if any(not field.is_zero(g.A.coeff(j)) for j in range(d)):
            # slide the polynomial to its leading monomial
            AT = Poly.make(
                kt,
                [
                    _interp_scalar(kt, g.A.coeff(j), field.zero)
                    for j in range(d)
                ]
                + [const(field, field.one)],
            )
            G = mk_pointed(AT, const(kt, const(field, u)))
            push(i, G, [poly_point(X(field).shift(d - 1), u)])
        else:
            # X^d/u -> X^d/(X^{d-1} + u), then split off the lead
            BT = Poly.make(
                kt,
                [const(field, u)]
                + [zero(field)] * (d - 2)
                + [Poly.make(field, [field.zero, field.one])],
            )
            G = mk_pointed(
                Poly.make(kt, [zero(field)] * d + [const(field, field.one)]), BT
            )
            target = mk_pointed(
                X(field).shift(d - 1),
                Poly.make(field, [u] + [field.zero] * (d - 2) + [field.one]),
            )
            push(i, G, [poly_point(P, b) for P, b in cf_expand(target)])
    # degree-1 slots: normalize (X+a)/u to X/u
    for i, g in enumerate(list(slots)):
        a = g.A.coeff(0)
        u = g.B.constant()
        if not field.is_zero(a):
            AT = Poly.make(kt, [_interp_scalar(kt, a, field.zero), const(field, field.one)])
            G = mk_pointed(AT, const(kt, const(field, u)))
            push(i, G, [x_over(field, u)])
    units = tuple(g.B.constant() for g in slots)
    target = monomial_sum(field, units)
    cert = Certificate("pointed", field, tuple(steps), f, target)
    return units, cert


def _interp_scalar(kt, a, b):
    """(1-T) a + T b as an element of k[T]."""
    field = kt.base
    return Poly.make(field, [a, field.sub(b, a)])


# ---------------------------------------------------------------------------
# Chains of elementary SL_2 moves between diagonal forms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DiagMove:
    """Replace the adjacent pair (a, b) at positions (i, i+1) by
    (c, ab/c), witnessed by a x^2 + b y^2 = c."""

    i: int
    c: object
    x: object
    y: object


def move_matrix(field, a, b, mv: DiagMove):
    """The SL_2 matrix P with P^T diag(a, b) P = diag(c, ab/c)."""
    c = mv.c
    x, y = mv.x, mv.y
    val = field.add(field.mul(a, field.mul(x, x)), field.mul(b, field.mul(y, y)))
    assert field.is_zero(field.sub(val, c))
    cinv = field.inv(c)
    return [
        [x, field.neg(field.mul(b, field.mul(y, cinv)))],
        [y, field.mul(a, field.mul(x, cinv))],
    ]


def apply_move(field, units, mv: DiagMove):
    units = list(units)
    a, b = units[mv.i], units[mv.i + 1]
    units[mv.i] = mv.c
    units[mv.i + 1] = field.div(field.mul(a, b), mv.c)
    return tuple(units)


def invert_move(field, units_before, mv: DiagMove) -> DiagMove:
    """The move undoing mv, applied at the same position."""
    a, b = units_before[mv.i], units_before[mv.i + 1]
    c = mv.c
    cinv = field.inv(c)
    return DiagMove(
        mv.i, a, field.mul(a, field.mul(mv.x, cinv)), field.neg(mv.y)
    )


def _represent(field, a, b, c, budget):
    """Find (x, y) with a x^2 + b y^2 = c, or None."""
    if isinstance(field, PrimeField):
        for x in field.elements():
            lhs = field.sub(c, field.mul(a, field.mul(x, x)))
            for y in field.elements():
                if field.is_zero(field.sub(field.mul(b, field.mul(y, y)), lhs)):
                    return x, y
        return None
    from .quadform import _sqrt_exact

    for x in _rational_grid(budget):
        y2 = (c - a * x * x) / b
        if y2 < 0:
            continue
        y = _sqrt_exact(field, y2)
        if y is not None:
            return x, y
    return None


def _rational_grid(budget):
    height = max(4, min(50, budget // 2))
    vals = {Fraction(0)}
    for p in range(1, height):
        for q in range(1, height):
            vals.add(Fraction(p, q))
            vals.add(Fraction(-p, q))
    return sorted(vals, key=lambda v: (abs(v.numerator) + v.denominator, v))


def diag_chain(field, us, vs, budget: int = 64):
    """A chain of elementary SL_2 moves from us to vs, or EXHAUSTED.

    Over a finite field the state space of unit tuples is finite and every
    unit is represented by every rank-2 form, so breadth-first search is
    complete.  Over Q the moves are pair rescalings, swaps, and the Witt
    combination (a, b) -> (a+b, ab/(a+b)), searched with bounded height.
    """
    out = _diag_chain_cached(field, tuple(us), tuple(vs), budget)
    return out if out is EXHAUSTED else list(out)


@lru_cache(maxsize=None)
def _diag_chain_cached(field, us, vs, budget):
    n = len(us)
    if us == vs:
        return ()
    if n != len(vs):
        raise FieldError("tuples of different lengths")
    prod_u = prod_v = field.one
    for a in us:
        prod_u = field.mul(prod_u, a)
    for a in vs:
        prod_v = field.mul(prod_v, a)
    if not field.is_zero(field.sub(prod_u, prod_v)):
        raise FieldError("determinants differ: no SL chain can exist")
    if isinstance(field, PrimeField):
        out = _diag_chain_bfs_fp(field, us, vs)
    else:
        out = _diag_chain_q(field, us, vs, budget)
    return out if out is EXHAUSTED else tuple(out)


def _diag_chain_bfs_fp(field, us, vs):
    from collections import deque

    units = list(field.units())
    rep_cache: dict = {}

    def witness(a, b, c):
        key = (a, b, c)
        if key not in rep_cache:
            rep_cache[key] = _represent(field, a, b, c, 0)
        return rep_cache[key]

    frontier = deque([us])
    parent = {us: None}
    while frontier:
        state = frontier.popleft()
        if state == vs:
            break
        for i in range(len(us) - 1):
            a, b = state[i], state[i + 1]
            ab = field.mul(a, b)
            for c in units:
                nxt = list(state)
                nxt[i] = c
                nxt[i + 1] = field.div(ab, c)
                nxt = tuple(nxt)
                if nxt in parent:
                    continue
                w = witness(a, b, c)
                if w is None:
                    continue
                parent[nxt] = (state, DiagMove(i, c, w[0], w[1]))
                frontier.append(nxt)
    if vs not in parent:
        return EXHAUSTED
    moves = []
    cur = vs
    while parent[cur] is not None:
        prev, mv = parent[cur]
        moves.append(mv)
        cur = prev
    moves.reverse()
    return moves


def _diag_chain_q(field, us, vs, budget):
    from collections import deque

    def candidates(state, i):
        a, b = state[i], state[i + 1]
        outs = []
        s = field.add(a, b)
        if not field.is_zero(s):
            outs.append(s)
        outs.append(b)
        for tgt in vs:
            outs.append(tgt)
        for lam in (2, 3, 5):
            for tgt in (vs[i], vs[i + 1]):
                outs.append(field.mul(tgt, Fraction(lam * lam)))
                outs.append(field.mul(tgt, Fraction(1, lam * lam)))
        seen = []
        for c in outs:
            if not field.is_zero(c) and c not in seen:
                seen.append(c)
        return seen

    frontier = deque([us])
    parent = {us: None}
    expansions = 0
    while frontier and expansions < budget:
        state = frontier.popleft()
        if state == vs:
            break
        expansions += 1
        for i in range(len(us) - 1):
            a, b = state[i], state[i + 1]
            for c in candidates(state, i):
                w = _represent(field, a, b, c, budget)
                if w is None:
                    continue
                nxt = list(state)
                nxt[i] = c
                nxt[i + 1] = field.div(field.mul(a, b), c)
                nxt = tuple(nxt)
                if nxt in parent:
                    continue
                parent[nxt] = (state, DiagMove(i, c, w[0], w[1]))
                frontier.append(nxt)
    if vs not in parent:
        return EXHAUSTED
    moves = []
    cur = vs
    while parent[cur] is not None:
        prev, mv = parent[cur]
        moves.append(mv)
        cur = prev
    moves.reverse()
    return moves


def lift_move_to_step(field, units, mv: DiagMove, kt=None):
    """One F_n(k[T]) step realizing an SL_2 move on [u_1, ..., u_n].

    The move's matrix is decomposed into elementary matrices, T-scaled into
    a path of symmetric 2x2 matrices from diag(b, a) (the Bezout form of
    the pair block), transported through the degree-2 chart inverse, and
    embedded at position i with constant companions.
    """
    kt = kt or PolyRing(field)
    i = mv.i
    a, b = units[i], units[i + 1]
    P = move_matrix(field, a, b, mv)
    J = [[field.zero, field.one], [field.one, field.zero]]
    Pt = linalg.mat_mul(field, J, linalg.mat_mul(field, P, J))
    factors = sl2_elementary_factors(field, Pt)
    PT = linalg.mat_identity(kt, 2)
    for kind, v in factors:
        E = linalg.mat_identity(kt, 2)
        lamT = Poly.make(field, [field.zero, v])
        if kind == "12":
            E[0][1] = lamT
        else:
            E[1][0] = lamT
        PT = linalg.mat_mul(kt, PT, E)
    D = [[const(field, b), kt.zero], [kt.zero, const(field, a)]]
    ST = linalg.mat_mul(kt, linalg.mat_transpose(PT), linalg.mat_mul(kt, D, PT))
    G = f2_iso_inv(SymMatrix.make(kt, ST), kt.zero)
    pair_src = monomial_sum(field, (a, b))
    after = apply_move(field, units, mv)
    pair_tgt = monomial_sum(field, (after[i], after[i + 1]))
    assert eval_path(G, 0).A == pair_src.A and eval_path(G, 0).B == pair_src.B
    assert eval_path(G, 1).A == pair_tgt.A and eval_path(G, 1).B == pair_tgt.B
    left = [x_over(field, u) for u in units[:i]]
    right = [x_over(field, u) for u in units[i + 2 :]]
    return _embed(kt, left, G, right), after


def lift_chain_to_cert(field, us, chain) -> Certificate:
    """Certificate from [u_1..u_n] to the chain's end tuple."""
    return _lift_chain_cached(field, tuple(us), tuple(chain))


@lru_cache(maxsize=None)
def _lift_chain_cached(field, us, chain) -> Certificate:
    kt = PolyRing(field)
    cur = tuple(us)
    steps = []
    for mv in chain:
        step, cur = lift_move_to_step(field, cur, mv, kt)
        steps.append(step)
    return Certificate(
        "pointed",
        field,
        tuple(steps),
        monomial_sum(field, us),
        monomial_sum(field, cur),
    )


# ---------------------------------------------------------------------------
# End-to-end connection
# ---------------------------------------------------------------------------


def _invariant_diff(i1: PointedInvariant, i2: PointedInvariant) -> str:
    parts = []
    if i1.n != i2.n:
        parts.append(f"degree {i1.n} vs {i2.n}")
    else:
        if not i1.field.is_zero(i1.field.sub(i1.res, i2.res)):
            parts.append(f"resultant {i1.field.format(i1.res)} vs {i2.field.format(i2.res)}")
        if i1.witt is not None and i2.witt is not None and not stable_equal(i1.witt, i2.witt):
            parts.append("stable Witt class differs")
    return "; ".join(parts) or "invariants differ"


def connect(f: PointedRat, g: PointedRat, budget: int = 64):
    """A verified certificate f ~ g, or NotEquivalent / EXHAUSTED.

    Complete over finite fields at desk scale; over Q the chain search is
    budgeted and reports EXHAUSTED when it cannot realize the (correct)
    equivalence decision constructively.
    """
    if f.ring != g.ring:
        raise FieldError("points over different fields")
    field = f.ring
    if f.A == g.A and f.B == g.B:
        return Certificate("pointed", field, (), f, g)
    i1, i2 = pointed_invariant(f), pointed_invariant(g)
    if i1 != i2:
        return NotEquivalent(_invariant_diff(i1, i2))
    us, cert_f = normal_form_cert(f)
    vs, cert_g = normal_form_cert(g)
    if us == vs:
        middle = None
    else:
        chain = diag_chain(field, us, vs, budget)
        if chain is EXHAUSTED:
            return EXHAUSTED
        middle = lift_chain_to_cert(field, us, chain)
        # the chain ends at vs exactly
        assert _points_equal("pointed", middle.target, cert_g.target)
    out = cert_f
    if middle is not None:
        out = concat_certificates(out, middle)
    out = concat_certificates(out, reverse_certificate(cert_g))
    return out


# ---------------------------------------------------------------------------
# Unpointed certificates
# ---------------------------------------------------------------------------


def _pointed_step_to_unpointed(step: PointedRat) -> UnpointedStep:
    kt = step.ring
    n = step.n
    return UnpointedStep(kt, n, step.A, step.B)


def _normalization_step(move, kt) -> UnpointedStep:
    """The path alpha(T)^{-1} . (A, B) from the unpointed source to its
    pointed representative.  alpha(T)^{-1} is the reversed product of the
    T-scaled elementary factors with negated parameters."""
    field = kt.base
    u = move.source
    A, B = u.polys()
    AT = A.map_coeffs(lambda c: const(field, c), kt)
    BT = B.map_coeffs(lambda c: const(field, c), kt)
    inv = linalg.mat_identity(kt, 2)
    for kind, v in reversed(move.factors):
        E = linalg.mat_identity(kt, 2)
        lamT = Poly.make(field, [field.zero, field.neg(v)])
        if kind == "12":
            E[0][1] = lamT
        else:
            E[1][0] = lamT
        inv = linalg.mat_mul(kt, inv, E)
    a11, a12 = inv[0]
    a21, a22 = inv[1]
    A2 = AT.scale(a11) + BT.scale(a12)
    B2 = AT.scale(a21) + BT.scale(a22)
    return UnpointedStep(kt, u.n, A2, B2)


def _lambda_witness(field, r1, r2, n):
    """lambda with r1 = r2 / lambda^{2n} (exists when the 2n-power classes
    of r1 and r2 agree)."""
    if isinstance(field, Rationals):
        ratio = field.div(r2, r1)
        if ratio <= 0:
            return None
        lam = Fraction(1)
        num = ratio.numerator
        den = ratio.denominator
        for p, e in factorize(num).items():
            if e % (2 * n):
                return None
            lam *= Fraction(p) ** (e // (2 * n))
        for p, e in factorize(den).items():
            if e % (2 * n):
                return None
            lam /= Fraction(p) ** (e // (2 * n))
        return lam
    if field.p == 2:
        return 1
    e = (field.dlog(r2) - field.dlog(r1)) % (field.p - 1)
    d = _gcd_int(2 * n, field.p - 1)
    if e % d:
        return None
    m = (field.p - 1) // d
    j = (e // d) * pow((2 * n) // d, -1, m) % m
    return pow(field.generator(), j, field.p)


def _gcd_int(a, b):
    while b:
        a, b = b, a % b
    return a


def scale_pointed(f: PointedRat, lam) -> PointedRat:
    """lambda^2 f as a pointed pair: (A, B / lambda^2)."""
    field = f.ring
    lam2 = field.mul(lam, lam)
    return mk_pointed(f.A, f.B.scale(field.inv(lam2)))


def _scaling_step(f: PointedRat, lam, kt) -> UnpointedStep:
    """Path from f to lambda^2 f: T-scaled elementary factors of
    diag(lambda, 1/lambda) applied to (A, B)."""
    field = f.ring
    M = [[lam, field.zero], [field.zero, field.inv(lam)]]
    factors = sl2_elementary_factors(field, M)
    mat = linalg.mat_identity(kt, 2)
    for kind, v in factors:
        E = linalg.mat_identity(kt, 2)
        lamT = Poly.make(field, [field.zero, v])
        if kind == "12":
            E[0][1] = lamT
        else:
            E[1][0] = lamT
        mat = linalg.mat_mul(kt, mat, E)
    AT = f.A.map_coeffs(lambda c: const(field, c), kt)
    BT = f.B.map_coeffs(lambda c: const(field, c), kt)
    A2 = AT.scale(mat[0][0]) + BT.scale(mat[0][1])
    B2 = AT.scale(mat[1][0]) + BT.scale(mat[1][1])
    return UnpointedStep(kt, f.n, A2, B2)


def unpointed_connect(u1: UnpointedRat, u2: UnpointedRat, budget: int = 64):
    """Certificate for unpointed equivalence, via a lambda^2 rescaling
    witness and a pointed certificate."""
    if u1.field != u2.field:
        raise FieldError("points over different fields")
    field = u1.field
    inv1, inv2 = unpointed_invariant(u1), unpointed_invariant(u2)
    if inv1 != inv2:
        return NotEquivalent("unpointed invariants differ")
    kt = PolyRing(field)
    f1, mv1 = normalize_unpointed(u1)
    f2, mv2 = normalize_unpointed(u2)
    n = f1.n
    if n == 0:
        # constant maps: one straight-line path (distinct projective points
        # are never anti-parallel, so the interpolant never vanishes)
        if u1.avec == u2.avec and u1.bvec == u2.bvec:
            return Certificate("unpointed", field, (), u1, u2)
        step = UnpointedStep(
            kt,
            0,
            Poly.make(kt, [_interp_scalar(kt, u1.avec[0], u2.avec[0])]),
            Poly.make(kt, [_interp_scalar(kt, u1.bvec[0], u2.bvec[0])]),
        )
        return Certificate("unpointed", field, (step,), u1, u2)
    lam = _lambda_witness(field, f1.res, f2.res, n)
    if lam is None:
        return NotEquivalent("no rescaling witness exists")
    g2 = scale_pointed(f2, lam)
    assert pointed_invariant(f1) == pointed_invariant(g2)
    pcert = connect(f1, g2, budget)
    if pcert is EXHAUSTED or isinstance(pcert, NotEquivalent):
        return pcert
    steps = []
    if mv1.factors:
        steps.append(_normalization_step(mv1, kt))
    steps += [_pointed_step_to_unpointed(s) for s in pcert.steps]
    lam2 = field.mul(lam, lam)
    if not field.is_zero(field.sub(lam2, field.one)):
        steps.append(reverse_step("unpointed", _scaling_step(f2, lam, kt), field))
    if mv2.factors:
        steps.append(
            reverse_step("unpointed", _normalization_step(mv2, kt), field)
        )
    return Certificate("unpointed", field, tuple(steps), u1, u2)


def oplus_constant(cert: Certificate, g: PointedRat, side: str = "right") -> Certificate:
    """Sum a pointed certificate with a constant function on one side."""
    assert cert.kind == "pointed"
    field = cert.field
    kt = PolyRing(field)
    gpath = path_of_point(g, kt)
    if side == "right":
        steps = tuple(oplus(s, gpath) for s in cert.steps)
        src = oplus(cert.source, g)
        tgt = oplus(cert.target, g)
    else:
        steps = tuple(oplus(gpath, s) for s in cert.steps)
        src = oplus(g, cert.source)
        tgt = oplus(g, cert.target)
    return Certificate("pointed", field, steps, src, tgt)


# ---------------------------------------------------------------------------
# Certificates for maps to P^d over prime fields
# ---------------------------------------------------------------------------


def _crt_selectors(field, prime_powers):
    """e_i = 1 mod P_i^{r_i}, 0 mod the others (A = prod P_i^{r_i})."""
    A = const(field, field.one)
    for Q in prime_powers:
        A = A * Q
    outs = []
    for Q in prime_powers:
        rest = poly_divmod(A, Q)[0]
        g, s, t = poly_xgcd(rest, Q)
        assert g.degree == 0
        e = poly_divmod(rest * s, A)[1]
        outs.append(e)
    return outs


def pd_cert(p: PdPoint, base_target=None) -> Certificate:
    """Certificate from p to the standard point (X^n, 1, ..., 1).

    Uses the factorization of A, Chinese-remainder selectors to aggregate
    local units into one global unit W of k[X]/(A), and the straight-line
    interpolation steps; every step carries explicit cofactors.
    """
    field = p.ring
    if isinstance(field, PolyRing):
        raise FieldError("pd_cert starts from a field point")
    if not isinstance(field, PrimeField):
        raise FieldError("unsupported: certificates for P^d need a prime field")
    n, d = p.n, p.d
    kt = PolyRing(field)
    if n == 0:
        return Certificate("pd", field, (), p, p)
    one = const(field, field.one)
    ones = tuple(one for _ in range(d))
    target = mk_pd(X(field).shift(n - 1), ones)
    steps = []
    cur = p

    def lift(poly):
        return poly.map_coeffs(lambda c: const(field, c), kt)

    def push(A_T, Bs_T, cofactors, endpoint):
        step = mk_pd(A_T, Bs_T, cofactors)
        steps.append(step)
        return endpoint

    if any(B != one for B in p.Bs):
        factors = factor_fp(p.A)
        prime_powers = []
        primes = []
        for q, mult in factors:
            Q = const(field, field.one)
            for _ in range(mult):
                Q = Q * q
            prime_powers.append(Q)
            primes.append(q)
        sel = _crt_selectors(field, prime_powers)
        js = []
        for q in primes:
            j = next(
                (
                    j
                    for j, B in enumerate(p.Bs)
                    if poly_gcd(B, q).degree == 0 and not B.is_zero()
                ),
                None,
            )
            assert j is not None, "unimodularity guarantees a local unit"
            js.append(j)
        W = zero(field)
        for e, j in zip(sel, js):
            W = W + e * p.Bs[j]
        W = poly_divmod(W, p.A)[1]
        inv_locals = []
        for q, Q, j in zip(primes, prime_powers, js):
            g, s, t = poly_xgcd(p.Bs[j], Q)
            assert g.degree == 0
            inv_locals.append(poly_divmod(s, Q)[1])
        # step 1: slide slot 2 to W (slot 1 in 0-based indexing)
        if p.Bs[1] != W:
            slot_cof = [zero(field) for _ in range(d)]
            for e, invq, j in zip(sel, inv_locals, js):
                slot_cof[j] = poly_divmod(slot_cof[j] + e * invq, p.A)[1]
            Bs_T = [lift(B) for B in p.Bs]
            Bs_T[1] = _interp_poly(kt, p.Bs[1], W)
            total = zero(kt)
            for cof, BT in zip(slot_cof, Bs_T):
                total = total + lift(cof) * BT
            c0 = -poly_divmod(total - const(kt, kt.one), lift(p.A))[0]
            rem = poly_divmod(total - const(kt, kt.one), lift(p.A))[1]
            assert rem.is_zero()
            cofactors = (c0,) + tuple(lift(c) for c in slot_cof)
            new_Bs = list(p.Bs)
            new_Bs[1] = W
            cur = push(lift(p.A), tuple(Bs_T), cofactors, mk_pd(p.A, new_Bs))
        else:
            cur = mk_pd(p.A, p.Bs)
        # step 2: slide slot 1 to 1 (W is a global unit mod A)
        g, s, t = poly_xgcd(W, p.A)
        assert g.degree == 0
        winv = s
        if cur.Bs[0] != one:
            Bs_T = [lift(B) for B in cur.Bs]
            Bs_T[0] = _interp_poly(kt, cur.Bs[0], one)
            c_w = lift(winv)
            c0 = -poly_divmod(c_w * lift(W) - const(kt, kt.one), lift(p.A))[0]
            cofactors = (c0, zero(kt), c_w) + tuple(zero(kt) for _ in range(d - 2))
            new_Bs = list(cur.Bs)
            new_Bs[0] = one
            cur = push(lift(p.A), tuple(Bs_T), cofactors, mk_pd(p.A, new_Bs))
        # step 3: slide the remaining slots to 1 simultaneously
        if any(B != one for B in cur.Bs[1:]):
            Bs_T = [lift(one)] + [_interp_poly(kt, B, one) for B in cur.Bs[1:]]
            cofactors = (zero(kt), const(kt, kt.one)) + tuple(
                zero(kt) for _ in range(d - 1)
            )
            cur = push(lift(p.A), tuple(Bs_T), cofactors, mk_pd(p.A, ones))
    # final step: slide A to X^n
    xn = X(field).shift(n - 1)
    if cur.A != xn:
        A_T = _interp_poly(kt, cur.A, xn)
        cofactors = (zero(kt), const(kt, kt.one)) + tuple(
            zero(kt) for _ in range(d - 1)
        )
        cur = push(A_T, tuple(lift(one) for _ in range(d)), cofactors, target)
    cert = Certificate("pd", field, tuple(steps), p, target)
    return cert
