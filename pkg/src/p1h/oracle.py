"""Finite-field ground truth by exhaustive enumeration.

Enumerates all points of the schemes of pointed rational functions,
non-degenerate symmetric matrices, or pointed maps to P^d over a small
prime field, together with all homotopies whose T-degree is bounded by D;
computes naive connected components by union-find and cross-checks them
against the invariant fibers, bridging any splits left by a too-small D
with explicitly verified certificates.

The enumeration layer works on raw tuples of ints (polynomials in T,
ascending coefficients) for speed; everything it reports is re-checked at
the exact object level where the acceptance tests demand it.
"""
from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dataclass_field

from . import certify, classify, quadform
from .poly import Poly, PolyRing
from .bezout_hankel import SymMatrix
from .fields import GF, FieldError
from . import certify, classify, quadform
from .poly import Poly, PolyRing
from .ratmap import mk_pointed, mk_unpointed
from .quadform import stable_invariant


# ---------------------------------------------------------------------------
# Raw polynomial helpers: tuples of ints mod q, ascending, no trailing zeros
# ---------------------------------------------------------------------------


def _rtrim(t):
    n = len(t)
    while n and t[n - 1] == 0:
        n -= 1
    return tuple(t[:n])


def _radd(a, b, q):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = (out[i] + c) % q
    return _rtrim(out)


def _rneg(a, q):
    return tuple((-c) % q for c in a)


def _rsub(a, b, q):
    return _radd(a, _rneg(b, q), q)


def _rmul(a, b, q):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % q
    return _rtrim(out)


def _rscale(a, c, q):
    c %= q
    if c == 0:
        return ()
    return _rtrim([(x * c) % q for x in a])


def _rdivmod(a, b, q):
    if not b:
        raise ZeroDivisionError
    inv = pow(b[-1], -1, q)
    rem = list(a)
    db = len(b) - 1
    if len(a) - 1 < db:
        return (), _rtrim(rem)
    quo = [0] * (len(a) - db)
    for i in range(len(a) - 1 - db, -1, -1):
        c = rem[i + db] % q
        if c:
            f = (c * inv) % q
            quo[i] = f
            for j, bc in enumerate(b):
                rem[i + j] = (rem[i + j] - f * bc) % q
    return _rtrim(quo), _rtrim(rem[:db])


def _rgcd(a, b, q):
    while b:
        a, b = b, _rdivmod(a, b, q)[1]
    if a:
        a = _rscale(a, pow(a[-1], -1, q), q)
    return a


def _rxgcd(a, b, q):
    r0, r1 = a, b
    s0, s1 = (1,), ()
    t0, t1 = (), (1,)
    while r1:
        quo, rem = _rdivmod(r0, r1, q)
        r0, r1 = r1, rem
        s0, s1 = s1, _rsub(s0, _rmul(quo, s1, q), q)
        t0, t1 = t1, _rsub(t0, _rmul(quo, t1, q), q)
    if r0:
        inv = pow(r0[-1], -1, q)
        r0 = _rscale(r0, inv, q)
        s0 = _rscale(s0, inv, q)
        t0 = _rscale(t0, inv, q)
    return r0, s0, t0


def _reval(a, t, q):
    acc = 0
    for c in reversed(a):
        acc = (acc * t + c) % q
    return acc


def _rpolys(q, maxdeg):
    return [_rtrim(c) for c in itertools.product(range(q), repeat=maxdeg + 1)]


# ---------------------------------------------------------------------------
# Enumeration parameters
# ---------------------------------------------------------------------------

_WORK_CAP = 25_000_000


@dataclass(frozen=True)
class EnumSpec:
    q: int
    n: int
    D: int | None = None
    target: str = "ratfun"  # "ratfun" | "symmat" | "pd"
    d: int = 2
    workers: int = 1

    def __post_init__(self):
        if self.target not in ("ratfun", "symmat", "pd"):
            raise FieldError(f"unknown oracle target {self.target}")
        GF(self.q)  # primality check
        object.__setattr__(self, "D", self.depth)
        if self.work_estimate() > _WORK_CAP:
            raise FieldError(
                f"oversize enumeration: ~{self.work_estimate():.2e} candidates"
            )

    @property
    def depth(self) -> int:
        return self.n if self.D is None else self.D

    def work_estimate(self) -> float:
        q, n, D = self.q, self.n, self.depth
        if self.target == "ratfun":
            if n <= 1:
                return float(q ** (2 * (D + 1)))
            if n == 2:
                # structured solver: outer loop over (b0, b1), inner over the
                # bounded homogeneous parameter
                return float(q ** (2 * (D + 1)) * (q - 1) * q ** (D + 1))
            return float(q ** (2 * n * (D + 1)))
        if self.target == "symmat":
            return float(q ** (n * (n + 1) // 2 * (D + 1)))
        return float(q ** (3 * n * (D + 1)))


@dataclass
class ComponentReport:
    spec: EnumSpec
    points: int
    components: list
    edges: int
    agreement: bool  # every edge respects the invariant
    labels: list = dataclass_field(default_factory=list, repr=False)
    objects: list = dataclass_field(default_factory=list, repr=False)
    invariants: list = dataclass_field(default_factory=list, repr=False)


@dataclass
class CrossCheckReport:
    spec: EnumSpec
    agreement: bool
    components: int
    fibers: int
    bridges: int
    detail: str
    report: ComponentReport


class UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, i):
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def union(self, i, j):
        ri, rj = self.find(i), self.find(j)
        if ri != rj:
            self.parent[max(ri, rj)] = min(ri, rj)


# ---------------------------------------------------------------------------
# Point enumeration (field level)
# ---------------------------------------------------------------------------


def _res_field_ratfun(q, acoef, bcoef, n):
    """res_{n,n} for monic X^n + sum a_i X^i and sum b_i X^i over F_q,
    as the determinant of multiplication by B modulo A (ints)."""
    if n == 1:
        return bcoef[0] % q
    if n == 2:
        a0, a1 = acoef
        b0, b1 = bcoef
        return (b1 * b1 * a0 - b1 * b0 * a1 + b0 * b0) % q
    # general n: reduce X^j B mod A
    cols = []
    cur = list(bcoef)
    for _ in range(n):
        cols.append(list(cur) + [0] * (n - len(cur)))
        cur = [0] + cur
        if len(cur) == n + 1:
            lead = cur.pop()
            if lead:
                cur = [(c - lead * a) % q for c, a in zip(cur, list(acoef))]
    M = [[cols[j][i] % q for j in range(n)] for i in range(n)]
    return _int_det_mod(M, q)


def _int_det_mod(M, q):
    n = len(M)
    M = [row[:] for row in M]
    det = 1
    for k in range(n):
        piv = None
        for i in range(k, n):
            if M[i][k] % q:
                piv = i
                break
        if piv is None:
            return 0
        if piv != k:
            M[k], M[piv] = M[piv], M[k]
            det = -det
        inv = pow(M[k][k], -1, q)
        det = (det * M[k][k]) % q
        for i in range(k + 1, n):
            f = (M[i][k] * inv) % q
            if f:
                M[i] = [(a - f * b) % q for a, b in zip(M[i], M[k])]
    return det % q


def enumerate_points(spec: EnumSpec):
    """All valid points at the field level, as raw coefficient tuples."""
    q, n = spec.q, spec.n
    if spec.target == "ratfun":
        out = []
        for acoef in itertools.product(range(q), repeat=n):
            for bcoef in itertools.product(range(q), repeat=n):
                if _res_field_ratfun(q, acoef, bcoef, n) != 0:
                    out.append((acoef, bcoef))
        return out
    if spec.target == "symmat":
        out = []
        idx = [(i, j) for i in range(n) for j in range(i, n)]
        for vals in itertools.product(range(q), repeat=len(idx)):
            M = [[0] * n for _ in range(n)]
            for (i, j), v in zip(idx, vals):
                M[i][j] = M[j][i] = v
            if _int_det_mod(M, q) != 0:
                out.append(tuple(vals))
        return out
    # pd points: (A coeffs, B_1 coeffs, ..., B_d coeffs), gcd = 1
    out = []
    for acoef in itertools.product(range(q), repeat=n):
        A = _rtrim(tuple(acoef) + (1,))
        for bs in itertools.product(
            itertools.product(range(q), repeat=n), repeat=spec.d
        ):
            g = A
            for b in bs:
                g = _rgcd(g, _rtrim(b), q)
                if len(g) == 1:
                    break
            if len(g) == 1:
                out.append((acoef, bs))
    return out


def point_object(spec: EnumSpec, enc):
    field = GF(spec.q)
    n = spec.n
    if spec.target == "ratfun":
        acoef, bcoef = enc
        A = Poly.make(field, list(acoef) + [1])
        B = Poly.make(field, list(bcoef))
        return mk_pointed(A, B)
    if spec.target == "symmat":
        idx = [(i, j) for i in range(n) for j in range(i, n)]
        M = [[0] * n for _ in range(n)]
        for (i, j), v in zip(idx, enc):
            M[i][j] = M[j][i] = v
        return SymMatrix.make(field, M)
    acoef, bs = enc
    A = Poly.make(field, list(acoef) + [1]) if n else const(field, field.one)
    Bs = [Poly.make(field, list(b)) for b in bs]
    return classify.mk_pd(A, Bs)


def point_invariant_key(spec: EnumSpec, obj):
    if spec.target == "ratfun":
        inv = classify.pointed_invariant(obj)
        return inv._key()
    if spec.target == "symmat":
        return (stable_invariant(obj)._key(), obj.det())
    return obj.n


# ---------------------------------------------------------------------------
# Edge enumeration
# ---------------------------------------------------------------------------


def _edges_ratfun_n1(q, D):
    """n = 1: B = b0(T) must be a constant unit while a0(T) moves freely,
    so for D >= 1 each unit b0 carries the complete graph on numerators."""
    edges = set()
    for b0 in range(1, q):
        for a0 in range(q):
            for a1 in range(a0 + 1, q):
                edges.add((((a0,), (b0,)), ((a1,), (b0,))))
    return edges


def _edges_ratfun_n2_chunk(args):
    """Structured, exact enumeration of valid degree-2 paths for one slice
    of (b0(T), b1(T)) pairs: solve b1^2 a0 - b1 b0 a1 = c - b0^2 over F_q[T]
    and walk the one-parameter solution family within the degree cap."""
    q, D, lo, hi = args
    polys = _rpolys(q, D)
    npolys = len(polys)
    edges = set()
    for bidx in range(lo, hi):
        b0 = polys[bidx // npolys]
        b1 = polys[bidx % npolys]
        if not b1:
            # resultant is b0^2: constant iff b0 is a constant unit, and then
            # the numerator coefficients move freely (complete graph)
            if len(b0) == 1:
                apts = list(itertools.product(range(q), repeat=2))
                for u in range(len(apts)):
                    for v in range(u + 1, len(apts)):
                        edges.add(
                            ((apts[u], (b0[0], 0)), (apts[v], (b0[0], 0)))
                        )
            continue
        d = _rgcd(b1, b0, q)
        b1d = _rdivmod(b1, d, q)[0]
        b0d = _rdivmod(b0, d, q)[0]
        g, s, t = _rxgcd(_rmul(b1, b1, q), _rneg(_rmul(b1, b0, q), q), q)
        b0sq = _rmul(b0, b0, q)
        e1 = len(b1d) - 1
        hmax = D - e1 if e1 <= D else -1
        hs = _rpolys(q, hmax) if hmax >= 0 else [()]
        for c in range(1, q):
            rhs = _rsub((c,), b0sq, q)
            quo, rem = _rdivmod(rhs, g, q) if rhs else ((), ())
            if rem:
                continue
            a0p = _rmul(s, quo, q)
            a1p = _rmul(t, quo, q)
            # reduce the particular a1 modulo b1/d, shifting a0 accordingly
            qq, a1p = _rdivmod(a1p, b1d, q)
            a0p = _rsub(a0p, _rmul(qq, b0d, q), q)
            for h in hs:
                a1 = _radd(a1p, _rmul(h, b1d, q), q)
                if len(a1) - 1 > D:
                    continue
                a0 = _radd(a0p, _rmul(h, b0d, q), q)
                if len(a0) - 1 > D:
                    continue
                p0 = (
                    (_reval(a0, 0, q), _reval(a1, 0, q)),
                    (_reval(b0, 0, q), _reval(b1, 0, q)),
                )
                p1 = (
                    (_reval(a0, 1, q), _reval(a1, 1, q)),
                    (_reval(b0, 1, q), _reval(b1, 1, q)),
                )
                if p0 != p1:
                    edges.add((min(p0, p1), max(p0, p1)))
    return edges


def _edges_ratfun_n3_f2_chunk(args):
    """Brute force for q = 2, n = 3 with carry-less bit-packed T-polynomials."""
    _q, D, lo, hi = args
    mask = (1 << (D + 1)) - 1

    def clmul(x, y):
        acc = 0
        while y:
            if y & 1:
                acc ^= x
            x <<= 1
            y >>= 1
        return acc

    def ev1(x):
        return x.bit_count() & 1

    edges = set()
    size = mask + 1
    for code in range(lo, hi):
        rest, a0 = divmod(code, size)
        rest, a1 = divmod(rest, size)
        rest, a2 = divmod(rest, size)
        rest, b0 = divmod(rest, size)
        rest, b1 = divmod(rest, size)
        b2 = rest
        # columns of multiplication by B modulo A = X^3 + a2 X^2 + a1 X + a0
        r3 = (a0, a1, a2)  # X^3 mod A (char 2: minus = plus)
        r4 = (
            clmul(a2, a0),
            a0 ^ clmul(a2, a1),
            a1 ^ clmul(a2, a2),
        )
        c0 = (b0, b1, b2)
        c1 = (
            clmul(b2, r3[0]),
            b0 ^ clmul(b2, r3[1]),
            b1 ^ clmul(b2, r3[2]),
        )
        c2 = (
            clmul(b1, r3[0]) ^ clmul(b2, r4[0]),
            clmul(b1, r3[1]) ^ clmul(b2, r4[1]),
            b0 ^ clmul(b1, r3[2]) ^ clmul(b2, r4[2]),
        )
        det = (
            clmul(c0[0], clmul(c1[1], c2[2]) ^ clmul(c1[2], c2[1]))
            ^ clmul(c1[0], clmul(c0[1], c2[2]) ^ clmul(c0[2], c2[1]))
            ^ clmul(c2[0], clmul(c0[1], c1[2]) ^ clmul(c0[2], c1[1]))
        )
        if det != 1:  # constant unit of F_2[T]
            continue
        p0 = ((a0 & 1, a1 & 1, a2 & 1), (b0 & 1, b1 & 1, b2 & 1))
        p1 = (
            (ev1(a0), ev1(a1), ev1(a2)),
            (ev1(b0), ev1(b1), ev1(b2)),
        )
        if p0 != p1:
            edges.add((min(p0, p1), max(p0, p1)))
    return edges


def _edges_symmat_chunk(args):
    q, n, D, lo, hi = args
    polys = _rpolys(q, D)
    npolys = len(polys)
    idx = [(i, j) for i in range(n) for j in range(i, n)]
    m = len(idx)
    edges = set()
    for code in range(lo, hi):
        vals = []
        c = code
        for _ in range(m):
            c, r = divmod(c, npolys)
            vals.append(polys[r])
        M = [[()] * n for _ in range(n)]
        for (i, j), v in zip(idx, vals):
            M[i][j] = M[j][i] = v
        det = _rdet(M, q)
        if len(det) != 1:
            continue
        e0 = tuple(_reval(v, 0, q) for v in vals)
        e1 = tuple(_reval(v, 1, q) for v in vals)
        if e0 != e1:
            edges.add((min(e0, e1), max(e0, e1)))
    return edges


def _rdet(M, q):
    n = len(M)
    if n == 1:
        return M[0][0]
    if n == 2:
        return _rsub(_rmul(M[0][0], M[1][1], q), _rmul(M[0][1], M[1][0], q), q)
    if n == 3:
        a, b, c = M[0]
        d, e, f = M[1]
        g, h, i = M[2]
        t1 = _rmul(a, _rsub(_rmul(e, i, q), _rmul(f, h, q), q), q)
        t2 = _rmul(b, _rsub(_rmul(d, i, q), _rmul(f, g, q), q), q)
        t3 = _rmul(c, _rsub(_rmul(d, h, q), _rmul(e, g, q), q), q)
        return _radd(_rsub(t1, t2, q), t3, q)
    raise FieldError("raw determinant only implemented for n <= 3")


def _edges_pd_chunk(args):
    q, n, D, d, lo, hi = args
    polys = _rpolys(q, D)
    npolys = len(polys)
    m = n * (1 + d)
    edges = set()
    for code in range(lo, hi):
        vals = []
        c = code
        for _ in range(m):
            c, r = divmod(c, npolys)
            vals.append(polys[r])
        acoef = vals[:n]
        bs = [vals[n * (1 + k) : n * (2 + k)] for k in range(d)]
        # quick necessary test: field-level unimodularity at each t
        ok = True
        for t in range(q):
            A_t = _rtrim(tuple(_reval(a, t, q) for a in acoef) + (1,))
            g = A_t
            for b in bs:
                bt = _rtrim(tuple(_reval(x, t, q) for x in b))
                g = _rgcd(g, bt, q)
                if len(g) == 1:
                    break
            if len(g) != 1:
                ok = False
                break
        if not ok:
            continue
        if not _pd_unimodular_kt(q, n, acoef, bs):
            continue
        p0 = (
            tuple(_reval(a, 0, q) for a in acoef),
            tuple(tuple(_reval(x, 0, q) for x in b) for b in bs),
        )
        p1 = (
            tuple(_reval(a, 1, q) for a in acoef),
            tuple(tuple(_reval(x, 1, q) for x in b) for b in bs),
        )
        if p0 != p1:
            edges.add((min(p0, p1), max(p0, p1)))
    return edges


def _pd_unimodular_kt(q, n, acoef, bs):
    """Unimodularity over F_q[T][X] for monic A: the gcd over F_q[T] of the
    n x n minors of the stacked multiplication matrices is constant."""
    if n == 0:
        return True
    cols = []
    for b in bs:
        cur = [tuple(x) for x in b]
        for _ in range(n):
            cols.append(list(cur) + [()] * (n - len(cur)))
            cur = [()] + list(cur)
            if len(cur) == n + 1:
                lead = cur.pop()
                if lead:
                    cur = [
                        _rsub(cc, _rmul(lead, aa, q), q)
                        for cc, aa in zip(cur, [tuple(x) for x in acoef])
                    ]
    g = ()
    for combo in itertools.combinations(range(len(cols)), n):
        M = [[cols[j][i] for j in combo] for i in range(n)]
        minor = _rdet(M, q)
        if minor:
            g = _rgcd(g, minor, q) if g else _rscale(minor, pow(minor[-1], -1, q), q)
            if len(g) == 1:
                return True
    return False


def _chunks(total, workers):
    step = (total + workers - 1) // workers
    return [(lo, min(lo + step, total)) for lo in range(0, total, step)]


def enumerate_edges(spec: EnumSpec):
    """All distinct endpoint pairs of valid paths with T-degree <= D."""
    q, n, D = spec.q, spec.n, spec.depth
    if D == 0:
        return set()  # constant paths carry no edges
    if spec.target == "ratfun":
        if n == 0:
            return set()
        if n == 1:
            return set((min(a, b), max(a, b)) for a, b in _edges_ratfun_n1(q, D))
        if n == 2:
            npolys = len(_rpolys(q, D))
            total = npolys * npolys
            worker, base_args = _edges_ratfun_n2_chunk, (q, D)
        elif n == 3 and q == 2:
            total = (2 ** (D + 1)) ** 6
            worker, base_args = _edges_ratfun_n3_f2_chunk, (q, D)
        else:
            raise FieldError("ratfun edge enumeration supports n <= 3 (n = 3: q = 2)")
    elif spec.target == "symmat":
        npolys = len(_rpolys(q, D))
        total = npolys ** (n * (n + 1) // 2)
        worker, base_args = _edges_symmat_chunk, (q, n, D)
    else:
        npolys = len(_rpolys(q, D))
        total = npolys ** (n * (1 + spec.d))
        worker, base_args = _edges_pd_chunk, (q, n, D, spec.d)
    ranges = _chunks(total, max(1, spec.workers))
    args = [base_args + r for r in ranges]
    if spec.workers > 1:
        with ProcessPoolExecutor(max_workers=spec.workers) as pool:
            parts = list(pool.map(worker, args))
    else:
        parts = [worker(a) for a in args]
    edges = set()
    for p in parts:
        edges |= p
    return edges


# ---------------------------------------------------------------------------
# Components and cross-checking
# ---------------------------------------------------------------------------


def components(spec: EnumSpec) -> ComponentReport:
    """Union-find partition of the points under D-bounded homotopies.

    Every edge's endpoint invariants are asserted equal (the machine-checked
    half of homotopy invariance)."""
    points = enumerate_points(spec)
    index = {enc: i for i, enc in enumerate(points)}
    objects = [point_object(spec, enc) for enc in points]
    invariants = [point_invariant_key(spec, obj) for obj in objects]
    edges = enumerate_edges(spec)
    uf = UnionFind(len(points))
    agreement = True
    for a, b in edges:
        ia, ib = index[a], index[b]
        if invariants[ia] != invariants[ib]:
            agreement = False
        uf.union(ia, ib)
    labels = [uf.find(i) for i in range(len(points))]
    comp: dict[int, list[int]] = {}
    for i, lab in enumerate(labels):
        comp.setdefault(lab, []).append(i)
    comps = [
        {
            "size": len(members),
            "representative": points[members[0]],
            "invariant": invariants[members[0]],
        }
        for lab, members in sorted(comp.items())
    ]
    return ComponentReport(
        spec=spec,
        points=len(points),
        components=comps,
        edges=len(edges),
        agreement=agreement,
        labels=labels,
        objects=objects,
        invariants=invariants,
    )


def _bridge(spec: EnumSpec, obj_a, obj_b):
    """A verified homotopy between two same-fiber points found in different
    D-bounded components."""
    if spec.target == "ratfun":
        cert = certify.connect(obj_a, obj_b)
        if not isinstance(cert, certify.Certificate):
            return None
        return cert if certify.verify(cert) else None
    if spec.target == "pd":
        ca = certify.pd_cert(obj_a)
        cb = certify.pd_cert(obj_b)
        if not (certify.verify(ca) and certify.verify(cb)):
            return None
        cert = certify.concat_certificates(ca, certify.reverse_certificate(cb))
        return cert if certify.verify(cert) else None
    return _matrix_bridge(obj_a, obj_b)


@dataclass(frozen=True)
class MatrixHomotopy:
    """A chain of symmetric k[T] matrices with constant unit determinant."""

    field: object
    steps: tuple  # of SymMatrix over k[T]
    source: SymMatrix
    target: SymMatrix


def verify_matrix_homotopy(h: MatrixHomotopy) -> bool:
    cur = h.source
    for step in h.steps:
        d = step.det()
        if d.is_zero() or not d.is_constant():
            return False
        if step.eval(0).rows != cur.rows:
            return False
        cur = step.eval(1)
    return cur.rows == h.target.rows


def _matrix_bridge(Sa: SymMatrix, Sb: SymMatrix):
    """Diagonalize both, chain the diagonals by elementary SL_2 moves, and
    T-scale everything into matrix homotopies."""
    field = Sa.ring
    fa, opsa = quadform.diagonalize(Sa)
    fb, opsb = quadform.diagonalize(Sb)
    if isinstance(fa, quadform.BlockNormalForm):
        # F_2: link both normal forms to a common shape via [[T,1],[1,0]]
        return _matrix_bridge_f2(Sa, Sb, fa, fb, opsa, opsb)
    chain = certify.diag_chain(field, fa.units, fb.units)
    if chain is certify.EXHAUSTED:
        return None
    steps = []
    if opsa:
        steps.append(quadform.oplog_to_path(Sa, opsa))
    cur = list(fa.units)
    n = Sa.n
    for mv in chain:
        P = certify.move_matrix(field, cur[mv.i], cur[mv.i + 1], mv)
        full_ops = []
        for kind, v in certify.sl2_elementary_factors(
            field, P
        ):
            if kind == "12":
                full_ops.append(("add", mv.i, mv.i + 1, v))
            else:
                full_ops.append(("add", mv.i + 1, mv.i, v))
        D = SymMatrix.diagonal(field, cur)
        steps.append(quadform.oplog_to_path(D, full_ops))
        cur = list(certify.apply_move(field, cur, mv))
    if opsb:
        back = quadform.oplog_to_path(Sb, opsb)
        steps.append(_reverse_matrix_path(back))
    h = MatrixHomotopy(field, tuple(steps), Sa, Sb)
    return h if verify_matrix_homotopy(h) else None


def _reverse_matrix_path(S: SymMatrix) -> SymMatrix:
    kt = S.ring
    base = kt.base
    onem = Poly.make(base, [base.one, base.neg(base.one)])
    return SymMatrix.make(
        kt, [[c.subst(onem) for c in row] for row in S.rows]
    )


def _matrix_bridge_f2(Sa, Sb, fa, fb, opsa, opsb):
    """Over F_2 all non-degenerate forms of equal rank are connected: turn
    each hyperbolic block [[0,1],[1,0]] into <1,1> through [[T,1],[1,T]]
    ... more precisely via the pencil [[T,1],[1,0]] -> [[1,1],[1,0]] and
    exhaustive small chains; rank is the only invariant, so it suffices to
    link both to the common block shape."""
    field = Sa.ring
    if fa.rank != fb.rank:
        return None
    steps = []
    if opsa:
        steps.append(quadform.oplog_to_path(Sa, opsa))
    na = quadform.replay_oplog(Sa, opsa)
    nb = quadform.replay_oplog(Sb, opsb)
    mid_a, steps_a = _f2_blocks_to_ones(na)
    mid_b, steps_b = _f2_blocks_to_ones(nb)
    steps.extend(steps_a)
    if mid_a.rows != mid_b.rows:
        return None
    for s in reversed(steps_b):
        steps.append(_reverse_matrix_path(s))
    if opsb:
        steps.append(_reverse_matrix_path(quadform.oplog_to_path(Sb, opsb)))
    h = MatrixHomotopy(field, tuple(steps), Sa, Sb)
    return h if verify_matrix_homotopy(h) else None


def _f2_blocks_to_ones(S: SymMatrix):
    """Drive a block-normal F_2 matrix to the identity: turn each
    [[0,1],[1,0]] block's corner on via the path [[T,1],[1,0]], then
    re-normalize (the block with a unit diagonal entry diagonalizes)."""
    field = S.ring
    kt = PolyRing(field)
    rows = [list(r) for r in S.rows]
    steps = []
    while True:
        i = next(
            (i for i in range(len(rows)) if field.is_zero(rows[i][i])), None
        )
        if i is None:
            break
        path = [[const(field, x) for x in row] for row in rows]
        path[i][i] = Poly.make(field, [0, 1])
        steps.append(SymMatrix.make(kt, path))
        rows[i][i] = field.one
        Scur = SymMatrix.make(field, rows)
        form, ops = quadform.diagonalize(Scur)
        if ops:
            steps.append(quadform.oplog_to_path(Scur, ops))
            rows = [list(r) for r in quadform.replay_oplog(Scur, ops).rows]
    return SymMatrix.make(field, rows), steps


@dataclass
class UnpointedReport:
    q: int
    n: int
    points: int
    components: int
    fibers: int
    agreement: bool
    edges_verified: int


def unpointed_components(q: int, n: int, D: int = None) -> UnpointedReport:
    """Components of the unpointed scheme over F_q under verified homotopies.

    The raw coefficient space of unpointed k[T]-points is out of reach for
    q = 5, so the edge set is generated by three verified families: pointed
    homotopies (from the exhaustive pointed enumeration), the normalization
    paths sliding any point to a pointed one, and the unit rescaling paths
    f ~ lambda^2 f.  Every edge is re-checked by the certificate verifier;
    agreement means the generated partition coincides with the invariant
    fibers, which pins both down to the true naive components.
    """
    from .certify import Certificate, UnpointedStep, _normalization_step, _scaling_step, verify
    from .ratmap import normalize_unpointed, unpointed_of_pointed

    field = GF(q)
    kt = PolyRing(field)
    # all projective points with nonzero resultant and true degree n
    pts = []
    index = {}
    for vec in itertools.product(range(q), repeat=2 * (n + 1)):
        if all(v == 0 for v in vec):
            continue
        first = next(v for v in vec if v)
        if first != 1:
            continue  # canonical scaling: first nonzero coordinate is 1
        avec, bvec = vec[: n + 1], vec[n + 1 :]
        try:
            up = mk_unpointed(field, avec, bvec)
        except (FieldError, ValueError):
            continue
        index[(up.avec, up.bvec)] = len(pts)
        pts.append(up)
    uf = UnionFind(len(pts))
    edges_verified = 0

    def link(u1, u2, step):
        nonlocal edges_verified
        cert = Certificate("unpointed", field, (step,), u1, u2)
        assert verify(cert), "generated edge failed verification"
        edges_verified += 1
        uf.union(index[(u1.avec, u1.bvec)], index[(u2.avec, u2.bvec)])

    # family 1: pointed homotopies, projectivized
    pspec = EnumSpec(q=q, n=n, D=D if D is not None else n)
    for enc_a, enc_b in enumerate_edges(pspec):
        fa = point_object(pspec, enc_a)
        fb = point_object(pspec, enc_b)
        ua, ub = unpointed_of_pointed(fa), unpointed_of_pointed(fb)
        uf.union(index[(ua.avec, ua.bvec)], index[(ub.avec, ub.bvec)])
    # family 2: normalization paths
    for up in pts:
        f, mv = normalize_unpointed(up)
        if mv.factors:
            step = _normalization_step(mv, kt)
            link(up, unpointed_of_pointed(f), step)
    # family 3: rescaling paths f ~ lambda^2 f on pointed representatives
    for up in pts:
        f, _ = normalize_unpointed(up)
        for lam in range(2, q):
            step = _scaling_step(f, lam, kt)
            lam2 = field.mul(lam, lam)
            g = mk_pointed(f.A, f.B.scale(field.inv(lam2)))
            link(unpointed_of_pointed(f), unpointed_of_pointed(g), step)
    fibers: dict = {}
    for i, up in enumerate(pts):
        fibers.setdefault(classify.unpointed_invariant(up)._key(), []).append(i)
    comp_labels = {uf.find(i) for i in range(len(pts))}
    # soundness: each component sits inside one fiber; completeness: counts
    fiber_of = {}
    sound = True
    for key, members in fibers.items():
        for i in members:
            fiber_of[i] = key
    for i in range(len(pts)):
        if fiber_of[uf.find(i)] != fiber_of[i]:
            sound = False
    agreement = sound and len(comp_labels) == len(fibers)
    return UnpointedReport(
        q, n, len(pts), len(comp_labels), len(fibers), agreement, edges_verified
    )


def cross_check(spec: EnumSpec) -> CrossCheckReport:
    """Compare D-bounded components with the invariant fibers; bridge any
    fiber split across components with verified certificates."""
    rep = components(spec)
    if not rep.agreement:
        return CrossCheckReport(
            spec, False, len(rep.components), 0, 0,
            "an edge connects points with different invariants", rep,
        )
    fibers: dict = {}
    for i, inv in enumerate(rep.invariants):
        fibers.setdefault(inv, []).append(i)
    bridges = 0
    ok = True
    detail = "components equal invariant fibers"
    for inv, members in fibers.items():
        labs = {}
        for i in members:
            labs.setdefault(rep.labels[i], i)
        if len(labs) == 1:
            continue
        reps = list(labs.values())
        base = reps[0]
        for other in reps[1:]:
            cert = _bridge(spec, rep.objects[base], rep.objects[other])
            if cert is None:
                ok = False
                detail = (
                    f"fiber {inv} splits into {len(labs)} components and "
                    "bridging failed"
                )
                break
            bridges += 1
        if not ok:
            break
    if ok and bridges:
        detail = f"components equal fibers after {bridges} verified bridges"
    return CrossCheckReport(
        spec, ok, len(rep.components), len(fibers), bridges, detail, rep
    )
