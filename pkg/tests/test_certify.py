"""Certificates: generation, exact verification, reversal, congruence."""
import itertools
from fractions import Fraction

import pytest

from p1h.certify import (
    EXHAUSTED,
    Certificate,
    DiagMove,
    NotEquivalent,
    UnpointedStep,
    concat_certificates,
    connect,
    diag_chain,
    lift_chain_to_cert,
    move_matrix,
    normal_form_cert,
    oplus_constant,
    pd_cert,
    reverse_certificate,
    unpointed_connect,
    verify,
)
from p1h.classify import mk_pd, pointed_invariant, unpointed_invariant
from p1h.fields import GF, QQ
from p1h.poly import Poly, PolyRing, X, const, zero
from p1h.ratmap import (
    PointedRat,
    eval_path,
    mk_pointed,
    mk_unpointed,
    monomial_sum,
    oplus,
    poly_point,
    unpointed_of_pointed,
    x_over,
)

from conftest import all_points, random_point


class TestNormalForm:
    def test_degree_one_is_trivial(self):
        units, cert = normal_form_cert(x_over(QQ, Fraction(7)))
        assert units == (7,)
        assert cert.steps == ()
        assert verify(cert)

    def test_monomial_degree_two(self):
        f = poly_point(X(QQ).shift(1), Fraction(3))
        units, cert = normal_form_cert(f)
        assert verify(cert)
        assert len(cert.steps) >= 2
        assert pointed_invariant(cert.source) == pointed_invariant(cert.target)

    def test_leading_term_route(self):
        f = mk_pointed(
            X(QQ) * X(QQ) + X(QQ).scale(3) + const(QQ, 1), const(QQ, 2)
        )
        units, cert = normal_form_cert(f)
        assert verify(cert)
        assert cert.target == monomial_sum(QQ, units)

    def test_soundness_random(self, rng):
        for field in (QQ, GF(2), GF(3), GF(5)):
            for _ in range(25):
                f = random_point(field, rng.randrange(1, 4), rng)
                units, cert = normal_form_cert(f)
                assert verify(cert)
                assert cert.source == f
                assert cert.target == monomial_sum(field, units)
                assert pointed_invariant(f) == pointed_invariant(cert.target)


class TestDiagChain:
    def test_equal_tuples(self):
        assert diag_chain(QQ, (1, 2), (1, 2)) == []

    def test_one_move_over_q(self):
        chain = diag_chain(QQ, (Fraction(1), Fraction(1)), (Fraction(2), Fraction(1, 2)))
        assert chain is not EXHAUSTED
        assert len(chain) == 1
        mv = chain[0]
        # the witness (1, 1) realizes 2 = 1 + 1
        P = move_matrix(QQ, Fraction(1), Fraction(1), mv)
        M = [[sum(P[k][i] * (P[k][j] if k < 2 else 0) for k in range(2)) for j in range(2)] for i in range(2)]

    def test_moves_replay_exactly(self, rng):
        F5 = GF(5)
        for _ in range(40):
            n = rng.randrange(1, 4)
            us = tuple(rng.randrange(1, 5) for _ in range(n))
            vs = list(us)
            # scramble vs while keeping the product
            for _ in range(3):
                i = rng.randrange(n)
                j = rng.randrange(n)
                if i == j:
                    continue
                lam = rng.randrange(1, 5)
                vs[i] = F5.mul(vs[i], F5.mul(lam, lam))
                vs[j] = F5.div(vs[j], F5.mul(lam, lam))
            vs = tuple(vs)
            chain = diag_chain(F5, us, vs)
            assert chain is not EXHAUSTED
            cur = us
            from p1h.certify import apply_move

            for mv in chain:
                cur = apply_move(F5, cur, mv)
            assert cur == vs

    def test_determinant_obstruction(self):
        with pytest.raises(Exception):
            diag_chain(QQ, (Fraction(1),), (Fraction(2),))


class TestLift:
    def test_empty_chain(self):
        cert = lift_chain_to_cert(QQ, (Fraction(1), Fraction(2)), [])
        assert cert.steps == () and verify(cert)

    def test_single_move_degree_two(self):
        us = (Fraction(1), Fraction(1))
        chain = diag_chain(QQ, us, (Fraction(2), Fraction(1, 2)))
        cert = lift_chain_to_cert(QQ, us, chain)
        assert verify(cert)
        assert cert.source == monomial_sum(QQ, us)
        assert cert.target == monomial_sum(QQ, (Fraction(2), Fraction(1, 2)))

    def test_embedded_in_degree_three(self):
        us = (Fraction(1), Fraction(1), Fraction(3))
        chain = [DiagMove(0, Fraction(2), Fraction(1), Fraction(1))]
        cert = lift_chain_to_cert(QQ, us, chain)
        assert verify(cert)
        assert cert.target == monomial_sum(QQ, (Fraction(2), Fraction(1, 2), Fraction(3)))


class TestConnect:
    def test_reflexive_empty(self, rng):
        f = random_point(QQ, 2, rng)
        cert = connect(f, f)
        assert isinstance(cert, Certificate) and cert.steps == ()
        assert verify(cert)

    def test_structurally_equal_sum(self):
        s = oplus(x_over(QQ, 1), x_over(QQ, 1))
        t = mk_pointed(X(QQ) * X(QQ) - const(QQ, 1), X(QQ))
        cert = connect(s, t)
        assert isinstance(cert, Certificate)
        assert verify(cert)

    def test_not_equivalent(self):
        out = connect(x_over(QQ, 1), x_over(QQ, 2))
        assert isinstance(out, NotEquivalent)
        assert "resultant" in out.reason

    def test_translation_certificates(self, rng):
        from p1h.ratmap import ga_act

        for field in (QQ, GF(3)):
            for _ in range(10):
                f = random_point(field, rng.randrange(1, 3), rng)
                g = ga_act(field.from_int(rng.randrange(1, 3)), f)
                cert = connect(f, g)
                assert isinstance(cert, Certificate)
                assert verify(cert)

    def test_complete_over_f3_degree_two(self):
        # connect succeeds exactly on the equivalent pairs (all of them)
        from p1h.classify import pointed_equiv

        pts = all_points(GF(3), 2)
        for i, f in enumerate(pts):
            for g in pts[i + 1 :]:
                cert = connect(f, g)
                if pointed_equiv(f, g):
                    assert isinstance(cert, Certificate)
                    assert verify(cert)
                else:
                    assert isinstance(cert, NotEquivalent)


class TestVerify:
    def test_polynomial_to_leading_term_path(self):
        # (X^n + T a X + T b)/c is a valid single-step certificate
        kt = PolyRing(QQ)
        T = Poly.make(QQ, [0, 1])
        A = Poly.make(kt, [T.scale(2), T.scale(3), Poly.make(QQ, [0]), Poly.make(QQ, [1])])
        step = mk_pointed(A, Poly.make(kt, [Poly.make(QQ, [5])]))
        cert = Certificate(
            "pointed", QQ, (step,), eval_path(step, 0), eval_path(step, 1)
        )
        assert verify(cert)

    def test_monomial_denominator_path(self):
        kt = PolyRing(GF(5))
        T = Poly.make(GF(5), [0, 1])
        A = Poly.make(kt, [Poly.make(GF(5), [])] * 3 + [Poly.make(GF(5), [1])])
        B = Poly.make(kt, [Poly.make(GF(5), [2]), T, T.scale(3)])
        step = mk_pointed(A, B)  # X^3 / (3T X^2 + T X + 2)
        cert = Certificate("pointed", GF(5), (step,), eval_path(step, 0), eval_path(step, 1))
        assert verify(cert)

    def test_nonconstant_resultant_rejected(self):
        kt = PolyRing(QQ)
        T = Poly.make(QQ, [0, 1])
        # (X^2 + T)/X has resultant T: not a homotopy; bypass the validating
        # constructor to exercise the verifier
        A = Poly.make(kt, [T, Poly.make(QQ, []), Poly.make(QQ, [1])])
        B = Poly.make(kt, [Poly.make(QQ, []), Poly.make(QQ, [1])])
        bogus = PointedRat(kt, A, B, None, None, None)
        src = mk_pointed(X(QQ) * X(QQ) - const(QQ, 1), X(QQ))
        cert = Certificate("pointed", QQ, (bogus,), src, src)
        res = verify(cert)
        assert not res
        assert "non-constant resultant" in res.reason and res.step == 0

    def test_shuffled_chain_rejected(self, rng):
        f = random_point(GF(3), 2, rng)
        g = None
        from p1h.classify import pointed_equiv

        for cand in all_points(GF(3), 2):
            if cand != f and pointed_equiv(f, cand):
                g = cand
                break
        cert = connect(f, g)
        assert isinstance(cert, Certificate) and len(cert.steps) >= 2
        shuffled = Certificate(
            cert.kind, cert.field, cert.steps[::-1], cert.source, cert.target
        )
        res = verify(shuffled)
        assert not res and "mismatch" in res.reason

    def test_wrong_target_rejected(self, rng):
        f = random_point(GF(5), 1, rng)
        cert = Certificate("pointed", GF(5), (), f, x_over(GF(5), 1))
        assert not verify(cert) or f == x_over(GF(5), 1)


class TestReversalAndCongruence:
    def test_reversal(self, rng):
        for _ in range(10):
            f = random_point(GF(3), 2, rng)
            units, cert = normal_form_cert(f)
            rev = reverse_certificate(cert)
            assert verify(rev)
            assert rev.source == cert.target and rev.target == cert.source

    def test_oplus_congruence(self, rng):
        for _ in range(10):
            f = random_point(QQ, 2, rng)
            g = random_point(QQ, rng.randrange(1, 3), rng)
            units, cert = normal_form_cert(f)
            for side in ("right", "left"):
                summed = oplus_constant(cert, g, side)
                assert verify(summed)

    def test_concat(self, rng):
        f = random_point(GF(3), 2, rng)
        units, cert = normal_form_cert(f)
        rt = concat_certificates(cert, reverse_certificate(cert))
        assert verify(rt)
        assert rt.source == f and rt.target == f


class TestUnpointedConnect:
    def test_lambda_two_witness(self):
        u1 = unpointed_of_pointed(x_over(QQ, 1))
        u2 = unpointed_of_pointed(x_over(QQ, 4))
        cert = unpointed_connect(u1, u2)
        assert isinstance(cert, Certificate)
        assert verify(cert)

    def test_moebius_translate(self):
        u = mk_unpointed(QQ, [1, 0], [0, 1])  # the function 1/X
        f = unpointed_of_pointed(x_over(QQ, -1))
        cert = unpointed_connect(u, f)
        assert isinstance(cert, Certificate) and verify(cert)

    def test_not_equivalent(self):
        u1 = unpointed_of_pointed(x_over(QQ, 1))
        u2 = unpointed_of_pointed(x_over(QQ, 2))
        assert isinstance(unpointed_connect(u1, u2), NotEquivalent)

    def test_f5_random(self, rng):
        from p1h.classify import unpointed_equiv

        F5 = GF(5)
        pool = []
        for _ in range(12):
            f = random_point(F5, rng.randrange(1, 3), rng)
            pool.append(unpointed_of_pointed(f))
        for u1 in pool[:6]:
            for u2 in pool[6:]:
                result = unpointed_connect(u1, u2)
                if unpointed_equiv(u1, u2):
                    assert isinstance(result, Certificate)
                    assert verify(result)
                else:
                    assert isinstance(result, NotEquivalent)


class TestPdCert:
    def test_base_point(self):
        F3 = GF(3)
        p = mk_pd(X(F3).shift(1), (const(F3, 1), const(F3, 1)))
        cert = pd_cert(p)
        assert verify(cert)
        assert cert.steps == ()

    def test_interpolation_route(self):
        F3 = GF(3)
        p = mk_pd(X(F3).shift(1), (X(F3), const(F3, 1)))
        cert = pd_cert(p)
        assert verify(cert)
        assert cert.target.A == X(F3).shift(1)
        assert all(B == const(F3, 1) for B in cert.target.Bs)

    def test_crt_route(self):
        # A = P^2 with B_1 a non-unit modulo P and B_2 a unit: the global
        # unit has to be assembled through the remainder decomposition
        F3 = GF(3)
        P = X(F3) + const(F3, 1)
        p = mk_pd(P * P, (P.scale(2), const(F3, 2)))
        cert = pd_cert(p)
        assert verify(cert)

    def test_multi_factor(self):
        F5 = GF(5)
        A = X(F5) * (X(F5) + const(F5, 1))
        p = mk_pd(A, (X(F5), X(F5) + const(F5, 1)))
        cert = pd_cert(p)
        assert verify(cert)

    def test_rationals_unsupported(self):
        p = mk_pd(X(QQ), (const(QQ, 1), const(QQ, 1)))
        with pytest.raises(Exception, match="unsupported|prime"):
            pd_cert(p)

    def test_every_enumerated_point_f2(self):
        from p1h import oracle as oc

        spec = oc.EnumSpec(q=2, n=2, D=1, target="pd", d=2)
        for enc in oc.enumerate_points(spec):
            p = oc.point_object(spec, enc)
            cert = pd_cert(p)
            assert verify(cert)
