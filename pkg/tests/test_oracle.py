"""The exhaustive finite-field oracle: point counts, components,
cross-checks, and the raw arithmetic layer it runs on."""
import itertools

import pytest

from p1h import oracle as oc
from p1h.fields import GF, FieldError
from p1h.poly import Poly, poly_divmod, poly_gcd
from p1h.ratmap import mk_pointed


class TestRawLayer:
    def test_raw_ops_match_poly(self, rng):
        for q in (2, 3, 5):
            field = GF(q)
            for _ in range(100):
                a = tuple(rng.randrange(q) for _ in range(rng.randrange(0, 5)))
                b = tuple(rng.randrange(q) for _ in range(rng.randrange(0, 5)))
                a = oc._rtrim(a)
                b = oc._rtrim(b)
                pa, pb = Poly.make(field, a), Poly.make(field, b)
                assert oc._radd(a, b, q) == (pa + pb).coeffs
                assert oc._rmul(a, b, q) == (pa * pb).coeffs
                if b:
                    quo, rem = oc._rdivmod(a, b, q)
                    q2, r2 = poly_divmod(pa, pb)
                    assert quo == q2.coeffs and rem == r2.coeffs
                    assert oc._rgcd(a, b, q) == poly_gcd(pa, pb).coeffs

    def test_raw_res_matches_library(self, rng):
        from p1h.poly import resultant_nn

        for q in (2, 3, 5):
            field = GF(q)
            for n in (1, 2, 3):
                for _ in range(60):
                    acoef = tuple(rng.randrange(q) for _ in range(n))
                    bcoef = tuple(rng.randrange(q) for _ in range(n))
                    A = Poly.make(field, list(acoef) + [1])
                    B = Poly.make(field, list(bcoef))
                    assert oc._res_field_ratfun(q, acoef, bcoef, n) == resultant_nn(
                        A, B, n
                    )


class TestEnumeration:
    def test_f2_degree_one_points(self):
        spec = oc.EnumSpec(q=2, n=1, D=1)
        pts = oc.enumerate_points(spec)
        assert len(pts) == 2  # X/1 and (X+1)/1

    def test_f3_degree_one_points(self):
        assert len(oc.enumerate_points(oc.EnumSpec(q=3, n=1, D=1))) == 6

    def test_symmat_counts(self):
        # independent double loop over all symmetric 2x2 matrices
        for q in (2, 3):
            expected = 0
            for a, b, d in itertools.product(range(q), repeat=3):
                if (a * d - b * b) % q != 0:
                    expected += 1
            spec = oc.EnumSpec(q=q, n=2, D=1, target="symmat")
            assert len(oc.enumerate_points(spec)) == expected

    def test_pd_counts_f2(self):
        spec = oc.EnumSpec(q=2, n=1, D=1, target="pd", d=2)
        # A = X + a0; (B1, B2) constants not both zero: 2 * 3 = 6
        assert len(oc.enumerate_points(spec)) == 6

    def test_oversize_rejected(self):
        with pytest.raises(FieldError, match="oversize"):
            oc.EnumSpec(q=5, n=3, D=3)

    def test_points_are_valid_objects(self):
        spec = oc.EnumSpec(q=3, n=2, D=1)
        for enc in oc.enumerate_points(spec):
            obj = oc.point_object(spec, enc)
            assert obj.n == 2


class TestComponents:
    def test_f2_n1_single_component(self):
        rep = oc.components(oc.EnumSpec(q=2, n=1, D=1))
        assert rep.points == 2
        assert len(rep.components) == 1  # the edge (X+T)/1 joins both points

    def test_f3_n1_two_components(self):
        rep = oc.components(oc.EnumSpec(q=3, n=1, D=1))
        assert len(rep.components) == 2
        # split exactly by the resultant value
        assert rep.agreement

    def test_f2_single_component_per_degree(self):
        for n, D in ((1, 2), (2, 2), (3, 2)):
            rep = oc.components(oc.EnumSpec(q=2, n=n, D=D))
            assert len(rep.components) == 1

    def test_component_sizes_sum(self):
        rep = oc.components(oc.EnumSpec(q=3, n=2, D=2))
        assert sum(c["size"] for c in rep.components) == rep.points

    def test_monotone_in_depth(self):
        c1 = len(oc.components(oc.EnumSpec(q=3, n=2, D=1)).components)
        c2 = len(oc.components(oc.EnumSpec(q=3, n=2, D=2)).components)
        assert c2 <= c1

    def test_edges_respect_invariants(self):
        rep = oc.components(oc.EnumSpec(q=5, n=1, D=1))
        assert rep.agreement

    def test_workers_agree(self):
        seq = oc.components(oc.EnumSpec(q=3, n=2, D=2, workers=1))
        par = oc.components(oc.EnumSpec(q=3, n=2, D=2, workers=2))
        assert seq.edges == par.edges
        assert len(seq.components) == len(par.components)


class TestCrossCheck:
    def test_ratfun_f3_n2(self):
        cc = oc.cross_check(oc.EnumSpec(q=3, n=2, D=2))
        assert cc.agreement
        # predicted class count: one fiber per resultant value
        assert cc.fibers == 2

    def test_symmat_f3_n2(self):
        cc = oc.cross_check(oc.EnumSpec(q=3, n=2, D=2, target="symmat"))
        assert cc.agreement and cc.fibers == 2

    def test_symmat_f2_n2(self):
        cc = oc.cross_check(oc.EnumSpec(q=2, n=2, D=2, target="symmat"))
        assert cc.agreement and cc.fibers == 1

    def test_pd_f2(self):
        cc = oc.cross_check(oc.EnumSpec(q=2, n=2, D=1, target="pd", d=2))
        assert cc.agreement and cc.components == 1

    def test_bridging_when_depth_too_small(self):
        # D = 1 leaves degree-2 fibers split over F_3; bridging must close
        # them with verified certificates
        cc = oc.cross_check(oc.EnumSpec(q=3, n=2, D=1))
        assert cc.agreement
        if cc.components > cc.fibers:
            assert cc.bridges > 0


class TestUnpointedOracle:
    def test_f3_n1(self):
        rep = oc.unpointed_components(3, 1)
        assert rep.agreement and rep.components == 2

    def test_f5_n1(self):
        rep = oc.unpointed_components(5, 1)
        assert rep.agreement and rep.components == 2
