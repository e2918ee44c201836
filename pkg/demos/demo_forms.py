"""The bilinear-form side: Bezout matrices, Hankel inverses, and the
constructive reduction of symmetric matrices over k[T].
"""
from p1h import GF, QQ, bezout_form, hankel_of, parse_ratfun, phi_n, psi_n
from p1h.bezout_hankel import SymMatrix
from p1h.poly import Poly, PolyRing, poly_str
from p1h.quadform import hermite_reduce, kt_short_vector, stable_invariant


def main():
    print("== the form, its Hankel inverse, and reconstruction ==")
    f = parse_ratfun("(X^3-2*X+1)/(X^2-1/2)", QQ)
    S = bezout_form(f)
    H = hankel_of(f)
    print(f"f = {f}")
    print("   Bezout form rows:", [tuple(map(str, r)) for r in S.rows])
    print("   inverse is Hankel with anti-diagonals:", tuple(map(str, H.s)))
    print("   translation coordinate:", phi_n(f))
    print("   reconstruction returns f:", psi_n(H, phi_n(f)) == f)
    print()

    print("== reducing a symmetric matrix over F_3[T] ==")
    F3 = GF(3)
    kt = PolyRing(F3)
    T = Poly.make(F3, [0, 1])
    one = Poly.make(F3, [1])
    S = SymMatrix.make(kt, [[T, one], [one, kt.zero]])
    x = kt_short_vector(S)
    print("   matrix rows:", [[poly_str(e, 'T') for e in row] for row in S.rows])
    print("   short vector:", [poly_str(c, "T") for c in x])
    P, N = hermite_reduce(S)
    print("   normal form rows:", [[poly_str(e, 'T') for e in row] for row in N.rows])
    i0, i1 = stable_invariant(N.eval(0)), stable_invariant(N.eval(1))
    print("   stable classes at the two endpoints agree:", i0 == i1)


if __name__ == "__main__":
    main()
