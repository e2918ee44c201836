"""Walk through the classification of pointed rational functions.

A pointed rational function is a pair A/B with A monic, deg B < deg A and
the resultant a unit.  Its complete homotopy invariant is the degree, the
stable class of its symmetric Bezout form, and the exact resultant.
"""
from fractions import Fraction

from p1h import (
    QQ,
    GF,
    bezout_form,
    mk_pointed,
    oplus,
    parse_ratfun,
    pointed_equiv,
    pointed_invariant,
    x_over,
)
from p1h.serial import invariant_to_json


def show(label, f):
    inv = pointed_invariant(f)
    print(f"{label}: {f}")
    print(f"   degree {inv.n}, resultant {inv.field.format(inv.res)}")
    print(f"   invariant record: {invariant_to_json(inv)}")


def main():
    print("== the smallest interesting sum ==")
    s = oplus(x_over(QQ, 1), x_over(QQ, 1))
    show("X/1 (+) X/1", s)
    print("   Bezout form:", bezout_form(s).rows)
    print()

    print("== the resultant alone does not classify over Q ==")
    f = parse_ratfun("(X^2-1)/X", QQ)
    g = parse_ratfun("(X^2-1)/(-X)", QQ)
    print(f"f = {f} and g = {g} share degree and resultant:")
    print("   res(f) =", pointed_invariant(f).res, " res(g) =", pointed_invariant(g).res)
    print("   equivalent?", pointed_equiv(f, g))
    print("   signatures:", pointed_invariant(f).witt.signature,
          "vs", pointed_invariant(g).witt.signature)
    print()

    print("== over a finite field the same pair collapses ==")
    F5 = GF(5)
    f5 = parse_ratfun("(X^2-1)/X", F5)
    g5 = parse_ratfun("(X^2-1)/(4*X)", F5)
    print(f"f = {f5}: res {f5.res};  g = {g5}: res {g5.res}")
    print("   equivalent?", pointed_equiv(f5, g5))
    print()

    print("== translation never changes the class ==")
    from p1h import ga_act

    h = ga_act(Fraction(7), f)
    print(f"f translated by 7: {h}")
    print("   equivalent to f?", pointed_equiv(f, h))


if __name__ == "__main__":
    main()
