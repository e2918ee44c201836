"""Exact base fields: the rational numbers and prime fields F_p.

Field elements are plain Python values -- Fraction for Q, int residues in
[0, p) for F_p -- and the field object supplies the arithmetic.  Containers
(polynomials, matrices, invariants) carry the field tag, so every scalar in
the library is unambiguously attached to its field.
"""
from __future__ import annotations

from fractions import Fraction


class FieldError(ValueError):
    """Invalid field construction or illegal element operation."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1 if d == 2 else 2
    return True


def _is_prime_big(n: int) -> bool:
    """Deterministic Miller-Rabin for 64-bit-scale inputs."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = (x * x) % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _rho_factor(n: int) -> int:
    """A nontrivial factor of composite odd n: Brent's variant of the rho
    cycle with gcds batched over 128 steps."""
    if n % 2 == 0:
        return 2
    import math

    for c in range(1, 64):
        y, r, q = 2, 1, 1
        g, x, ys = 1, 0, 0
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(128, r - k)):
                    y = (y * y + c) % n
                    q = (q * abs(x - y)) % n
                g = math.gcd(q, n)
                k += 128
            r <<= 1
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise ArithmeticError(f"rho failed on {n}")


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of a positive integer: trial division for small
    factors, Pollard rho for anything that survives (resultants at desk
    scale can still have 10-plus-digit square parts)."""
    if n <= 0:
        raise ValueError("factorize expects a positive integer")
    out: dict[int, int] = {}
    d = 2
    while d * d <= n and d < 100_000:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if _is_prime_big(m):
            out[m] = out.get(m, 0) + 1
            continue
        f = _rho_factor(m)
        stack.append(f)
        stack.append(m // f)
    return out


def squarefree_part(n: int) -> int:
    """Squarefree part of a nonzero integer, keeping the sign."""
    if n == 0:
        raise ValueError("squarefree_part(0)")
    sign = -1 if n < 0 else 1
    out = 1
    for p, e in factorize(abs(n)).items():
        if e % 2:
            out *= p
    return sign * out


class Rationals:
    """The field Q.  Elements are Fraction values in lowest terms."""

    char = 0

    # All instances are interchangeable; QQ below is the canonical one.
    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("Q")

    def __repr__(self):
        return "Q"

    @property
    def zero(self):
        return Fraction(0)

    @property
    def one(self):
        return Fraction(1)

    def from_int(self, n):
        return Fraction(n)

    def coerce(self, a):
        if isinstance(a, Fraction):
            return a
        if isinstance(a, int):
            return Fraction(a)
        raise FieldError(f"cannot coerce {a!r} into Q")

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def is_zero(self, a):
        return a == 0

    def is_unit(self, a):
        return a != 0

    def inv(self, a):
        if a == 0:
            raise FieldError("division by zero in Q")
        return 1 / a

    def div(self, a, b):
        return a * self.inv(b)

    exact_div = div

    def square_class(self, a):
        """Canonical representative of a*Q^{x2}: the squarefree integer with a's sign."""
        a = self.coerce(a)
        if a == 0:
            raise FieldError("square_class(0)")
        return Fraction(squarefree_part(a.numerator * a.denominator))

    def format(self, a) -> str:
        return str(a)

    def parse(self, text: str):
        text = text.strip()
        if "/" in text:
            num, den = text.split("/")
            return Fraction(int(num), int(den))
        return Fraction(int(text))


class PrimeField:
    """The prime field F_p.  Elements are ints reduced into [0, p)."""

    def __init__(self, p: int):
        if not is_prime(p):
            raise FieldError(f"{p} is not prime")
        self.p = p
        self.char = p
        self._nonresidue = None
        self._generator = None

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("Fp", self.p))

    def __repr__(self):
        return f"F{self.p}"

    @property
    def zero(self):
        return 0

    @property
    def one(self):
        return 1

    def from_int(self, n):
        return n % self.p

    def coerce(self, a):
        if isinstance(a, int):
            return a % self.p
        if isinstance(a, Fraction):
            if a.denominator % self.p == 0:
                raise FieldError(f"denominator of {a} vanishes mod {self.p}")
            return (a.numerator * pow(a.denominator, -1, self.p)) % self.p
        raise FieldError(f"cannot coerce {a!r} into F_{self.p}")

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def is_zero(self, a):
        return a % self.p == 0

    def is_unit(self, a):
        return a % self.p != 0

    def inv(self, a):
        if a % self.p == 0:
            raise FieldError(f"division by zero in F_{self.p}")
        return pow(a, -1, self.p)

    def div(self, a, b):
        return (a * self.inv(b)) % self.p

    exact_div = div

    def elements(self):
        return range(self.p)

    def units(self):
        return range(1, self.p)

    def legendre(self, a) -> int:
        """+1 for a nonzero square, -1 for a nonsquare, 0 for 0 (p odd)."""
        if self.p == 2:
            raise FieldError("legendre symbol needs odd p")
        a %= self.p
        if a == 0:
            return 0
        return 1 if pow(a, (self.p - 1) // 2, self.p) == 1 else -1

    def nonresidue(self):
        """Smallest quadratic non-residue (p odd)."""
        if self._nonresidue is None:
            if self.p == 2:
                raise FieldError("F_2 has no non-residue")
            for a in range(2, self.p):
                if self.legendre(a) == -1:
                    self._nonresidue = a
                    break
        return self._nonresidue

    def generator(self):
        """Smallest generator of the unit group."""
        if self._generator is None:
            order = self.p - 1
            prime_divs = list(factorize(order)) if order > 1 else []
            for g in range(1, self.p):
                if all(pow(g, order // q, self.p) != 1 for q in prime_divs):
                    self._generator = g
                    break
        return self._generator

    def dlog(self, a) -> int:
        """Discrete log of a unit with respect to generator(), by direct scan."""
        a %= self.p
        if a == 0:
            raise FieldError("dlog(0)")
        g = self.generator()
        x = 1
        for e in range(self.p - 1):
            if x == a:
                return e
            x = (x * g) % self.p
        raise AssertionError("unreachable")

    def square_class(self, a):
        """1 for squares; the smallest non-residue otherwise.  Always 1 in F_2."""
        a = a % self.p
        if a == 0:
            raise FieldError("square_class(0)")
        if self.p == 2:
            return 1
        return 1 if self.legendre(a) == 1 else self.nonresidue()

    def format(self, a) -> str:
        return str(a % self.p)

    def parse(self, text: str):
        text = text.strip()
        if "/" in text:
            num, den = text.split("/")
            return self.div(int(num) % self.p, int(den) % self.p)
        return int(text) % self.p


QQ = Rationals()

_GF_CACHE: dict[int, PrimeField] = {}


def GF(p: int) -> PrimeField:
    if p not in _GF_CACHE:
        _GF_CACHE[p] = PrimeField(p)
    return _GF_CACHE[p]


def field_from_name(name: str):
    """Parse a CLI field spec: Q | F2 | F3 | F5 | Fp=101."""
    name = name.strip()
    if name in ("Q", "QQ"):
        return QQ
    if name.startswith("Fp="):
        return GF(int(name[3:]))
    if name.startswith("F"):
        return GF(int(name[1:]))
    raise FieldError(f"unknown field {name!r}")


def field_name(field) -> str:
    if isinstance(field, Rationals):
        return "Q"
    return f"F{field.p}"
