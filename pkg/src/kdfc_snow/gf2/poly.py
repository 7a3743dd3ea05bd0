"""Univariate polynomial arithmetic over GF(2).

A polynomial is packed into a Python int: bit i is the coefficient of x^i.
The zero polynomial has degree -1 (sentinel).
"""

from __future__ import annotations

from typing import Iterable, Sequence


class Gf2Poly:
    """Immutable univariate polynomial over GF(2)."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: int):
        if coeffs < 0:
            raise ValueError("negative coefficient packing")
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, name, value):
        raise AttributeError("Gf2Poly is immutable")

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls) -> "Gf2Poly":
        return cls(0)

    @classmethod
    def one(cls) -> "Gf2Poly":
        return cls(1)

    @classmethod
    def x(cls) -> "Gf2Poly":
        return cls(2)

    @classmethod
    def from_exponents(cls, exponents: Iterable[int]) -> "Gf2Poly":
        c = 0
        for e in exponents:
            if e < 0:
                raise ValueError("negative exponent")
            c ^= 1 << e  # repeated exponents cancel over GF(2)
        return cls(c)

    # -- structure ---------------------------------------------------------

    @property
    def degree(self) -> int:
        """Highest exponent with nonzero coefficient; -1 for the zero poly."""
        return self.coeffs.bit_length() - 1

    def is_zero(self) -> bool:
        return self.coeffs == 0

    def is_monic(self) -> bool:
        return self.coeffs != 0

    def coeff(self, i: int) -> int:
        return (self.coeffs >> i) & 1

    def exponents(self) -> list[int]:
        """Sorted (ascending) exponents of the nonzero terms."""
        out = []
        c = self.coeffs
        while c:
            out.append((c & -c).bit_length() - 1)
            c &= c - 1
        return out

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: "Gf2Poly") -> "Gf2Poly":
        return Gf2Poly(self.coeffs ^ other.coeffs)

    __sub__ = __add__

    def __mul__(self, other: "Gf2Poly") -> "Gf2Poly":
        a, b = self.coeffs, other.coeffs
        if a.bit_length() > b.bit_length():
            a, b = b, a
        acc = 0
        shift = 0
        while a:
            if a & 1:
                acc ^= b << shift
            a >>= 1
            shift += 1
        return Gf2Poly(acc)

    def __divmod__(self, other: "Gf2Poly") -> tuple["Gf2Poly", "Gf2Poly"]:
        if other.coeffs == 0:
            raise ZeroDivisionError("division by the zero polynomial")
        r = self.coeffs
        d = other.coeffs
        dl = d.bit_length()
        q = 0
        while r.bit_length() >= dl:
            shift = r.bit_length() - dl
            r ^= d << shift
            q |= 1 << shift
        return Gf2Poly(q), Gf2Poly(r)

    def __mod__(self, other: "Gf2Poly") -> "Gf2Poly":
        return divmod(self, other)[1]

    def __floordiv__(self, other: "Gf2Poly") -> "Gf2Poly":
        return divmod(self, other)[0]

    def square(self) -> "Gf2Poly":
        """Squaring = bit spreading over GF(2)."""
        c = self.coeffs
        out = 0
        i = 0
        while c:
            if c & 1:
                out |= 1 << (2 * i)
            c >>= 1
            i += 1
        return Gf2Poly(out)

    def evaluate(self, x: int) -> int:
        """Evaluate at a GF(2) point (0 or 1)."""
        if x == 0:
            return self.coeffs & 1
        return self.coeffs.bit_count() & 1

    # -- dunder -------------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Gf2Poly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(("Gf2Poly", self.coeffs))

    def __bool__(self) -> bool:
        return self.coeffs != 0

    def __str__(self) -> str:
        if self.coeffs == 0:
            return "0"
        terms = []
        for e in reversed(self.exponents()):
            if e == 0:
                terms.append("1")
            elif e == 1:
                terms.append("x")
            else:
                terms.append(f"x^{e}")
        return " + ".join(terms)

    def __repr__(self) -> str:
        return f"Gf2Poly({self})"

    def to_json(self) -> list[int]:
        return self.exponents()

    @classmethod
    def from_json(cls, exponents: Sequence[int]) -> "Gf2Poly":
        return cls.from_exponents(exponents)


def weight(p: Gf2Poly) -> int:
    """Number of nonzero coefficients."""
    return p.coeffs.bit_count()


def reciprocal(p: Gf2Poly) -> Gf2Poly:
    """x^deg(p) * p(1/x): the coefficient sequence reversed.

    Requires a nonzero constant term so the degree is preserved (otherwise
    the reversal would silently drop leading zeros).
    """
    d = p.degree
    if d < 0 or not p.coeff(0):
        raise ValueError("reciprocal needs a nonzero constant term")
    return Gf2Poly.from_exponents(d - e for e in p.exponents())


def gcd(a: Gf2Poly, b: Gf2Poly) -> Gf2Poly:
    """Euclidean GCD in GF(2)[x] (monic by construction)."""
    x, y = a.coeffs, b.coeffs
    while y:
        x, y = y, _mod_int(x, y)
    return Gf2Poly(x)


def _mod_int(a: int, m: int) -> int:
    ml = m.bit_length()
    while a.bit_length() >= ml:
        a ^= m << (a.bit_length() - ml)
    return a


def _mulmod_int(a: int, b: int, m: int) -> int:
    acc = 0
    while a:
        if a & 1:
            acc ^= b
        a >>= 1
        b <<= 1
    return _mod_int(acc, m)


def inv_mod(a: Gf2Poly, mod: Gf2Poly) -> Gf2Poly:
    """Inverse of a modulo `mod` by extended Euclid; raises if not coprime."""
    m = mod.coeffs
    if m == 0:
        raise ZeroDivisionError("modulus is the zero polynomial")
    r0, r1 = m, _mod_int(a.coeffs, m)
    s0, s1 = 0, 1  # Bezout coefficients for the second argument
    while r1:
        # one long-division step: r0 = q*r1 + r, tracked on the s side
        r, s = r0, s0
        shift_limit = r1.bit_length()
        while r.bit_length() >= shift_limit:
            k = r.bit_length() - shift_limit
            r ^= r1 << k
            s ^= s1 << k
        r0, r1 = r1, r
        s0, s1 = s1, s
    if r0 != 1:
        raise ZeroDivisionError(f"not invertible: gcd has degree {r0.bit_length() - 1}")
    return Gf2Poly(_mod_int(s0, m))


def powmod(base: Gf2Poly, exp: int, mod: Gf2Poly) -> Gf2Poly:
    """base^exp mod `mod` by square-and-multiply (exp is a plain integer)."""
    if exp < 0:
        raise ValueError("negative exponent")
    if mod.coeffs == 0:
        raise ZeroDivisionError("modulus is the zero polynomial")
    result = _mod_int(1, mod.coeffs)
    b = _mod_int(base.coeffs, mod.coeffs)
    m = mod.coeffs
    while exp:
        if exp & 1:
            result = _mulmod_int(result, b, m)
        b = _mulmod_int(b, b, m)
        exp >>= 1
    return Gf2Poly(result)


def _sqmod_int(a: int, m: int) -> int:
    """a^2 mod m using bit spreading."""
    out = 0
    i = 0
    while a:
        if a & 1:
            out |= 1 << (2 * i)
        a >>= 1
        i += 1
    return _mod_int(out, m)


def is_irreducible(p: Gf2Poly) -> bool:
    """Rabin irreducibility test.

    p of degree d is irreducible over GF(2) iff x^(2^d) = x (mod p) and
    gcd(x^(2^(d/q)) - x, p) = 1 for every prime q dividing d.
    """
    d = p.degree
    if d < 1:
        return False
    if d == 1:
        return True
    if not (p.coeffs & 1):
        return False  # divisible by x
    if p.coeffs.bit_count() % 2 == 0:
        return False  # p(1) = 0, divisible by x + 1
    pc = p.coeffs
    checkpoints = {d // q for q in _prime_factors(d)}
    t = 2  # x
    for k in range(1, d + 1):
        t = _sqmod_int(t, pc)
        if k in checkpoints:
            g = gcd(Gf2Poly(t ^ 2), p)
            if g.degree > 0:
                return False
    return t == 2  # x^(2^d) == x (mod p)


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


class FactorTableMissError(ValueError):
    """2^d - 1 has no shipped factorization (degree above 64)."""


def is_primitive(p: Gf2Poly) -> bool:
    """True iff p is primitive: irreducible with ord(x mod p) = 2^d - 1.

    Requires the shipped factorization of 2^d - 1, available for d <= 64;
    raises FactorTableMissError beyond that (callers fall back to the
    vetted PrimitiveTable entries).
    """
    d = p.degree
    if d < 1:
        return False
    from kdfc_snow.gf2.primtable import mersenne_factors

    try:
        factors = mersenne_factors(d)
    except KeyError as exc:
        raise FactorTableMissError(
            f"no shipped factorization of 2^{d} - 1"
        ) from exc
    if not is_irreducible(p):
        return False
    order = (1 << d) - 1
    x = Gf2Poly(2)
    for q in sorted(set(factors)):
        if powmod(x, order // q, p).coeffs == 1:
            return False
    return True


def euler_phi_2n1(d: int) -> int:
    """Euler phi of 2^d - 1 via the shipped factor table (d <= 64)."""
    from kdfc_snow.gf2.primtable import mersenne_factors

    n = (1 << d) - 1
    phi = n
    for q in sorted(set(mersenne_factors(d))):
        phi = phi // q * (q - 1)
    return phi
