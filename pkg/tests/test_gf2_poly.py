"""Polynomial arithmetic over GF(2) against sympy and algebraic identities."""

import random

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from kdfc_snow.gf2.poly import (
    FactorTableMissError,
    Gf2Poly,
    euler_phi_2n1,
    gcd,
    inv_mod,
    is_irreducible,
    is_primitive,
    powmod,
    weight,
)

polys = st.integers(min_value=0, max_value=(1 << 40) - 1).map(Gf2Poly)
nonzero_polys = st.integers(min_value=1, max_value=(1 << 40) - 1).map(Gf2Poly)


def sympy_poly(p: Gf2Poly):
    x = sympy.Symbol("x")
    return sympy.Poly.from_list(
        [(p.coeffs >> i) & 1 for i in range(p.degree, -1, -1)] or [0],
        x,
        modulus=2,
    )


def from_sympy(sp) -> Gf2Poly:
    coeffs = 0
    for c in sp.all_coeffs():
        coeffs = (coeffs << 1) | (int(c) % 2)
    return Gf2Poly(coeffs)


class TestBasics:
    def test_constructor_rejects_negative(self):
        with pytest.raises(ValueError):
            Gf2Poly(-1)

    def test_zero_one_x(self):
        assert Gf2Poly.zero().is_zero()
        assert Gf2Poly.one().coeffs == 1
        assert Gf2Poly.x().coeffs == 2
        assert Gf2Poly.zero().degree == -1
        assert Gf2Poly.one().degree == 0

    @pytest.mark.parametrize(
        "exps", [[0], [3, 1, 0], [8, 4, 3, 2, 0], [512, 2, 0]]
    )
    def test_exponent_roundtrip(self, exps):
        p = Gf2Poly.from_exponents(exps)
        assert p.exponents() == sorted(exps)
        assert p.degree == max(exps)
        assert weight(p) == len(exps)
        assert Gf2Poly.from_json(p.to_json()) == p

    def test_coeff_and_evaluate(self):
        p = Gf2Poly.from_exponents([4, 1, 0])
        assert [p.coeff(i) for i in range(6)] == [1, 1, 0, 0, 1, 0]
        assert p.evaluate(0) == 1  # constant term
        assert p.evaluate(1) == weight(p) % 2

    def test_str(self):
        assert str(Gf2Poly.from_exponents([4, 1, 0])) == "x^4 + x + 1"
        assert str(Gf2Poly.zero()) == "0"


class TestArithmeticVsSympy:
    @pytest.mark.parametrize("seed", range(6))
    def test_mul_matches_sympy(self, seed):
        rng = random.Random(seed)
        a = Gf2Poly(rng.getrandbits(48))
        b = Gf2Poly(rng.getrandbits(48))
        assert a * b == from_sympy(sympy_poly(a) * sympy_poly(b))

    @pytest.mark.parametrize("seed", range(6))
    def test_divmod_matches_sympy(self, seed):
        rng = random.Random(100 + seed)
        a = Gf2Poly(rng.getrandbits(64))
        b = Gf2Poly(rng.getrandbits(24) | 1)
        q, r = divmod(a, b)
        sq, sr = sympy.div(sympy_poly(a), sympy_poly(b), domain=sympy.GF(2))
        assert q == from_sympy(sq) and r == from_sympy(sr)

    @pytest.mark.parametrize("degree", [2, 3, 4, 5, 6])
    def test_irreducibility_matches_sympy_exhaustive(self, degree):
        x = sympy.Symbol("x")
        for low in range(1 << degree):
            p = Gf2Poly((1 << degree) | low)
            sp = sympy_poly(p)
            factors = sp.factor_list()[1]
            sympy_irr = len(factors) == 1 and factors[0][1] == 1
            assert is_irreducible(p) == sympy_irr, str(p)


class TestAlgebraicProperties:
    @given(polys, polys)
    def test_add_is_xor(self, a, b):
        assert (a + b).coeffs == a.coeffs ^ b.coeffs
        assert (a + a).is_zero()

    @given(polys, polys, polys)
    def test_mul_distributes(self, a, b, c):
        assert a * (b + c) == a * b + a * c

    @given(polys, polys)
    def test_mul_commutes(self, a, b):
        assert a * b == b * a

    @given(polys)
    def test_square(self, a):
        assert a.square() == a * a

    @given(polys, nonzero_polys)
    def test_divmod_identity(self, a, b):
        q, r = divmod(a, b)
        assert q * b + r == a
        assert r.degree < b.degree

    @given(polys, polys)
    def test_gcd_divides_both(self, a, b):
        g = gcd(a, b)
        if g.is_zero():
            assert a.is_zero() and b.is_zero()
        else:
            assert (a % g).is_zero() and (b % g).is_zero()


class TestModularArithmetic:
    MOD = Gf2Poly.from_exponents([8, 4, 3, 2, 0])

    @pytest.mark.parametrize("seed", range(8))
    def test_inv_mod(self, seed):
        rng = random.Random(seed)
        a = Gf2Poly(rng.getrandbits(8) | 1)
        inv = inv_mod(a, self.MOD)
        assert (a * inv) % self.MOD == Gf2Poly.one()

    def test_inv_mod_rejects_noninvertible(self):
        # shares the factor x with a reducible modulus
        with pytest.raises(ZeroDivisionError):
            inv_mod(Gf2Poly.x(), Gf2Poly.from_exponents([3, 1]))

    @pytest.mark.parametrize("exp", [0, 1, 2, 7, 255, 256])
    def test_powmod_matches_naive(self, exp):
        base = Gf2Poly.from_exponents([3, 1])
        acc = Gf2Poly.one()
        for _ in range(exp):
            acc = (acc * base) % self.MOD
        assert powmod(base, exp, self.MOD) == acc

    def test_powmod_fermat(self):
        # x^(2^8) = x mod an irreducible degree-8 polynomial
        assert powmod(Gf2Poly.x(), 1 << 8, self.MOD) == Gf2Poly.x()


class TestPrimitivity:
    @pytest.mark.parametrize(
        "exps", [[2, 1, 0], [3, 1, 0], [4, 1, 0], [8, 4, 3, 2, 0]]
    )
    def test_known_primitives(self, exps):
        assert is_primitive(Gf2Poly.from_exponents(exps))

    def test_irreducible_but_not_primitive(self):
        # all-ones degree-4 polynomial: its root has order 5, not 15
        p = Gf2Poly.from_exponents([4, 3, 2, 1, 0])
        assert is_irreducible(p)
        assert not is_primitive(p)

    def test_reducible_is_not_primitive(self):
        assert not is_primitive(Gf2Poly.from_exponents([4, 0]))

    def test_order_counting(self):
        # number of primitive degree-d polynomials is phi(2^d - 1) / d
        count = sum(
            is_primitive(Gf2Poly((1 << 4) | low)) for low in range(16)
        )
        assert count == euler_phi_2n1(4) // 4 == 2

    @pytest.mark.parametrize(
        "d,phi", [(2, 2), (3, 6), (4, 8), (5, 30), (16, 32768)]
    )
    def test_euler_phi(self, d, phi):
        assert euler_phi_2n1(d) == phi

    def test_factor_table_bound(self):
        with pytest.raises(FactorTableMissError):
            euler_phi_2n1(600)
