import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import poly_expand_denominator, poly_mul
from pnkparity.polyring import (
    ModPoly,
    QuotientElement,
    denominator_poly,
    divrem,
    divrem_generic,
    mul,
    mul_generic,
    pow_q_mod,
)


def poly(m, *coeffs):
    return ModPoly(m, list(coeffs))


def polys(m, max_len=40):
    return st.lists(st.integers(0, m - 1), max_size=max_len).map(lambda c: ModPoly(m, c))


moduli = st.sampled_from([2, 3, 4, 5, 6, 7, 12])


class TestModPoly:
    def test_canonical_form(self):
        p = poly(5, 1, 2, 0, 0)
        assert p.coeffs == (1, 2)
        assert p.degree == 1

    def test_zero(self):
        z = ModPoly(3)
        assert z.is_zero()
        assert z.degree == float("-inf")
        assert ModPoly(3, [3, 6, 0]).is_zero()

    def test_coefficients_reduced(self):
        assert poly(4, -1, 9).coeffs == (3, 1)

    def test_bits_round_trip(self):
        p = poly(2, 1, 0, 1, 1)
        assert p.to_bits() == 0b1101
        assert ModPoly.from_bits(0b1101) == p
        assert ModPoly.from_bits(0).is_zero()


class TestArithmetic:
    def test_frobenius_square(self):
        assert mul(poly(2, 1, 1), poly(2, 1, 1)) == poly(2, 1, 0, 1)

    def test_times_zero(self):
        assert mul(poly(7, 3, 4), ModPoly(7)).is_zero()

    def test_binomial_mod2(self):
        # (1+q)^3 (1+q) = (1+q)^4 = 1 + q^4 over GF(2)
        assert mul(poly(2, 1, 1, 1, 1), poly(2, 1, 1)) == poly(2, 1, 0, 0, 0, 1)

    def test_modulus_mismatch(self):
        with pytest.raises(ValueError):
            poly(2, 1) + poly(3, 1)
        with pytest.raises(ValueError):
            mul(poly(2, 1), poly(3, 1))

    def test_add_sub(self):
        a, b = poly(6, 1, 5, 3), poly(6, 5, 1, 3)
        assert a + b == ModPoly(6, [0, 0, 0])
        assert a - a == ModPoly(6)
        assert (a - b) + b == a

    @given(moduli.flatmap(lambda m: st.tuples(polys(m), polys(m))))
    @settings(max_examples=150, deadline=None)
    def test_mul_matches_schoolbook_oracle(self, ab):
        a, b = ab
        assert list(mul(a, b).coeffs) == poly_mul(list(a.coeffs), list(b.coeffs), a.modulus)

    @given(moduli.flatmap(lambda m: st.tuples(polys(m, 15), polys(m, 15), polys(m, 15))))
    @settings(max_examples=100, deadline=None)
    def test_ring_axioms(self, abc):
        a, b, c = abc
        assert mul(mul(a, b), c) == mul(a, mul(b, c))
        assert mul(a, b + c) == mul(a, b) + mul(a, c)
        assert mul(a, b) == mul(b, a)

    @given(polys(2, 60), polys(2, 60))
    @settings(max_examples=100, deadline=None)
    def test_frobenius(self, a, b):
        assert mul(a + b, a + b) == mul(a, a) + mul(b, b)

    @given(st.integers(0, 2**10000), st.integers(0, 2**10000))
    @settings(max_examples=10, deadline=None)
    def test_gf2_fast_path_equals_generic(self, x, y):
        a, b = ModPoly.from_bits(x), ModPoly.from_bits(y)
        assert mul(a, b) == mul_generic(a, b)


class TestDivision:
    def test_one_minus_q4_by_denominator(self):
        d = denominator_poly(2, 2)
        quo, rem = divrem(poly(2, 1, 0, 0, 0, 1), d)
        assert quo == poly(2, 1, 1)
        assert rem.is_zero()

    @pytest.mark.parametrize("m", [2, 3, 10])
    def test_self_division(self, m):
        d = denominator_poly(4, m)
        quo, rem = divrem(d, d)
        assert quo == ModPoly.one(m) and rem.is_zero()

    def test_small_dividend(self):
        d = denominator_poly(3, 5)
        a = poly(5, 4, 3, 2)
        quo, rem = divrem(a, d)
        assert quo.is_zero() and rem == a

    def test_non_unit_leading_coefficient(self):
        with pytest.raises(ValueError):
            divrem(poly(6, 1, 2, 3), poly(6, 1, 2))

    def test_zero_divisor(self):
        with pytest.raises(ZeroDivisionError):
            divrem(poly(2, 1, 1), ModPoly(2))
        with pytest.raises(ZeroDivisionError):
            divrem(poly(3, 1, 1), ModPoly(3))

    @given(moduli.flatmap(lambda m: st.tuples(polys(m, 60), st.integers(1, 7), st.just(m))))
    @settings(max_examples=150, deadline=None)
    def test_round_trip(self, args):
        a, k, m = args
        d = denominator_poly(k, m)
        quo, rem = divrem(a, d)
        assert mul(quo, d) + rem == a
        assert rem.degree < d.degree

    @given(polys(2, 80), st.integers(1, 9))
    @settings(max_examples=60, deadline=None)
    def test_gf2_division_equals_generic(self, a, k):
        d = denominator_poly(k, 2)
        assert divrem(a, d) == divrem_generic(a, d)


class TestDenominator:
    def test_k2_mod2(self):
        assert denominator_poly(2, 2) == poly(2, 1, 1, 1, 1)

    def test_k1_mod7(self):
        assert denominator_poly(1, 7) == poly(7, 1, 6)

    def test_k3_mod2(self):
        d = denominator_poly(3, 2)
        assert d.degree == 6 and d[0] == 1

    @pytest.mark.parametrize("k", range(1, 13))
    @pytest.mark.parametrize("m", [2, 3, 4, 5, 6, 9])
    def test_shape_and_oracle(self, k, m):
        d = denominator_poly(k, m)
        assert d.degree == k * (k + 1) // 2
        assert d[0] == 1
        assert d.lead in {1, m - 1}
        assert list(d.coeffs) == poly_expand_denominator(k, m)


class TestPowers:
    def test_zero_exponent(self):
        assert pow_q_mod(denominator_poly(5, 3), 0).is_one()

    def test_q4_is_one_for_k2(self):
        assert pow_q_mod(denominator_poly(2, 2), 4).is_one()

    def test_q2_is_not_one_for_k2(self):
        x = pow_q_mod(denominator_poly(2, 2), 2)
        assert not x.is_one()
        assert x.rep == poly(2, 0, 0, 1)

    def test_accepts_objects_with_value(self):
        class Boxed:
            value = 4

        assert pow_q_mod(denominator_poly(2, 2), Boxed()).is_one()

    def test_negative_exponent(self):
        with pytest.raises(ValueError):
            pow_q_mod(denominator_poly(2, 2), -1)

    @pytest.mark.parametrize("m", [2, 3, 6])
    def test_matches_repeated_multiplication(self, m):
        d = denominator_poly(4, m)
        q = QuotientElement(d, poly(m, 0, 1))
        acc = QuotientElement(d, ModPoly.one(m))
        for e in range(60):
            assert pow_q_mod(d, e) == acc
            acc = acc * q

    @given(st.sampled_from([2, 3, 4, 5, 6]), st.integers(1, 8),
           st.integers(0, 10**12), st.integers(0, 10**12))
    @settings(max_examples=60, deadline=None)
    def test_exponent_additivity(self, m, k, e1, e2):
        d = denominator_poly(k, m)
        assert pow_q_mod(d, e1 + e2) == pow_q_mod(d, e1) * pow_q_mod(d, e2)

    def test_representative_is_reduced(self):
        d = denominator_poly(3, 5)
        x = QuotientElement(d, ModPoly(5, [1] * 20))
        assert x.rep.degree < d.degree
        assert x == QuotientElement(d, divrem(ModPoly(5, [1] * 20), d)[1])
