"""Exact arithmetic layer: sawtooth, Dedekind sums, phases, Kronecker, A_k."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st
from mpmath import mp, mpf

from mocktheta.arith import (Phase, dedekind_sum, dedekind_sum_reciprocity,
                             dedekind_sum_sawtooth, kloosterman_A, kronecker,
                             omega, sawtooth)


class TestSawtooth:
    def test_integers_map_to_zero(self):
        for n in (-3, 0, 1, 7):
            assert sawtooth(n) == 0

    def test_quarter(self):
        assert sawtooth(Fraction(1, 4)) == Fraction(-1, 4)

    def test_negative_third(self):
        # -1/3 - (-1) - 1/2 = 1/6
        assert sawtooth(Fraction(-1, 3)) == Fraction(1, 6)

    @given(st.fractions(min_value=-10, max_value=10))
    @settings(max_examples=80, deadline=None)
    def test_oddness_off_integers(self, x):
        if x.denominator == 1:
            assert sawtooth(x) == 0
        else:
            assert sawtooth(-x) == -sawtooth(x)


class TestDedekindSum:
    @pytest.mark.parametrize("h,k,value", [
        (0, 1, Fraction(0)),
        (1, 2, Fraction(0)),
        (1, 3, Fraction(1, 18)),
        (1, 4, Fraction(1, 8)),
        (3, 8, Fraction(1, 16)),
    ])
    def test_known_values(self, h, k, value):
        assert dedekind_sum(h, k) == value

    def test_rejects_common_factor(self):
        with pytest.raises(ValueError, match="undefined Dedekind sum"):
            dedekind_sum(2, 4)

    @pytest.mark.parametrize("h,k", [(1, 5), (2, 7), (5, 12), (7, 30), (11, 64)])
    def test_matches_literal_sawtooth_sum(self, h, k):
        assert dedekind_sum(h, k) == dedekind_sum_sawtooth(h, k)

    @given(st.integers(min_value=1, max_value=400), st.integers(min_value=1, max_value=400))
    @settings(max_examples=60, deadline=None)
    def test_reciprocity(self, h, k):
        """s(h,k) + s(k,h) = -1/4 + (h/k + k/h + 1/(hk))/12 (independent oracle)."""
        if math.gcd(h, k) != 1:
            return
        lhs = dedekind_sum(h, k) + dedekind_sum(k, h)
        rhs = Fraction(-1, 4) + (Fraction(h, k) + Fraction(k, h)
                                 + Fraction(1, h * k)) / 12
        assert lhs == rhs

    @given(st.integers(min_value=1, max_value=300), st.integers(min_value=2, max_value=300))
    @settings(max_examples=60, deadline=None)
    def test_oddness_and_fast_algorithm(self, h, k):
        if math.gcd(h, k) != 1:
            return
        assert dedekind_sum(k - h, k) == -dedekind_sum(h, k)
        assert dedekind_sum_reciprocity(h, k) == dedekind_sum(h, k)


class TestOmega:
    def test_identity_phase(self):
        assert omega(0, 1).r == 0

    def test_one_third(self):
        assert omega(1, 3).r == Fraction(1, 18)

    @pytest.mark.parametrize("k", [3, 5, 7, 11, 24])
    def test_negative_h_conjugates(self, k):
        assert omega(-1, k).r == Phase(-omega(1, k).r).r

    def test_phase_product_and_lowering(self):
        p = Phase(Fraction(1, 3)) * Phase(Fraction(5, 3))
        assert p.r == 0
        val = Phase(Fraction(1, 2)).lower(128)
        assert abs(val - 1j) < mpf(2) ** -120
        assert abs(abs(Phase(Fraction(7, 13)).lower(128)) - 1) < mpf(2) ** -120


class TestKronecker:
    def test_unit_denominator(self):
        assert kronecker(-12, 1) == 1

    def test_minus_twelve_table(self):
        assert kronecker(-12, 5) == -1
        assert kronecker(-12, 7) == 1
        # periodic mod 12, supported on units
        table = {1: 1, 5: -1, 7: 1, 11: -1}
        for n in range(1, 200):
            expected = table.get(n % 12, 0)
            assert kronecker(-12, n) == expected

    def test_twelve_table(self):
        for n in range(1, 100):
            if math.gcd(n, 12) != 1:
                assert kronecker(12, n) == 0
            elif n % 12 in (1, 11):
                assert kronecker(12, n) == 1
            else:
                assert kronecker(12, n) == -1

    def _euler_criterion(self, a, p):
        """(a/p) for odd prime p: independent oracle via a^((p-1)/2) mod p."""
        r = pow(a % p, (p - 1) // 2, p)
        return 0 if r == 0 else (1 if r == 1 else -1)

    def test_against_euler_criterion(self):
        primes = [p for p in range(3, 200)
                  if all(p % d for d in range(2, int(p ** 0.5) + 1))]
        for a in (-12, 12, 5, -4, 60):
            for p in primes:
                assert kronecker(a, p) == self._euler_criterion(a, p)

    def test_total_multiplicativity(self):
        for a in (-12, 12):
            for m in range(1, 100):
                for n in range(1, 30):
                    assert kronecker(a, m * n) == kronecker(a, m) * kronecker(a, n)


class TestKloosterman:
    def test_k1_is_one(self):
        for n in (-5, 0, 3, 17):
            kv = kloosterman_A(1, n, 128)
            assert abs(kv.value - 1) < mpf(2) ** -110

    def test_k2_alternates(self):
        for n in range(-4, 5):
            kv = kloosterman_A(2, n, 128)
            assert abs(kv.value - (-1) ** n) < mpf(2) ** -110

    @pytest.mark.parametrize("k,n", [(6, 1), (14, -3), (25, 7), (50, 11), (100, 4)])
    def test_realness_bound(self, k, n):
        """x -> -x pairs terms with their conjugates, so A_k(n) is real."""
        prec = 192
        kv = kloosterman_A(2 * k, n, prec)
        phi = sum(1 for x in range(2 * k) if math.gcd(x, 2 * k) == 1)
        bound = mpf(2) ** (-prec + math.ceil(math.log2(max(phi, 2))) + 4)
        assert abs(kv.value.imag) < bound
