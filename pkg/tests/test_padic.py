import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import gabor_lca as gl
from gabor_lca.padic import (
    NotPrimeError,
    PadicScalar,
    Place,
    RationalMatrix,
    SingularMatrixError,
)

primes = st.sampled_from([2, 3, 5, 7, 11, 13])
# prime factors must stay below the certification bound, so bound the
# numerator and denominator directly
rationals = st.builds(Fraction, st.integers(-10 ** 5, 10 ** 5), st.integers(1, 10 ** 4))
nonzero_rationals = rationals.filter(lambda q: q != 0)


class TestPrimes:
    def test_small_primes_accepted(self):
        for p in (2, 3, 5, 97, 65537):
            assert gl.certify_prime(p) == p

    def test_composites_rejected(self):
        for n in (1, 0, -3, 4, 91, 561):
            with pytest.raises(NotPrimeError):
                gl.certify_prime(n)

    def test_large_candidates_rejected(self):
        with pytest.raises(NotPrimeError):
            gl.certify_prime((1 << 20) + 7)


class TestValuation:
    def test_examples(self):
        assert gl.valuation(12, 2) == 2
        assert gl.valuation(Fraction(1, 6), 3) == -1
        assert gl.valuation(0, 5) == math.inf

    def test_nonprime_rejected(self):
        with pytest.raises(NotPrimeError):
            gl.valuation(12, 6)

    @settings(max_examples=80, deadline=None)
    @given(nonzero_rationals, primes)
    def test_defining_factorization(self, q, p):
        v = gl.valuation(q, p)
        unit = q / Fraction(p) ** v
        assert unit.numerator % p != 0
        assert unit.denominator % p != 0


class TestPadicAbs:
    def test_examples(self):
        assert gl.padic_abs(12, 2) == Fraction(1, 4)
        assert gl.padic_abs(Fraction(1, 6), 3) == 3
        assert gl.padic_abs(0, 7) == 0

    @settings(max_examples=80, deadline=None)
    @given(nonzero_rationals, nonzero_rationals, primes)
    def test_multiplicative(self, x, y, p):
        assert gl.padic_abs(x * y, p) == gl.padic_abs(x, p) * gl.padic_abs(y, p)

    @settings(max_examples=80, deadline=None)
    @given(rationals, rationals, primes)
    def test_ultrametric(self, x, y, p):
        assert gl.padic_abs(x + y, p) <= max(gl.padic_abs(x, p), gl.padic_abs(y, p))

    @settings(max_examples=60, deadline=None)
    @given(nonzero_rationals)
    def test_product_formula(self, q):
        support = set()
        for n in (q.numerator, q.denominator):
            n = abs(n)
            d = 2
            while d * d <= n:
                if n % d == 0:
                    support.add(d)
                    while n % d == 0:
                        n //= d
                d += 1
            if n > 1:
                support.add(n)
        product = abs(q)
        for p in support:
            product *= gl.padic_abs(q, p)
        assert product == 1


class TestPadicScalar:
    def test_basics(self):
        s = PadicScalar(Fraction(9, 2), 3)
        assert s.valuation() == 2
        assert s.abs_value() == Fraction(1, 9)
        assert not PadicScalar(Fraction(1, 3), 3).is_integral()

    def test_zero_sentinel(self):
        assert PadicScalar(Fraction(0), 5).valuation() == math.inf


class TestRationalMatrix:
    def test_det_and_inverse_exact(self):
        A = RationalMatrix.from_rows([[1, 2], [3, "5/2"]])
        assert A.det == Fraction(-7, 2)
        inv = A.inverse()
        assert inv @ A == RationalMatrix.identity(2)

    def test_solve(self):
        A = RationalMatrix.from_rows([[2, 1], [1, 1]])
        assert A.solve([3, 2]) == (Fraction(1), Fraction(1))

    def test_singular_raises(self):
        A = RationalMatrix.from_rows([[1, 2], [2, 4]])
        assert A.det == 0
        with pytest.raises(SingularMatrixError):
            A.inverse()


class TestGlnZp:
    def test_identity_everywhere(self):
        I = RationalMatrix.identity(3)
        for p in (2, 3, 5):
            assert gl.in_gl_n_zp(I, p)

    def test_diagonal_examples(self):
        assert not gl.in_gl_n_zp(RationalMatrix.from_rows([[2, 0], [0, 1]]), 2)
        assert gl.in_gl_n_zp(RationalMatrix.from_rows([[3, 0], [0, 1]]), 2)

    def test_singular_flagged(self):
        with pytest.raises(SingularMatrixError):
            gl.in_gl_n_zp(RationalMatrix.from_rows([[1, 1], [1, 1]]), 2)

    def test_inverse_consistency(self):
        rngs = [
            RationalMatrix.from_rows([[1, 2], [0, 1]]),
            RationalMatrix.from_rows([[Fraction(1, 2), 0], [0, 2]]),
            RationalMatrix.from_rows([[3, 1], [1, 2]]),
        ]
        for A in rngs:
            for p in (2, 3, 5):
                member = gl.in_gl_n_zp(A, p)
                both = member and gl.in_gl_n_zp(A.inverse(), p)
                assert member == both


class TestLocalModular:
    def test_scalar_example(self):
        a = RationalMatrix.from_rows([[3]])
        assert gl.local_modular(a, Place.finite(3)) == Fraction(1, 3)

    def test_identity(self):
        I = RationalMatrix.identity(2)
        assert gl.local_modular(I, Place.infinite()) == 1
        assert gl.local_modular(I, Place.finite(7)) == 1

    def test_diag_2_3(self):
        A = RationalMatrix.from_rows([[2, 0], [0, 3]])
        assert gl.local_modular(A, Place.finite(2)) == Fraction(1, 2)
        assert gl.local_modular(A, Place.finite(3)) == Fraction(1, 3)
        assert gl.local_modular(A, Place.infinite()) == 6

    def test_homomorphism_exact(self):
        A = RationalMatrix.from_rows([[2, 1], [1, 1]])
        B = RationalMatrix.from_rows([[Fraction(1, 3), 0], [1, 6]])
        for place in (Place.infinite(), Place.finite(2), Place.finite(3)):
            assert gl.local_modular(A @ B, place) == \
                gl.local_modular(A, place) * gl.local_modular(B, place)

    def test_singular_rejected(self):
        with pytest.raises(SingularMatrixError):
            gl.local_modular(RationalMatrix.from_rows([[0]]), Place.infinite())


class TestPlace:
    def test_str(self):
        assert str(Place.infinite()) == "infinity"
        assert str(Place.finite(5)) == "p=5"

    def test_finite_requires_prime(self):
        with pytest.raises(NotPrimeError):
            Place.finite(6)
