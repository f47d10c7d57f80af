import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from congr.exact import (
    DirichletCharacter, ExactScalar, NotCritical, PrecisionTooLow, ZeroInput, bernoulli,
    cf_recognize, char_eval, dirichlet_L_critical, factor, format_factored, gen_bernoulli,
    is_prime, kronecker, primes_upto, squarefree_decomposition, val_p,
)

CHI3 = DirichletCharacter.kronecker(-3)
TRIVIAL3 = DirichletCharacter.trivial(3)


def _trial_division(n):
    out, p = {}, 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return tuple(sorted(out.items()))


class TestFactor:
    def test_power_of_two(self):
        assert factor(64).factors == ((2, 6),)

    def test_prime_6761(self):
        assert factor(6761).factors == ((6761, 1),)

    def test_195804_matches_trial_division(self):
        f = factor(195804)
        assert f.factors == _trial_division(195804)
        assert f.value() == 195804

    def test_one_is_empty(self):
        assert factor(1).factors == ()

    def test_large_semiprime(self):
        p, q = 1_000_000_007, 998_244_353
        assert factor(p * q).factors == ((q, 1), (p, 1))

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            factor(0)

    @given(st.lists(st.sampled_from(primes_upto(2000)), min_size=1, max_size=8))
    def test_factor_of_product_recovers_primes(self, ps):
        n = math.prod(ps)
        f = factor(n)
        assert f.value() == n
        assert sorted(p for p, e in f.factors for _ in range(e)) == sorted(ps)
        assert all(is_prime(p) for p in f.primes())

    @given(st.integers(min_value=2, max_value=10**12))
    def test_factor_product_and_primality(self, n):
        f = factor(n)
        assert f.value() == n
        assert list(f.primes()) == sorted(set(f.primes()))
        assert all(is_prime(p) for p in f.primes())


class TestPrimality:
    def test_small_primes_match_sieve(self):
        sieve = set(primes_upto(5000))
        assert all(is_prime(n) == (n in sieve) for n in range(5001))

    def test_carmichael_and_strong_pseudoprimes(self):
        for n in (561, 1105, 3215031751, 3825123056546413051):
            assert not is_prime(n)

    def test_large_prime(self):
        assert is_prime(2**127 - 1)
        assert not is_prime(2**127 + 1)


class TestValuation:
    def test_examples(self):
        assert val_p(Fraction(4, 27), 3) == -3
        assert val_p(1, 7) == 0
        table = Fraction(2**38 * 31 * 137, 3**38 * 5**5 * 7**2 * 11 * 13 * 23)
        assert val_p(table, 31) == 1

    def test_zero(self):
        with pytest.raises(ZeroInput):
            val_p(0, 5)

    @settings(max_examples=500)
    @given(st.fractions().filter(bool), st.fractions().filter(bool), st.sampled_from([2, 3, 5, 7, 31]))
    def test_homomorphism(self, x, y, p):
        assert val_p(x * y, p) == val_p(x, p) + val_p(y, p)


class TestExactScalar:
    def test_normalizes(self):
        s = ExactScalar(6, 4, 12)
        assert (s.num, s.den, s.sqrt_disc) == (3, 1, 3)

    def test_gauss_sum_square(self):
        g = ExactScalar(1, 1, 3, 0, True)
        sq = g * g
        assert sq.is_rational and sq.rational == -3

    def test_division_by_imaginary(self):
        i = ExactScalar(1, 1, 0, 0, True)
        assert (ExactScalar(1) / i) == ExactScalar(-1, 1, 0, 0, True)

    def test_valuation_ignores_pi(self):
        assert ExactScalar(4, 27, 0, 5).val(3) == -3

    def test_half_integral_valuation(self):
        assert ExactScalar(4, 243, 3).val(3) == Fraction(-9, 2)

    def test_factored_string(self):
        assert ExactScalar(4, 243, 3).factored() == "2^2 / 3^5 * sqrt(3)"

    def test_to_mpf(self):
        with mpmath.workdps(30):
            assert abs(ExactScalar(4, 243, 3, 3).to_mpf() - 4 * mpmath.sqrt(3) * mpmath.pi**3 / 243) < 1e-28

    @given(st.fractions().filter(bool), st.fractions().filter(bool),
           st.sampled_from([0, 2, 3, 5, 6]), st.sampled_from([0, 2, 3, 5, 6]),
           st.booleans(), st.booleans())
    def test_mul_matches_float(self, a, b, r, s, i, j):
        x = ExactScalar.from_fraction(a, r, 0, i)
        y = ExactScalar.from_fraction(b, s, 0, j)
        with mpmath.workdps(40):
            lhs = (x * y).to_mpf()
            rhs = x.to_mpf() * y.to_mpf()
            assert abs(lhs - rhs) <= abs(rhs) * mpmath.mpf(10) ** -35
            q = (x / y).to_mpf()
            assert abs(q - x.to_mpf() / y.to_mpf()) <= abs(q) * mpmath.mpf(10) ** -35


class TestRecognition:
    def test_four_over_27(self):
        with mpmath.workdps(80):
            assert cf_recognize(mpmath.mpf(4) / 27, 80, 20) == Fraction(4, 27)

    def test_pi_and_e_no_match(self):
        with mpmath.workdps(150):
            assert cf_recognize(+mpmath.pi, 150, 30) is None
            assert cf_recognize(+mpmath.e, 150, 40) is None

    def test_precondition(self):
        with pytest.raises(PrecisionTooLow):
            cf_recognize(mpmath.mpf(1) / 3, 20, 5)
        with pytest.raises(PrecisionTooLow):
            cf_recognize(mpmath.mpf(1) / 3, 100, 50)

    def test_zero_and_integers(self):
        with mpmath.workdps(100):
            assert cf_recognize(mpmath.mpf(0), 100, 20) == 0
            assert cf_recognize(mpmath.mpf(-17), 100, 20) == -17

    def test_perturbed_rational_rejected(self):
        with mpmath.workdps(150):
            x = mpmath.mpf(4) / 27 + mpmath.mpf(10) ** -60
            assert cf_recognize(x, 150, 40) is None

    def test_small_magnitude(self):
        q = Fraction(2**37 * 523, 3**33 * 5**5 * 7**2 * 11 * 13 * 23)
        with mpmath.workdps(150):
            x = mpmath.mpf(q.numerator) / q.denominator
        assert cf_recognize(x, 140, 50) == q

    @settings(max_examples=200, deadline=None)
    @given(st.integers(min_value=1, max_value=10**40 - 1), st.integers(min_value=-10**42, max_value=10**42))
    def test_roundtrip(self, q, p):
        with mpmath.workdps(150):
            x = mpmath.mpf(p) / q
        assert cf_recognize(x, 150, 40) == Fraction(p, q)


class TestCharacters:
    def test_examples(self):
        assert char_eval(CHI3, 2) == -1
        assert char_eval(CHI3, 7) == 1
        assert char_eval(CHI3, 6) == 0

    def test_kronecker_matches_legendre(self):
        for p in primes_upto(200)[1:]:
            for a in range(1, 20):
                if a % p:
                    euler = 1 if pow(a, (p - 1) // 2, p) == 1 else -1
                    assert kronecker(a, p) == euler

    @given(st.integers(1, 10**6), st.integers(1, 10**6), st.sampled_from([-3, -4, -7, -8, 5, 8, 12]))
    def test_completely_multiplicative(self, m, n, d):
        chi = DirichletCharacter.kronecker(d)
        assert char_eval(chi, m * n) == char_eval(chi, m) * char_eval(chi, n)

    def test_power_parity(self):
        assert CHI3.power(3) == CHI3
        assert CHI3.power(2) == TRIVIAL3

    def test_bad_discriminant(self):
        with pytest.raises(ValueError):
            DirichletCharacter.kronecker(-12 * 4)


class TestBernoulli:
    def test_classical(self):
        assert bernoulli(2) == Fraction(1, 6)
        assert bernoulli(4) == Fraction(-1, 30)
        assert bernoulli(12) == Fraction(-691, 2730)

    def test_generalized(self):
        assert gen_bernoulli(1, CHI3) == Fraction(-1, 3)
        assert gen_bernoulli(2, CHI3) == 0
        assert gen_bernoulli(2, DirichletCharacter.trivial()) == Fraction(1, 6)

    @given(st.integers(1, 30), st.sampled_from([-3, -4, -7, 5, 8]))
    def test_parity_vanishing(self, n, d):
        chi = DirichletCharacter.kronecker(d)
        odd = 1 if chi.is_odd() else 0
        if (n - odd) % 2:
            assert gen_bernoulli(n, chi) == 0


class TestDirichletValues:
    def test_table(self):
        assert dirichlet_L_critical(2, TRIVIAL3).algebraic() == ExactScalar(4, 27)
        assert dirichlet_L_critical(3, CHI3).algebraic() == ExactScalar(4, 243, 3)
        assert dirichlet_L_critical(4, TRIVIAL3).algebraic() == ExactScalar(8, 729)
        assert dirichlet_L_critical(5, CHI3).algebraic() == ExactScalar(4, 2187, 3)

    def test_pi_power_recorded(self):
        assert dirichlet_L_critical(3, CHI3).pi_exp == 3

    def test_zeta_two(self):
        assert dirichlet_L_critical(2, DirichletCharacter.trivial()) == ExactScalar(1, 6, 0, 2)

    def test_parity_mismatch(self):
        with pytest.raises(NotCritical):
            dirichlet_L_critical(2, CHI3)
        with pytest.raises(NotCritical):
            dirichlet_L_critical(3, TRIVIAL3)

    @pytest.mark.parametrize("d", [-3, -4, -7, -8, 5, 8, 12])
    def test_against_mpmath(self, d):
        chi = DirichletCharacter.kronecker(d)
        q = abs(d)
        for j in range(1, 9):
            if (j - (1 if chi.is_odd() else 0)) % 2:
                continue
            exact = dirichlet_L_critical(j, chi)
            with mpmath.workdps(50):
                ref = mpmath.dirichlet(j, [char_eval(chi, a) for a in range(q)])
                assert abs(exact.to_mpf() - ref) < mpmath.mpf(10) ** -45


def test_helpers():
    assert squarefree_decomposition(72) == (6, 2)
    assert format_factored(factor(2**3 * 5)) == "2^3*5"
