from fractions import Fraction

import mpmath
import pytest

from congr.exact import DirichletCharacter, NotCritical, dirichlet_L_critical, primes_upto
from congr.lseries import (
    Inconsistent, LFunctionSpec, NeedMoreCoefficients, RootNumberUnknown, UnsupportedLevel,
    WeightOrder, afe_eval, conv_selected, conv_spec, dirichlet_spec, euler_product, fe_residual,
    gauss_sum, lalg_conv, lalg_sym2, petersson_norm, plan_terms, solve_root_number,
    sym2_candidates, sym2_selected, sym2_spec, zeta_spec,
)
from congr.lseries.builders import conv_local, sym2_local
from congr.lseries.lalg import removed_euler_factor, sym2_twist_for
from congr.qexp import delta, newform_s26

CHI3 = DirichletCharacter.kronecker(-3)


def _tol(digits):
    return mpmath.mpf(10) ** -digits


class TestCoefficients:
    def test_sym2_examples(self, phi):
        b = sym2_spec(phi).coefficients(10)
        assert b[1] == 1
        assert b[2] == 2304 - 2**25 == -33552128 == phi[4]

    def test_sym2_b_p_is_a_p_squared(self, phi_long):
        b = sym2_spec(phi_long).coefficients(100)
        for p in primes_upto(100):
            assert b[p] == phi_long[p * p]

    def test_twisted_sym2_drops_three(self, phi):
        b = sym2_spec(phi, CHI3).coefficients(30)
        assert b[3] == 0 and b[9] == 0
        assert b[2] == -b_untwisted(phi, 2)

    def test_conv_examples(self, phi, g):
        b = conv_spec(phi, g).coefficients(10)
        assert (b[1], b[2], b[3]) == (1, 0, 5286708)
        assert b[3] == phi[3] * g[3]

    def test_local_polynomials(self):
        # (1 - x)^3 for a = 2, nu = 1, psi = 1: Satake pair (1, 1)
        assert sym2_local(2, 1, 1) == (1, -3, 3, -1)
        assert conv_local(2, 1, 2, 1) == (1, -4, 6, -4, 1)

    def test_weight_order(self, phi, g):
        with pytest.raises(WeightOrder):
            conv_spec(g.with_coeffs(g.coeffs), phi)

    def test_coefficient_limit(self, phi):
        spec = sym2_spec(phi)
        with pytest.raises(NeedMoreCoefficients):
            spec.coefficients(phi.truncation + 100)

    def test_degree_consistency(self):
        with pytest.raises(ValueError):
            LFunctionSpec("bad", 2, 1, (("C", 0), ("R", 0)), 0, lambda p: (1,))


def b_untwisted(phi, n):
    return sym2_spec(phi).coefficients(n)[n]


class TestEvaluation:
    def test_zeta_two(self):
        for digits in (60, 150):
            v = afe_eval(zeta_spec(), 2, digits)
            with mpmath.workdps(digits + 10):
                assert abs(v.value - mpmath.pi**2 / 6) < _tol(digits - 10)
                assert v.abs_error_bound < _tol(digits - 10)

    def test_zeta_near_pole_and_negative(self):
        with mpmath.workdps(60):
            assert abs(afe_eval(zeta_spec(), mpmath.mpf("1.5"), 50).value - mpmath.zeta(1.5)) < _tol(45)
            assert abs(afe_eval(zeta_spec(), -3, 50).value - Fraction(1, 120)) < _tol(45)

    def test_root_number_required(self):
        spec = dirichlet_spec(CHI3).replace(root_number=None)
        with pytest.raises(RootNumberUnknown):
            afe_eval(spec, 2, 30)

    @pytest.mark.parametrize("d", [-3, -4, -7, 5, 8, 12])
    def test_dirichlet_exact_values(self, d):
        chi = DirichletCharacter.kronecker(d)
        spec = dirichlet_spec(chi)
        P = 80
        for j in range(1, 7):
            try:
                exact = dirichlet_L_critical(j, chi)
            except NotCritical:
                continue
            with mpmath.workdps(P + 10):
                assert abs(afe_eval(spec, j, P).value - exact.to_mpf()) < _tol(P - 20)

    def test_dirichlet_euler_oracle(self):
        spec = dirichlet_spec(CHI3)
        with mpmath.workdps(50):
            assert abs(afe_eval(spec, 12, 50).value - euler_product(spec, 12, 10**4)) < _tol(30)

    def test_plan_grows_with_conductor_and_precision(self, phi):
        base = sym2_spec(phi)
        n1 = plan_terms(base, 26, 60).n_max
        assert plan_terms(base, 26, 150).n_max > n1
        assert plan_terms(base.replace(conductor=27), 26, 60).n_max > n1


class TestFunctionalEquation:
    def test_zeta_root_number(self):
        assert solve_root_number(zeta_spec().replace(root_number=None)) == 1

    @pytest.mark.parametrize("d", [-3, -4, 5])
    def test_dirichlet_root_number(self, d):
        eps = solve_root_number(dirichlet_spec(DirichletCharacter.kronecker(d)).replace(root_number=None))
        assert abs(abs(eps) - 1) < 1e-20 and eps == 1

    def test_wrong_conductor_inconsistent(self):
        spec = dirichlet_spec(CHI3).replace(conductor=5, root_number=None)
        with pytest.raises(Inconsistent) as info:
            solve_root_number(spec)
        assert info.value.residual > 1e-5

    def test_zeta_residual(self):
        P = 60
        assert fe_residual(zeta_spec(), mpmath.mpc("1.3", "0.7"), P) < _tol(P - 20)

    def test_wrong_shift_residual(self):
        spec = dirichlet_spec(CHI3).replace(gamma_shifts=(("R", 0),))
        assert fe_residual(spec, mpmath.mpc("0.8", "0.3"), 40) > 1e-5


class TestSelection:
    def test_candidate_list(self, phi):
        cands = sym2_candidates(phi, CHI3)
        assert len(cands) == 8
        assert {c.conductor for c in cands} == {1, 3, 9, 27}

    def test_untwisted_sym2(self, phi_long):
        spec, report = sym2_selected(phi_long)
        assert spec.conductor == 1 and spec.root_number == 1
        assert spec.gamma_shifts == (("C", 0), ("R", Fraction(-24)))
        assert sum("selected" in line for line in report.lines()) == 1

    def test_twisted_sym2(self, phi_long):
        spec, _ = sym2_selected(phi_long, CHI3)
        assert spec.conductor == 27 and spec.root_number == 1
        assert spec.gamma_shifts == (("C", 0), ("R", Fraction(-25)))

    def test_cached_selection_uses_new_coefficients(self, phi, phi_long):
        short, _ = sym2_selected(phi)
        long_spec, _ = sym2_selected(phi_long)
        assert short.max_prime == phi.truncation and long_spec.max_prime == phi_long.truncation
        assert long_spec.conductor == short.conductor == 1

    def test_convolution(self, phi_long, g_long):
        spec, _ = conv_selected(phi_long, g_long)
        assert spec.conductor == 9 and spec.root_number == -1
        assert fe_residual(spec, 9, 60) < _tol(40)


class TestAlgebraicParts:
    def test_gauss_sum(self):
        G = gauss_sum(CHI3)
        sq = G * G
        assert sq.is_rational and sq.rational == -3
        with mpmath.workdps(30):
            ref = mpmath.expjpi(mpmath.mpf(2) / 3) - mpmath.expjpi(mpmath.mpf(4) / 3)
            assert abs(G.to_mpf() - ref) < _tol(25)
            assert abs(abs(G.to_mpf()) - mpmath.sqrt(3)) < _tol(25)
        with pytest.raises(ValueError):
            gauss_sum(DirichletCharacter.kronecker(-4))

    def test_twist_parity(self):
        assert sym2_twist_for(-3, 2) == CHI3
        assert sym2_twist_for(-3, 3) == DirichletCharacter.trivial(3)

    def test_removed_euler_factor(self, phi):
        spec = sym2_spec(phi)
        x = Fraction(1, 3**28)
        poly = spec.euler_poly(3)
        assert removed_euler_factor(spec, 3, 28) == sum(c * x**i for i, c in enumerate(poly))

    def test_petersson_norm(self, phi_long):
        n1 = petersson_norm(phi_long, 60)
        assert n1 > 0
        n2 = petersson_norm(phi_long.scaled(2), 60)
        with mpmath.workdps(60):
            assert abs(n2 - 4 * n1) < n1 * _tol(50)

    def test_petersson_level(self, g):
        with pytest.raises(UnsupportedLevel):
            petersson_norm(g, 60)

    def test_critical_ranges(self, phi, g):
        with pytest.raises(NotCritical):
            lalg_sym2(phi, 26, 60)
        with pytest.raises(NotCritical):
            lalg_conv(phi, g, 6, 60)
        with pytest.raises(NotCritical):
            lalg_conv(phi, g, 26, 60)

    def test_sym2_j2_at_low_precision(self, phi_long):
        target = Fraction(2**37 * 523, 3**33 * 5**5 * 7**2 * 11 * 13 * 23)
        assert lalg_sym2(phi_long, 2, 110).rational == target


def test_norm_of_delta_matches_literature():
    # <Delta, Delta> = 1.03536205680432092... * 10^-6
    delta_form = delta(2000)
    with mpmath.workdps(40):
        assert abs(petersson_norm(delta_form, 60) - mpmath.mpf("1.035362056804320922347816e-6")) < 1e-27


def test_newform_fixture_is_long_enough(phi_long):
    assert phi_long.truncation >= plan_terms(sym2_spec(phi_long, CHI3, conductor=27), 30, 150).n_max
    assert newform_s26(6)[5] == phi_long[5]
