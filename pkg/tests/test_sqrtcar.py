import random

import pytest

from ffzeta.errors import ProvisionalPolygon, UnsupportedField
from ffzeta.ffpoly import FiniteField, Poly, enumerate_monic, poly_parse
from ffzeta.sqrtcar import (
    base_field,
    carlitz_prime_module,
    hecke_identity,
    hecke_special,
    parity_report,
    psi_composition_check,
    psi_factorization_check,
    psi_module,
    sqrt_poly,
    square_image,
)
from ffzeta.zeta import power_sum

F2 = base_field()


class TestSqrtMap:
    def test_variable(self):
        assert sqrt_poly(Poly.variable(F2)) == Poly.variable(F2)  # T -> u

    def test_example(self):
        n = poly_parse(F2, "T^2+T+1")
        root = sqrt_poly(n)
        # (u^2+u+1)^2 = u^4+u^2+1, i.e. the original under T = u^2
        assert root * root == n.substitute_spread(2)

    def test_one(self):
        assert sqrt_poly(Poly.one(F2)) == Poly.one(F2)

    def test_roundtrip_random(self):
        rng = random.Random(77)
        for _ in range(1000):
            n = Poly(F2, [rng.randrange(2) for _ in range(rng.randint(0, 12))])
            if n.is_zero():
                continue
            root = sqrt_poly(n)
            assert square_image(root) == n
            assert root * root == n.substitute_spread(2)

    def test_rejects_other_fields(self):
        with pytest.raises(UnsupportedField):
            sqrt_poly(Poly.variable(FiniteField(3)))


class TestHeckeSums:
    def test_degree_zero(self):
        assert hecke_special(5, 0)[0] == Poly.one(F2)

    def test_j0_degree_one(self):
        # u + (u+1) = 1
        assert hecke_special(0, 1)[1] == Poly.one(F2)

    def test_j1_degree_one(self):
        assert hecke_special(1, 1)[1] == poly_parse(F2, "T^2+T+1")  # u^2+u+1

    def test_direct_enumeration_oracle(self):
        # independent route: exact A'-sum via Poly arithmetic
        for j in (0, 1, 3):
            for d in (1, 2, 3):
                acc = Poly.zero(F2)
                for n in enumerate_monic(F2, d):
                    acc = acc + sqrt_poly(n) * (n ** j).substitute_spread(2)
                assert hecke_special(j, d)[d] == acc

    def test_coprime_variant(self):
        vals = hecke_special(0, 2, coprime_to_T=True)
        assert vals[1] == poly_parse(F2, "T+1")        # u + 1
        assert vals[2] == Poly.variable(F2)            # u


class TestHeckeIdentity:
    def test_doubled_shifted_exponent(self):
        for j in (0, 1, 2, 5, 9):
            rep = hecke_identity(j, 8)
            assert rep.passed, (j, rep.per_degree)

    def test_hand_value(self):
        # l_1(1) = u^2+u+1 = S'_1(3)
        assert hecke_special(1, 1)[1] == power_sum(F2, 1, 3)


class TestPsiModule:
    def test_composition(self):
        assert psi_composition_check()

    def test_psi_coefficients(self):
        psi = psi_module()
        theta = poly_parse(F2, "T^2")  # u^2
        assert psi.phi_T[0] == theta
        assert psi.phi_T[1] == poly_parse(F2, "T^2+T")  # theta + sqrt(theta)
        assert psi.rank == 2

    def test_prime_carlitz_is_rank_one(self):
        assert carlitz_prime_module().rank == 1

    def test_factorization_degree_three(self):
        rep = psi_factorization_check(3)
        assert rep.passed
        for gprime, data, ok in rep.per_prime:
            assert ok and data.a.is_zero()
            assert data.mu == square_image(gprime)

    def test_factorization_hand_case_u(self):
        rep = psi_factorization_check(1)
        by_prime = {g.to_string("u"): data for g, data, _ in rep.per_prime}
        assert by_prime["u"].mu == Poly.variable(F2)  # (a, mu) = (0, T)
        assert by_prime["u"].a.is_zero()

    def test_euler_factor_square_identity(self):
        # (1 + g' t)^2 = 1 + g t^2 in characteristic 2: the cross term
        # 2 g' t vanishes and (g')^2 is the image of g under T -> u^2
        for gp in (Poly.variable(F2), poly_parse(F2, "T^2+T+1")):
            g = square_image(gp)
            assert gp * gp == g.substitute_spread(2)


class TestParity:
    def test_removed_factor_slope_is_odd_and_present(self):
        for j in (0, 1, 3, 7):
            rep = parity_report(j, 8, 64)
            assert rep.removed_factor_slope == 2 * j + 1
            assert rep.removed_factor_slope % 2 == 1
            assert any(s == rep.removed_factor_slope for s in rep.vadic_slopes)

    def test_infty_side_all_even(self):
        for j in range(0, 11):
            rep = parity_report(j, 8, 64)
            assert rep.infty_all_even, (j, rep.infty_violations)

    def test_infty_j0_slope_zero(self):
        rep = parity_report(0, 8, 64)
        assert rep.infty_slopes == [0]

    def test_vadic_trivial_zero_is_the_only_violation(self):
        # the degree-1 coefficient (u+1)^(2j+1) is a u-adic unit, so the
        # polygon always opens with a slope-0 segment; slope 0 is even and
        # is reported as the single parity exception, all other slopes odd
        for j in range(0, 11):
            rep = parity_report(j, 8, 64)
            assert rep.vadic_violations == [0], (j, rep.vadic_slopes)
            others = [s for s in rep.vadic_slopes if s != 0]
            assert all(s.denominator == 1 and s.numerator % 2 == 1 for s in others)

    def test_insufficient_presentation_precision(self):
        with pytest.raises(ProvisionalPolygon):
            parity_report(20, 8, 8)
