import random

import pytest

from ffzeta.errors import (
    InsufficientPadicPrecision,
    NotAOneUnit,
    NotCoprime,
    ZeroInput,
)
from ffzeta.ffpoly import FiniteField, Poly, poly_parse
from ffzeta.nonarch import (
    LaurentSeries,
    PadicExponent,
    SvPoint,
    VadicRing,
    bracket_infty,
    pow_sv,
    unit_pow_padic,
)

F2 = FiniteField(2)
F3 = FiniteField(3)
T2 = Poly.variable(F2)
T3 = Poly.variable(F3)


class TestPadicExponent:
    def test_embed_small(self):
        y = PadicExponent.from_int(3, 5, 4)
        assert y.digits == (2, 1, 0, 0)
        assert y.value() == 5

    def test_minus_one_all_top_digits(self):
        y = PadicExponent.from_int(2, -1, 5)
        assert y.digits == (1, 1, 1, 1, 1)

    def test_negation_roundtrip(self):
        y = PadicExponent.from_int(3, 17, 6)
        assert (-(-y)) == y


class TestBracket:
    def test_t_itself(self):
        assert bracket_infty(T2, 8) == LaurentSeries(F2, 0, [1], 8)

    def test_t_plus_one(self):
        assert bracket_infty(T2 + Poly.one(F2), 8) == LaurentSeries(F2, 0, [1, 1], 8)

    def test_t2_plus_t(self):
        assert bracket_infty(T2 * T2 + T2, 8) == LaurentSeries(F2, 0, [1, 1], 8)

    def test_zero_rejected(self):
        with pytest.raises(ZeroInput):
            bracket_infty(Poly.zero(F2), 8)

    def test_monic_brackets_are_one_units(self):
        rng = random.Random(11)
        for field in (F2, F3):
            for _ in range(500):
                d = rng.randint(0, 5)
                idx = rng.randrange(field.order ** d)
                from ffzeta.ffpoly import monic_by_index
                n = monic_by_index(field, d, idx)
                u = bracket_infty(n, 12)
                assert u.is_one_unit()


class TestUnitPowPadic:
    def test_square_char2(self):
        u = LaurentSeries(F2, 0, [1, 1], 8)
        y = PadicExponent.from_int(2, 2, 4)
        assert unit_pow_padic(u, y, 8) == LaurentSeries(F2, 0, [1, 0, 1], 8)

    def test_inverse_geometric(self):
        u = LaurentSeries(F2, 0, [1, 1], 4)
        y = PadicExponent.from_int(2, -1, 2)  # p^N = 4 >= M = 4
        r = unit_pow_padic(u, y, 4)
        assert r == LaurentSeries(F2, 0, [1, 1, 1, 1], 4)
        assert (r * u).truncate(4).is_one_unit()
        assert (r * u).truncate(4) == LaurentSeries(F2, 0, [1], 4)

    def test_one_to_anything(self):
        one = LaurentSeries.one(F3, 10)
        y = PadicExponent.from_int(3, 7 ** 5, 6)
        assert unit_pow_padic(one, y, 10) == one

    def test_requires_one_unit(self):
        with pytest.raises(NotAOneUnit):
            unit_pow_padic(LaurentSeries(F2, 1, [1], 8),
                           PadicExponent.from_int(2, 1, 4), 8)

    def test_requires_enough_digits(self):
        u = LaurentSeries(F2, 0, [1, 1], 32)
        with pytest.raises(InsufficientPadicPrecision):
            unit_pow_padic(u, PadicExponent.from_int(2, 1, 3), 32)

    def test_integer_consistency(self):
        # u^embed(j) equals plain repeated multiplication, j up to 1000
        rng = random.Random(42)
        for field in (F2, F3):
            M = 24
            n_digits = 1
            while field.p ** n_digits < 1001 or field.p ** n_digits < M:
                n_digits += 1
            for _ in range(25):
                coeffs = [1] + [rng.randrange(field.order) for _ in range(M - 1)]
                u = LaurentSeries(field, 0, coeffs, M)
                j = rng.randint(0, 1000)
                fast = unit_pow_padic(u, PadicExponent.from_int(field.p, j, n_digits), M)
                slow = LaurentSeries.one(field, M)
                for _ in range(j):
                    slow = (slow * u).truncate(M)
                assert fast.agrees_with(slow)


class TestLaurentSeries:
    def test_mul_precision_min_rule(self):
        a = LaurentSeries(F2, 1, [1], 5)    # pi + O(pi^5)
        b = LaurentSeries(F2, 2, [1], 9)    # pi^2 + O(pi^9)
        c = a * b
        assert c.start == 3 and c.prec == min(5 + 2, 9 + 1)

    def test_add_keeps_smaller_precision(self):
        a = LaurentSeries(F2, 0, [1], 5)
        b = LaurentSeries(F2, 0, [1], 9)
        assert (a + b).prec == 5

    def test_inverse(self):
        rng = random.Random(3)
        for field in (F2, F3):
            for _ in range(40):
                s = rng.randint(-3, 3)
                coeffs = [1 + rng.randrange(field.order - 1)] + \
                    [rng.randrange(field.order) for _ in range(9)]
                a = LaurentSeries(field, s, coeffs, s + 10)
                prod = a * a.inverse()
                assert prod.agrees_with(LaurentSeries.one(field, prod.prec))

    def test_zero_to_precision_flows(self):
        z = LaurentSeries.zero_to_precision(F2, 6)
        a = LaurentSeries(F2, 0, [1, 1], 6)
        assert (z + a) == a
        assert (z * a).is_zero_to_precision()
        assert (z * a).prec == 6  # bound moves with the unit's valuation


class TestTeichmuller:
    def test_residue_field_f2(self):
        ring = VadicRing(T2, 4)
        om = ring.teichmuller(T2 + Poly.one(F2))
        assert om.rep == Poly.one(F2)

    def test_constants_fixed_f3(self):
        ring = VadicRing(T3, 3)
        assert ring.teichmuller(Poly.constant(F3, 2)).rep == Poly.constant(F3, 2)

    def test_quadratic_prime(self):
        f = poly_parse(F2, "T^2+T+1")
        ring = VadicRing(f, 3)
        om = ring.teichmuller(T2)
        assert (om.rep % f) == (T2 % f)
        assert (om ** 3) == ring.one()

    def test_uniqueness_brute_force(self):
        # omega is the only element with omega = n mod f and omega^q = omega
        for field, fstr in ((F2, "T"), (F3, "T+1")):
            f = poly_parse(field, fstr)
            for M in (1, 2, 3):
                ring = VadicRing(f, M)
                q = ring.residue_order
                for n0 in range(1, field.order):
                    n = Poly.constant(field, n0)
                    om = ring.teichmuller(n)
                    hits = []
                    for encoding in range(field.order ** M):
                        digs = []
                        v = encoding
                        for _ in range(M):
                            v, rdig = divmod(v, field.order)
                            digs.append(rdig)
                        x = ring.elem(Poly(field, digs))
                        if (x.rep % f) == (n % f) and (x ** q) == x:
                            hits.append(x)
                    assert hits == [om]

    def test_not_coprime(self):
        ring = VadicRing(T2, 3)
        with pytest.raises(NotCoprime):
            ring.teichmuller(T2)


class TestPowSv:
    def test_integer_zero(self):
        ring = VadicRing(T2, 4)
        s = SvPoint.from_int(0, ring.residue_order - 1, 2, 3)
        assert pow_sv(T2 + Poly.one(F2), s, ring) == ring.one()

    def test_integer_cube(self):
        ring = VadicRing(T2, 4)
        s = SvPoint.from_int(3, ring.residue_order - 1, 2, 2)
        got = pow_sv(T2 + Poly.one(F2), s, ring)
        assert got.rep == poly_parse(F2, "T^3+T^2+T+1")

    def test_one_to_anything(self):
        ring = VadicRing(T3, 5)
        s = SvPoint.from_int(-7, ring.residue_order - 1, 3, 5)
        assert pow_sv(Poly.one(F3), s, ring) == ring.one()

    def test_integer_image_exactness(self):
        f = poly_parse(F3, "T^2+1")
        ring = VadicRing(f, 3)
        n_digits = 2  # 3^2 = 9 >= M = 3
        for j in range(0, 20):
            s = SvPoint.from_int(j, ring.residue_order - 1, 3, n_digits)
            for n in (T3 + Poly.one(F3), poly_parse(F3, "T^2+T+2")):
                assert pow_sv(n, s, ring) == ring.elem(n ** j)

    def test_homomorphism(self):
        rng = random.Random(9)
        f = T3
        ring = VadicRing(f, 4)
        for _ in range(30):
            s = SvPoint(rng.randrange(ring.residue_order - 1),
                        PadicExponent.from_int(3, rng.randrange(81), 4),
                        ring.residue_order - 1)
            a = Poly(F3, [1 + rng.randrange(2)] + [rng.randrange(3) for _ in range(3)])
            b = Poly(F3, [1 + rng.randrange(2)] + [rng.randrange(3) for _ in range(2)])
            assert pow_sv(a * b, s, ring) == pow_sv(a, s, ring) * pow_sv(b, s, ring)

    def test_precision_contract(self):
        ring = VadicRing(T2, 16)
        s = SvPoint.from_int(3, 1, 2, 2)  # 2^2 = 4 < 16
        with pytest.raises(InsufficientPadicPrecision):
            pow_sv(T2 + Poly.one(F2), s, ring)


class TestPrecisionMonotonicity:
    def test_bracket_pow_windows_agree(self):
        rng = random.Random(21)
        for field in (F2, F3):
            for _ in range(20):
                d = rng.randint(1, 4)
                from ffzeta.ffpoly import monic_by_index
                n = monic_by_index(field, d, rng.randrange(field.order ** d))
                y = PadicExponent.from_int(field.p, rng.randrange(256), 8)
                small = unit_pow_padic(bracket_infty(n, 16), y, 16)
                large = unit_pow_padic(bracket_infty(n, 48), y, 48)
                assert small.agrees_with(large)

    def test_vadic_valuation_stable(self):
        f = T3
        n = poly_parse(F3, "T^2+T+1")
        for j in (1, 4, 9):
            v_small = (VadicRing(f, 8).elem(n ** j)).valuation
            v_large = (VadicRing(f, 32).elem(n ** j)).valuation
            assert v_small == v_large
