import random

import pytest

from cnecc.galois import (
    GF,
    Field,
    FieldMismatchError,
    Poly,
    PolyMatrix,
    RationalFunction,
    ff_inv,
    ff_matmul,
    ff_rank,
    is_prime_power,
)


def P(field, text):
    return Poly.parse(field, text)


F2 = GF(2)
F3 = GF(3)
F4 = GF(2, 2)
F5 = GF(5)


class TestField:
    def test_characteristic_two(self):
        assert F2.add(1, 1) == 0

    def test_mod_three_product(self):
        assert F3.mul(2, 2) == 1

    def test_inverse_against_brute_force_table(self):
        # Oracle: scan for the inverse instead of trusting Fermat exponentiation.
        table = {a: next(b for b in range(1, 3) if (a * b) % 3 == 1) for a in (1, 2)}
        assert table[2] == 2
        assert F3.div(1, 2) == table[2]

    def test_division_by_zero(self):
        with pytest.raises(ZeroDivisionError):
            F3.inv(0)

    @pytest.mark.parametrize("field", [F2, F3, F4, F5, GF(2, 3), GF(3, 2)])
    def test_field_axioms_randomized(self, field):
        rng = random.Random(field.q)
        for _ in range(200):
            a, b, c = (rng.randrange(field.q) for _ in range(3))
            assert field.add(a, b) == field.add(b, a)
            assert field.mul(a, b) == field.mul(b, a)
            assert field.add(field.add(a, b), c) == field.add(a, field.add(b, c))
            assert field.mul(field.mul(a, b), c) == field.mul(a, field.mul(b, c))
            assert field.mul(a, field.add(b, c)) == field.add(
                field.mul(a, b), field.mul(a, c)
            )
            assert field.add(a, field.neg(a)) == 0
            if a:
                assert field.mul(a, field.inv(a)) == 1

    def test_builtin_extension_fields(self):
        assert F4.q == 4 and GF(2, 3).q == 8 and GF(3, 2).q == 9
        # x * x = x + 1 under the modulus 1 + x + x^2.
        assert F4.mul(2, 2) == 3

    def test_reducible_modulus_rejected(self):
        with pytest.raises(ValueError):
            Field(2, 2, (1, 0, 1))  # 1 + x^2 = (1 + x)^2 over F_2

    def test_nonprime_characteristic_rejected(self):
        with pytest.raises(ValueError):
            Field(4)

    def test_prime_power_predicate(self):
        assert [q for q in range(2, 20) if is_prime_power(q)] == [
            2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19,
        ]


class TestPoly:
    def test_gcd_hand_euclid(self):
        # gcd(z^5, z^4 + z^3) = z^3 by the Euclidean algorithm.
        assert P(F2, "z^5").gcd(P(F2, "z^4+z^3")) == P(F2, "z^3")

    def test_schoolbook_product(self):
        assert P(F2, "1+z^2") * P(F2, "1+z+z^2") == P(F2, "1+z+z^3+z^4")

    def test_eval_at_one_cancels(self):
        assert P(F2, "z^4+z^3").eval_at(1) == 0

    def test_parse_coefficient_forms(self):
        assert P(F3, "2*z^3") == P(F3, "2z^3")
        assert P(F3, "2+z+2*z^2+2*z^4+z^5").coeffs == (2, 1, 2, 0, 2, 1)
        assert P(F3, "0").is_zero()
        with pytest.raises(ValueError):
            P(F2, "z^")

    def test_to_str_round_trip(self):
        rng = random.Random(11)
        for _ in range(50):
            p = Poly(F3, [rng.randrange(3) for _ in range(rng.randrange(8))])
            assert P(F3, p.to_str()) == p

    @pytest.mark.parametrize("field", [F2, F3, F4])
    def test_divmod_identity(self, field):
        rng = random.Random(field.q + 7)
        for _ in range(100):
            a = Poly(field, [rng.randrange(field.q) for _ in range(rng.randrange(9))])
            b = Poly(field, [rng.randrange(field.q) for _ in range(1 + rng.randrange(5))])
            if b.is_zero():
                continue
            q, r = divmod(a, b)
            assert q * b + r == a
            assert r.is_zero() or r.degree < b.degree

    @pytest.mark.parametrize("field", [F2, F3])
    def test_gcd_divides_and_is_monic(self, field):
        rng = random.Random(field.q)
        for _ in range(100):
            a = Poly(field, [rng.randrange(field.q) for _ in range(rng.randrange(8))])
            b = Poly(field, [rng.randrange(field.q) for _ in range(rng.randrange(8))])
            if a.is_zero() and b.is_zero():
                continue
            g = a.gcd(b)
            assert g.lc == 1
            if not a.is_zero():
                assert (a % g).is_zero()
            if not b.is_zero():
                assert (b % g).is_zero()

    def test_mixed_field_operations_rejected(self):
        with pytest.raises(FieldMismatchError):
            P(F2, "1+z") + P(F3, "1+z")

    def test_weight_counts_nonzero_coefficients(self):
        assert P(F3, "2+z+2*z^2+2*z^4+z^5").weight() == 5
        assert Poly.zero(F3).weight() == 0


class TestRationalFunction:
    def test_normalization(self):
        r = RationalFunction(P(F2, "z^2+z^3"), P(F2, "z^2"))
        assert r.num == P(F2, "1+z") and r.den == P(F2, "1")

    def test_monic_denominator(self):
        r = RationalFunction(P(F3, "1"), P(F3, "2+2*z"))
        assert r.den.lc == 1

    def test_realizable(self):
        assert RationalFunction(P(F2, "1"), P(F2, "1+z")).realizable
        assert not RationalFunction(P(F2, "1"), P(F2, "z")).realizable

    def test_zero_denominator(self):
        with pytest.raises(ZeroDivisionError):
            RationalFunction(P(F2, "1"), Poly.zero(F2))


class TestPolyMatrix:
    def test_identity_product(self):
        m = PolyMatrix.parse(F2, "z, z^3; 0, z^4")
        assert PolyMatrix.identity(F2, 2) @ m == m

    def test_butterfly_sink_one_determinant(self):
        m = PolyMatrix.parse(F2, "z, z^3; 0, z^4")
        det, adj = m.det_adjugate()
        assert det == P(F2, "z^5")
        assert adj == PolyMatrix.parse(F2, "z^4, z^3; 0, z")

    def test_identity_adjugate(self):
        det, adj = PolyMatrix.identity(F3, 3).det_adjugate()
        assert det == Poly.one(F3)
        assert adj == PolyMatrix.identity(F3, 3)

    def test_scaled_identity_adjugate(self):
        m = PolyMatrix.parse(F3, "z, 0; 0, z")
        det, adj = m.det_adjugate()
        assert det == P(F3, "z^2")
        assert adj == m

    @pytest.mark.parametrize("field", [F2, F3])
    def test_adjugate_identity_randomized(self, field):
        rng = random.Random(field.q + 1)
        for _ in range(30):
            n = rng.choice([2, 3])
            m = PolyMatrix(
                [
                    [
                        Poly(field, [rng.randrange(field.q) for _ in range(rng.randrange(4))])
                        for _ in range(n)
                    ]
                    for _ in range(n)
                ]
            )
            det, adj = m.det_adjugate()
            assert m @ adj == PolyMatrix.identity(field, n).scale(det)

    def test_rank_full(self):
        assert PolyMatrix.parse(F2, "z, z^3; 0, z^4").rank() == 2

    def test_rank_zero(self):
        z = Poly.zero(F2)
        assert PolyMatrix([[z, z], [z, z]]).rank() == 0

    def test_rank_proportional_rows(self):
        assert PolyMatrix.parse(F2, "z, z; z^2, z^2").rank() == 1

    def test_rank_matches_evaluation_at_nonroot_points(self):
        rng = random.Random(5)
        for _ in range(25):
            m = PolyMatrix(
                [
                    [Poly(F3, [rng.randrange(3) for _ in range(3)]) for _ in range(2)]
                    for _ in range(2)
                ]
            )
            if m.det().is_zero():
                continue
            eval_ranks = [ff_rank(F3, m.subst(a)) for a in range(3)]
            assert m.rank() == 2 == max(eval_ranks)

    def test_dimension_mismatch(self):
        a = PolyMatrix.identity(F2, 2)
        b = PolyMatrix([[Poly.one(F2)] * 2 for _ in range(3)])
        with pytest.raises(ValueError):
            a @ b


class TestNumericHelpers:
    def test_inverse_round_trip(self):
        grid = ((1, 1), (0, 1))
        inv = ff_inv(F2, grid)
        assert ff_matmul(F2, grid, inv) == ((1, 0), (0, 1))

    def test_singular_inverse_raises(self):
        with pytest.raises(ZeroDivisionError):
            ff_inv(F2, ((1, 1), (1, 1)))

    def test_rank(self):
        assert ff_rank(F3, ((1, 2), (2, 2))) == 2
        assert ff_rank(F3, ((1, 2), (2, 1))) == 1  # second row is twice the first
